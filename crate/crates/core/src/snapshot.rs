//! `RenderSnapshot`: the versioned JSON projection of a `GameState` that a
//! play client draws from.

use serde::{Deserialize, Serialize};

use crate::effects::EffectKind;
use crate::sim::{GamePhase, GameState};
use crate::world::{EntityId, EntityKind};

pub const SNAPSHOT_SCHEMA_VERSION: u32 = 1;

/// JSON Schema of the snapshot document.
pub const SNAPSHOT_SCHEMA: &str = include_str!("../data/render_snapshot.schema.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotEntity {
    pub id: EntityId,
    pub kind: EntityKind,
    pub x: u32,
    pub y: u32,
    pub infected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectBar {
    pub remaining: u64,
    pub duration: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub collected: u32,
    pub required: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderSnapshot {
    pub schema_version: u32,
    pub tick: u64,
    pub width: u32,
    pub height: u32,
    /// One string per row, one tile glyph per cell (`#` `.` `G` `R` `C` `H`).
    pub tiles: Vec<String>,
    pub entities: Vec<SnapshotEntity>,
    pub lifeline_current: u32,
    pub lifeline_max: u32,
    /// Present only while the effect is active.
    pub mask: Option<EffectBar>,
    pub sanitizer: Option<EffectBar>,
    pub shield: bool,
    pub infected_total: usize,
    pub infected_direct: usize,
    pub infected_indirect: usize,
    pub groceries: Counts,
    pub medicines: Counts,
    pub score: u64,
    pub phase: GamePhase,
}

pub fn render_snapshot(state: &GameState) -> RenderSnapshot {
    let map = &state.map;
    let tiles = (0..map.height())
        .map(|y| {
            (0..map.width())
                .map(|x| map.tile(crate::world::TilePos::new(x, y)).expect("in bounds").glyph())
                .collect()
        })
        .collect();
    let bar = |kind: EffectKind| {
        let remaining = state.player_effects.remaining(kind, state.tick);
        (remaining > 0).then(|| EffectBar { remaining, duration: state.config.effects.duration(kind) })
    };
    let (direct, indirect) = state.ledger_counts();
    let mask = bar(EffectKind::Mask);
    let sanitizer = bar(EffectKind::Sanitizer);
    RenderSnapshot {
        schema_version: SNAPSHOT_SCHEMA_VERSION,
        tick: state.tick,
        width: map.width(),
        height: map.height(),
        tiles,
        entities: state
            .entities
            .iter()
            .map(|e| SnapshotEntity { id: e.id, kind: e.kind, x: e.pos.x, y: e.pos.y, infected: e.health.is_infected() })
            .collect(),
        lifeline_current: state.lifeline.current(),
        lifeline_max: state.lifeline.max(),
        shield: mask.is_some() || sanitizer.is_some(),
        mask,
        sanitizer,
        infected_total: direct + indirect,
        infected_direct: direct,
        infected_indirect: indirect,
        groceries: Counts { collected: state.quota.groceries_collected, required: state.quota.groceries_required },
        medicines: Counts { collected: state.quota.medicines_collected, required: state.quota.medicines_required },
        score: state.score.value(),
        phase: state.phase,
    }
}

impl RenderSnapshot {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("snapshot serializes")
    }
}
