//! Quota assignment, pickup accounting, score and the finish-line rule.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::world::{EntityKind, TileKind, TilePos, WorldMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quota {
    pub groceries_required: u32,
    pub medicines_required: u32,
    pub groceries_collected: u32,
    pub medicines_collected: u32,
}

impl Quota {
    pub fn groceries_missing(&self) -> u32 {
        self.groceries_required - self.groceries_collected
    }

    pub fn medicines_missing(&self) -> u32 {
        self.medicines_required - self.medicines_collected
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Score(pub u64);

impl Score {
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn add(self, points: u64) -> Score {
        Score(self.0.saturating_add(points))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScoreConfig {
    pub points_per_grocery: u64,
    pub points_per_medicine: u64,
}

impl Default for ScoreConfig {
    fn default() -> Self {
        Self { points_per_grocery: 10, points_per_medicine: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotaConfig {
    pub groceries: u32,
    pub medicines: u32,
    /// Reject maps with fewer pickups than the targets instead of lowering them.
    pub strict: bool,
}

impl Default for QuotaConfig {
    fn default() -> Self {
        Self { groceries: 5, medicines: 3, strict: false }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuotaError {
    #[error("quota needs {required} {what} but the map only has {available}")]
    UnsatisfiableQuota { what: &'static str, required: u32, available: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Collectible {
    Grocery,
    Medicine,
}

pub fn assign_quota(map: &WorldMap, cfg: &QuotaConfig) -> Result<Quota, QuotaError> {
    let fit = |what, required: u32, kind| {
        let available = map.count_spawns(kind) as u32;
        if required > available && cfg.strict {
            Err(QuotaError::UnsatisfiableQuota { what, required, available })
        } else {
            Ok(required.min(available))
        }
    };
    Ok(Quota {
        groceries_required: fit("groceries", cfg.groceries, EntityKind::GroceryPickup)?,
        medicines_required: fit("medicines", cfg.medicines, EntityKind::MedicinePickup)?,
        groceries_collected: 0,
        medicines_collected: 0,
    })
}

/// Counts a consumed pickup. Surplus pickups do not raise the collected
/// count past the requirement but still score.
pub fn record_pickup(quota: Quota, score: Score, kind: Collectible, cfg: &ScoreConfig) -> (Quota, Score) {
    let mut q = quota;
    let points = match kind {
        Collectible::Grocery => {
            q.groceries_collected = (q.groceries_collected + 1).min(q.groceries_required);
            cfg.points_per_grocery
        }
        Collectible::Medicine => {
            q.medicines_collected = (q.medicines_collected + 1).min(q.medicines_required);
            cfg.points_per_medicine
        }
    };
    (q, score.add(points))
}

pub fn quota_met(quota: &Quota) -> bool {
    quota.groceries_collected == quota.groceries_required && quota.medicines_collected == quota.medicines_required
}

pub fn can_finish(quota: &Quota, player_pos: TilePos, map: &WorldMap) -> bool {
    quota_met(quota) && map.tile(player_pos).is_ok_and(|t| t == TileKind::Home)
}
