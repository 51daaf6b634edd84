//! Health states, touch transmission and the player's infection ledger.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::effects::{EffectSet, Tick};
use crate::world::{EntityId, EntityKind, TilePos};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HealthState {
    Healthy,
    Infected { since: Tick },
}

impl HealthState {
    pub fn is_infected(self) -> bool {
        matches!(self, HealthState::Infected { .. })
    }
}

/// Spatial predicate for "touch".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ContactRule {
    SameTile,
    SameOrAdjacent4,
}

impl ContactRule {
    pub fn in_contact(self, a: TilePos, b: TilePos) -> bool {
        match self {
            ContactRule::SameTile => a == b,
            ContactRule::SameOrAdjacent4 => a.manhattan(b) <= 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ContactRule::SameTile => "same_tile",
            ContactRule::SameOrAdjacent4 => "same_or_adjacent4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "same_tile" => Some(ContactRule::SameTile),
            "same_or_adjacent4" => Some(ContactRule::SameOrAdjacent4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TransmissionEvent {
    pub tick: Tick,
    pub source: EntityId,
    pub target: EntityId,
}

/// The part of an entity that contact resolution looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Body {
    pub id: EntityId,
    pub kind: EntityKind,
    pub pos: TilePos,
    pub health: HealthState,
}

/// True iff a mask or sanitizer is still running at `now`.
pub fn is_protected(effects: &EffectSet, now: Tick) -> bool {
    effects.iter().any(|e| e.expires_at_tick > now)
}

/// Every transmission that touch would cause this tick.
///
/// Pairs are unordered; a pair transmits when exactly one side is infected
/// and the healthy side is unprotected. Only the player carries effects.
/// Non-actor bodies (pickups) are ignored. A healthy body touching several
/// infected ones yields one candidate event per source; the caller decides
/// which one is recorded. Output is sorted by `(source, target)`.
pub fn resolve_contacts(bodies: &[Body], player_effects: &EffectSet, now: Tick, rule: ContactRule) -> Vec<TransmissionEvent> {
    let protected = |b: &Body| b.kind == EntityKind::Player && is_protected(player_effects, now);
    let actors: Vec<&Body> = bodies.iter().filter(|b| b.kind.is_actor()).collect();
    let mut events = Vec::new();
    for (i, a) in actors.iter().enumerate() {
        for b in &actors[i + 1..] {
            if !rule.in_contact(a.pos, b.pos) {
                continue;
            }
            let (src, dst) = match (a.health.is_infected(), b.health.is_infected()) {
                (true, false) => (a, b),
                (false, true) => (b, a),
                _ => continue,
            };
            if protected(dst) {
                continue;
            }
            events.push(TransmissionEvent { tick: now, source: src.id, target: dst.id });
        }
    }
    events.sort_by_key(|e| (e.source, e.target));
    events
}

/// Append-only transmission history.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InfectionLedger {
    events: Vec<TransmissionEvent>,
}

impl InfectionLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a ledger from events in any order; they are stored sorted by
    /// `(tick, source, target)`.
    pub fn from_events(mut events: Vec<TransmissionEvent>) -> Self {
        events.sort();
        Self { events }
    }

    pub fn events(&self) -> &[TransmissionEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Appends events of the current tick. They must not predate the last
    /// recorded tick.
    pub fn extend(&mut self, new: impl IntoIterator<Item = TransmissionEvent>) {
        let start = self.events.len();
        self.events.extend(new);
        self.events[start..].sort();
        debug_assert!(
            start == 0 || self.events.get(start).is_none_or(|e| *e >= self.events[start - 1]),
            "ledger events out of order"
        );
    }
}

/// Direct and indirect infections attributed to `player`.
///
/// Direct: events whose source is the player (each event is a separate
/// infection episode of its target). Indirect: entities infected later along
/// chains that start with one of those events. Chains rooted anywhere else
/// do not count, and the player itself is never counted.
pub fn ledger_counts(ledger: &InfectionLedger, player: EntityId) -> (usize, usize) {
    let mut rooted: BTreeSet<EntityId> = BTreeSet::new();
    let mut direct = 0;
    let mut indirect = 0;
    for e in ledger.events() {
        if e.target == player {
            continue;
        }
        if e.source == player {
            direct += 1;
            rooted.insert(e.target);
        } else if rooted.contains(&e.source) && rooted.insert(e.target) {
            indirect += 1;
        }
    }
    (direct, indirect)
}
