//! Timed protections, the safety-shield reward, lifeline decay and the doctor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::infection::HealthState;
use crate::world::TileKind;

/// Simulation tick index.
pub type Tick = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EffectKind {
    Mask,
    Sanitizer,
}

impl EffectKind {
    pub fn code(self) -> u8 {
        match self {
            EffectKind::Mask => 0,
            EffectKind::Sanitizer => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ActiveEffect {
    pub kind: EffectKind,
    /// Exclusive: the effect protects on ticks `< expires_at_tick`.
    pub expires_at_tick: Tick,
}

/// At most one effect per kind, kept sorted by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EffectSet {
    effects: Vec<ActiveEffect>,
}

impl EffectSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ActiveEffect> {
        self.effects.iter()
    }

    pub fn get(&self, kind: EffectKind) -> Option<&ActiveEffect> {
        self.effects.iter().find(|e| e.kind == kind)
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    /// Ticks of protection left for `kind` at `now`, zero when absent or expired.
    pub fn remaining(&self, kind: EffectKind, now: Tick) -> u64 {
        self.get(kind).map_or(0, |e| e.expires_at_tick.saturating_sub(now))
    }

    fn insert(&mut self, effect: ActiveEffect) {
        match self.effects.binary_search_by_key(&effect.kind, |e| e.kind) {
            Ok(i) => self.effects[i] = effect,
            Err(i) => self.effects.insert(i, effect),
        }
    }
}

impl FromIterator<ActiveEffect> for EffectSet {
    fn from_iter<T: IntoIterator<Item = ActiveEffect>>(iter: T) -> Self {
        let mut set = EffectSet::new();
        for e in iter {
            set.insert(e);
        }
        set
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lifeline {
    current: u32,
    max: u32,
}

impl Lifeline {
    pub fn full(max: u32) -> Self {
        Self { current: max, max }
    }

    /// `current` is clamped to `max`.
    pub fn new(current: u32, max: u32) -> Self {
        Self { current: current.min(max), max }
    }

    pub fn current(&self) -> u32 {
        self.current
    }

    pub fn max(&self) -> u32 {
        self.max
    }

    pub fn is_depleted(&self) -> bool {
        self.current == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EffectConfig {
    pub mask_duration: u64,
    pub sanitizer_duration: u64,
    pub lifeline_max: u32,
    pub infection_decay: u32,
    pub shield_bonus: u64,
}

impl Default for EffectConfig {
    fn default() -> Self {
        Self { mask_duration: 600, sanitizer_duration: 400, lifeline_max: 100, infection_decay: 1, shield_bonus: 25 }
    }
}

impl EffectConfig {
    pub fn duration(&self, kind: EffectKind) -> u64 {
        match kind {
            EffectKind::Mask => self.mask_duration,
            EffectKind::Sanitizer => self.sanitizer_duration,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EffectError {
    #[error("doctor visit requested while the player is on a {0:?} tile")]
    NotAtClinic(TileKind),
}

/// Starts (or restarts) `kind`. Re-acquiring replaces the expiry rather than
/// extending it. Returns the new set and the safety-shield score grant.
pub fn acquire_effect(effects: &EffectSet, kind: EffectKind, now: Tick, cfg: &EffectConfig) -> (EffectSet, u64) {
    let mut next = effects.clone();
    next.insert(ActiveEffect { kind, expires_at_tick: now + cfg.duration(kind) });
    (next, cfg.shield_bonus)
}

/// Drops every effect with `expires_at_tick <= now`.
pub fn expire_effects(effects: &EffectSet, now: Tick) -> EffectSet {
    EffectSet { effects: effects.effects.iter().copied().filter(|e| e.expires_at_tick > now).collect() }
}

pub fn decay_lifeline(life: Lifeline, health: HealthState, cfg: &EffectConfig) -> Lifeline {
    match health {
        HealthState::Healthy => life,
        HealthState::Infected { .. } => Lifeline { current: life.current.saturating_sub(cfg.infection_decay), ..life },
    }
}

/// Cures and fully restores the lifeline. `tile` is the tile the player stands on.
pub fn visit_doctor(
    _health: HealthState,
    _life: Lifeline,
    tile: TileKind,
    cfg: &EffectConfig,
) -> Result<(HealthState, Lifeline), EffectError> {
    if tile != TileKind::Clinic {
        return Err(EffectError::NotAtClinic(tile));
    }
    Ok((HealthState::Healthy, Lifeline::full(cfg.lifeline_max)))
}
