//! Scripted players for headless runs.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::config::GameConfig;
use crate::quota::{quota_met, QuotaError};
use crate::replay::{Recorder, Replay};
use crate::rng::Rng;
use crate::sim::{GamePhase, GameState, InputCommand};
use crate::world::{EntityKind, TileKind, TilePos, WorldMap};

/// Domain tag for the bot's random stream ("botstrm\0").
const BOT_STREAM_DOMAIN: u64 = 0x626f_7473_7472_6d00;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BotPolicy {
    RandomWalk,
    /// Walks to the nearest pickup still needed for the quota, then home.
    GreedyCollector,
    /// Greedy, but fetches a mask or sanitizer when unprotected, heads to a
    /// clinic when infected, and routes around infected NPCs when it can.
    SafetyFirst,
}

impl BotPolicy {
    pub const ALL: [BotPolicy; 3] = [BotPolicy::RandomWalk, BotPolicy::GreedyCollector, BotPolicy::SafetyFirst];

    pub fn as_str(self) -> &'static str {
        match self {
            BotPolicy::RandomWalk => "random-walk",
            BotPolicy::GreedyCollector => "greedy",
            BotPolicy::SafetyFirst => "safety-first",
        }
    }
}

impl fmt::Display for BotPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown policy {0:?} (expected random-walk, greedy or safety-first)")]
pub struct UnknownPolicy(pub String);

impl FromStr for BotPolicy {
    type Err = UnknownPolicy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random-walk" | "random" => Ok(BotPolicy::RandomWalk),
            "greedy" | "greedy-collector" => Ok(BotPolicy::GreedyCollector),
            "safety-first" => Ok(BotPolicy::SafetyFirst),
            other => Err(UnknownPolicy(other.to_string())),
        }
    }
}

/// A policy plus its private random stream.
#[derive(Debug, Clone)]
pub struct Bot {
    policy: BotPolicy,
    rng: Rng,
}

impl Bot {
    pub fn new(policy: BotPolicy, seed: u64) -> Self {
        Self { policy, rng: Rng::with_domain(seed, BOT_STREAM_DOMAIN) }
    }

    pub fn decide(&mut self, state: &GameState) -> InputCommand {
        match self.policy {
            BotPolicy::RandomWalk => InputCommand::ALL[self.rng.below(5) as usize],
            BotPolicy::GreedyCollector => greedy(state, |_| true),
            BotPolicy::SafetyFirst => safety_first(state),
        }
    }
}

fn is_quota_pickup(state: &GameState, kind: EntityKind) -> bool {
    match kind {
        EntityKind::GroceryPickup => state.quota.groceries_missing() > 0,
        EntityKind::MedicinePickup => state.quota.medicines_missing() > 0,
        _ => false,
    }
}

fn toward(state: &GameState, goals: &[TilePos], allowed: impl Fn(TilePos) -> bool) -> Option<InputCommand> {
    if goals.is_empty() {
        return None;
    }
    state
        .map
        .first_step_towards(state.player().pos, |p| goals.contains(&p), allowed)
        .map(InputCommand::from_direction)
}

fn greedy(state: &GameState, allowed: impl Fn(TilePos) -> bool + Copy) -> InputCommand {
    let goals: Vec<TilePos> = if quota_met(&state.quota) {
        state.map.tiles_of(TileKind::Home).collect()
    } else {
        state.entities.iter().filter(|e| is_quota_pickup(state, e.kind)).map(|e| e.pos).collect()
    };
    toward(state, &goals, allowed)
        .or_else(|| toward(state, &goals, |_| true))
        .unwrap_or(InputCommand::Stay)
}

fn safety_first(state: &GameState) -> InputCommand {
    let me = state.player();
    if me.health.is_infected() {
        let clinics: Vec<TilePos> = state.map.tiles_of(TileKind::Clinic).collect();
        return toward(state, &clinics, |_| true).unwrap_or(InputCommand::Stay);
    }
    if state.is_protected() {
        return greedy(state, |_| true);
    }
    // Tiles an infected NPC could touch within the next move.
    let hazards: Vec<TilePos> = state
        .entities
        .iter()
        .filter(|e| e.kind.is_npc() && e.health.is_infected())
        .map(|e| e.pos)
        .collect();
    let safe = |p: TilePos| hazards.iter().all(|h| h.manhattan(p) > 2);
    let gear: Vec<TilePos> = state
        .entities
        .iter()
        .filter(|e| matches!(e.kind, EntityKind::MaskPickup | EntityKind::SanitizerPickup))
        .map(|e| e.pos)
        .collect();
    if let Some(cmd) = toward(state, &gear, safe) {
        return cmd;
    }
    greedy(state, safe)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Won,
    Lost,
    /// Still playing when the tick budget ran out.
    Truncated,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Won => "won",
            Outcome::Lost => "lost",
            Outcome::Truncated => "truncated",
        }
    }

    fn of(phase: GamePhase) -> Self {
        match phase {
            GamePhase::Won => Outcome::Won,
            GamePhase::Lost => Outcome::Lost,
            GamePhase::Playing => Outcome::Truncated,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunStats {
    pub outcome: Outcome,
    pub ticks: u64,
    pub score: u64,
    pub direct: usize,
    pub indirect: usize,
    pub times_infected: u32,
    pub doctor_visits: u32,
}

impl RunStats {
    pub fn of(state: &GameState) -> Self {
        let (direct, indirect) = state.ledger_counts();
        Self {
            outcome: Outcome::of(state.phase),
            ticks: state.tick,
            score: state.score.value(),
            direct,
            indirect,
            times_infected: state.counters.times_infected,
            doctor_visits: state.counters.doctor_visits,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RunError {
    #[error(transparent)]
    Quota(#[from] QuotaError),
    #[error("max_ticks must be at least 1")]
    ZeroMaxTicks,
}

/// Plays `policy` until the game ends or `max_ticks` have passed.
pub fn run_bot(
    map: Arc<WorldMap>,
    config: GameConfig,
    seed: u64,
    policy: BotPolicy,
    max_ticks: u64,
) -> Result<(Replay, RunStats), RunError> {
    if max_ticks == 0 {
        return Err(RunError::ZeroMaxTicks);
    }
    let mut rec = Recorder::start(map, config, seed)?.with_policy(policy.as_str());
    let mut bot = Bot::new(policy, seed);
    while !rec.state().phase.is_terminal() && rec.state().tick < max_ticks {
        let cmd = bot.decide(rec.state());
        rec.push(cmd);
    }
    let (replay, state) = rec.finish();
    Ok((replay, RunStats::of(&state)))
}
