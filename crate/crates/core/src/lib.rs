//! Deterministic outbreak-survival simulation: a tile-map city, touch
//! transmission, timed masks and sanitizers, a quota-gated finish line, a
//! replay and bot harness, and questionnaire scoring.

pub mod batch;
pub mod bot;
pub mod config;
pub mod digest;
pub mod effects;
pub mod infection;
pub mod quota;
pub mod replay;
pub mod rng;
pub mod sim;
pub mod snapshot;
pub mod survey;
pub mod world;

pub use bot::{run_bot, BotPolicy, Outcome, RunStats};
pub use config::GameConfig;
pub use replay::{read_replay, replay_verify, write_replay, Replay, VerifyError, VerifyReport};
pub use sim::{hash_state, new_game, step, GamePhase, GameState, InputCommand};
pub use world::{bundled_map, parse_map, serialize_map, TilePos, WorldMap};
