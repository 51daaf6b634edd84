//! Replay files: seed + input trace + per-tick digests, and their verification.
//!
//! ```text
//! OUTBREAK-REPLAY v1
//! map_digest=<16 hex digits>
//! seed=<u64>
//! policy=<label>              (optional)
//! config.<key>=<value>        (every config key, canonical order)
//! body:
//! <one U/D/L/R/S per tick, wrapped at 64 per line>
//! trace:
//! <16 hex digit state digest after each tick, one per line>
//! footer:
//! ticks=<n>
//! final_digest=<16 hex digits>
//! final_phase=playing|won|lost
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::config::{GameConfig, CONFIG_KEYS};
use crate::quota::QuotaError;
use crate::sim::{hash_state, new_game, step, GamePhase, GameState, InputCommand};
use crate::world::WorldMap;

pub const REPLAY_MAGIC: &str = "OUTBREAK-REPLAY v1";
const BODY_WIDTH: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub map_digest: u64,
    pub seed: u64,
    pub policy: Option<String>,
    pub config: GameConfig,
    pub commands: Vec<InputCommand>,
    /// `hash_state` after each command.
    pub trace: Vec<u64>,
    pub final_digest: u64,
    pub final_phase: GamePhase,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("replay line {line}: {message}")]
pub struct ReplayFormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("map digest {found:016x} does not match replay header {expected:016x}")]
    MapDigestMismatch { expected: u64, found: u64 },
    #[error("config differs from the replay header in: {}", keys.join(", "))]
    ConfigMismatch { keys: Vec<&'static str> },
    #[error("cannot start game: {0}")]
    Setup(#[from] QuotaError),
    #[error("state digest diverges at tick {tick}")]
    DigestDivergence { tick: u64 },
    #[error("final digest {found:016x} does not match footer {expected:016x}")]
    FooterDigestMismatch { expected: u64, found: u64 },
    #[error("final phase {found:?} does not match footer {expected:?}")]
    PhaseMismatch { expected: GamePhase, found: GamePhase },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ticks: u64,
    pub final_digest: u64,
    pub final_phase: GamePhase,
}

/// Accumulates a replay while a game is being played.
#[derive(Debug, Clone)]
pub struct Recorder {
    state: GameState,
    seed: u64,
    policy: Option<String>,
    commands: Vec<InputCommand>,
    trace: Vec<u64>,
}

impl Recorder {
    pub fn start(map: Arc<WorldMap>, config: GameConfig, seed: u64) -> Result<Self, QuotaError> {
        Ok(Self { state: new_game(map, config, seed)?, seed, policy: None, commands: Vec::new(), trace: Vec::new() })
    }

    pub fn with_policy(mut self, label: impl Into<String>) -> Self {
        self.policy = Some(label.into());
        self
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    /// Applies one command. Commands after the game ended are not recorded.
    pub fn push(&mut self, cmd: InputCommand) {
        if self.state.phase.is_terminal() {
            return;
        }
        self.state = step(&self.state, cmd);
        self.commands.push(cmd);
        self.trace.push(hash_state(&self.state));
    }

    pub fn finish(self) -> (Replay, GameState) {
        let replay = Replay {
            map_digest: self.state.map_digest,
            seed: self.seed,
            policy: self.policy,
            config: self.state.config,
            commands: self.commands,
            trace: self.trace,
            final_digest: hash_state(&self.state),
            final_phase: self.state.phase,
        };
        (replay, self.state)
    }
}

/// Plays `commands` from a fresh game and records the result.
pub fn record(map: Arc<WorldMap>, config: GameConfig, seed: u64, commands: &[InputCommand]) -> Result<Replay, QuotaError> {
    let mut rec = Recorder::start(map, config, seed)?;
    for &c in commands {
        rec.push(c);
    }
    Ok(rec.finish().0)
}

pub fn write_replay(replay: &Replay) -> String {
    let mut out = String::new();
    out.push_str(REPLAY_MAGIC);
    out.push('\n');
    let _ = writeln!(out, "map_digest={:016x}", replay.map_digest);
    let _ = writeln!(out, "seed={}", replay.seed);
    if let Some(p) = &replay.policy {
        let _ = writeln!(out, "policy={p}");
    }
    for (k, v) in replay.config.entries() {
        let _ = writeln!(out, "config.{k}={v}");
    }
    out.push_str("body:\n");
    let body: String = replay.commands.iter().map(|c| c.as_char()).collect();
    for chunk in body.as_bytes().chunks(BODY_WIDTH) {
        out.push_str(std::str::from_utf8(chunk).expect("ascii"));
        out.push('\n');
    }
    out.push_str("trace:\n");
    for d in &replay.trace {
        let _ = writeln!(out, "{d:016x}");
    }
    out.push_str("footer:\n");
    let _ = writeln!(out, "ticks={}", replay.commands.len());
    let _ = writeln!(out, "final_digest={:016x}", replay.final_digest);
    let _ = writeln!(out, "final_phase={}", replay.final_phase.as_str());
    out
}

fn hex_digest(s: &str, line: usize) -> Result<u64, ReplayFormatError> {
    if s.len() != 16 {
        return Err(ReplayFormatError { line, message: format!("digest {s:?} is not 16 hex digits") });
    }
    u64::from_str_radix(s, 16).map_err(|_| ReplayFormatError { line, message: format!("digest {s:?} is not hex") })
}

pub fn read_replay(text: &str) -> Result<Replay, ReplayFormatError> {
    let err = |line: usize, message: String| ReplayFormatError { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, REPLAY_MAGIC)) => {}
        _ => return Err(err(1, format!("expected `{REPLAY_MAGIC}`"))),
    }

    let mut map_digest = None;
    let mut seed = None;
    let mut policy = None;
    let mut config_text = String::new();
    let mut config_keys = Vec::new();
    let mut section_line = 0;
    for (n, line) in lines.by_ref() {
        if line == "body:" {
            section_line = n;
            break;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| err(n, format!("expected key=value, got {line:?}")))?;
        match k {
            "map_digest" => map_digest = Some(hex_digest(v, n)?),
            "seed" => seed = Some(v.parse::<u64>().map_err(|_| err(n, format!("bad seed {v:?}")))?),
            "policy" => policy = Some(v.to_string()),
            _ => match k.strip_prefix("config.") {
                Some(key) => {
                    config_keys.push(key.to_string());
                    let _ = writeln!(config_text, "{key}={v}");
                }
                None => return Err(err(n, format!("unknown header key {k:?}"))),
            },
        }
    }
    if section_line == 0 {
        return Err(err(0, "missing body: section".into()));
    }
    let map_digest = map_digest.ok_or_else(|| err(section_line, "header lacks map_digest".into()))?;
    let seed = seed.ok_or_else(|| err(section_line, "header lacks seed".into()))?;
    if config_keys != CONFIG_KEYS {
        return Err(err(section_line, "header must list every config key in canonical order".into()));
    }
    let config = GameConfig::parse(&config_text).map_err(|e| err(section_line, format!("bad config: {e}")))?;

    let mut commands = Vec::new();
    let mut saw_trace = false;
    for (n, line) in lines.by_ref() {
        if line == "trace:" {
            saw_trace = true;
            break;
        }
        for c in line.chars() {
            commands.push(InputCommand::from_char(c).ok_or_else(|| err(n, format!("bad command {c:?}")))?);
        }
    }
    if !saw_trace {
        return Err(err(0, "missing trace: section".into()));
    }
    let mut trace = Vec::with_capacity(commands.len());
    let mut saw_footer = false;
    for (n, line) in lines.by_ref() {
        if line == "footer:" {
            saw_footer = true;
            break;
        }
        trace.push(hex_digest(line, n)?);
    }
    if !saw_footer {
        return Err(err(0, "missing footer: section".into()));
    }
    let mut ticks = None;
    let mut final_digest = None;
    let mut final_phase = None;
    let mut last = 0;
    for (n, line) in lines {
        last = n;
        let (k, v) = line.split_once('=').ok_or_else(|| err(n, format!("expected key=value, got {line:?}")))?;
        match k {
            "ticks" => ticks = Some(v.parse::<usize>().map_err(|_| err(n, format!("bad tick count {v:?}")))?),
            "final_digest" => final_digest = Some(hex_digest(v, n)?),
            "final_phase" => final_phase = Some(GamePhase::parse(v).ok_or_else(|| err(n, format!("bad phase {v:?}")))?),
            _ => return Err(err(n, format!("unknown footer key {k:?}"))),
        }
    }
    let ticks = ticks.ok_or_else(|| err(last, "footer lacks ticks".into()))?;
    if ticks != commands.len() || trace.len() != commands.len() {
        return Err(err(
            last,
            format!("footer says {ticks} ticks, body has {} commands and trace {} digests", commands.len(), trace.len()),
        ));
    }
    Ok(Replay {
        map_digest,
        seed,
        policy,
        config,
        commands,
        trace,
        final_digest: final_digest.ok_or_else(|| err(last, "footer lacks final_digest".into()))?,
        final_phase: final_phase.ok_or_else(|| err(last, "footer lacks final_phase".into()))?,
    })
}

/// Re-simulates `replay` against `map` and `config` and checks every digest.
pub fn replay_verify(replay: &Replay, map: Arc<WorldMap>, config: &GameConfig) -> Result<VerifyReport, VerifyError> {
    let found = map.digest();
    if found != replay.map_digest {
        return Err(VerifyError::MapDigestMismatch { expected: replay.map_digest, found });
    }
    if replay.config != *config {
        let ours = config.entries();
        let keys = replay
            .config
            .entries()
            .into_iter()
            .zip(ours)
            .filter(|(a, b)| a.1 != b.1)
            .map(|(a, _)| a.0)
            .collect();
        return Err(VerifyError::ConfigMismatch { keys });
    }
    let mut state = new_game(map, *config, replay.seed)?;
    for (i, (&cmd, &expected)) in replay.commands.iter().zip(&replay.trace).enumerate() {
        state = step(&state, cmd);
        if hash_state(&state) != expected {
            return Err(VerifyError::DigestDivergence { tick: i as u64 });
        }
    }
    let final_digest = hash_state(&state);
    if final_digest != replay.final_digest {
        return Err(VerifyError::FooterDigestMismatch { expected: replay.final_digest, found: final_digest });
    }
    if state.phase != replay.final_phase {
        return Err(VerifyError::PhaseMismatch { expected: replay.final_phase, found: state.phase });
    }
    Ok(VerifyReport { ticks: replay.commands.len() as u64, final_digest, final_phase: state.phase })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{bundled_map, parse_map};
    use proptest::prelude::*;

    fn small_map() -> Arc<WorldMap> {
        Arc::new(parse_map("OUTBREAK-MAP v1\ngrid:\nP.g.m\n.d..c\nC..MH\n").unwrap())
    }

    fn commands() -> Vec<InputCommand> {
        "RRDDLURRRSSDRSUUUDDDLLLRRR".chars().map(|c| InputCommand::from_char(c).unwrap()).collect()
    }

    #[test]
    fn recorded_replay_verifies() {
        let r = record(small_map(), GameConfig::default(), 3, &commands()).unwrap();
        let text = write_replay(&r);
        let back = read_replay(&text).unwrap();
        assert_eq!(back, r);
        let report = replay_verify(&back, small_map(), &GameConfig::default()).unwrap();
        assert_eq!(report.ticks, r.commands.len() as u64);
    }

    #[test]
    fn edited_map_is_detected() {
        let r = record(small_map(), GameConfig::default(), 3, &commands()).unwrap();
        let edited = Arc::new(parse_map("OUTBREAK-MAP v1\ngrid:\nP.g.m\n.d#.c\nC..MH\n").unwrap());
        assert!(matches!(
            replay_verify(&r, edited, &GameConfig::default()),
            Err(VerifyError::MapDigestMismatch { .. })
        ));
    }

    #[test]
    fn changed_config_is_detected() {
        let r = record(small_map(), GameConfig::default(), 3, &commands()).unwrap();
        let mut cfg = GameConfig::default();
        cfg.effects.shield_bonus = 1;
        assert_eq!(
            replay_verify(&r, small_map(), &cfg),
            Err(VerifyError::ConfigMismatch { keys: vec!["shield_bonus"] })
        );
    }

    #[test]
    fn mutated_command_diverges_at_that_tick() {
        let mut r = record(small_map(), GameConfig::default(), 3, &commands()).unwrap();
        r.commands[9] = InputCommand::Left;
        assert_eq!(
            replay_verify(&r, small_map(), &GameConfig::default()),
            Err(VerifyError::DigestDivergence { tick: 9 })
        );
    }

    #[test]
    fn footer_tampering_is_detected() {
        let mut r = record(small_map(), GameConfig::default(), 3, &commands()).unwrap();
        r.final_digest ^= 1;
        assert!(matches!(
            replay_verify(&r, small_map(), &GameConfig::default()),
            Err(VerifyError::FooterDigestMismatch { .. })
        ));
    }

    #[test]
    fn malformed_files_are_rejected() {
        let r = record(small_map(), GameConfig::default(), 3, &commands()).unwrap();
        let text = write_replay(&r);
        assert!(read_replay("nonsense").is_err());
        assert!(read_replay(&text.replace("body:\n", "body:\nX")).is_err());
        assert!(read_replay(&text.replace("ticks=", "ticks=1")).is_err());
        let no_key = text.lines().filter(|l| !l.starts_with("config.npc_move_period")).collect::<Vec<_>>().join("\n");
        assert!(read_replay(&no_key).is_err());
    }

    #[test]
    fn commands_after_game_end_are_dropped() {
        let map = Arc::new(parse_map("OUTBREAK-MAP v1\ngrid:\nPHC\n").unwrap());
        let r = record(map, GameConfig::default(), 0, &[InputCommand::Right, InputCommand::Left]).unwrap();
        assert_eq!(r.commands, vec![InputCommand::Right]);
        assert_eq!(r.final_phase, GamePhase::Won);
    }

    fn arb_replay() -> impl Strategy<Value = Replay> {
        (
            any::<u64>(),
            any::<u64>(),
            proptest::option::of("[a-z-]{1,12}"),
            proptest::collection::vec(0usize..5, 0..200),
            any::<u64>(),
            0usize..3,
            1u64..1000,
        )
            .prop_map(|(map_digest, seed, policy, cmds, final_digest, phase, mask)| {
                let commands: Vec<InputCommand> = cmds.into_iter().map(|i| InputCommand::ALL[i]).collect();
                let trace = commands.iter().enumerate().map(|(i, _)| seed.rotate_left(i as u32) ^ i as u64).collect();
                let mut config = GameConfig::default();
                config.effects.mask_duration = mask;
                Replay {
                    map_digest,
                    seed,
                    policy,
                    config,
                    commands,
                    trace,
                    final_digest,
                    final_phase: [GamePhase::Playing, GamePhase::Won, GamePhase::Lost][phase],
                }
            })
    }

    proptest! {
        #[test]
        fn write_read_is_identity(r in arb_replay()) {
            let text = write_replay(&r);
            let back = read_replay(&text).unwrap();
            prop_assert_eq!(&back, &r);
            prop_assert_eq!(write_replay(&back), text);
        }
    }

    #[test]
    fn bundled_map_replay_round_trip() {
        let map = Arc::new(bundled_map());
        let r = record(Arc::clone(&map), GameConfig::default(), 42, &commands()).unwrap();
        assert!(replay_verify(&read_replay(&write_replay(&r)).unwrap(), map, &GameConfig::default()).is_ok());
    }
}
