//! Acceptance suite. Runs every headline criterion at its stated tolerance
//! and prints one PASS/FAIL line per criterion.
//!
//! `cargo test -p outbreak-core --test acceptance`

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use outbreak_core::bot::{Bot, Outcome};
use outbreak_core::config::{GameConfig, BUNDLED_CONFIG};
use outbreak_core::effects::{acquire_effect, EffectKind};
use outbreak_core::infection::{ledger_counts, HealthState, InfectionLedger, TransmissionEvent};
use outbreak_core::quota::quota_met;
use outbreak_core::replay::{read_replay, record, replay_verify, write_replay, VerifyError};
use outbreak_core::rng::Rng;
use outbreak_core::sim::{hash_state, new_game, step, GamePhase, GameState, InputCommand};
use outbreak_core::survey::{
    alpha_of_columns, bundled_catalog, classify_band, cronbach_alpha, pooled_mean, score_survey, FactorCode,
    Grouping, QualityBand, ResponseMatrix,
};
use outbreak_core::world::{bundled_map, EntityId, WorldMap};
use outbreak_core::{run_bot, BotPolicy};

const GOLDEN_REPLAY: &str = include_str!("fixtures/golden_safety_first_seed42.rec");
const SYNTHETIC_SURVEY: &str = include_str!("fixtures/synthetic_survey.csv");

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_commands(rng: &mut Rng, n: usize) -> Vec<InputCommand> {
    (0..n).map(|_| InputCommand::ALL[rng.below(5) as usize]).collect()
}

fn digests(map: &Arc<WorldMap>, seed: u64, commands: &[InputCommand]) -> Vec<u64> {
    let mut s = new_game(Arc::clone(map), GameConfig::default(), seed).unwrap();
    let mut out = vec![hash_state(&s)];
    for &c in commands {
        s = step(&s, c);
        out.push(hash_state(&s));
    }
    out
}

fn determinism(map: &Arc<WorldMap>) -> Check {
    let mut gen = Rng::from_seed(0xD37E_4A11);
    let traces: Vec<(u64, Vec<InputCommand>)> = (0..100)
        .map(|_| {
            let seed = gen.next_u64();
            (seed, random_commands(&mut gen, 500))
        })
        .collect();
    let first: Vec<Vec<u64>> = traces.par_iter().map(|(seed, cmds)| digests(map, *seed, cmds)).collect();
    // Second pass is sequential and rebuilds the map from text.
    let fresh = Arc::new(bundled_map());
    for (i, (seed, cmds)) in traces.iter().enumerate() {
        let second = digests(&fresh, *seed, cmds);
        if let Some(t) = (0..second.len()).find(|&t| second[t] != first[i][t]) {
            return Err(format!("trace {i} (seed {seed}) diverged at tick {t}"));
        }
    }
    Ok("100 traces x 500 ticks agree at every tick".into())
}

fn protection(map: &Arc<WorldMap>) -> Check {
    let results: Vec<Result<u64, String>> = (0..1000u64)
        .into_par_iter()
        .map(|k| {
            let mut gen = Rng::from_seed(0x9407_EC7 ^ k);
            let mut cfg = GameConfig::default();
            // Busier NPCs and a short mask so the refresh is what protects.
            cfg.npc_move_period = 1 + k % 3;
            cfg.effects.mask_duration = 1 + k % 5;
            let mut s = new_game(Arc::clone(map), cfg, gen.next_u64()).unwrap();
            let player = s.player_id;
            let mut contacts = 0;
            for cmd in random_commands(&mut gen, 300) {
                let (effects, _) = acquire_effect(&s.player_effects, EffectKind::Mask, s.tick, &s.config.effects);
                s.player_effects = effects;
                let near = s.entities.iter().any(|e| {
                    e.kind.is_npc() && e.health.is_infected() && e.pos.manhattan(s.player().pos) <= 1
                });
                contacts += u64::from(near);
                s = step(&s, cmd);
                ensure(s.player().health == HealthState::Healthy, || format!("trace {k}: player infected at tick {}", s.tick))?;
                ensure(
                    s.ledger.events().iter().all(|e| e.source != player && e.target != player),
                    || format!("trace {k}: player-rooted event by tick {}", s.tick),
                )?;
                if s.phase.is_terminal() {
                    break;
                }
            }
            Ok(contacts)
        })
        .collect();
    let mut exposures = 0;
    for r in results {
        exposures += r?;
    }
    ensure(exposures > 0, || "no trace ever met an infected NPC".into())?;
    Ok(format!("1000 traces, {exposures} exposed ticks, player stayed healthy"))
}

fn quota_gate(map: &Arc<WorldMap>) -> Check {
    let quotas = [(5, 3), (1, 0), (0, 1), (0, 0), (8, 5), (3, 2)];
    let policies = BotPolicy::ALL;
    let outcomes: Vec<Result<bool, String>> = (0..300u64)
        .into_par_iter()
        .map(|k| {
            let mut cfg = GameConfig::default();
            let (g, m) = quotas[(k % quotas.len() as u64) as usize];
            cfg.quota.groceries = g;
            cfg.quota.medicines = m;
            cfg.effects.lifeline_max = 200 + (k % 7) as u32 * 100;
            let policy = policies[(k % 3) as usize];
            let mut mix = Rng::from_seed(k);
            let mut bot = Bot::new(policy, k);
            let mut s = new_game(Arc::clone(map), cfg, k).unwrap();
            let checked = |s: &GameState| {
                ensure(s.phase != GamePhase::Won || quota_met(&s.quota), || format!("trace {k}: Won before quota at tick {}", s.tick))
            };
            checked(&s)?;
            for _ in 0..2000 {
                // One command in four is random so bots wander onto Home early.
                let cmd = if mix.below(4) == 0 { InputCommand::ALL[mix.below(5) as usize] } else { bot.decide(&s) };
                s = step(&s, cmd);
                checked(&s)?;
                if s.phase.is_terminal() {
                    break;
                }
            }
            Ok(s.phase == GamePhase::Won)
        })
        .collect();
    let mut wins = 0;
    for o in outcomes {
        wins += usize::from(o?);
    }
    ensure(wins > 0, || "no trace ever won".into())?;
    Ok(format!("300 traces, {wins} wins, none before quota"))
}

/// Builds a ledger that could come out of a game: NPC targets are infected at
/// most once, and sources were already infected on an earlier tick.
fn random_ledger(rng: &mut Rng) -> InfectionLedger {
    let player: EntityId = 0;
    let n_entities = 3 + rng.below(20) as u32;
    let mut infected_since: BTreeMap<EntityId, u64> = BTreeMap::new();
    for id in 1..n_entities {
        if rng.below(4) == 0 {
            infected_since.insert(id, 0);
        }
    }
    if rng.below(2) == 0 {
        infected_since.insert(player, 0);
    }
    let target_len = rng.below(51) as usize;
    let mut events = Vec::new();
    let mut tick = 1;
    while events.len() < target_len && tick < 400 {
        let sources: Vec<EntityId> = infected_since.iter().filter(|(_, &t)| t < tick).map(|(&id, _)| id).collect();
        let mut claimed = BTreeSet::new();
        for _ in 0..rng.below(4) {
            if sources.is_empty() || events.len() >= target_len {
                break;
            }
            let source = sources[rng.below(sources.len() as u64) as usize];
            let target = rng.below(u64::from(n_entities)) as EntityId;
            let healthy_npc = target != player && !infected_since.contains_key(&target);
            // The player can be re-infected; NPCs cannot.
            let ok = target != source && !claimed.contains(&target) && (healthy_npc || target == player);
            if ok {
                claimed.insert(target);
                events.push(TransmissionEvent { tick, source, target });
            }
        }
        for &t in &claimed {
            infected_since.entry(t).or_insert(tick);
        }
        tick += 1 + rng.below(3);
    }
    InfectionLedger::from_events(events)
}

/// Direct: player-sourced events on NPCs. Indirect: NPCs reachable in the
/// source-to-target graph from a direct target, by breadth-first search.
fn oracle_counts(ledger: &InfectionLedger, player: EntityId) -> (usize, usize) {
    let mut children: BTreeMap<EntityId, Vec<EntityId>> = BTreeMap::new();
    for e in ledger.events() {
        if e.target != player {
            children.entry(e.source).or_default().push(e.target);
        }
    }
    let direct_targets = children.get(&player).cloned().unwrap_or_default();
    let direct = direct_targets.len();
    let mut seen: BTreeSet<EntityId> = direct_targets.iter().copied().collect();
    let mut queue: VecDeque<EntityId> = direct_targets.into_iter().collect();
    let mut indirect = 0;
    while let Some(x) = queue.pop_front() {
        for &c in children.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(c) {
                indirect += 1;
                queue.push_back(c);
            }
        }
    }
    (direct, indirect)
}

fn ledger_oracle() -> Check {
    let mut rng = Rng::from_seed(0x1ED6E5);
    let mut nonzero = 0;
    for i in 0..500 {
        let ledger = random_ledger(&mut rng);
        ensure(ledger.len() <= 50, || format!("ledger {i} too long"))?;
        let got = ledger_counts(&ledger, 0);
        let want = oracle_counts(&ledger, 0);
        ensure(got == want, || format!("ledger {i}: got {got:?}, oracle {want:?}"))?;
        nonzero += usize::from(got.1 > 0);
    }
    ensure(nonzero > 0, || "no ledger exercised indirect counting".into())?;
    Ok(format!("500 ledgers match BFS exactly ({nonzero} with indirect infections)"))
}

fn winnability(map: &Arc<WorldMap>) -> Check {
    let cfg = GameConfig::parse(BUNDLED_CONFIG).map_err(|e| e.to_string())?;
    let runs: Vec<_> = (1..=20u64)
        .into_par_iter()
        .map(|seed| (seed, run_bot(Arc::clone(map), cfg, seed, BotPolicy::SafetyFirst, 10_000)))
        .collect();
    let mut worst = 0;
    for (seed, r) in runs {
        let (_, stats) = r.map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(stats.outcome == Outcome::Won, || format!("seed {seed}: {} after {} ticks", stats.outcome.as_str(), stats.ticks))?;
        worst = worst.max(stats.ticks);
    }
    let golden = read_replay(GOLDEN_REPLAY).map_err(|e| e.to_string())?;
    let report = replay_verify(&golden, Arc::clone(map), &cfg).map_err(|e| format!("golden replay: {e}"))?;
    ensure(report.final_phase == GamePhase::Won, || "golden replay does not end in a win".into())?;
    Ok(format!("seeds 1-20 won (longest {worst} ticks); golden replay PASS"))
}

/// Alpha from the item covariance matrix with sample (n-1) covariances:
/// `k/(k-1) * (1 - trace(C) / sum(C))`.
fn alpha_transcribed(rows: &[Vec<u8>]) -> Option<f64> {
    let n = rows.len();
    let k = rows[0].len();
    let means: Vec<f64> = (0..k).map(|j| rows.iter().map(|r| f64::from(r[j])).sum::<f64>() / n as f64).collect();
    let cov = |a: usize, b: usize| {
        rows.iter().map(|r| (f64::from(r[a]) - means[a]) * (f64::from(r[b]) - means[b])).sum::<f64>() / (n as f64 - 1.0)
    };
    let mut trace = 0.0;
    let mut total = 0.0;
    for a in 0..k {
        for b in 0..k {
            let c = cov(a, b);
            total += c;
            if a == b {
                trace += c;
            }
        }
    }
    if total.abs() < 1e-12 {
        return None;
    }
    let k = k as f64;
    Some(k / (k - 1.0) * (1.0 - trace / total))
}

fn alpha_oracle() -> Check {
    let mut rng = Rng::from_seed(0xA1FA);
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    while compared < 200 {
        // Mix in a per-respondent bias so alphas spread across the range.
        let rows: Vec<Vec<u8>> = (0..5)
            .map(|_| {
                let bias = rng.below(3) as i64 - 1;
                (0..10).map(|_| (1 + rng.below(5) as i64 + bias).clamp(1, 5) as u8).collect()
            })
            .collect();
        let Some(want) = alpha_transcribed(&rows) else { continue };
        let m = ResponseMatrix::from_rows(rows).map_err(|e| e.to_string())?;
        let got = cronbach_alpha(&m).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).abs());
        compared += 1;
    }
    ensure(worst <= 1e-9, || format!("max |diff| {worst:e} > 1e-9"))?;
    let col = vec![1.0, 3.0, 2.0, 5.0, 4.0];
    let parallel = alpha_of_columns(&vec![col; 10]).map_err(|e| e.to_string())?;
    ensure(parallel == 1.0, || format!("parallel items gave {parallel:?}"))?;
    Ok(format!("200 matrices, max |diff| {worst:.1e}; parallel items alpha = {parallel:?}"))
}

fn published_numbers() -> Check {
    ensure(classify_band(69.3) == QualityBand::Excellent, || "69.3 is not excellent".into())?;
    let catalog = bundled_catalog();
    let published: Vec<_> = catalog.items.iter().filter_map(|i| Some((i, i.published_mean?))).collect();
    let codes: Vec<FactorCode> = FactorCode::MOTIVATION.iter().chain(&FactorCode::IMPACT_AND_OTHER).copied().collect();
    let pooled = pooled_mean(&published, &codes).map_err(|e| e.to_string())?;
    ensure((pooled - 3.76).abs() <= 0.01, || format!("motivation/impact mean {pooled:.4} not 3.76 +- 0.01"))?;
    let m = ResponseMatrix::from_csv(SYNTHETIC_SURVEY).map_err(|e| e.to_string())?;
    let items = score_survey(&m, &catalog, 100.0, Grouping::Items).map_err(|e| e.to_string())?;
    ensure((items.score - 69.3).abs() <= 0.05, || format!("synthetic score {:.4} not 69.3 +- 0.05", items.score))?;
    ensure(items.band == QualityBand::Excellent, || "synthetic band is not excellent".into())?;
    let fm = score_survey(&m, &catalog, 100.0, Grouping::FactorMeans).map_err(|e| e.to_string())?;
    Ok(format!(
        "band(69.3)=excellent; motivation/impact mean {pooled:.4}; synthetic score {:.3} ({}), factor-means grouping {:.3}",
        items.score,
        items.band.label(),
        fm.score
    ))
}

fn mutate(c: InputCommand) -> InputCommand {
    let i = InputCommand::ALL.iter().position(|&x| x == c).unwrap();
    InputCommand::ALL[(i + 1) % 5]
}

fn replay_round_trip(map: &Arc<WorldMap>) -> Check {
    let cfg = GameConfig::default();
    let mut summary = Vec::new();
    for policy in BotPolicy::ALL {
        let budget = if policy == BotPolicy::RandomWalk { 400 } else { 10_000 };
        let (replay, _) = run_bot(Arc::clone(map), cfg, 7, policy, budget).map_err(|e| e.to_string())?;
        let text = write_replay(&replay);
        let back = read_replay(&text).map_err(|e| format!("{policy}: {e}"))?;
        ensure(back == replay, || format!("{policy}: read(write(r)) != r"))?;
        replay_verify(&back, Arc::clone(map), &cfg).map_err(|e| format!("{policy}: {e}"))?;
        let n = replay.commands.len();
        let bad: Vec<String> = (0..n)
            .into_par_iter()
            .filter_map(|i| {
                let mut cmds = replay.commands.clone();
                cmds[i] = mutate(cmds[i]);
                let mut forged = replay.clone();
                forged.commands = cmds;
                match replay_verify(&forged, Arc::clone(map), &cfg) {
                    Err(VerifyError::DigestDivergence { tick }) if tick <= i as u64 => None,
                    other => Some(format!("{policy}: mutating command {i} gave {other:?}")),
                }
            })
            .collect();
        if let Some(first) = bad.first() {
            return Err(first.clone());
        }
        // A replay recorded from the mutated commands is self-consistent again.
        if n > 0 {
            let mut cmds = replay.commands.clone();
            cmds[0] = mutate(cmds[0]);
            let rerecorded = record(Arc::clone(map), cfg, 7, &cmds).map_err(|e| e.to_string())?;
            replay_verify(&rerecorded, Arc::clone(map), &cfg).map_err(|e| format!("{policy}: re-recorded {e}"))?;
        }
        summary.push(format!("{policy} {n}"));
    }
    Ok(format!("PASS for every policy; every single-command mutation diverges ({})", summary.join(", ")))
}

fn main() -> ExitCode {
    let map = Arc::new(bundled_map());
    let checks: Vec<(&str, Box<dyn Fn() -> Check>)> = vec![
        ("determinism", Box::new(|| determinism(&map))),
        ("protection-invariant", Box::new(|| protection(&map))),
        ("quota-gate", Box::new(|| quota_gate(&map))),
        ("ledger-oracle", Box::new(ledger_oracle)),
        ("winnability", Box::new(|| winnability(&map))),
        ("alpha-oracle", Box::new(alpha_oracle)),
        ("published-numbers", Box::new(published_numbers)),
        ("replay-round-trip", Box::new(|| replay_round_trip(&map))),
    ];
    let mut failed = 0;
    for (name, check) in &checks {
        let t = Instant::now();
        let result = check();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {name:<22} {detail} [{secs:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name:<22} {why} [{secs:.2}s]");
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
