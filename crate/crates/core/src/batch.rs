//! Multi-seed bot runs and their CSV summary.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use crate::bot::{run_bot, BotPolicy, Outcome, RunError, RunStats};
use crate::config::GameConfig;
use crate::world::WorldMap;

pub const CSV_HEADER: &str = "seed,outcome,ticks,score,direct,indirect,times_infected,doctor_visits";

#[derive(Debug, Clone, PartialEq)]
pub struct BatchTable {
    pub rows: Vec<(u64, RunStats)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate {
    pub win_rate: f64,
    /// ticks, score, direct, indirect, times_infected, doctor_visits
    pub mean: [f64; 6],
    /// Population standard deviation, same column order as `mean`.
    pub sd: [f64; 6],
}

fn numeric(stats: &RunStats) -> [f64; 6] {
    [
        stats.ticks as f64,
        stats.score as f64,
        stats.direct as f64,
        stats.indirect as f64,
        f64::from(stats.times_infected),
        f64::from(stats.doctor_visits),
    ]
}

impl BatchTable {
    pub fn aggregate(&self) -> Aggregate {
        let n = self.rows.len() as f64;
        let mut mean = [0.0; 6];
        for (_, s) in &self.rows {
            for (m, v) in mean.iter_mut().zip(numeric(s)) {
                *m += v / n;
            }
        }
        let mut sd = [0.0; 6];
        for (_, s) in &self.rows {
            for ((acc, v), m) in sd.iter_mut().zip(numeric(s)).zip(mean) {
                *acc += (v - m) * (v - m) / n;
            }
        }
        for v in &mut sd {
            *v = v.sqrt();
        }
        let wins = self.rows.iter().filter(|(_, s)| s.outcome == Outcome::Won).count() as f64;
        Aggregate { win_rate: wins / n, mean, sd }
    }

    /// Per-seed rows followed by a `mean` row (its outcome column holds the
    /// win rate) and an `sd` row. Aggregates use four decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        for (seed, s) in &self.rows {
            let _ = writeln!(
                out,
                "{seed},{},{},{},{},{},{},{}",
                s.outcome.as_str(),
                s.ticks,
                s.score,
                s.direct,
                s.indirect,
                s.times_infected,
                s.doctor_visits
            );
        }
        let agg = self.aggregate();
        let join = |xs: [f64; 6]| xs.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "mean,{:.4},{}", agg.win_rate, join(agg.mean));
        let _ = writeln!(out, "sd,,{}", join(agg.sd));
        out
    }
}

/// Runs every seed (in parallel) and collects rows in seed-list order.
pub fn batch_stats(
    map: Arc<WorldMap>,
    config: GameConfig,
    policy: BotPolicy,
    seeds: &[u64],
    max_ticks: u64,
) -> Result<BatchTable, RunError> {
    assert!(!seeds.is_empty(), "batch_stats needs at least one seed");
    let rows = seeds
        .par_iter()
        .map(|&seed| run_bot(Arc::clone(&map), config, seed, policy, max_ticks).map(|(_, stats)| (seed, stats)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BatchTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{bundled_map, parse_map};

    #[test]
    fn single_seed_aggregate_equals_row() {
        let t = batch_stats(Arc::new(bundled_map()), GameConfig::default(), BotPolicy::GreedyCollector, &[3], 2000).unwrap();
        let agg = t.aggregate();
        assert_eq!(agg.mean, numeric(&t.rows[0].1));
        assert_eq!(agg.sd, [0.0; 6]);
    }

    #[test]
    fn csv_is_reproducible() {
        let map = Arc::new(bundled_map());
        let seeds: Vec<u64> = (1..=20).collect();
        let a = batch_stats(Arc::clone(&map), GameConfig::default(), BotPolicy::RandomWalk, &seeds, 500).unwrap();
        let b = batch_stats(map, GameConfig::default(), BotPolicy::RandomWalk, &seeds, 500).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        let csv = a.to_csv();
        assert_eq!(csv.lines().count(), 1 + 20 + 2);
        assert!(csv.lines().nth(1).unwrap().starts_with("1,"));
    }

    #[test]
    fn walled_in_player_never_scores() {
        let map = Arc::new(parse_map("OUTBREAK-MAP v1\ngrid:\n###....\n#P#.gdC\n###.m.H\n").unwrap());
        for policy in BotPolicy::ALL {
            let t = batch_stats(Arc::clone(&map), GameConfig::default(), policy, &[1, 2, 3], 200).unwrap();
            for (_, s) in &t.rows {
                assert!(matches!(s.outcome, Outcome::Lost | Outcome::Truncated));
                assert_eq!(s.score, 0);
            }
        }
    }
}
