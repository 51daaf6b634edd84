use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use outbreak_core::batch::batch_stats;
use outbreak_core::bot::{run_bot, BotPolicy};
use outbreak_core::config::GameConfig;
use outbreak_core::replay::{read_replay, replay_verify, write_replay};
use outbreak_core::survey::{bundled_catalog, score_survey, Catalog, Grouping, ResponseMatrix};
use outbreak_core::world::{parse_map, WorldMap};

#[derive(Parser)]
#[command(name = "outbreak", version, about = "Headless outbreak-survival simulation harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game with a bot policy and optionally save the replay.
    Run {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = parse_policy)]
        policy: BotPolicy,
        #[arg(long, default_value_t = 10_000)]
        max_ticks: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-simulate a replay and check every state digest.
    Verify {
        #[arg(long)]
        replay: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a policy over a seed range and write per-seed stats as CSV.
    Batch {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_policy)]
        policy: BotPolicy,
        /// Inclusive range, e.g. `1..20`.
        #[arg(long, value_parser = parse_seed_range)]
        seeds: SeedRange,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        max_ticks: u64,
    },
    /// Score a questionnaire response CSV.
    ScoreSurvey {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 100.0)]
        multiplier: f64,
        /// Item catalog CSV; defaults to the bundled questionnaire.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GroupingArg::Items)]
        grouping: GroupingArg,
        /// Also write the report as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupingArg {
    Items,
    FactorMeans,
}

#[derive(Clone, Copy, Debug)]
struct SeedRange(u64, u64);

fn parse_policy(s: &str) -> Result<BotPolicy, String> {
    s.parse::<BotPolicy>().map_err(|e| e.to_string())
}

fn parse_seed_range(s: &str) -> Result<SeedRange, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u64 = a.parse().map_err(|_| format!("bad seed {a:?}"))?;
    let b: u64 = b.parse().map_err(|_| format!("bad seed {b:?}"))?;
    if a > b {
        return Err(format!("empty seed range {s}"));
    }
    Ok(SeedRange(a, b))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_map(path: &Path) -> Result<Arc<WorldMap>> {
    let map = parse_map(&read(path)?).with_context(|| format!("parsing map {}", path.display()))?;
    Ok(Arc::new(map))
}

fn load_config(path: &Path) -> Result<GameConfig> {
    GameConfig::parse(&read(path)?).with_context(|| format!("parsing config {}", path.display()))
}

/// Outcome of a subcommand that ran to completion.
enum Status {
    Ok,
    VerificationFailed,
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Run { map, config, seed, policy, max_ticks, out } => {
            let (replay, stats) = run_bot(load_map(&map)?, load_config(&config)?, seed, policy, max_ticks)?;
            println!(
                "outcome={} ticks={} score={} direct={} indirect={} times_infected={} doctor_visits={}",
                stats.outcome.as_str(),
                stats.ticks,
                stats.score,
                stats.direct,
                stats.indirect,
                stats.times_infected,
                stats.doctor_visits
            );
            if let Some(out) = out {
                fs::write(&out, write_replay(&replay)).with_context(|| format!("writing {}", out.display()))?;
            }
            Ok(Status::Ok)
        }
        Command::Verify { replay, map, config } => {
            let text = read(&replay)?;
            let replay = read_replay(&text).with_context(|| format!("parsing replay {}", replay.display()))?;
            match replay_verify(&replay, load_map(&map)?, &load_config(&config)?) {
                Ok(report) => {
                    println!(
                        "PASS ticks={} phase={} digest={:016x}",
                        report.ticks,
                        report.final_phase.as_str(),
                        report.final_digest
                    );
                    Ok(Status::Ok)
                }
                Err(e) => {
                    println!("FAIL {e}");
                    Ok(Status::VerificationFailed)
                }
            }
        }
        Command::Batch { map, config, policy, seeds, csv, max_ticks } => {
            let list: Vec<u64> = (seeds.0..=seeds.1).collect();
            let table = batch_stats(load_map(&map)?, load_config(&config)?, policy, &list, max_ticks)?;
            fs::write(&csv, table.to_csv()).with_context(|| format!("writing {}", csv.display()))?;
            let agg = table.aggregate();
            println!("seeds={} win_rate={:.4} mean_ticks={:.1}", list.len(), agg.win_rate, agg.mean[0]);
            Ok(Status::Ok)
        }
        Command::ScoreSurvey { csv, multiplier, catalog, grouping, out } => {
            if !(multiplier > 0.0 && multiplier.is_finite()) {
                bail!("--multiplier must be positive");
            }
            let catalog = match catalog {
                Some(p) => Catalog::from_csv(&read(&p)?).with_context(|| format!("parsing catalog {}", p.display()))?,
                None => bundled_catalog(),
            };
            let matrix = ResponseMatrix::from_csv(&read(&csv)?).with_context(|| format!("parsing {}", csv.display()))?;
            let grouping = match grouping {
                GroupingArg::Items => Grouping::Items,
                GroupingArg::FactorMeans => Grouping::FactorMeans,
            };
            let report = score_survey(&matrix, &catalog, multiplier, grouping)?;
            print!("{}", report.to_table());
            if let Some(out) = out {
                fs::write(&out, report.to_csv()).with_context(|| format!("writing {}", out.display()))?;
            }
            Ok(Status::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::VerificationFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
