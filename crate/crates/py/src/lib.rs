//! Python bindings for the simulation, replay harness and survey scoring.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use outbreak_core::config::GameConfig;
use outbreak_core::replay::{read_replay, replay_verify, write_replay};
use outbreak_core::sim::{hash_state, new_game, step, GameState, InputCommand};
use outbreak_core::snapshot::render_snapshot;
use outbreak_core::survey::{self, bundled_catalog, Grouping, ResponseMatrix};
use outbreak_core::world::{bundled_map, parse_map, serialize_map, WorldMap};
use outbreak_core::{run_bot as core_run_bot, BotPolicy};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Map", module = "outbreak", frozen, from_py_object)]
#[derive(Clone)]
struct PyMap(Arc<WorldMap>);

#[pymethods]
impl PyMap {
    #[staticmethod]
    fn bundled() -> Self {
        Self(Arc::new(bundled_map()))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_map(text).map(|m| Self(Arc::new(m))).map_err(value_err)
    }

    #[getter]
    fn width(&self) -> u32 {
        self.0.width()
    }

    #[getter]
    fn height(&self) -> u32 {
        self.0.height()
    }

    #[getter]
    fn digest(&self) -> u64 {
        self.0.digest()
    }

    fn serialize(&self) -> String {
        serialize_map(&self.0)
    }
}

#[pyclass(name = "Config", module = "outbreak", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyConfig(GameConfig);

#[pymethods]
impl PyConfig {
    #[new]
    fn new() -> Self {
        Self(GameConfig::default())
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        GameConfig::parse(text).map(Self).map_err(value_err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }
}

fn config_or_default(config: Option<PyConfig>) -> GameConfig {
    config.map(|c| c.0).unwrap_or_default()
}

fn parse_command(cmd: &str) -> PyResult<InputCommand> {
    let mut chars = cmd.chars();
    match (chars.next().and_then(InputCommand::from_char), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(PyValueError::new_err(format!("command must be one of U, D, L, R, S; got {cmd:?}"))),
    }
}

/// A game in progress. `step` advances it in place.
#[pyclass(name = "Game", module = "outbreak")]
struct PyGame(GameState);

#[pymethods]
impl PyGame {
    #[new]
    #[pyo3(signature = (map, config=None, seed=0))]
    fn new(map: PyMap, config: Option<PyConfig>, seed: u64) -> PyResult<Self> {
        new_game(map.0, config_or_default(config), seed).map(Self).map_err(value_err)
    }

    /// Applies one command (`"U"`, `"D"`, `"L"`, `"R"` or `"S"`).
    fn step(&mut self, command: &str) -> PyResult<()> {
        self.0 = step(&self.0, parse_command(command)?);
        Ok(())
    }

    fn hash(&self) -> u64 {
        hash_state(&self.0)
    }

    #[getter]
    fn tick(&self) -> u64 {
        self.0.tick
    }

    #[getter]
    fn phase(&self) -> &'static str {
        self.0.phase.as_str()
    }

    #[getter]
    fn score(&self) -> u64 {
        self.0.score.value()
    }

    #[getter]
    fn player_pos(&self) -> (u32, u32) {
        let p = self.0.player().pos;
        (p.x, p.y)
    }

    #[getter]
    fn protected(&self) -> bool {
        self.0.is_protected()
    }

    /// `(direct, indirect)` infections caused by the player.
    fn ledger_counts(&self) -> (usize, usize) {
        self.0.ledger_counts()
    }

    fn snapshot_json(&self) -> String {
        render_snapshot(&self.0).to_json()
    }
}

/// Plays a bot policy. Returns `(replay_text, stats)`.
#[pyfunction]
#[pyo3(signature = (map, policy, seed, config=None, max_ticks=10_000))]
fn run_bot<'py>(
    py: Python<'py>,
    map: PyMap,
    policy: &str,
    seed: u64,
    config: Option<PyConfig>,
    max_ticks: u64,
) -> PyResult<(String, Bound<'py, PyDict>)> {
    let policy: BotPolicy = policy.parse().map_err(value_err)?;
    let (replay, stats) = core_run_bot(map.0, config_or_default(config), seed, policy, max_ticks).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("outcome", stats.outcome.as_str())?;
    d.set_item("ticks", stats.ticks)?;
    d.set_item("score", stats.score)?;
    d.set_item("direct", stats.direct)?;
    d.set_item("indirect", stats.indirect)?;
    d.set_item("times_infected", stats.times_infected)?;
    d.set_item("doctor_visits", stats.doctor_visits)?;
    Ok((write_replay(&replay), d))
}

/// Re-simulates a replay. Returns `(ticks, final_phase)`; raises
/// `ValueError` on any mismatch.
#[pyfunction]
#[pyo3(signature = (replay_text, map, config=None))]
fn verify_replay(replay_text: &str, map: PyMap, config: Option<PyConfig>) -> PyResult<(u64, &'static str)> {
    let replay = read_replay(replay_text).map_err(value_err)?;
    let report = replay_verify(&replay, map.0, &config_or_default(config)).map_err(value_err)?;
    Ok((report.ticks, report.final_phase.as_str()))
}

/// Alpha of a respondents-by-items matrix of Likert answers.
#[pyfunction]
fn cronbach_alpha(rows: Vec<Vec<u8>>) -> PyResult<f64> {
    let m = ResponseMatrix::from_rows(rows).map_err(value_err)?;
    survey::cronbach_alpha(&m).map_err(value_err)
}

#[pyfunction]
fn classify_band(score: f64) -> &'static str {
    survey::classify_band(score).label()
}

/// Scores a response CSV against the bundled questionnaire. Returns
/// `(alpha, score, band)`.
#[pyfunction]
#[pyo3(signature = (csv_text, multiplier=100.0, grouping="items"))]
fn score_survey(csv_text: &str, multiplier: f64, grouping: &str) -> PyResult<(f64, f64, &'static str)> {
    let grouping = match grouping {
        "items" => Grouping::Items,
        "factor-means" => Grouping::FactorMeans,
        other => return Err(PyValueError::new_err(format!("unknown grouping {other:?}"))),
    };
    let m = ResponseMatrix::from_csv(csv_text).map_err(value_err)?;
    let r = survey::score_survey(&m, &bundled_catalog(), multiplier, grouping).map_err(value_err)?;
    Ok((r.alpha, r.score, r.band.label()))
}

#[pymodule]
fn outbreak(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMap>()?;
    m.add_class::<PyConfig>()?;
    m.add_class::<PyGame>()?;
    m.add_function(wrap_pyfunction!(run_bot, m)?)?;
    m.add_function(wrap_pyfunction!(verify_replay, m)?)?;
    m.add_function(wrap_pyfunction!(cronbach_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(classify_band, m)?)?;
    m.add_function(wrap_pyfunction!(score_survey, m)?)?;
    Ok(())
}
