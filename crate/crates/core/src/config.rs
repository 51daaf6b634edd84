//! Game configuration and its flat `key=value` file format.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::effects::EffectConfig;
use crate::infection::ContactRule;
use crate::quota::{QuotaConfig, ScoreConfig};

/// Keys accepted in a config file, in canonical output order.
pub const CONFIG_KEYS: [&str; 13] = [
    "mask_duration",
    "sanitizer_duration",
    "lifeline_max",
    "infection_decay",
    "shield_bonus",
    "points_per_grocery",
    "points_per_medicine",
    "quota_groceries",
    "quota_medicines",
    "contact_rule",
    "transmission_prob",
    "npc_move_period",
    "strict_quota",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub effects: EffectConfig,
    pub score: ScoreConfig,
    pub quota: QuotaConfig,
    pub contact_rule: ContactRule,
    /// Probability that a qualifying contact transmits. 1.0 draws no randomness.
    pub transmission_prob: f64,
    /// NPCs move on ticks divisible by this period.
    pub npc_move_period: u64,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            effects: EffectConfig::default(),
            score: ScoreConfig::default(),
            quota: QuotaConfig::default(),
            contact_rule: ContactRule::SameOrAdjacent4,
            transmission_prob: 1.0,
            npc_move_period: 2,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: expected key=value")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key {key:?} given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: invalid value {value:?} for {key}: {reason}")]
    BadValue { line: usize, key: String, value: String, reason: &'static str },
}

fn positive_u64(line: usize, key: &str, value: &str) -> Result<u64, ConfigError> {
    match value.parse::<u64>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(bad(line, key, value, "expected an integer >= 1")),
    }
}

fn non_negative_u64(line: usize, key: &str, value: &str) -> Result<u64, ConfigError> {
    value.parse::<u64>().map_err(|_| bad(line, key, value, "expected a non-negative integer"))
}

fn bad(line: usize, key: &str, value: &str, reason: &'static str) -> ConfigError {
    ConfigError::BadValue { line, key: key.to_string(), value: value.to_string(), reason }
}

impl GameConfig {
    /// Parses a config file. Missing keys keep their defaults; blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = GameConfig::default();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            if !CONFIG_KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey { line, key: key.to_string() });
            }
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::DuplicateKey { line, key: key.to_string() });
            }
            let to_u32 = |v: u64| u32::try_from(v).map_err(|_| bad(line, key, value, "value too large"));
            match key {
                "mask_duration" => cfg.effects.mask_duration = positive_u64(line, key, value)?,
                "sanitizer_duration" => cfg.effects.sanitizer_duration = positive_u64(line, key, value)?,
                "lifeline_max" => cfg.effects.lifeline_max = to_u32(positive_u64(line, key, value)?)?,
                "infection_decay" => cfg.effects.infection_decay = to_u32(positive_u64(line, key, value)?)?,
                "shield_bonus" => cfg.effects.shield_bonus = positive_u64(line, key, value)?,
                "points_per_grocery" => cfg.score.points_per_grocery = non_negative_u64(line, key, value)?,
                "points_per_medicine" => cfg.score.points_per_medicine = non_negative_u64(line, key, value)?,
                "quota_groceries" => cfg.quota.groceries = to_u32(non_negative_u64(line, key, value)?)?,
                "quota_medicines" => cfg.quota.medicines = to_u32(non_negative_u64(line, key, value)?)?,
                "contact_rule" => {
                    cfg.contact_rule = ContactRule::parse(value)
                        .ok_or_else(|| bad(line, key, value, "expected same_tile or same_or_adjacent4"))?
                }
                "transmission_prob" => {
                    cfg.transmission_prob = match value.parse::<f64>() {
                        Ok(p) if (0.0..=1.0).contains(&p) => p,
                        _ => return Err(bad(line, key, value, "expected a number in [0, 1]")),
                    }
                }
                "npc_move_period" => cfg.npc_move_period = positive_u64(line, key, value)?,
                "strict_quota" => {
                    cfg.quota.strict = match value {
                        "true" => true,
                        "false" => false,
                        _ => return Err(bad(line, key, value, "expected true or false")),
                    }
                }
                _ => unreachable!("key list checked above"),
            }
        }
        Ok(cfg)
    }

    /// `(key, value)` pairs in `CONFIG_KEYS` order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let values = [
            self.effects.mask_duration.to_string(),
            self.effects.sanitizer_duration.to_string(),
            self.effects.lifeline_max.to_string(),
            self.effects.infection_decay.to_string(),
            self.effects.shield_bonus.to_string(),
            self.score.points_per_grocery.to_string(),
            self.score.points_per_medicine.to_string(),
            self.quota.groceries.to_string(),
            self.quota.medicines.to_string(),
            self.contact_rule.as_str().to_string(),
            self.transmission_prob.to_string(),
            self.npc_move_period.to_string(),
            self.quota.strict.to_string(),
        ];
        CONFIG_KEYS.into_iter().zip(values).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }
}

pub const BUNDLED_CONFIG: &str = include_str!("../data/default.cfg");
