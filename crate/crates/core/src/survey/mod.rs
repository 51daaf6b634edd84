//! Questionnaire scoring: factor taxonomy, item and factor statistics,
//! Cronbach's alpha, quality score and quality bands.

mod catalog;
mod matrix;
mod report;
mod stats;

pub use catalog::{bundled_catalog, Catalog, CatalogError, SurveyItem, BUNDLED_CATALOG};
pub use matrix::{MatrixError, ResponseMatrix};
pub use report::{score_survey, Grouping, SurveyReport};
pub use stats::{
    alpha_of_columns, classify_band, cronbach_alpha, factor_mean_columns, factor_means, item_stats, pooled_mean,
    quality_score, QualityBand, StatsError,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FactorCode {
    /// Influence/Impact
    I,
    /// In-game Safety Precautions
    SP,
    /// Competence
    C,
    /// Autonomy
    A,
    /// Style Elements
    SE,
    /// Rewards
    RW,
    /// Reduced Cognitive Load
    RCL,
    /// Focused Attention
    FA,
    /// Satisfaction
    S,
    /// Relevance
    R,
    /// Fun
    F,
    /// Challenge
    Ch,
    /// Learnability
    L,
    /// Operability
    O,
    /// Aesthetics
    As,
    /// Accessibility
    Acc,
}

impl FactorCode {
    pub const ALL: [FactorCode; 16] = [
        FactorCode::I,
        FactorCode::SP,
        FactorCode::C,
        FactorCode::A,
        FactorCode::SE,
        FactorCode::RW,
        FactorCode::RCL,
        FactorCode::FA,
        FactorCode::S,
        FactorCode::R,
        FactorCode::F,
        FactorCode::Ch,
        FactorCode::L,
        FactorCode::O,
        FactorCode::As,
        FactorCode::Acc,
    ];

    pub const PLAYER_EXPERIENCE: [FactorCode; 5] =
        [FactorCode::FA, FactorCode::F, FactorCode::Ch, FactorCode::S, FactorCode::R];
    pub const USABILITY: [FactorCode; 4] = [FactorCode::L, FactorCode::O, FactorCode::As, FactorCode::Acc];
    pub const MOTIVATION: [FactorCode; 4] = [FactorCode::C, FactorCode::A, FactorCode::SE, FactorCode::RW];
    pub const IMPACT_AND_OTHER: [FactorCode; 3] = [FactorCode::I, FactorCode::SP, FactorCode::RCL];

    pub fn as_str(self) -> &'static str {
        match self {
            FactorCode::I => "I",
            FactorCode::SP => "SP",
            FactorCode::C => "C",
            FactorCode::A => "A",
            FactorCode::SE => "SE",
            FactorCode::RW => "RW",
            FactorCode::RCL => "RCL",
            FactorCode::FA => "FA",
            FactorCode::S => "S",
            FactorCode::R => "R",
            FactorCode::F => "F",
            FactorCode::Ch => "Ch",
            FactorCode::L => "L",
            FactorCode::O => "O",
            FactorCode::As => "As",
            FactorCode::Acc => "Acc",
        }
    }

    pub fn is_player_experience(self) -> bool {
        Self::PLAYER_EXPERIENCE.contains(&self)
    }

    pub fn is_usability(self) -> bool {
        Self::USABILITY.contains(&self)
    }
}

impl fmt::Display for FactorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FactorCode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FactorCode::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown factor code {s:?}"))
    }
}
