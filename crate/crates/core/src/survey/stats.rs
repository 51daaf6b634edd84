use std::collections::BTreeMap;

use thiserror::Error;

use super::{Catalog, FactorCode, ResponseMatrix, SurveyItem};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("unknown item {0}")]
    UnknownItem(String),
    #[error("factor {0} has no items")]
    EmptyFactor(FactorCode),
    #[error("alpha needs at least two items")]
    SingleItem,
    #[error("alpha needs at least two respondents")]
    TooFewRespondents,
    #[error("total-score variance is zero")]
    ZeroTotalVariance,
    #[error("item set is empty")]
    EmptyItemSet,
    #[error("multiplier must be positive, got {0}")]
    BadMultiplier(f64),
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance (divisor n).
fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Mean and population standard deviation of one item's answers.
pub fn item_stats(m: &ResponseMatrix, item: &str) -> Result<(f64, f64), StatsError> {
    let j = m.item_index(item).ok_or_else(|| StatsError::UnknownItem(item.to_string()))?;
    let col = m.column(j);
    Ok((mean(&col), variance(&col).sqrt()))
}

/// Mean of item means per requested factor; dual-coded items feed both of
/// their factors.
pub fn factor_means(
    item_means: &[(&SurveyItem, f64)],
    factors: &[FactorCode],
) -> Result<BTreeMap<FactorCode, f64>, StatsError> {
    factors
        .iter()
        .map(|&f| {
            let xs: Vec<f64> = item_means.iter().filter(|(i, _)| i.factors.contains(&f)).map(|&(_, m)| m).collect();
            if xs.is_empty() {
                Err(StatsError::EmptyFactor(f))
            } else {
                Ok((f, mean(&xs)))
            }
        })
        .collect()
}

/// Mean over every item that carries at least one of `factors`, each item
/// counted once.
pub fn pooled_mean(item_means: &[(&SurveyItem, f64)], factors: &[FactorCode]) -> Result<f64, StatsError> {
    let xs: Vec<f64> = item_means.iter().filter(|(i, _)| i.has_any(factors)).map(|&(_, m)| m).collect();
    match factors.first() {
        _ if !xs.is_empty() => Ok(mean(&xs)),
        Some(&f) => Err(StatsError::EmptyFactor(f)),
        None => Err(StatsError::EmptyItemSet),
    }
}

/// Cronbach's alpha over equally long columns (one per item):
/// `k/(k-1) * (1 - sum(var_i) / var_total)` with population variances.
///
/// Variances are carried as `n * sum(x^2) - sum(x)^2` (that is `n^2 * var`),
/// which is exact for integer answers, and the ratio is folded into a single
/// division so parallel items give exactly 1.
pub fn alpha_of_columns(columns: &[Vec<f64>]) -> Result<f64, StatsError> {
    let k = columns.len();
    if k < 2 {
        return Err(StatsError::SingleItem);
    }
    let n = columns[0].len();
    if n < 2 {
        return Err(StatsError::TooFewRespondents);
    }
    assert!(columns.iter().all(|c| c.len() == n), "alpha columns must have equal length");
    let scaled_var = |xs: &[f64]| {
        let s: f64 = xs.iter().sum();
        let sq: f64 = xs.iter().map(|x| x * x).sum();
        (n as f64 * sq - s * s).max(0.0)
    };
    let item_var: f64 = columns.iter().map(|c| scaled_var(c)).sum();
    let totals: Vec<f64> = (0..n).map(|r| columns.iter().map(|c| c[r]).sum()).collect();
    let total_var = scaled_var(&totals);
    if total_var <= f64::EPSILON * item_var.max(1.0) {
        return Err(StatsError::ZeroTotalVariance);
    }
    let k = k as f64;
    Ok(k * (total_var - item_var) / ((k - 1.0) * total_var))
}

pub fn cronbach_alpha(m: &ResponseMatrix) -> Result<f64, StatsError> {
    alpha_of_columns(&m.columns())
}

/// Per-respondent factor means, one column per factor that has items in `m`.
/// Factors without any item in the matrix are skipped.
pub fn factor_mean_columns(m: &ResponseMatrix, catalog: &Catalog, factors: &[FactorCode]) -> Result<Vec<Vec<f64>>, StatsError> {
    let mut out = Vec::new();
    for &f in factors {
        let mut idx = Vec::new();
        for (j, id) in m.items().iter().enumerate() {
            let item = catalog.get(id).ok_or_else(|| StatsError::UnknownItem(id.clone()))?;
            if item.factors.contains(&f) {
                idx.push(j);
            }
        }
        if idx.is_empty() {
            continue;
        }
        out.push(
            m.rows()
                .iter()
                .map(|row| idx.iter().map(|&j| f64::from(row[j])).sum::<f64>() / idx.len() as f64)
                .collect(),
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QualityBand {
    Below,
    Better,
    Excellent,
}

impl QualityBand {
    pub fn label(self) -> &'static str {
        match self {
            QualityBand::Below => "below",
            QualityBand::Better => "better",
            QualityBand::Excellent => "excellent",
        }
    }
}

/// `> 65` excellent, `[42.5, 65]` better, otherwise below.
pub fn classify_band(score: f64) -> QualityBand {
    if score > 65.0 {
        QualityBand::Excellent
    } else if score >= 42.5 {
        QualityBand::Better
    } else {
        QualityBand::Below
    }
}

/// Alpha over the union of the two item sets, times `multiplier`.
pub fn quality_score(
    m: &ResponseMatrix,
    px_items: &[String],
    usability_items: &[String],
    multiplier: f64,
) -> Result<(f64, QualityBand), StatsError> {
    if px_items.is_empty() || usability_items.is_empty() {
        return Err(StatsError::EmptyItemSet);
    }
    if !(multiplier > 0.0 && multiplier.is_finite()) {
        return Err(StatsError::BadMultiplier(multiplier));
    }
    let mut cols = Vec::new();
    let mut used: Vec<&String> = Vec::new();
    for id in px_items.iter().chain(usability_items) {
        if used.contains(&id) {
            continue;
        }
        used.push(id);
        let j = m.item_index(id).ok_or_else(|| StatsError::UnknownItem(id.clone()))?;
        cols.push(m.column(j));
    }
    let score = alpha_of_columns(&cols)? * multiplier;
    Ok((score, classify_band(score)))
}
