use std::fmt::Write as _;

use super::stats::{alpha_of_columns, factor_mean_columns, factor_means, item_stats, quality_score};
use super::{Catalog, FactorCode, QualityBand, ResponseMatrix, StatsError};

/// Which columns the quality-score alpha is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grouping {
    /// Raw item columns of every experience and usability item.
    Items,
    /// One column per experience/usability factor holding each respondent's
    /// mean over that factor's items.
    FactorMeans,
}

impl Grouping {
    pub fn as_str(self) -> &'static str {
        match self {
            Grouping::Items => "items",
            Grouping::FactorMeans => "factor-means",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyReport {
    pub respondents: usize,
    /// (item id, mean, population SD) in matrix column order.
    pub items: Vec<(String, f64, f64)>,
    pub factors: Vec<(FactorCode, f64)>,
    pub grouping: Grouping,
    pub alpha: f64,
    pub multiplier: f64,
    pub score: f64,
    pub band: QualityBand,
}

/// Full scoring pipeline over a response matrix whose items are all in `catalog`.
pub fn score_survey(
    m: &ResponseMatrix,
    catalog: &Catalog,
    multiplier: f64,
    grouping: Grouping,
) -> Result<SurveyReport, StatsError> {
    let mut scored = Vec::new();
    let mut items = Vec::new();
    for id in m.items() {
        let item = catalog.get(id).ok_or_else(|| StatsError::UnknownItem(id.clone()))?;
        let (mean, sd) = item_stats(m, id)?;
        scored.push((item, mean));
        items.push((id.clone(), mean, sd));
    }
    let present: Vec<FactorCode> =
        FactorCode::ALL.into_iter().filter(|f| scored.iter().any(|(i, _)| i.factors.contains(f))).collect();
    let factors = factor_means(&scored, &present)?.into_iter().collect();

    let in_matrix = |codes: &[FactorCode]| -> Vec<String> {
        scored.iter().filter(|(i, _)| i.has_any(codes)).map(|(i, _)| i.id.clone()).collect()
    };
    let px = in_matrix(&FactorCode::PLAYER_EXPERIENCE);
    let us = in_matrix(&FactorCode::USABILITY);
    let (score, band) = match grouping {
        Grouping::Items => quality_score(m, &px, &us, multiplier)?,
        Grouping::FactorMeans => {
            if px.is_empty() || us.is_empty() {
                return Err(StatsError::EmptyItemSet);
            }
            if !(multiplier > 0.0 && multiplier.is_finite()) {
                return Err(StatsError::BadMultiplier(multiplier));
            }
            let codes: Vec<FactorCode> =
                FactorCode::PLAYER_EXPERIENCE.into_iter().chain(FactorCode::USABILITY).collect();
            let score = alpha_of_columns(&factor_mean_columns(m, catalog, &codes)?)? * multiplier;
            (score, super::classify_band(score))
        }
    };
    Ok(SurveyReport {
        respondents: m.respondents().len(),
        items,
        factors,
        grouping,
        alpha: score / multiplier,
        multiplier,
        score,
        band,
    })
}

impl SurveyReport {
    /// `section,key,mean,sd` rows: one per item, one per factor, then the
    /// alpha, score and band lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("section,key,mean,sd\n");
        for (id, mean, sd) in &self.items {
            let _ = writeln!(out, "item,{id},{mean:.4},{sd:.4}");
        }
        for (f, mean) in &self.factors {
            let _ = writeln!(out, "factor,{f},{mean:.4},");
        }
        let _ = writeln!(out, "alpha,{},{:.6},", self.grouping.as_str(), self.alpha);
        let _ = writeln!(out, "quality_score,x{},{:.4},", self.multiplier, self.score);
        let _ = writeln!(out, "band,{},,", self.band.label());
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "respondents: {}", self.respondents);
        let _ = writeln!(out, "{:<10} {:>6} {:>6}", "item", "mean", "sd");
        for (id, mean, sd) in &self.items {
            let _ = writeln!(out, "{id:<10} {mean:>6.2} {sd:>6.2}");
        }
        let _ = writeln!(out, "\n{:<10} {:>6}", "factor", "mean");
        for (f, mean) in &self.factors {
            let _ = writeln!(out, "{:<10} {mean:>6.2}", f.as_str());
        }
        let _ = writeln!(out, "\ncronbach alpha ({}): {:.4}", self.grouping.as_str(), self.alpha);
        let _ = writeln!(out, "quality score (x{}): {:.1}", self.multiplier, self.score);
        let _ = writeln!(out, "quality band: {}", self.band.label());
        out
    }
}
