use serde::Deserialize;
use thiserror::Error;

use super::FactorCode;

/// Table of questionnaire items with their published mean and SD.
pub const BUNDLED_CATALOG: &str = include_str!("../../data/questionnaire.csv");

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyItem {
    pub id: String,
    /// One or two codes; dual-coded items count toward both factors.
    pub factors: Vec<FactorCode>,
    pub text: String,
    pub published_mean: Option<f64>,
    pub published_sd: Option<f64>,
}

impl SurveyItem {
    pub fn has_any(&self, codes: &[FactorCode]) -> bool {
        self.factors.iter().any(|f| codes.contains(f))
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("catalog item {id}: {message}")]
    Item { id: String, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub items: Vec<SurveyItem>,
}

#[derive(Deserialize)]
struct CatalogRow {
    item_id: String,
    factors: String,
    question: String,
    published_mean: Option<f64>,
    published_sd: Option<f64>,
}

impl Catalog {
    /// Reads `item_id,factors,question[,published_mean,published_sd]` CSV;
    /// `factors` is one code or several joined by `/`.
    pub fn from_csv(text: &str) -> Result<Self, CatalogError> {
        let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(text.as_bytes());
        let mut items = Vec::new();
        for row in reader.deserialize::<CatalogRow>() {
            let row = row?;
            let factors = row
                .factors
                .split('/')
                .map(|c| c.trim().parse::<FactorCode>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|message| CatalogError::Item { id: row.item_id.clone(), message })?;
            if factors.is_empty() {
                return Err(CatalogError::Item { id: row.item_id, message: "no factor codes".into() });
            }
            if items.iter().any(|i: &SurveyItem| i.id == row.item_id) {
                return Err(CatalogError::Item { id: row.item_id, message: "duplicate id".into() });
            }
            items.push(SurveyItem {
                id: row.item_id,
                factors,
                text: row.question,
                published_mean: row.published_mean,
                published_sd: row.published_sd,
            });
        }
        Ok(Self { items })
    }

    pub fn get(&self, id: &str) -> Option<&SurveyItem> {
        self.items.iter().find(|i| i.id == id)
    }

    pub fn ids_with_any(&self, codes: &[FactorCode]) -> Vec<String> {
        self.items.iter().filter(|i| i.has_any(codes)).map(|i| i.id.clone()).collect()
    }
}

pub fn bundled_catalog() -> Catalog {
    Catalog::from_csv(BUNDLED_CATALOG).expect("bundled catalog is valid")
}
