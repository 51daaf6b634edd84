use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("survey csv: {0}")]
    Csv(String),
    #[error("survey header must start with `respondent`")]
    BadHeader,
    #[error("row {row}: expected {expected} values, found {found}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("row {row}, item {item}: {value:?} is not a Likert value 1-5")]
    OutOfRange { row: usize, item: String, value: String },
    #[error("duplicate item id {0}")]
    DuplicateItem(String),
}

/// Respondents x items grid of 1-5 Likert answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResponseMatrix {
    respondents: Vec<String>,
    items: Vec<String>,
    /// Row-major, one row per respondent.
    values: Vec<Vec<u8>>,
}

impl ResponseMatrix {
    pub fn new(respondents: Vec<String>, items: Vec<String>, values: Vec<Vec<u8>>) -> Result<Self, MatrixError> {
        for (i, id) in items.iter().enumerate() {
            if items[..i].contains(id) {
                return Err(MatrixError::DuplicateItem(id.clone()));
            }
        }
        for (r, row) in values.iter().enumerate() {
            if row.len() != items.len() {
                return Err(MatrixError::Ragged { row: r + 1, expected: items.len(), found: row.len() });
            }
            if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| !(1..=5).contains(*v)) {
                return Err(MatrixError::OutOfRange { row: r + 1, item: items[j].clone(), value: v.to_string() });
            }
        }
        if respondents.len() != values.len() {
            return Err(MatrixError::Ragged { row: 0, expected: values.len(), found: respondents.len() });
        }
        Ok(Self { respondents, items, values })
    }

    /// Builds a matrix with generated respondent and item ids (`r1..`, `i1..`).
    pub fn from_rows(values: Vec<Vec<u8>>) -> Result<Self, MatrixError> {
        let k = values.first().map_or(0, Vec::len);
        let respondents = (1..=values.len()).map(|i| format!("r{i}")).collect();
        let items = (1..=k).map(|i| format!("i{i}")).collect();
        Self::new(respondents, items, values)
    }

    /// Reads `respondent,<item_id>,...` CSV with one row per respondent.
    pub fn from_csv(text: &str) -> Result<Self, MatrixError> {
        let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| MatrixError::Csv(e.to_string()))?.clone();
        if header.get(0) != Some("respondent") {
            return Err(MatrixError::BadHeader);
        }
        let items: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut respondents = Vec::new();
        let mut values = Vec::new();
        for (r, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| MatrixError::Csv(e.to_string()))?;
            if rec.len() != items.len() + 1 {
                return Err(MatrixError::Ragged { row: r + 1, expected: items.len(), found: rec.len().saturating_sub(1) });
            }
            respondents.push(rec[0].to_string());
            let row = rec
                .iter()
                .skip(1)
                .zip(&items)
                .map(|(v, item)| match v.parse::<u8>() {
                    Ok(x) if (1..=5).contains(&x) => Ok(x),
                    _ => Err(MatrixError::OutOfRange { row: r + 1, item: item.clone(), value: v.to_string() }),
                })
                .collect::<Result<Vec<_>, _>>()?;
            values.push(row);
        }
        Self::new(respondents, items, values)
    }

    pub fn respondents(&self) -> &[String] {
        &self.respondents
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.values
    }

    pub fn item_index(&self, id: &str) -> Option<usize> {
        self.items.iter().position(|i| i == id)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.values.iter().map(|row| f64::from(row[j])).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.items.len()).map(|j| self.column(j)).collect()
    }
}
