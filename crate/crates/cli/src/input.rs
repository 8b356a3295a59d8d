//! Chain-complex documents.
//!
//! ```json
//! {"p": 2, "differentials": [{"d1": [["2"]], "d2": [[0]]}], "ranks": [1, 1]}
//! ```
//!
//! Differential `k` maps `C^k -> C^(k+1)`, rows are listed first. Entries may be JSON
//! integers or decimal strings. `ranks` is only needed when a matrix has no rows or the
//! complex has no differentials at all; `labels` names the terms in the output.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use rdiagram_core::homology::ChainComplexR;
use rdiagram_core::linalg::IntMatrix;

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Entry {
    Str(String),
    Num(serde_json::Number),
}

impl Entry {
    fn parse(&self) -> Option<BigInt> {
        match self {
            Entry::Str(s) => s.trim().parse().ok(),
            Entry::Num(n) => n.to_string().parse().ok(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DifferentialDoc {
    pub d1: Vec<Vec<Entry>>,
    pub d2: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub p: u64,
    pub differentials: Vec<DifferentialDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

pub fn parse_document(text: &str) -> Result<ComplexDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn matrix_of(
    rows: &[Vec<Entry>],
    cols: Option<usize>,
    what: &str,
) -> Result<IntMatrix, CliError> {
    let width = match (rows.first(), cols) {
        (Some(r), _) => r.len(),
        (None, Some(c)) => c,
        (None, None) => {
            return Err(CliError::Parse(format!(
                "{what} has no rows; give \"ranks\" to fix its width"
            )))
        }
    };
    let mut data = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(CliError::Parse(format!(
                "{what}: row {i} has {} entries, expected {width}",
                row.len()
            )));
        }
        let mut parsed = Vec::with_capacity(width);
        for (j, e) in row.iter().enumerate() {
            parsed.push(e.parse().ok_or_else(|| {
                CliError::Parse(format!("{what}: entry ({i}, {j}) is not an integer"))
            })?);
        }
        data.push(parsed);
    }
    Ok(IntMatrix::from_rows_with_cols(data, width).expect("rows checked"))
}

impl ComplexDocument {
    /// Builds the complex. Shape problems are parse errors; congruence and composition are
    /// left to `validate_complex`.
    pub fn to_complex(&self) -> Result<ChainComplexR, CliError> {
        if let Some(labels) = &self.labels {
            if labels.len() != self.differentials.len() + 1 && !self.differentials.is_empty() {
                return Err(CliError::Parse(format!(
                    "{} labels for {} terms",
                    labels.len(),
                    self.differentials.len() + 1
                )));
            }
        }
        let mut diffs = Vec::with_capacity(self.differentials.len());
        for (k, d) in self.differentials.iter().enumerate() {
            let cols = self.ranks.as_ref().and_then(|r| r.get(k).copied());
            let d1 = matrix_of(&d.d1, cols, &format!("differential {k} d1"))?;
            let d2 = matrix_of(&d.d2, cols, &format!("differential {k} d2"))?;
            diffs.push((d1, d2));
        }
        let ranks = match &self.ranks {
            Some(r) => r.clone(),
            None if diffs.is_empty() => {
                return Err(CliError::Parse(
                    "a complex without differentials needs \"ranks\"".into(),
                ))
            }
            None => {
                let mut r: Vec<usize> = diffs.iter().map(|(d, _)| d.cols()).collect();
                r.push(diffs.last().expect("nonempty").0.rows());
                r
            }
        };
        ChainComplexR::new(self.p, ranks, diffs).map_err(CliError::from_core)
    }

    pub fn label(&self, n: usize) -> Option<&str> {
        self.labels.as_ref().and_then(|l| l.get(n)).map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_accept_strings_and_numbers() {
        let doc = parse_document(
            r#"{"p": 2, "differentials": [{"d1": [["2", 0]], "d2": [[" -4 ", "123456789012345678901234567890"]]}]}"#,
        )
        .unwrap();
        let c = doc.to_complex().unwrap();
        assert_eq!(c.ranks(), &[2, 1]);
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(c.differentials()[0].1.row(0)[1], big);
    }

    #[test]
    fn empty_matrices_need_ranks() {
        let text = r#"{"p": 3, "differentials": [{"d1": [], "d2": []}]}"#;
        assert!(matches!(
            parse_document(text).unwrap().to_complex(),
            Err(CliError::Parse(_))
        ));
        let text = r#"{"p": 3, "differentials": [{"d1": [], "d2": []}], "ranks": [2, 0]}"#;
        let c = parse_document(text).unwrap().to_complex().unwrap();
        assert_eq!(c.ranks(), &[2, 0]);
    }

    #[test]
    fn bad_entries_are_located() {
        let text = r#"{"p": 2, "differentials": [{"d1": [["x"]], "d2": [[0]]}]}"#;
        let err = parse_document(text).unwrap().to_complex().unwrap_err();
        assert!(err.to_string().contains("entry (0, 0)"), "{err}");
        let text = r#"{"p": 2, "differentials": [{"d1": [[1.5]], "d2": [[0]]}]}"#;
        assert!(parse_document(text).unwrap().to_complex().is_err());
        assert!(matches!(parse_document("{"), Err(CliError::Parse(_))));
    }

    #[test]
    fn non_prime_is_invalid_math() {
        let text = r#"{"p": 4, "differentials": [], "ranks": [1]}"#;
        let err = parse_document(text).unwrap().to_complex().unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }
}
