//! JSON file formats for matrices, group words and automorphism descriptors.
//!
//! ```text
//! matrix:     {"field": "GF(5)", "period": 2, "block": [["GF(5):1", "GF(5):1"], ...]}
//! word:       {"field": ..., "period": q, "factors": [{"t": [i, j, "<elem>"]} | {"d": [pos, "<elem>"]}]}
//! descriptor: {"psi": bool, "frob": int, "inner": <matrix object> | null}
//! ```
//!
//! Element literals may be written in full (`GF(5):3`) or as a bare payload
//! (`3`). Matrices are canonicalized on load; emitted files are canonical.

use locmat_core::{
    AutoError, AutomorphismDescriptor, Field, FieldElement, FieldError, GroupError, GroupWord,
    MatrixError, PeriodicMatrix, Token, Value,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Auto(#[from] AutoError),
    #[error("block has {rows} rows but period is {period}")]
    PeriodMismatch { rows: usize, period: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub field: String,
    pub period: usize,
    pub block: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FactorFile {
    Transvection {
        t: (usize, usize, String),
        #[serde(default, skip_serializing_if = "Option::is_none")]
        period: Option<usize>,
    },
    Diagonal {
        d: (usize, String),
        #[serde(default, skip_serializing_if = "Option::is_none")]
        period: Option<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordFile {
    pub field: String,
    pub period: usize,
    pub factors: Vec<FactorFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorFile {
    pub psi: bool,
    pub frob: u64,
    pub inner: Option<MatrixFile>,
}

fn literal(field: &Field, v: &Value) -> String {
    field.element(v.clone()).to_string()
}

impl MatrixFile {
    pub fn from_matrix(a: &PeriodicMatrix) -> Self {
        let f = a.field();
        MatrixFile {
            field: f.to_string(),
            period: a.period(),
            block: a
                .block()
                .rows()
                .map(|r| r.iter().map(|v| literal(f, v)).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<PeriodicMatrix, FormatError> {
        let field = Field::parse(&self.field)?;
        if self.block.len() != self.period {
            return Err(FormatError::PeriodMismatch {
                rows: self.block.len(),
                period: self.period,
            });
        }
        let rows = self
            .block
            .iter()
            .map(|r| r.iter().map(|e| field.parse_element(e)).collect())
            .collect::<Result<Vec<Vec<Value>>, _>>()?;
        Ok(PeriodicMatrix::make(&field, self.period, rows)?)
    }
}

impl WordFile {
    pub fn from_word(w: &GroupWord) -> Self {
        let f = w.field();
        let q = w.period();
        let period = |p: usize| (p != q).then_some(p);
        WordFile {
            field: f.to_string(),
            period: q,
            factors: w
                .factors()
                .iter()
                .map(|tok| match tok {
                    Token::Transvection { i, j, a, period: p } => FactorFile::Transvection {
                        t: (*i, *j, literal(f, a)),
                        period: period(*p),
                    },
                    Token::DiagUnit { pos, alpha, period: p } => FactorFile::Diagonal {
                        d: (*pos, literal(f, alpha)),
                        period: period(*p),
                    },
                })
                .collect(),
        }
    }

    pub fn to_word(&self) -> Result<GroupWord, FormatError> {
        let field = Field::parse(&self.field)?;
        let q = self.period;
        let factors = self
            .factors
            .iter()
            .map(|fac| {
                Ok(match fac {
                    FactorFile::Transvection { t: (i, j, a), period } => Token::Transvection {
                        i: *i,
                        j: *j,
                        a: field.parse_element(a)?,
                        period: period.unwrap_or(q),
                    },
                    FactorFile::Diagonal { d: (pos, alpha), period } => Token::DiagUnit {
                        pos: *pos,
                        alpha: field.parse_element(alpha)?,
                        period: period.unwrap_or(q),
                    },
                })
            })
            .collect::<Result<Vec<_>, FieldError>>()?;
        Ok(GroupWord::new(&field, q, factors)?)
    }
}

impl DescriptorFile {
    pub fn from_descriptor(d: &AutomorphismDescriptor) -> Self {
        DescriptorFile {
            psi: d.has_psi(),
            frob: d.frob(),
            inner: d.conjugator().map(MatrixFile::from_matrix),
        }
    }

    pub fn to_descriptor(&self) -> Result<AutomorphismDescriptor, FormatError> {
        let inner = self.inner.as_ref().map(MatrixFile::to_matrix).transpose()?;
        Ok(AutomorphismDescriptor::new(self.psi, self.frob, inner)?)
    }
}

pub fn matrix_to_json(a: &PeriodicMatrix) -> String {
    serde_json::to_string_pretty(&MatrixFile::from_matrix(a)).expect("serializable")
}

pub fn matrix_from_json(text: &str) -> Result<PeriodicMatrix, FormatError> {
    serde_json::from_str::<MatrixFile>(text)?.to_matrix()
}

pub fn word_to_json(w: &GroupWord) -> String {
    serde_json::to_string_pretty(&WordFile::from_word(w)).expect("serializable")
}

pub fn word_from_json(text: &str) -> Result<GroupWord, FormatError> {
    serde_json::from_str::<WordFile>(text)?.to_word()
}

pub fn descriptor_to_json(d: &AutomorphismDescriptor) -> String {
    serde_json::to_string_pretty(&DescriptorFile::from_descriptor(d)).expect("serializable")
}

pub fn descriptor_from_json(text: &str) -> Result<AutomorphismDescriptor, FormatError> {
    serde_json::from_str::<DescriptorFile>(text)?.to_descriptor()
}

/// Parses a full element literal such as `GF(5):2`.
pub fn element_from_literal(text: &str) -> Result<FieldElement, FormatError> {
    Ok(FieldElement::parse(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_file_is_canonicalized_on_load() {
        let text = r#"{"field": "GF(5)", "period": 2,
                       "block": [["GF(5):3", "0"], ["0", "3"]]}"#;
        let a = matrix_from_json(text).unwrap();
        assert_eq!(a.period(), 1);
        let emitted: MatrixFile = serde_json::from_str(&matrix_to_json(&a)).unwrap();
        assert_eq!(
            emitted,
            MatrixFile {
                field: "GF(5)".into(),
                period: 1,
                block: vec![vec!["GF(5):3".into()]],
            }
        );
    }

    #[test]
    fn matrix_file_errors() {
        assert!(matches!(matrix_from_json("{"), Err(FormatError::Json(_))));
        let wrong_field = r#"{"field": "GF(5)", "period": 1, "block": [["GF(7):3"]]}"#;
        assert!(matches!(
            matrix_from_json(wrong_field),
            Err(FormatError::Field(FieldError::MixedFields(..)))
        ));
        let ragged = r#"{"field": "Q", "period": 2, "block": [["1", "2"], ["3"]]}"#;
        assert!(matches!(matrix_from_json(ragged), Err(FormatError::Matrix(_))));
        let short = r#"{"field": "Q", "period": 2, "block": [["1", "2"]]}"#;
        assert!(matches!(
            matrix_from_json(short),
            Err(FormatError::PeriodMismatch { rows: 1, period: 2 })
        ));
        let extra = r#"{"field": "Q", "period": 1, "block": [["1"]], "x": 1}"#;
        assert!(matrix_from_json(extra).is_err());
    }

    #[test]
    fn word_file_shapes() {
        let text = r#"{"field": "GF(7)", "period": 4,
                       "factors": [{"t": [1, 2, "GF(7):3"]}, {"d": [1, "2"]},
                                   {"t": [1, 2, "1"], "period": 2}]}"#;
        let w = word_from_json(text).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.factors()[2].period(), 2);
        let back: serde_json::Value = serde_json::from_str(&word_to_json(&w)).unwrap();
        assert_eq!(back["factors"][0], serde_json::json!({"t": [1, 2, "GF(7):3"]}));
        assert_eq!(back["factors"][1], serde_json::json!({"d": [1, "GF(7):2"]}));
        assert_eq!(back["factors"][2]["period"], 2);
        assert_eq!(word_from_json(&word_to_json(&w)).unwrap(), w);
        let bad = r#"{"field": "GF(7)", "period": 2, "factors": [{"t": [1, 1, "1"]}]}"#;
        assert!(matches!(word_from_json(bad), Err(FormatError::Group(_))));
    }

    #[test]
    fn descriptor_file() {
        let text = r#"{"psi": true, "frob": 1, "inner": null}"#;
        let d = descriptor_from_json(text).unwrap();
        assert!(d.has_psi());
        assert_eq!(d.frob(), 1);
        assert_eq!(descriptor_from_json(&descriptor_to_json(&d)).unwrap(), d);
        let with_inner = r#"{"psi": false, "frob": 3, "inner":
            {"field": "GF(5,2)", "period": 2, "block": [["[1]", "[0,1]"], ["[0]", "[1]"]]}}"#;
        let d = descriptor_from_json(with_inner).unwrap();
        assert_eq!(d.frob(), 1);
        assert_eq!(d.conjugator().unwrap().period(), 2);
        assert_eq!(descriptor_from_json(&descriptor_to_json(&d)).unwrap(), d);
        let singular = r#"{"psi": false, "frob": 0, "inner":
            {"field": "GF(5)", "period": 2, "block": [["1", "1"], ["1", "1"]]}}"#;
        assert!(matches!(descriptor_from_json(singular), Err(FormatError::Auto(_))));
    }
}
