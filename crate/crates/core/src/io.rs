//! JSON matrix-set files.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "matrices": [
//!     { "name": "a", "entries": [[0, 1], [1, 0]] },
//!     { "name": "mu", "entries": [["-inf", 1], [-1, "-inf"]] }
//!   ],
//!   "atom_weights": [1, 2],
//!   "config": { "tol": 1e-9, "cap": 5000, "dedup_tol": 1e-9 }
//! }
//! ```
//!
//! `"-inf"` is the only accepted string entry and is only meaningful for
//! max-plus weights.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext_real::ExtendedWeightMatrix;
use crate::matrix::NonnegMatrix;
use crate::semigroup::CompositionRule;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(f64),
    Symbol(String),
}

impl Entry {
    fn value(&self) -> Result<f64> {
        match self {
            Entry::Number(v) => Ok(*v),
            Entry::Symbol(s) if s == "-inf" => Ok(f64::NEG_INFINITY),
            Entry::Symbol(s) => Err(Error::InvalidInput(format!(
                "unrecognized entry {s:?}; only \"-inf\" is allowed as a string"
            ))),
        }
    }

    fn from_f64(v: f64) -> Self {
        if v == f64::NEG_INFINITY {
            Entry::Symbol("-inf".into())
        } else {
            Entry::Number(v)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMatrix {
    pub name: String,
    pub entries: Vec<Vec<Entry>>,
}

impl NamedMatrix {
    pub fn from_nonneg(name: impl Into<String>, m: &NonnegMatrix) -> Self {
        Self::from_rows(name, &m.rows())
    }

    pub fn from_extended(name: impl Into<String>, m: &ExtendedWeightMatrix) -> Self {
        let rows: Vec<Vec<f64>> = m
            .rows()
            .iter()
            .map(|r| r.iter().map(|e| e.value()).collect())
            .collect();
        Self::from_rows(name, &rows)
    }

    pub fn from_rows(name: impl Into<String>, rows: &[Vec<f64>]) -> Self {
        Self {
            name: name.into(),
            entries: rows
                .iter()
                .map(|r| r.iter().map(|&v| Entry::from_f64(v)).collect())
                .collect(),
        }
    }

    fn raw_rows(&self) -> Result<Vec<Vec<f64>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(Entry::value).collect())
            .collect::<Result<_>>()
            .map_err(|e| self.context(e))
    }

    fn context(&self, e: Error) -> Error {
        Error::InvalidInput(format!("matrix {:?}: {e}", self.name))
    }

    /// Max-plus weights; `"-inf"` marks a missing edge.
    pub fn extended(&self) -> Result<ExtendedWeightMatrix> {
        ExtendedWeightMatrix::from_rows(&self.raw_rows()?).map_err(|e| self.context(e))
    }

    pub fn nonneg(&self) -> Result<NonnegMatrix> {
        NonnegMatrix::from_rows(&self.raw_rows()?).map_err(|e| self.context(e))
    }

    /// Arbitrary finite real matrix.
    pub fn dense(&self) -> Result<DMatrix<f64>> {
        let rows = self.raw_rows()?;
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if let Some(j) = r.iter().position(|v| !v.is_finite()) {
                return Err(self.context(Error::InvalidEntry {
                    row: i,
                    col: j,
                    value: r[j],
                }));
            }
        }
        Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dedup_tol: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSetFile {
    pub dim: usize,
    pub matrices: Vec<NamedMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atom_weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<FileConfig>,
}

impl MatrixSetFile {
    pub fn new(dim: usize, matrices: Vec<NamedMatrix>) -> Result<Self> {
        let file = Self {
            dim,
            matrices,
            atom_weights: None,
            config: None,
        };
        file.validate()?;
        Ok(file)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("malformed JSON: {e}")))?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("matrix set serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidInput("dim must be at least 1".into()));
        }
        let mut names = BTreeSet::new();
        for m in &self.matrices {
            if !names.insert(m.name.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate matrix name {:?}",
                    m.name
                )));
            }
            if m.entries.len() != self.dim || m.entries.iter().any(|r| r.len() != self.dim) {
                return Err(Error::InvalidInput(format!(
                    "matrix {:?} is not {d}x{d}",
                    m.name,
                    d = self.dim
                )));
            }
            m.raw_rows()?;
        }
        if let Some(w) = &self.atom_weights {
            if w.len() != self.dim {
                return Err(Error::InvalidInput(format!(
                    "atom_weights has {} entries, expected {}",
                    w.len(),
                    self.dim
                )));
            }
            if let Some(v) = w.iter().find(|v| !(v.is_finite() && **v >= 1.0)) {
                return Err(Error::InvalidInput(format!(
                    "atom weight {v} is not a real >= 1"
                )));
            }
        }
        if let Some(c) = &self.config {
            for (key, v) in [("tol", c.tol), ("dedup_tol", c.dedup_tol)] {
                if let Some(v) = v {
                    if !(v.is_finite() && v >= 0.0) {
                        return Err(Error::InvalidInput(format!(
                            "config.{key} = {v} is not a nonnegative real"
                        )));
                    }
                }
            }
            if c.cap == Some(0) {
                return Err(Error::InvalidInput("config.cap must be at least 1".into()));
            }
        }
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.matrices.iter().map(|m| m.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&NamedMatrix> {
        self.matrices.iter().find(|m| m.name == name)
    }

    pub fn nonneg_all(&self) -> Result<Vec<NonnegMatrix>> {
        self.matrices.iter().map(NamedMatrix::nonneg).collect()
    }

    pub fn dense_all(&self) -> Result<Vec<DMatrix<f64>>> {
        self.matrices.iter().map(NamedMatrix::dense).collect()
    }

    pub fn rule(&self) -> Result<CompositionRule> {
        match &self.atom_weights {
            Some(w) => CompositionRule::atom_weighted(w.clone()),
            None => Ok(CompositionRule::Standard),
        }
    }

    pub fn config(&self) -> FileConfig {
        self.config.clone().unwrap_or_default()
    }
}
