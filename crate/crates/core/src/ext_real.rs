//! Extended reals `ℝ ∪ {−∞}` and square edge-weight matrices over them.
//!
//! `−∞` is the bottom element: it absorbs addition and is the identity for
//! `max`. These are the `⊗` and `⊕` of the max-plus semiring.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A real number or `−∞`. Never NaN, never `+∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtReal(f64);

impl ExtReal {
    pub const NEG_INF: ExtReal = ExtReal(f64::NEG_INFINITY);
    pub const ZERO: ExtReal = ExtReal(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            Err(Error::NotANumber)
        } else if value == f64::INFINITY {
            Err(Error::PositiveInfinity)
        } else {
            Ok(ExtReal(value))
        }
    }

    /// Natural logarithm of a nonnegative real, with `log 0 = −∞`.
    pub fn ln_of(value: f64) -> Result<Self> {
        if value.is_nan() {
            return Err(Error::NotANumber);
        }
        if value < 0.0 || value == f64::INFINITY {
            return Err(Error::InvalidInput(format!(
                "logarithm needs a finite nonnegative value, got {value}"
            )));
        }
        Ok(ExtReal(value.ln()))
    }

    pub fn is_neg_inf(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Raw value; `f64::NEG_INFINITY` for the bottom element.
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn finite(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    /// Max-plus product: ordinary addition with `−∞` absorbing.
    pub fn otimes(self, other: ExtReal) -> ExtReal {
        if self.is_neg_inf() || other.is_neg_inf() {
            ExtReal::NEG_INF
        } else {
            ExtReal(self.0 + other.0)
        }
    }

    /// Max-plus sum.
    pub fn oplus(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// `exp`, mapping `−∞` to `0`.
    pub fn exp(self) -> f64 {
        self.0.exp()
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl TryFrom<f64> for ExtReal {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        ExtReal::new(value)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_neg_inf() {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Edge weights `μ(x, y)` of a digraph on `n` vertices; `−∞` marks a missing edge.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedWeightMatrix {
    n: usize,
    entries: Vec<ExtReal>,
}

impl ExtendedWeightMatrix {
    /// Row-major constructor.
    pub fn new(n: usize, entries: Vec<ExtReal>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "matrix dimension must be at least 1".into(),
            ));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(Self { n, entries })
    }

    /// Builds from rows of raw floats; `f64::NEG_INFINITY` is a missing edge.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for &v in row {
                entries.push(ExtReal::new(v)?);
            }
        }
        Self::new(n, entries)
    }

    /// Every entry `−∞`: the digraph with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, vec![ExtReal::NEG_INF; n * n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: usize, y: usize) -> ExtReal {
        self.entries[x * self.n + y]
    }

    pub fn entries(&self) -> &[ExtReal] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<ExtReal>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map(&self, mut op: impl FnMut(ExtReal) -> ExtReal) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|&e| op(e)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bottom_absorbs_and_is_max_identity() {
        let a = ExtReal::new(2.5).unwrap();
        assert_eq!(ExtReal::NEG_INF.otimes(a), ExtReal::NEG_INF);
        assert_eq!(a.otimes(ExtReal::NEG_INF), ExtReal::NEG_INF);
        assert_eq!(ExtReal::NEG_INF.oplus(a), a);
        assert_eq!(a.otimes(a).value(), 5.0);
    }

    #[test]
    fn rejects_nan_and_plus_infinity() {
        assert_eq!(ExtReal::new(f64::NAN), Err(Error::NotANumber));
        assert_eq!(ExtReal::new(f64::INFINITY), Err(Error::PositiveInfinity));
        assert!(ExtReal::ln_of(-1.0).is_err());
        assert!(ExtReal::ln_of(0.0).unwrap().is_neg_inf());
    }

    #[test]
    fn ordering_puts_bottom_first() {
        let mut v = [
            ExtReal::new(1.0).unwrap(),
            ExtReal::NEG_INF,
            ExtReal::new(-7.0).unwrap(),
        ];
        v.sort();
        assert!(v[0].is_neg_inf());
        assert_eq!(v[2].value(), 1.0);
        assert_eq!(ExtReal::NEG_INF.to_string(), "-inf");
    }

    #[test]
    fn matrix_shape_checks() {
        assert!(ExtendedWeightMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0]]).is_err());
        assert!(ExtendedWeightMatrix::new(0, vec![]).is_err());
        let m =
            ExtendedWeightMatrix::from_rows(&[[f64::NEG_INFINITY, 1.0], [-1.0, f64::NEG_INFINITY]])
                .unwrap();
        assert_eq!(m.get(0, 1).value(), 1.0);
        assert!(m.get(1, 1).is_neg_inf());
    }
}
