//! Dense square matrices with finite nonnegative entries.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Square matrix with entries in `[0, ∞)`; no NaN, no infinities.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegMatrix(DMatrix<f64>);

impl NonnegMatrix {
    pub fn new(inner: DMatrix<f64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::DimensionMismatch {
                expected: inner.nrows(),
                found: inner.ncols(),
            });
        }
        if inner.nrows() == 0 {
            return Err(Error::InvalidInput(
                "matrix dimension must be at least 1".into(),
            ));
        }
        for i in 0..inner.nrows() {
            for j in 0..inner.ncols() {
                let v = inner[(i, j)];
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::InvalidEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        Ok(Self(inner))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(DMatrix::from_row_slice(n, n, &data))
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Matrix unit `E_ij` (0-based) scaled by `value`.
    pub fn unit(n: usize, i: usize, j: usize, value: f64) -> Result<Self> {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = value;
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn max_entry(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Largest entrywise absolute difference.
    pub fn max_abs_diff(&self, other: &NonnegMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(&self.0 * factor)
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_nan_and_non_square() {
        assert!(matches!(
            NonnegMatrix::from_rows(&[[0.0, -1.0], [0.0, 0.0]]),
            Err(Error::InvalidEntry { row: 0, col: 1, .. })
        ));
        assert!(NonnegMatrix::from_rows(&[[f64::NAN]]).is_err());
        assert!(NonnegMatrix::from_rows(&[[f64::INFINITY]]).is_err());
        assert!(NonnegMatrix::new(DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn unit_and_accessors() {
        let e = NonnegMatrix::unit(2, 0, 1, 3.0).unwrap();
        assert_eq!(e.rows(), vec![vec![0.0, 3.0], vec![0.0, 0.0]]);
        assert_eq!(e.max_entry(), 3.0);
        assert_eq!(e.transpose().get(1, 0), 3.0);
        assert_eq!(e.max_abs_diff(&NonnegMatrix::zeros(2)), 3.0);
    }
}
