//! All-pairs supremal walk weights over the max-plus semiring.
//!
//! `W(x, y)` is the supremum of summed edge weights over walks `x → y` with at
//! least one edge. It is the Kleene plus `A ⊕ A² ⊕ …` of the weight matrix,
//! computed here by a Floyd–Warshall sweep. Walks that can pass through a
//! strictly positive cycle have unbounded weight; those pairs are reported
//! instead of being given a value.

use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, ExtendedWeightMatrix};

/// Closed walks with total weight at or below this are treated as weight zero.
pub const POSITIVE_CYCLE_THRESHOLD: f64 = 1e-12;

/// Result of [`walk_supremum`].
#[derive(Clone, Debug, PartialEq)]
pub struct WalkClosure {
    n: usize,
    raw: Vec<f64>,
    divergent: Vec<bool>,
    divergent_pairs: Vec<(usize, usize)>,
}

impl WalkClosure {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `W(x, y)`, or `None` when the supremum is `+∞`.
    pub fn weight(&self, x: usize, y: usize) -> Option<ExtReal> {
        let k = x * self.n + y;
        if self.divergent[k] {
            None
        } else {
            Some(ExtReal::new(self.raw[k]).expect("bounded closure entries are never NaN or +inf"))
        }
    }

    pub fn is_divergent(&self, x: usize, y: usize) -> bool {
        self.divergent[x * self.n + y]
    }

    /// Pairs with unbounded supremum, 0-based, in row-major order.
    pub fn divergent_pairs(&self) -> &[(usize, usize)] {
        &self.divergent_pairs
    }

    pub fn has_divergence(&self) -> bool {
        !self.divergent_pairs.is_empty()
    }

    /// Vertices lying on a strictly positive closed walk.
    pub fn positive_cycle_vertices(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| {
                self.divergent[v * self.n + v]
                    && self.raw[v * self.n + v] > POSITIVE_CYCLE_THRESHOLD
            })
            .collect()
    }

    /// Entries as a weight matrix. Fails with [`Error::Divergent`] if any pair is unbounded.
    pub fn to_matrix(&self) -> Result<ExtendedWeightMatrix> {
        self.ensure_bounded()?;
        let entries = self
            .raw
            .iter()
            .map(|&v| ExtReal::new(v))
            .collect::<Result<Vec<_>>>()?;
        ExtendedWeightMatrix::new(self.n, entries)
    }

    fn ensure_bounded(&self) -> Result<()> {
        if self.has_divergence() {
            Err(Error::Divergent {
                pairs: self.divergent_pairs.clone(),
            })
        } else {
            Ok(())
        }
    }
}

/// Supremal walk weights of `mu`.
///
/// The diagonal is not seeded with zero: `W(x, x)` is the best closed walk at
/// `x`, or `−∞` when `x` lies on no cycle.
pub fn walk_supremum(mu: &ExtendedWeightMatrix) -> WalkClosure {
    let n = mu.n();
    let mut a: Vec<f64> = mu.entries().iter().map(|e| e.value()).collect();

    for k in 0..n {
        for i in 0..n {
            let aik = a[i * n + k];
            if aik == f64::NEG_INFINITY {
                continue;
            }
            for j in 0..n {
                let akj = a[k * n + j];
                if akj == f64::NEG_INFINITY {
                    continue;
                }
                // +inf can appear once positive cycles compound; those
                // entries end up divergent below.
                let via = aik + akj;
                if via > a[i * n + j] {
                    a[i * n + j] = via;
                }
            }
        }
    }

    let positive: Vec<usize> = (0..n)
        .filter(|&v| a[v * n + v] > POSITIVE_CYCLE_THRESHOLD)
        .collect();
    // reflexive reachability: walks of zero or more edges
    let reach = |x: usize, y: usize| x == y || a[x * n + y] != f64::NEG_INFINITY;

    let mut divergent = vec![false; n * n];
    let mut divergent_pairs = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if positive.iter().any(|&v| reach(x, v) && reach(v, y)) {
                divergent[x * n + y] = true;
                divergent_pairs.push((x, y));
            }
        }
    }

    WalkClosure {
        n,
        raw: a,
        divergent,
        divergent_pairs,
    }
}

/// Passes `w` through when every supremum is finite or `−∞`.
pub fn assert_no_divergence(w: WalkClosure) -> Result<WalkClosure> {
    w.ensure_bounded()?;
    Ok(w)
}
