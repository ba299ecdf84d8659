//! Breadth-first enumeration of finitely generated semigroups.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;

pub const DEFAULT_CAP: usize = 10_000;
pub const DEFAULT_DEDUP_TOL: f64 = 1e-9;

/// How two elements are composed.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompositionRule {
    /// `(f * g)(x, z) = Σ_y f(x, y) g(y, z)`
    Standard,
    /// `(f * g)(x, z) = Σ_y f(x, y) w(y) g(y, z)`: kernels of integral
    /// operators over atoms of measure `w(y)`.
    AtomWeighted { atom_weights: Vec<f64> },
}

impl CompositionRule {
    pub fn standard() -> Self {
        CompositionRule::Standard
    }

    /// Atom-weighted rule; every weight must be at least 1.
    pub fn atom_weighted(weights: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, &w)| !(w.is_finite() && w >= 1.0))
        {
            return Err(Error::InvalidInput(format!(
                "atom weight {} = {w} is below 1",
                i + 1
            )));
        }
        Ok(Self::atom_weighted_unchecked(weights))
    }

    /// Skips the `w ≥ 1` check. Only useful for building instances that are
    /// expected to fail the matrix-like inequality.
    pub fn atom_weighted_unchecked(weights: Vec<f64>) -> Self {
        CompositionRule::AtomWeighted {
            atom_weights: weights,
        }
    }

    pub fn compose_raw(&self, f: &DMatrix<f64>, g: &DMatrix<f64>) -> DMatrix<f64> {
        match self {
            CompositionRule::Standard => f * g,
            CompositionRule::AtomWeighted { atom_weights } => {
                let mut fw = f.clone();
                for (j, &w) in atom_weights.iter().enumerate() {
                    fw.column_mut(j).scale_mut(w);
                }
                fw * g
            }
        }
    }

    pub fn compose(&self, f: &NonnegMatrix, g: &NonnegMatrix) -> Result<NonnegMatrix> {
        NonnegMatrix::new(self.compose_raw(f.as_matrix(), g.as_matrix()))
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        match self {
            CompositionRule::AtomWeighted { atom_weights } if atom_weights.len() != n => {
                Err(Error::DimensionMismatch {
                    expected: n,
                    found: atom_weights.len(),
                })
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum ClosureStatus {
    /// A fixpoint was reached: every product is (within tolerance) an element.
    Complete,
    /// Enumeration stopped at `cap` elements, or earlier when a product left
    /// the finite floating range (`overflow`).
    Capped { cap: usize, overflow: bool },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClosureOptions {
    pub cap: usize,
    pub dedup_tol: f64,
}

impl Default for ClosureOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            dedup_tol: DEFAULT_DEDUP_TOL,
        }
    }
}

/// Enumerated elements of a semigroup in discovery order.
#[derive(Clone, Debug, PartialEq)]
pub struct SemigroupClosure {
    pub(crate) elements: Vec<NonnegMatrix>,
    pub(crate) generators: Vec<usize>,
    pub(crate) status: ClosureStatus,
    pub(crate) rule: CompositionRule,
    pub(crate) dedup_tol: f64,
}

impl SemigroupClosure {
    /// Wraps an explicit element list (all treated as generators) without
    /// enumerating products. The status is `Complete` only if the list is
    /// closed under `rule` within `dedup_tol`.
    pub fn from_elements(
        elements: Vec<NonnegMatrix>,
        rule: CompositionRule,
        dedup_tol: f64,
    ) -> Result<Self> {
        let n = check_family(&elements)?;
        rule.check_dim(n)?;
        let count = elements.len();
        let mut closure = Self {
            elements,
            generators: (0..count).collect(),
            status: ClosureStatus::Capped {
                cap: count,
                overflow: false,
            },
            rule,
            dedup_tol,
        };
        if closure.closure_defect() <= dedup_tol {
            closure.status = ClosureStatus::Complete;
        }
        Ok(closure)
    }

    pub fn elements(&self) -> &[NonnegMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn n(&self) -> usize {
        self.elements[0].n()
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn generators(&self) -> Vec<NonnegMatrix> {
        self.generators
            .iter()
            .map(|&i| self.elements[i].clone())
            .collect()
    }

    pub fn status(&self) -> ClosureStatus {
        self.status
    }

    pub fn is_complete(&self) -> bool {
        self.status == ClosureStatus::Complete
    }

    pub fn rule(&self) -> &CompositionRule {
        &self.rule
    }

    pub fn dedup_tol(&self) -> f64 {
        self.dedup_tol
    }

    /// Index of an element within `dedup_tol` of `m`.
    pub fn position(&self, m: &NonnegMatrix) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e.max_abs_diff(m) <= self.dedup_tol)
    }

    /// Largest distance from a pairwise product to the nearest element.
    pub fn closure_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for f in &self.elements {
            for g in &self.elements {
                let p = self.rule.compose_raw(f.as_matrix(), g.as_matrix());
                let nearest = self
                    .elements
                    .iter()
                    .map(|e| {
                        e.as_matrix()
                            .iter()
                            .zip(p.iter())
                            .map(|(a, b)| (a - b).abs())
                            .fold(0.0, f64::max)
                    })
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(nearest);
            }
        }
        worst
    }

    pub(crate) fn with_elements(&self, elements: Vec<NonnegMatrix>) -> Self {
        Self {
            elements,
            generators: self.generators.clone(),
            status: self.status,
            rule: self.rule.clone(),
            dedup_tol: self.dedup_tol,
        }
    }
}

/// Common dimension of a non-empty family of square matrices.
pub(crate) fn check_family(ms: &[NonnegMatrix]) -> Result<usize> {
    let first = ms
        .first()
        .ok_or_else(|| Error::InvalidInput("at least one matrix is required".into()))?;
    let n = first.n();
    for m in ms {
        if m.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.n(),
            });
        }
    }
    Ok(n)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Near-duplicate lookup keyed by a bucketed weighted entry sum.
///
/// Two matrices within `tol` entrywise have weighted sums within `n²·tol`,
/// which is at most half a bucket, so only the two neighbouring buckets need
/// checking.
struct DedupIndex {
    weights: Vec<f64>,
    width: f64,
    tol: f64,
    buckets: HashMap<i64, Vec<usize>>,
}

impl DedupIndex {
    fn new(n: usize, tol: f64) -> Self {
        let weights = (0..(n * n) as u64)
            .map(|p| 0.5 + 0.5 * (splitmix64(p) >> 11) as f64 / (1u64 << 53) as f64)
            .collect();
        Self {
            weights,
            width: (2.0 * (n * n) as f64 * tol).max(1e-6),
            tol,
            buckets: HashMap::new(),
        }
    }

    fn bucket(&self, m: &DMatrix<f64>) -> i64 {
        // column-major iteration; weights are per storage slot
        let s: f64 = m.iter().zip(&self.weights).map(|(a, w)| a * w).sum();
        (s / self.width).floor() as i64
    }

    fn find(&self, m: &DMatrix<f64>, elements: &[NonnegMatrix]) -> Option<usize> {
        let b = self.bucket(m);
        for key in [b.saturating_sub(1), b, b.saturating_add(1)] {
            if let Some(ids) = self.buckets.get(&key) {
                for &i in ids {
                    let close = elements[i]
                        .as_matrix()
                        .iter()
                        .zip(m.iter())
                        .all(|(a, c)| (a - c).abs() <= self.tol);
                    if close {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, m: &DMatrix<f64>, idx: usize) {
        let b = self.bucket(m);
        self.buckets.entry(b).or_default().push(idx);
    }
}

/// Enumerates the semigroup generated by `generators` under `rule`.
///
/// Elements are visited in discovery order; for each one the products
/// `g * e` for every generator `g` come first, then `e * g`. A product
/// within `dedup_tol` of a known element is dropped. Reaching `cap` or a
/// non-finite product ends enumeration with status `Capped`.
pub fn generate_closure(
    generators: &[NonnegMatrix],
    rule: &CompositionRule,
    opts: &ClosureOptions,
) -> Result<SemigroupClosure> {
    generate_inspected(generators, rule, opts, |_, _| Ok(()))
}

/// [`generate_closure`] with a hook run on every new element as it is added;
/// an error from the hook aborts enumeration.
pub(crate) fn generate_inspected(
    generators: &[NonnegMatrix],
    rule: &CompositionRule,
    opts: &ClosureOptions,
    mut inspect: impl FnMut(usize, &NonnegMatrix) -> Result<()>,
) -> Result<SemigroupClosure> {
    let n = check_family(generators)?;
    rule.check_dim(n)?;
    if opts.cap < generators.len() {
        return Err(Error::PreconditionViolated(format!(
            "cap {} is smaller than the {} generators",
            opts.cap,
            generators.len()
        )));
    }

    let mut index = DedupIndex::new(n, opts.dedup_tol);
    let mut elements: Vec<NonnegMatrix> = Vec::new();
    let mut gen_ids = Vec::with_capacity(generators.len());
    for g in generators {
        let id = match index.find(g.as_matrix(), &elements) {
            Some(id) => id,
            None => {
                let id = elements.len();
                index.insert(g.as_matrix(), id);
                elements.push(g.clone());
                inspect(id, g)?;
                id
            }
        };
        gen_ids.push(id);
    }
    let gens: Vec<NonnegMatrix> = gen_ids.iter().map(|&i| elements[i].clone()).collect();

    let capped = |elements: Vec<NonnegMatrix>, overflow: bool| SemigroupClosure {
        elements,
        generators: gen_ids.clone(),
        status: ClosureStatus::Capped {
            cap: opts.cap,
            overflow,
        },
        rule: rule.clone(),
        dedup_tol: opts.dedup_tol,
    };

    let mut cursor = 0;
    while cursor < elements.len() {
        let e = elements[cursor].as_matrix().clone();
        let left = gens.iter().map(|g| rule.compose_raw(g.as_matrix(), &e));
        let right = gens.iter().map(|g| rule.compose_raw(&e, g.as_matrix()));
        let products: Vec<DMatrix<f64>> = left.chain(right).collect();
        for p in products {
            if p.iter().any(|v| !v.is_finite()) {
                return Ok(capped(elements, true));
            }
            if index.find(&p, &elements).is_some() {
                continue;
            }
            if elements.len() >= opts.cap {
                return Ok(capped(elements, false));
            }
            let m = NonnegMatrix::new(p)?;
            let id = elements.len();
            index.insert(m.as_matrix(), id);
            inspect(id, &m)?;
            elements.push(m);
        }
        cursor += 1;
    }

    Ok(SemigroupClosure {
        elements,
        generators: gen_ids,
        status: ClosureStatus::Complete,
        rule: rule.clone(),
        dedup_tol: opts.dedup_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize, j: usize) -> NonnegMatrix {
        NonnegMatrix::unit(n, i, j, 1.0).unwrap()
    }

    #[test]
    fn matrix_units_close_to_five_elements() {
        let c = generate_closure(
            &[e(2, 0, 1), e(2, 1, 0)],
            &CompositionRule::Standard,
            &ClosureOptions::default(),
        )
        .unwrap();
        assert!(c.is_complete());
        assert_eq!(c.len(), 5);
        for m in [e(2, 0, 0), e(2, 1, 1), NonnegMatrix::zeros(2)] {
            assert!(c.position(&m).is_some());
        }
        assert_eq!(c.generator_indices(), &[0, 1]);
        assert!(c.closure_defect() <= 1e-12);
    }

    #[test]
    fn identity_and_nilpotent_generators() {
        let opts = ClosureOptions::default();
        let c = generate_closure(
            &[NonnegMatrix::identity(3)],
            &CompositionRule::Standard,
            &opts,
        )
        .unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.is_complete());

        let g = NonnegMatrix::from_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap();
        let c =
            generate_closure(std::slice::from_ref(&g), &CompositionRule::Standard, &opts).unwrap();
        assert_eq!(c.elements(), &[g, NonnegMatrix::zeros(2)]);
    }

    #[test]
    fn duplicate_generators_share_an_index() {
        let c = generate_closure(
            &[e(2, 0, 1), e(2, 0, 1)],
            &CompositionRule::Standard,
            &ClosureOptions::default(),
        )
        .unwrap();
        assert_eq!(c.generator_indices(), &[0, 0]);
    }

    #[test]
    fn growth_is_capped() {
        let gens = [
            NonnegMatrix::unit(2, 0, 1, 2.0).unwrap(),
            NonnegMatrix::unit(2, 1, 0, 2.0).unwrap(),
        ];
        let opts = ClosureOptions {
            cap: 50,
            dedup_tol: 1e-9,
        };
        let c = generate_closure(&gens, &CompositionRule::Standard, &opts).unwrap();
        assert_eq!(c.len(), 50);
        assert_eq!(
            c.status(),
            ClosureStatus::Capped {
                cap: 50,
                overflow: false
            }
        );

        let c = generate_closure(
            &gens,
            &CompositionRule::Standard,
            &ClosureOptions::default(),
        )
        .unwrap();
        assert!(matches!(
            c.status(),
            ClosureStatus::Capped { overflow: true, .. }
        ));
        assert!(c.elements().iter().all(|m| m.max_entry().is_finite()));
    }

    #[test]
    fn shrinking_products_merge_into_zero() {
        let gens = [
            NonnegMatrix::unit(2, 0, 1, 0.5).unwrap(),
            NonnegMatrix::unit(2, 1, 0, 0.5).unwrap(),
        ];
        let c = generate_closure(
            &gens,
            &CompositionRule::Standard,
            &ClosureOptions::default(),
        )
        .unwrap();
        assert!(c.is_complete());
        assert!(c.len() < 200);
    }

    #[test]
    fn rejects_mixed_dimensions_and_small_cap() {
        let r = generate_closure(
            &[e(2, 0, 1), e(3, 0, 1)],
            &CompositionRule::Standard,
            &ClosureOptions::default(),
        );
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        let r = generate_closure(
            &[e(2, 0, 1), e(2, 1, 0)],
            &CompositionRule::Standard,
            &ClosureOptions {
                cap: 1,
                dedup_tol: 1e-9,
            },
        );
        assert!(matches!(r, Err(Error::PreconditionViolated(_))));
        let r = generate_closure(
            &[e(2, 0, 1)],
            &CompositionRule::atom_weighted_unchecked(vec![1.0]),
            &ClosureOptions::default(),
        );
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn atom_weights_below_one_are_rejected() {
        assert!(CompositionRule::atom_weighted(vec![1.0, 0.5]).is_err());
        assert!(CompositionRule::atom_weighted(vec![1.0, 2.5]).is_ok());
    }

    #[test]
    fn atom_weighted_product() {
        let rule = CompositionRule::atom_weighted(vec![1.0, 3.0]).unwrap();
        let p = rule.compose(&e(2, 0, 1), &e(2, 1, 0)).unwrap();
        assert_eq!(p.get(0, 0), 3.0);
    }

    #[test]
    fn from_elements_detects_closedness() {
        let closed = vec![
            e(2, 0, 1),
            e(2, 1, 0),
            e(2, 0, 0),
            e(2, 1, 1),
            NonnegMatrix::zeros(2),
        ];
        let c = SemigroupClosure::from_elements(closed, CompositionRule::Standard, 1e-9).unwrap();
        assert!(c.is_complete());
        let c = SemigroupClosure::from_elements(vec![e(2, 0, 1)], CompositionRule::Standard, 1e-9)
            .unwrap();
        assert!(!c.is_complete());
    }
}
