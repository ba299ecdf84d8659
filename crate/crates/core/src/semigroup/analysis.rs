//! Boundedness and domination certificates for enumerated semigroups.

use nalgebra::DMatrix;
use serde::Serialize;

use super::closure::{check_family, CompositionRule, SemigroupClosure};
use crate::error::{Error, Result};
use crate::matrix::NonnegMatrix;
use crate::scaling::{bounded_scaling, mult_walk_supremum, scaling_from_basepoint, ScalingVector};

/// Worst `f(x, y) g(y, z) − (f * g)(x, z)` over element pairs and index triples.
pub fn matrix_like_defect(elements: &[NonnegMatrix], rule: &CompositionRule) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for f in elements {
        for g in elements {
            let p = rule.compose_raw(f.as_matrix(), g.as_matrix());
            let n = f.n();
            for x in 0..n {
                for y in 0..n {
                    let fxy = f.get(x, y);
                    for z in 0..n {
                        worst = worst.max(fxy * g.get(y, z) - p[(x, z)]);
                    }
                }
            }
        }
    }
    worst
}

/// `(f * g)(x, z) ≥ f(x, y) g(y, z) − tol` for all element pairs and triples.
pub fn matrix_like_check(elements: &[NonnegMatrix], rule: &CompositionRule, tol: f64) -> bool {
    matrix_like_defect(elements, rule) <= tol
}

/// Transitive closure of the union of generator supports.
fn support_closure(generators: &[NonnegMatrix]) -> Vec<Vec<bool>> {
    let n = generators[0].n();
    let mut r = vec![vec![false; n]; n];
    for g in generators {
        for (i, row) in r.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell |= g.get(i, j) > 0.0;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let through = r[k].clone();
                for (cell, via) in r[i].iter_mut().zip(through) {
                    *cell |= via;
                }
            }
        }
    }
    r
}

/// First `(x, y)` that is zero in every product of generators, if any.
pub fn indecomposability_witness(generators: &[NonnegMatrix]) -> Option<(usize, usize)> {
    if generators.is_empty() {
        return Some((0, 0));
    }
    let r = support_closure(generators);
    r.iter()
        .enumerate()
        .find_map(|(i, row)| row.iter().position(|&b| !b).map(|j| (i, j)))
}

/// Every position is positive in some product of generators.
pub fn is_indecomposable(generators: &[NonnegMatrix]) -> bool {
    indecomposability_witness(generators).is_none()
}

fn require_indecomposable(generators: &[NonnegMatrix]) -> Result<()> {
    match indecomposability_witness(generators) {
        None => Ok(()),
        Some((row, col)) => Err(Error::NotIndecomposable { row, col }),
    }
}

/// Entrywise supremum over the enumerated elements.
#[derive(Clone, Debug, PartialEq)]
pub struct SupFunction {
    pub s: NonnegMatrix,
    /// The enumeration was complete, so `s` is the true supremum.
    pub exact: bool,
}

pub fn sup_function(closure: &SemigroupClosure) -> SupFunction {
    let n = closure.n();
    let mut s = DMatrix::<f64>::zeros(n, n);
    for f in closure.elements() {
        s.zip_apply(f.as_matrix(), |a, b| *a = a.max(b));
    }
    SupFunction {
        s: NonnegMatrix::new(s).expect("max of nonnegative matrices"),
        exact: closure.is_complete(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "count", rename_all = "snake_case")]
pub enum Verification {
    CompleteClosure,
    EnumeratedPrefix(usize),
}

/// A positive `d` with `f(x, y) ≤ d(x) / d(y)` for every checked element.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DominationCertificate {
    pub d: ScalingVector,
    pub verified_against: Verification,
    /// `max f(x, y) · d(y) / d(x)` over checked elements and pairs.
    pub max_violation: f64,
}

fn certify(closure: &SemigroupClosure, d: ScalingVector) -> DominationCertificate {
    let max_violation = closure
        .elements()
        .iter()
        .map(|f| d.max_violation(f))
        .fold(0.0, f64::max);
    let verified_against = if closure.is_complete() {
        Verification::CompleteClosure
    } else {
        Verification::EnumeratedPrefix(closure.len())
    };
    DominationCertificate {
        d,
        verified_against,
        max_violation,
    }
}

/// Scaling of an indecomposable semigroup that is bounded at one position.
///
/// Builds the sup function `s`, its product supremum `C_s`, and reads `d`
/// off the first basepoint where a column or row of `C_s` is strictly
/// positive. Returns the finite value `s(u, v)` alongside the certificate.
pub fn semigroup_scaling(
    closure: &SemigroupClosure,
    u: usize,
    v: usize,
) -> Result<(DominationCertificate, f64)> {
    let n = closure.n();
    if u >= n || v >= n {
        return Err(Error::InvalidInput(format!(
            "position ({}, {}) out of range for dimension {n}",
            u + 1,
            v + 1
        )));
    }
    require_indecomposable(&closure.generators())?;
    let sup = sup_function(closure);
    let c = mult_walk_supremum(&sup.s).to_matrix()?;
    let d = (0..n)
        .find_map(|x0| scaling_from_basepoint(&c, x0).ok())
        .ok_or(Error::BasepointUnusable { basepoint: None })?;
    Ok((certify(closure, d), sup.s.get(u, v)))
}

/// Scaling with entries in `[1/m, m]` for a semigroup whose entries are all at most `m`.
pub fn bounded_semigroup_scaling(
    closure: &SemigroupClosure,
    m: f64,
) -> Result<DominationCertificate> {
    let sup = sup_function(closure);
    let top = sup.s.max_entry();
    if top > m * (1.0 + 1e-12) {
        return Err(Error::PreconditionViolated(format!(
            "an element has entry {top} above M = {m}"
        )));
    }
    let d = bounded_scaling(&sup.s, m)?;
    Ok(certify(closure, d))
}

/// Diagonal similarity `f ↦ D⁻¹ f D`, i.e. `f'(x, y) = f(x, y) d(y) / d(x)`.
pub fn rescale_matrix(f: &NonnegMatrix, d: &ScalingVector) -> Result<NonnegMatrix> {
    let n = f.n();
    if d.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: d.len(),
        });
    }
    let m = DMatrix::from_fn(n, n, |x, y| f.get(x, y) * d.get(y) / d.get(x));
    NonnegMatrix::new(m)
}

pub fn rescale_by(closure: &SemigroupClosure, d: &ScalingVector) -> Result<SemigroupClosure> {
    let elements = closure
        .elements()
        .iter()
        .map(|f| rescale_matrix(f, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(closure.with_elements(elements))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub sup: NonnegMatrix,
    pub global_max: f64,
    /// Enumeration was capped: the values are lower bounds on the true suprema.
    pub lower_bound: bool,
}

pub fn entrywise_bound_report(closure: &SemigroupClosure) -> BoundReport {
    let sup = sup_function(closure);
    BoundReport {
        global_max: sup.s.max_entry(),
        sup: sup.s,
        lower_bound: !sup.exact,
    }
}

/// Generators plus a dimension check, shared by the public entry points.
pub(crate) fn generator_dim(generators: &[NonnegMatrix]) -> Result<usize> {
    check_family(generators)
}
