//! Potentials and diagonal scalings synthesized from walk closures.
//!
//! Additive side: a potential `ρ` with `W(x, y) ≤ ρ(x) − ρ(y)`, read off a
//! column or row of the closure through a basepoint, and the bump that lifts
//! every edge weight below `−K` to `−K` without pushing any walk above `K`.
//!
//! Multiplicative side: the same constructions pushed through `exp`. The
//! product supremum `C_f` and the scaling vector `d` with
//! `f(x, y) ≤ C_f(x, y) ≤ d(x) / d(y)` are computed in the log domain so long
//! products neither overflow nor underflow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext_real::{ExtReal, ExtendedWeightMatrix};
use crate::matrix::NonnegMatrix;
use crate::tropical::{walk_supremum, WalkClosure};

/// Absolute tolerance for comparisons against `{0, 1}`-type targets.
pub const DEFAULT_ABS_TOL: f64 = 1e-9;
/// Relative slack allowed in scaling inequalities.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Slack used when checking `W ≤ K`.
const BOUND_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `ρ(x) = W(x, x₀)`
    IntoBasepoint,
    /// `ρ(x) = −W(x₀, x)`
    OutOfBasepoint,
}

/// Real-valued potential dominating a walk closure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdditivePotential {
    pub rho: Vec<f64>,
    pub basepoint: usize,
    pub orientation: Orientation,
}

impl AdditivePotential {
    /// `max_{x,y} W(x, y) − ρ(x) + ρ(y)` over bounded finite entries; `−∞` if none.
    pub fn max_slack(&self, w: &WalkClosure) -> f64 {
        let n = w.n();
        let mut worst = f64::NEG_INFINITY;
        for x in 0..n {
            for y in 0..n {
                if let Some(v) = w.weight(x, y).and_then(ExtReal::finite) {
                    worst = worst.max(v - self.rho[x] + self.rho[y]);
                }
            }
        }
        worst
    }
}

fn column_finite(w: &WalkClosure, x0: usize) -> bool {
    (0..w.n()).all(|x| w.weight(x, x0).is_some_and(ExtReal::is_finite))
}

fn row_finite(w: &WalkClosure, x0: usize) -> bool {
    (0..w.n()).all(|x| w.weight(x0, x).is_some_and(ExtReal::is_finite))
}

/// Potential through basepoint `x0` (0-based). Into-basepoint wins when both apply.
pub fn potential_from_basepoint(w: &WalkClosure, x0: usize) -> Result<AdditivePotential> {
    if x0 >= w.n() {
        return Err(Error::InvalidInput(format!(
            "basepoint {} out of range 1..={}",
            x0 + 1,
            w.n()
        )));
    }
    if w.has_divergence() {
        return Err(Error::Divergent {
            pairs: w.divergent_pairs().to_vec(),
        });
    }
    let value = |x: usize, y: usize| w.weight(x, y).and_then(ExtReal::finite).unwrap_or(f64::NAN);
    if column_finite(w, x0) {
        Ok(AdditivePotential {
            rho: (0..w.n()).map(|x| value(x, x0)).collect(),
            basepoint: x0,
            orientation: Orientation::IntoBasepoint,
        })
    } else if row_finite(w, x0) {
        Ok(AdditivePotential {
            rho: (0..w.n()).map(|x| -value(x0, x)).collect(),
            basepoint: x0,
            orientation: Orientation::OutOfBasepoint,
        })
    } else {
        Err(Error::BasepointUnusable {
            basepoint: Some(x0),
        })
    }
}

/// First admissible basepoint in index order.
pub fn auto_basepoint(w: &WalkClosure) -> Option<usize> {
    if w.has_divergence() {
        return None;
    }
    (0..w.n()).find(|&x0| column_finite(w, x0) || row_finite(w, x0))
}

/// Potential through the first admissible basepoint.
pub fn auto_potential(w: &WalkClosure) -> Result<AdditivePotential> {
    if w.has_divergence() {
        return Err(Error::Divergent {
            pairs: w.divergent_pairs().to_vec(),
        });
    }
    let x0 = auto_basepoint(w).ok_or(Error::BasepointUnusable { basepoint: None })?;
    potential_from_basepoint(w, x0)
}

fn check_closure_bounded_by(w: &WalkClosure, k: f64) -> Result<()> {
    if w.has_divergence() {
        return Err(Error::PreconditionViolated(format!(
            "walk supremum is unbounded at {} pair(s)",
            w.divergent_pairs().len()
        )));
    }
    for x in 0..w.n() {
        for y in 0..w.n() {
            let v = w
                .weight(x, y)
                .map(ExtReal::value)
                .unwrap_or(f64::NEG_INFINITY);
            if v > k + BOUND_SLACK {
                return Err(Error::PreconditionViolated(format!(
                    "W({}, {}) = {v} exceeds K = {k}",
                    x + 1,
                    y + 1
                )));
            }
        }
    }
    Ok(())
}

fn raise_floor(mu: &ExtendedWeightMatrix, k: f64) -> ExtendedWeightMatrix {
    let floor = ExtReal::new(-k).expect("finite bound");
    mu.map(|e| e.oplus(floor))
}

/// Lifts every weight below `−k` (including `−∞`) to `−k`.
///
/// Requires `k > 0` and `W_μ ≤ k` everywhere; the result `λ` then satisfies
/// `μ ≤ λ`, `W_μ ≤ W_λ ≤ k` and has every entry in `[−k, k]`.
pub fn bump(mu: &ExtendedWeightMatrix, k: f64) -> Result<ExtendedWeightMatrix> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::PreconditionViolated(format!(
            "K must be a positive real, got {k}"
        )));
    }
    check_closure_bounded_by(&walk_supremum(mu), k)?;
    Ok(raise_floor(mu, k))
}

/// Potential with values in `[−k, k]`, through the bump of `mu` and basepoint 1.
pub fn bounded_potential(mu: &ExtendedWeightMatrix, k: f64) -> Result<AdditivePotential> {
    let lambda = bump(mu, k)?;
    let w = walk_supremum(&lambda);
    let mut p = potential_from_basepoint(&w, 0)?;
    for r in &mut p.rho {
        *r = r.clamp(-k, k);
    }
    Ok(p)
}

/// Product supremum `C_f(x, y)` over walks `x → y` with at least one edge.
#[derive(Clone, Debug, PartialEq)]
pub struct MultClosure {
    log: WalkClosure,
}

impl MultClosure {
    pub fn n(&self) -> usize {
        self.log.n()
    }

    /// `C_f(x, y)`, or `None` when unbounded.
    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        self.log.weight(x, y).map(ExtReal::exp)
    }

    pub fn has_divergence(&self) -> bool {
        self.log.has_divergence()
    }

    pub fn divergent_pairs(&self) -> &[(usize, usize)] {
        self.log.divergent_pairs()
    }

    /// Closure of `log f`.
    pub fn log_closure(&self) -> &WalkClosure {
        &self.log
    }

    pub fn to_matrix(&self) -> Result<NonnegMatrix> {
        let n = self.n();
        let logs = self.log.to_matrix()?;
        let data: Vec<Vec<f64>> = (0..n)
            .map(|x| (0..n).map(|y| logs.get(x, y).exp()).collect())
            .collect();
        NonnegMatrix::from_rows(&data)
    }
}

/// Entrywise `log f` with `log 0 = −∞`.
pub fn log_matrix(f: &NonnegMatrix) -> ExtendedWeightMatrix {
    let n = f.n();
    let entries = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| ExtReal::ln_of(f.get(x, y)).expect("nonnegative finite entries"))
        .collect();
    ExtendedWeightMatrix::new(n, entries).expect("square by construction")
}

pub fn mult_walk_supremum(f: &NonnegMatrix) -> MultClosure {
    MultClosure {
        log: walk_supremum(&log_matrix(f)),
    }
}

/// Strictly positive `d`, meaningful up to a global positive factor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingVector {
    d: Vec<f64>,
    /// `M` such that every entry lies in `[1/M, M]`.
    bounds: Option<f64>,
    basepoint: Option<usize>,
}

impl ScalingVector {
    pub fn new(d: Vec<f64>) -> Result<Self> {
        for (i, &v) in d.iter().enumerate() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "scaling entry {} = {v} is not strictly positive",
                    i + 1
                )));
            }
        }
        if d.is_empty() {
            return Err(Error::InvalidInput("empty scaling vector".into()));
        }
        Ok(Self {
            d,
            bounds: None,
            basepoint: None,
        })
    }

    /// Attaches a certified range `[1/m, m]`, checking every entry.
    pub fn with_bounds(mut self, m: f64) -> Result<Self> {
        let slack = BOUND_SLACK;
        if let Some((i, v)) = self
            .d
            .iter()
            .enumerate()
            .find(|(_, &v)| v < 1.0 / m - slack || v > m + slack)
        {
            return Err(Error::PreconditionViolated(format!(
                "entry {} = {v} outside [1/{m}, {m}]",
                i + 1
            )));
        }
        self.bounds = Some(m);
        Ok(self)
    }

    fn with_basepoint(mut self, x0: usize) -> Self {
        self.basepoint = Some(x0);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.d
    }

    pub fn get(&self, i: usize) -> f64 {
        self.d[i]
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn bounds(&self) -> Option<f64> {
        self.bounds
    }

    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    /// Same vector rescaled so that `d(1) = 1`.
    pub fn normalized(&self) -> Vec<f64> {
        let d0 = self.d[0];
        self.d.iter().map(|v| v / d0).collect()
    }

    /// `max_{x,y} f(x, y) · d(y) / d(x)`; at most 1 iff `d` dominates `f`.
    pub fn max_violation(&self, f: &NonnegMatrix) -> f64 {
        let n = f.n();
        let mut worst = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                worst = worst.max(f.get(x, y) * self.d[y] / self.d[x]);
            }
        }
        worst
    }
}

/// `d(x) = C(x, x₀)`, or `d(x) = 1 / C(x₀, x)` when the column has zeros.
pub fn scaling_from_basepoint(c: &NonnegMatrix, x0: usize) -> Result<ScalingVector> {
    let n = c.n();
    if x0 >= n {
        return Err(Error::InvalidInput(format!(
            "basepoint {} out of range 1..={n}",
            x0 + 1
        )));
    }
    let d = if (0..n).all(|x| c.get(x, x0) > 0.0) {
        (0..n).map(|x| c.get(x, x0)).collect()
    } else if (0..n).all(|x| c.get(x0, x) > 0.0) {
        (0..n).map(|x| 1.0 / c.get(x0, x)).collect()
    } else {
        return Err(Error::BasepointUnusable {
            basepoint: Some(x0),
        });
    };
    Ok(ScalingVector::new(d)?.with_basepoint(x0))
}

/// `d` with `f ≤ C_f ≤ d(x)/d(y)` for any `f` whose product supremum is finite.
///
/// Uses `d = exp(ρ)` at the first admissible basepoint of the log-domain
/// closure. Without one, `C_f` is still bounded (the matrix is finite), so
/// the bounded construction with `M = max(1, max C_f)` is used instead.
pub fn synthesize_scaling(f: &NonnegMatrix) -> Result<ScalingVector> {
    let closure = mult_walk_supremum(f);
    match auto_potential(closure.log_closure()) {
        Ok(p) => {
            let d = p.rho.iter().map(|r| r.exp()).collect();
            Ok(ScalingVector::new(d)?.with_basepoint(p.basepoint))
        }
        Err(Error::BasepointUnusable { .. }) => {
            let m = closure.to_matrix()?.max_entry().max(1.0);
            bounded_scaling(f, m)
        }
        Err(e) => Err(e),
    }
}

/// Scaling with every entry in `[1/m, m]`, for `f` whose product supremum is at most `m`.
pub fn bounded_scaling(f: &NonnegMatrix, m: f64) -> Result<ScalingVector> {
    if !(m.is_finite() && m >= 1.0) {
        return Err(Error::PreconditionViolated(format!(
            "M must be a real >= 1, got {m}"
        )));
    }
    let closure = mult_walk_supremum(f);
    let k = m.ln();
    // C_f ≤ M within relative slack, checked in the log domain
    check_closure_bounded_by(closure.log_closure(), k + DEFAULT_REL_TOL)?;

    let lambda = raise_floor(&log_matrix(f), k);
    let w = walk_supremum(&lambda);
    let p = potential_from_basepoint(&w, 0)?;
    let d = p
        .rho
        .iter()
        .map(|r| r.clamp(-k, k).exp().clamp(1.0 / m, m))
        .collect();
    ScalingVector::new(d)?
        .with_bounds(m)
        .map(|s| s.with_basepoint(0))
}

/// Worst excess `f(x, y) f(y, z) − f(x, z)` over all triples.
pub fn compression_defect(f: &NonnegMatrix) -> f64 {
    let n = f.n();
    let mut worst = f64::NEG_INFINITY;
    for x in 0..n {
        for y in 0..n {
            let fxy = f.get(x, y);
            for z in 0..n {
                worst = worst.max(fxy * f.get(y, z) - f.get(x, z));
            }
        }
    }
    worst
}

/// `f(x, y) f(y, z) ≤ f(x, z) + tol` for every triple.
pub fn is_compressed(f: &NonnegMatrix, tol: f64) -> bool {
    compression_defect(f) <= tol
}
