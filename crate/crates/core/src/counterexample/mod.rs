//! A self-adjoint semigroup of nonnegative projections with finitely many
//! traces but infinitely many values in a diagonal slot, at finite truncation.
//!
//! With `c = 1/√2` and `f = (c, c², c³, …)`, `g_m` keeps alternate segments
//! of length `2^m` of `f` (starting with the first) and `h_m = f − g_m`.
//! Then `P = f fᵀ` and `Q_m = g_m g_mᵀ/‖g_m‖² + h_m h_mᵀ/‖h_m‖²` satisfy
//! `P Q_m = Q_m P = P` and `Q_m Q_n = P` for `m ≠ n`, while the `(1, 1)`
//! entries of the `Q_m` are pairwise distinct.
//!
//! Everything is built at length `len`; floating residuals are reported next
//! to the exact truncation residuals from [`exact`].

pub mod exact;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{numerical_rank, projection_residuals};
use exact::{Part, Structured};

pub const DEFAULT_LEN: usize = 256;
pub const DEFAULT_M_MAX: u32 = 5;

/// `max(1e-12, 2^{8 − len/2})`.
pub fn tolerance(len: usize) -> f64 {
    (8.0 - len as f64 / 2.0).exp2().max(1e-12)
}

/// Mass of `f` beyond the truncation: `Σ_{i > len} c^{2i} = 2^{-len}`.
pub fn tail_bound(len: usize) -> f64 {
    (-(len as f64)).exp2()
}

/// Whether `g_m` keeps coordinate `i` (1-based).
pub fn keeps(i: usize, m: u32) -> bool {
    ((i - 1) >> m).is_multiple_of(2)
}

/// `c^i = 2^{-i/2}`, evaluated directly.
pub fn coordinate(i: usize) -> f64 {
    (-(i as f64) / 2.0).exp2()
}

/// `(t + 1)^{-1}` with `t = c^{2^{m+1}} = 2^{-2^m}`.
pub fn closed_form_g_norm_sq(m: u32) -> f64 {
    1.0 / (two_pow_neg_two_pow(m) + 1.0)
}

/// `t (t + 1)^{-1}`.
pub fn closed_form_h_norm_sq(m: u32) -> f64 {
    let t = two_pow_neg_two_pow(m);
    t / (t + 1.0)
}

fn two_pow_neg_two_pow(m: u32) -> f64 {
    (-((1u64 << m) as f64)).exp2()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedVector {
    coords: DVector<f64>,
}

impl TruncatedVector {
    fn from_fn(len: usize, keep: impl Fn(usize) -> bool) -> Self {
        Self {
            coords: DVector::from_fn(
                len,
                |k, _| if keep(k + 1) { coordinate(k + 1) } else { 0.0 },
            ),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinate `i`, 1-based.
    pub fn get(&self, i: usize) -> f64 {
        self.coords[i - 1]
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn dot(&self, other: &TruncatedVector) -> f64 {
        self.coords.dot(&other.coords)
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }
}

#[derive(Clone, Debug)]
pub struct ExampleInstance {
    len: usize,
    m_max: u32,
    f: TruncatedVector,
    g: Vec<TruncatedVector>,
    h: Vec<TruncatedVector>,
    p: DMatrix<f64>,
    q: Vec<DMatrix<f64>>,
    g_norm_sq: Vec<f64>,
    h_norm_sq: Vec<f64>,
}

impl ExampleInstance {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn m_max(&self) -> u32 {
        self.m_max
    }

    pub fn f(&self) -> &TruncatedVector {
        &self.f
    }

    /// `g_m` for `1 ≤ m ≤ m_max`.
    pub fn g(&self, m: u32) -> &TruncatedVector {
        &self.g[m as usize - 1]
    }

    pub fn h(&self, m: u32) -> &TruncatedVector {
        &self.h[m as usize - 1]
    }

    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn q(&self, m: u32) -> &DMatrix<f64> {
        &self.q[m as usize - 1]
    }

    pub fn g_norm_sq(&self, m: u32) -> f64 {
        self.g_norm_sq[m as usize - 1]
    }

    pub fn h_norm_sq(&self, m: u32) -> f64 {
        self.h_norm_sq[m as usize - 1]
    }

    /// `[P, Q_1, …, Q_{m_max}]`.
    pub fn members(&self) -> Vec<DMatrix<f64>> {
        std::iter::once(self.p.clone())
            .chain(self.q.iter().cloned())
            .collect()
    }
}

pub fn build_instance(len: usize, m_max: u32) -> Result<ExampleInstance> {
    if m_max < 1 {
        return Err(Error::InvalidInput("m_max must be at least 1".into()));
    }
    if m_max >= 32 {
        return Err(Error::InvalidInput(format!("m_max = {m_max} is too large")));
    }
    let required = 1usize << (m_max + 1);
    if len < required {
        return Err(Error::TruncationTooShort { len, required });
    }

    let f = TruncatedVector::from_fn(len, |_| true);
    let g: Vec<_> = (1..=m_max)
        .map(|m| TruncatedVector::from_fn(len, |i| keeps(i, m)))
        .collect();
    let h: Vec<_> = (1..=m_max)
        .map(|m| TruncatedVector::from_fn(len, |i| !keeps(i, m)))
        .collect();
    let g_norm_sq: Vec<f64> = g.iter().map(TruncatedVector::norm_sq).collect();
    let h_norm_sq: Vec<f64> = h.iter().map(TruncatedVector::norm_sq).collect();

    let outer = |v: &TruncatedVector, s: f64| v.as_vector() * v.as_vector().transpose() * s;
    let p = outer(&f, 1.0);
    let q = (0..m_max as usize)
        .map(|k| outer(&g[k], 1.0 / g_norm_sq[k]) + outer(&h[k], 1.0 / h_norm_sq[k]))
        .collect();

    Ok(ExampleInstance {
        len,
        m_max,
        f,
        g,
        h,
        p,
        q,
        g_norm_sq,
        h_norm_sq,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormCheck {
    pub m: u32,
    pub g_norm_sq: f64,
    pub g_closed_form: f64,
    pub g_residual: f64,
    pub h_norm_sq: f64,
    pub h_closed_form: f64,
    pub h_residual: f64,
    /// Exact `|‖g_m‖² − closed form|` of the truncated vector.
    pub g_truncation: f64,
    pub h_truncation: f64,
}

/// Truncated `‖g_m‖²`, `‖h_m‖²` against their closed forms.
pub fn verify_norms(inst: &ExampleInstance) -> Vec<NormCheck> {
    (1..=inst.m_max)
        .map(|m| {
            let (g_exact, h_exact) = exact::closed_form_norms(m);
            let g_trunc = exact::norm_sq(inst.len, Part::G(m));
            let h_trunc = exact::norm_sq(inst.len, Part::H(m));
            let g_closed = closed_form_g_norm_sq(m);
            let h_closed = closed_form_h_norm_sq(m);
            NormCheck {
                m,
                g_norm_sq: inst.g_norm_sq(m),
                g_closed_form: g_closed,
                g_residual: (inst.g_norm_sq(m) - g_closed).abs(),
                h_norm_sq: inst.h_norm_sq(m),
                h_closed_form: h_closed,
                h_residual: (inst.h_norm_sq(m) - h_closed).abs(),
                g_truncation: exact::abs_to_f64(&(g_trunc - g_exact)),
                h_truncation: exact::abs_to_f64(&(h_trunc - h_exact)),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub identity: &'static str,
    pub residual: f64,
    /// Same identity in exact arithmetic on the truncated vectors.
    pub truncation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnerProductCheck {
    pub m: u32,
    pub n: u32,
    pub identities: Vec<IdentityResidual>,
}

impl InnerProductCheck {
    pub fn max_residual(&self) -> f64 {
        self.identities
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }

    pub fn max_truncation(&self) -> f64 {
        self.identities
            .iter()
            .map(|r| r.truncation)
            .fold(0.0, f64::max)
    }
}

/// The six inner-product identities for the pair `m < n`.
pub fn verify_inner_products(inst: &ExampleInstance, m: u32, n: u32) -> Result<InnerProductCheck> {
    if !(1 <= m && m < n && n <= inst.m_max) {
        return Err(Error::InvalidInput(format!(
            "need 1 <= m < n <= {}, got m = {m}, n = {n}",
            inst.m_max
        )));
    }
    let len = inst.len;
    let (f, gm, hm, gn, hn) = (inst.f(), inst.g(m), inst.h(m), inst.g(n), inst.h(n));
    let (ngm, nhm, ngn, nhn) = (
        inst.g_norm_sq(m),
        inst.h_norm_sq(m),
        inst.g_norm_sq(n),
        inst.h_norm_sq(n),
    );

    // (name, lhs, rhs, exact lhs parts, exact rhs as a product of squared norms)
    type Spec<'a> = (&'static str, f64, f64, (Part, Part), Vec<Part>);
    let specs: Vec<Spec> = vec![
        (
            "f.g_m = |g_m|^2",
            f.dot(gm),
            ngm,
            (Part::F, Part::G(m)),
            vec![Part::G(m)],
        ),
        (
            "f.h_m = |h_m|^2",
            f.dot(hm),
            nhm,
            (Part::F, Part::H(m)),
            vec![Part::H(m)],
        ),
        (
            "g_m.g_n = |g_m|^2 |g_n|^2",
            gm.dot(gn),
            ngm * ngn,
            (Part::G(m), Part::G(n)),
            vec![Part::G(m), Part::G(n)],
        ),
        (
            "g_m.h_n = |g_m|^2 |h_n|^2",
            gm.dot(hn),
            ngm * nhn,
            (Part::G(m), Part::H(n)),
            vec![Part::G(m), Part::H(n)],
        ),
        (
            "h_m.h_n = |h_m|^2 |h_n|^2",
            hm.dot(hn),
            nhm * nhn,
            (Part::H(m), Part::H(n)),
            vec![Part::H(m), Part::H(n)],
        ),
        (
            "h_m.g_n = |h_m|^2 |g_n|^2",
            hm.dot(gn),
            nhm * ngn,
            (Part::H(m), Part::G(n)),
            vec![Part::H(m), Part::G(n)],
        ),
    ];

    let identities = specs
        .into_iter()
        .map(|(identity, lhs, rhs, (a, b), norms)| {
            let exact_lhs = exact::dot(len, a, b);
            let exact_rhs = norms
                .iter()
                .map(|&p| exact::norm_sq(len, p))
                .fold(BigRational::from_integer(1.into()), |acc, v| acc * v);
            IdentityResidual {
                identity,
                residual: (lhs - rhs).abs(),
                truncation: exact::abs_to_f64(&(exact_lhs - exact_rhs)),
            }
        })
        .collect();

    Ok(InnerProductCheck { m, n, identities })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductResidual {
    pub product: String,
    pub residual: f64,
    pub truncation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemigroupCheck {
    pub products: Vec<ProductResidual>,
    pub max_residual: f64,
    pub max_truncation: f64,
}

/// Frobenius residuals of `P² − P`, `Q_m² − Q_m`, `P Q_m − P`, `Q_m P − P`,
/// and `Q_m Q_n − P`, `Q_n Q_m − P` for every `m < n`.
pub fn verify_semigroup(inst: &ExampleInstance) -> SemigroupCheck {
    let len = inst.len;
    let p = inst.p();
    let sp = Structured::p();
    let mut products = Vec::new();
    let mut push = |product: String, float: &DMatrix<f64>, structured: Structured| {
        products.push(ProductResidual {
            product,
            residual: float.norm(),
            truncation: structured.frobenius(len),
        });
    };

    push("P P - P".into(), &(p * p - p), sp.mul(&sp, len).sub(&sp));
    for m in 1..=inst.m_max {
        let q = inst.q(m);
        let sq = Structured::q(len, m);
        push(
            format!("Q{m} Q{m} - Q{m}"),
            &(q * q - q),
            sq.mul(&sq, len).sub(&sq),
        );
        push(
            format!("P Q{m} - P"),
            &(p * q - p),
            sp.mul(&sq, len).sub(&sp),
        );
        push(
            format!("Q{m} P - P"),
            &(q * p - p),
            sq.mul(&sp, len).sub(&sp),
        );
    }
    for m in 1..=inst.m_max {
        for n in m + 1..=inst.m_max {
            let (qm, qn) = (inst.q(m), inst.q(n));
            let (sm, sn) = (Structured::q(len, m), Structured::q(len, n));
            push(
                format!("Q{m} Q{n} - P"),
                &(qm * qn - p),
                sm.mul(&sn, len).sub(&sp),
            );
            push(
                format!("Q{n} Q{m} - P"),
                &(qn * qm - p),
                sn.mul(&sm, len).sub(&sp),
            );
        }
    }

    let max_residual = products.iter().map(|r| r.residual).fold(0.0, f64::max);
    let max_truncation = products.iter().map(|r| r.truncation).fold(0.0, f64::max);
    SemigroupCheck {
        products,
        max_residual,
        max_truncation,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalFamily {
    /// `(1, 1)` entries of `P, Q_1, …, Q_{m_max}` as built.
    pub entries: Vec<f64>,
    /// `c²` followed by `c² (c^{2^{m+1}} + 1)`.
    pub closed_forms: Vec<f64>,
    pub max_residual: f64,
    pub pairwise_distinct: bool,
    /// `Q_m` entries strictly decrease in `m` and stay above `c²`.
    pub strictly_decreasing: bool,
}

pub fn diagonal_family_f1(inst: &ExampleInstance, cluster_tol: f64) -> DiagonalFamily {
    let entries: Vec<f64> = inst.members().iter().map(|m| m[(0, 0)]).collect();
    let c2 = 0.5;
    let closed_forms: Vec<f64> = std::iter::once(c2)
        .chain((1..=inst.m_max).map(|m| c2 * (two_pow_neg_two_pow(m) + 1.0)))
        .collect();
    let max_residual = entries
        .iter()
        .zip(&closed_forms)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let pairwise_distinct = entries
        .iter()
        .enumerate()
        .all(|(i, a)| entries[i + 1..].iter().all(|b| (a - b).abs() > cluster_tol));
    let strictly_decreasing =
        entries[1..].windows(2).all(|w| w[0] > w[1]) && entries[1..].iter().all(|&v| v > c2);
    DiagonalFamily {
        entries,
        closed_forms,
        max_residual,
        pairwise_distinct,
        strictly_decreasing,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QProjectionCheck {
    pub m: u32,
    pub idempotent_residual: f64,
    pub symmetry_residual: f64,
    pub rank: usize,
}

pub fn verify_q_projections(inst: &ExampleInstance, rank_tol: f64) -> Vec<QProjectionCheck> {
    (1..=inst.m_max)
        .map(|m| {
            let (idem, sym) = projection_residuals(inst.q(m));
            QProjectionCheck {
                m,
                idempotent_residual: idem,
                symmetry_residual: sym,
                rank: numerical_rank(inst.q(m), rank_tol),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleReport {
    pub len: usize,
    pub m_max: u32,
    pub tolerance: f64,
    pub tail_bound: f64,
    pub norms: Vec<NormCheck>,
    pub inner_products: Vec<InnerProductCheck>,
    pub semigroup: SemigroupCheck,
    pub q_projections: Vec<QProjectionCheck>,
    pub diagonal_family: DiagonalFamily,
    /// Largest floating residual across every check.
    pub max_residual: f64,
    /// Largest exact truncation residual across every check.
    pub max_truncation: f64,
    pub passed: bool,
}

/// Runs every verification at tolerance [`tolerance`]`(len)`.
pub fn verify_all(inst: &ExampleInstance) -> ExampleReport {
    verify_with_tolerance(inst, tolerance(inst.len))
}

/// Runs every verification; floating residuals must stay within `tol` plus
/// the tail mass `2^{-len}`.
pub fn verify_with_tolerance(inst: &ExampleInstance, tol: f64) -> ExampleReport {
    let tail = tail_bound(inst.len);
    let norms = verify_norms(inst);
    let inner_products: Vec<InnerProductCheck> = (1..=inst.m_max)
        .flat_map(|m| (m + 1..=inst.m_max).map(move |n| (m, n)))
        .map(|(m, n)| verify_inner_products(inst, m, n).expect("valid pair"))
        .collect();
    let semigroup = verify_semigroup(inst);
    let q_projections = verify_q_projections(inst, crate::operator::DEFAULT_TOL);
    // the smallest gap, 2^{-2^m_max - 1}, is far below the usual clustering tolerance
    let diagonal_family = diagonal_family_f1(inst, tol);

    let norm_residual = norms
        .iter()
        .map(|c| c.g_residual.max(c.h_residual))
        .fold(0.0, f64::max);
    let max_residual = [
        norm_residual,
        inner_products
            .iter()
            .map(InnerProductCheck::max_residual)
            .fold(0.0, f64::max),
        semigroup.max_residual,
        q_projections
            .iter()
            .map(|c| c.idempotent_residual.max(c.symmetry_residual))
            .fold(0.0, f64::max),
        diagonal_family.max_residual,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let max_truncation = norms
        .iter()
        .map(|c| c.g_truncation.max(c.h_truncation))
        .chain(inner_products.iter().map(InnerProductCheck::max_truncation))
        .chain(std::iter::once(semigroup.max_truncation))
        .fold(0.0, f64::max);

    let passed = norm_residual <= tol + tail
        && max_residual <= tol + tail
        && q_projections.iter().all(|c| c.rank == 2)
        && diagonal_family.pairwise_distinct
        && diagonal_family.strictly_decreasing;

    ExampleReport {
        len: inst.len,
        m_max: inst.m_max,
        tolerance: tol,
        tail_bound: tail,
        norms,
        inner_products,
        semigroup,
        q_projections,
        diagonal_family,
        max_residual,
        max_truncation,
        passed,
    }
}
