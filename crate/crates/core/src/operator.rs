//! Structure checks for self-adjoint semigroups of real matrices.
//!
//! In a self-adjoint semigroup whose positive semidefinite members have
//! finitely many traces (or finitely many values in each diagonal slot),
//! every `S Sᵀ` is a projection, every nonzero member is a partial isometry,
//! idempotents are symmetric, projections commute and ranks are bounded by
//! the largest trace. For entrywise-nonnegative members the nonzero entries
//! are geometric means of diagonal entries of `S Sᵀ` and `Sᵀ S`, and
//! nonnegative projections split into rank-one blocks `x xᵀ` with `x > 0`.
//! This module measures each of these laws on explicit finite sets.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_IDEMPOTENT_TOL: f64 = 1e-8;
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

fn frobenius(m: &DMatrix<f64>) -> f64 {
    m.norm()
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// `‖P² − P‖_F` and `‖P − Pᵀ‖_F`.
pub fn projection_residuals(p: &DMatrix<f64>) -> (f64, f64) {
    (frobenius(&(p * p - p)), frobenius(&(p - p.transpose())))
}

pub fn is_projection(p: &DMatrix<f64>, tol: f64) -> bool {
    let (idem, sym) = projection_residuals(p);
    idem <= tol && sym <= tol
}

/// Symmetric within `tol` and smallest eigenvalue at least `−tol · max|aᵢⱼ|`.
pub fn is_positive_semidefinite(a: &DMatrix<f64>, tol: f64) -> bool {
    if frobenius(&(a - a.transpose())) > tol {
        return false;
    }
    let scale = max_abs(a);
    if scale == 0.0 {
        return true;
    }
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    eig.eigenvalues.min() >= -tol * scale
}

pub fn singular_values(a: &DMatrix<f64>) -> DVector<f64> {
    a.clone().svd(false, false).singular_values
}

pub fn operator_norm(a: &DMatrix<f64>) -> f64 {
    singular_values(a).max()
}

/// Number of singular values above `tol · σ_max`.
pub fn numerical_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    let sv = singular_values(a);
    let top = sv.max();
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * top).count()
}

fn is_nonnegative(a: &DMatrix<f64>) -> bool {
    a.iter().all(|&v| v >= 0.0)
}

/// Sorted representatives of values, merging runs within `tol` of the run's first value.
pub fn cluster_values(mut values: Vec<f64>, tol: f64) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut reps: Vec<f64> = Vec::new();
    for v in values {
        match reps.last() {
            Some(&r) if v - r <= tol => {}
            _ => reps.push(v),
        }
    }
    reps
}

/// A finite set of square matrices with its positive part and projections marked.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSet {
    pub elements: Vec<DMatrix<f64>>,
    pub self_adjoint_closed: bool,
    /// Indices of positive semidefinite elements.
    pub positive_part: Vec<usize>,
    /// Indices of elements with `P² = P = Pᵀ`.
    pub projections: Vec<usize>,
    /// Elements whose transpose is not in the set.
    pub missing_adjoints: Vec<usize>,
}

impl OperatorSet {
    pub fn dim(&self) -> usize {
        self.elements[0].nrows()
    }
}

pub fn classify(elements: &[DMatrix<f64>], tol: f64) -> Result<OperatorSet> {
    let first = elements
        .first()
        .ok_or_else(|| Error::InvalidInput("operator set is empty".into()))?;
    let n = first.nrows();
    for m in elements {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if m.nrows() != n { m.nrows() } else { m.ncols() },
            });
        }
    }

    let missing_adjoints: Vec<usize> = elements
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            let tt = t.transpose();
            !elements.iter().any(|u| frobenius(&(u - &tt)) <= tol)
        })
        .map(|(i, _)| i)
        .collect();
    let positive_part: Vec<usize> = (0..elements.len())
        .filter(|&i| is_positive_semidefinite(&elements[i], tol))
        .collect();
    let projections: Vec<usize> = positive_part
        .iter()
        .copied()
        .filter(|&i| is_projection(&elements[i], tol))
        .collect();

    Ok(OperatorSet {
        elements: elements.to_vec(),
        self_adjoint_closed: missing_adjoints.is_empty(),
        positive_part,
        projections,
        missing_adjoints,
    })
}

/// `‖(S Sᵀ)² − S Sᵀ‖_F`.
pub fn ss_star_projection_residual(s: &DMatrix<f64>) -> f64 {
    let p = s * s.transpose();
    frobenius(&(&p * &p - &p))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialIsometryCheck {
    pub is_partial_isometry: bool,
    pub residual: f64,
    pub norm: f64,
    /// `|‖S‖ − 1|`, absent for the zero matrix.
    pub norm_defect: Option<f64>,
}

pub fn check_partial_isometry(s: &DMatrix<f64>, tol: f64) -> PartialIsometryCheck {
    let residual = ss_star_projection_residual(s);
    let norm = operator_norm(s);
    let norm_defect = (max_abs(s) > 0.0).then(|| (norm - 1.0).abs());
    PartialIsometryCheck {
        is_partial_isometry: residual <= tol,
        residual,
        norm,
        norm_defect,
    }
}

/// `max ‖PQ − QP‖_F` over pairs of projections in the set.
pub fn projections_commute_residual(set: &OperatorSet) -> f64 {
    let mut worst = 0.0f64;
    for (a, &i) in set.projections.iter().enumerate() {
        for &j in &set.projections[a + 1..] {
            let p = &set.elements[i];
            let q = &set.elements[j];
            worst = worst.max(frobenius(&(p * q - q * p)));
        }
    }
    worst
}

/// `max ‖E − Eᵀ‖_F` over elements with `‖E² − E‖_F ≤ tol`.
pub fn idempotent_symmetry_residual(set: &OperatorSet, tol: f64) -> f64 {
    set.elements
        .iter()
        .filter(|e| frobenius(&(*e * *e - *e)) <= tol)
        .map(|e| frobenius(&(e - e.transpose())))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankCheck {
    pub ok: bool,
    /// Largest trace over the positive part.
    pub r: f64,
    pub ranks: Vec<usize>,
}

pub fn check_rank_bound(set: &OperatorSet, tol: f64) -> Result<RankCheck> {
    let r = set
        .positive_part
        .iter()
        .map(|&i| set.elements[i].trace())
        .reduce(f64::max)
        .ok_or(Error::EmptyPositivePart)?;
    let bound = r.round().max(0.0) as usize;
    let ranks: Vec<usize> = set
        .elements
        .iter()
        .map(|m| numerical_rank(m, tol))
        .collect();
    Ok(RankCheck {
        ok: ranks.iter().all(|&k| k <= bound),
        r,
        ranks,
    })
}

/// One `x xᵀ` block of a nonnegative projection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionBlock {
    pub indices: Vec<usize>,
    pub x: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionDecomposition {
    pub blocks: Vec<ProjectionBlock>,
    pub zero_indices: Vec<usize>,
    /// Worst `|P_ij² − P_ii P_jj|` over support edges.
    pub entry_law_residual: f64,
    /// `‖P − Σ x_k x_kᵀ‖_F` with blocks embedded.
    pub reconstruction_residual: f64,
}

/// Connected components of an undirected graph given by an edge predicate.
fn components(n: usize, active: &[bool], edge: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] || !active[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < comp.len() {
            let a = comp[head];
            head += 1;
            for b in 0..n {
                if !seen[b] && active[b] && edge(a, b) {
                    seen[b] = true;
                    comp.push(b);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn require_nonnegative(a: &DMatrix<f64>, what: &str) -> Result<()> {
    if is_nonnegative(a) {
        Ok(())
    } else {
        Err(Error::PreconditionViolated(format!(
            "{what} has a negative entry"
        )))
    }
}

/// Splits a nonnegative projection into blocks `x_k x_kᵀ` with `x_k > 0`, `‖x_k‖ = 1`.
pub fn decompose_nonneg_projection(p: &DMatrix<f64>, tol: f64) -> Result<ProjectionDecomposition> {
    require_nonnegative(p, "projection")?;
    let (idem, sym) = projection_residuals(p);
    if idem > tol || sym > tol {
        return Err(Error::NotAProjection {
            residual: idem.max(sym),
        });
    }
    let n = p.nrows();
    let active: Vec<bool> = (0..n)
        .map(|i| (0..n).any(|j| p[(i, j)] > tol || p[(j, i)] > tol))
        .collect();
    let comps = components(n, &active, |a, b| p[(a, b)] > tol || p[(b, a)] > tol);
    let zero_indices: Vec<usize> = (0..n).filter(|&i| !active[i]).collect();

    let mut blocks = Vec::with_capacity(comps.len());
    let mut rebuilt = DMatrix::<f64>::zeros(n, n);
    let mut entry_law_residual = 0.0f64;
    for comp in comps {
        let pivot = *comp
            .iter()
            .max_by(|&&a, &&b| p[(a, a)].total_cmp(&p[(b, b)]))
            .expect("non-empty component");
        let root = p[(pivot, pivot)].sqrt();
        let x: Vec<f64> = comp.iter().map(|&i| p[(i, pivot)] / root).collect();

        let mut residual = 0.0f64;
        for (a, &i) in comp.iter().enumerate() {
            for (b, &j) in comp.iter().enumerate() {
                residual += (p[(i, j)] - x[a] * x[b]).powi(2);
                if p[(i, j)] > tol {
                    entry_law_residual =
                        entry_law_residual.max((p[(i, j)].powi(2) - p[(i, i)] * p[(j, j)]).abs());
                }
                rebuilt[(i, j)] = x[a] * x[b];
            }
        }
        let residual = residual.sqrt();
        if residual > tol || x.iter().any(|&v| v <= 0.0) {
            return Err(Error::BlockNotRankOne {
                indices: comp,
                residual,
            });
        }
        blocks.push(ProjectionBlock { indices: comp, x });
    }

    Ok(ProjectionDecomposition {
        blocks,
        zero_indices,
        entry_law_residual,
        reconstruction_residual: frobenius(&(p - rebuilt)),
    })
}

/// One rectangular block `u vᵀ` of a nonnegative partial isometry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsometryBlock {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// `(uᵀu)(vᵀv)`
    pub norm_product: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsometryDecomposition {
    pub blocks: Vec<IsometryBlock>,
    pub zero_rows: Vec<usize>,
    pub zero_cols: Vec<usize>,
    /// Every `norm_product` is within tolerance of 0 or 1.
    pub norm_products_binary: bool,
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let len = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / len).collect()
}

/// Splits a nonnegative partial isometry into rank-one rectangular blocks
/// over disjoint row and column sets.
pub fn decompose_partial_isometry(s: &DMatrix<f64>, tol: f64) -> Result<IsometryDecomposition> {
    require_nonnegative(s, "matrix")?;
    let residual = ss_star_projection_residual(s);
    if residual > tol {
        return Err(Error::NotAProjection { residual });
    }
    let n = s.nrows();
    // bipartite graph: rows are 0..n, columns n..2n
    let active: Vec<bool> = (0..2 * n)
        .map(|k| {
            if k < n {
                (0..n).any(|j| s[(k, j)] > tol)
            } else {
                (0..n).any(|i| s[(i, k - n)] > tol)
            }
        })
        .collect();
    let comps = components(2 * n, &active, |a, b| match (a < n, b < n) {
        (true, false) => s[(a, b - n)] > tol,
        (false, true) => s[(b, a - n)] > tol,
        _ => false,
    });

    let mut blocks = Vec::with_capacity(comps.len());
    for comp in comps {
        let rows: Vec<usize> = comp.iter().copied().filter(|&k| k < n).collect();
        let cols: Vec<usize> = comp.iter().filter(|&&k| k >= n).map(|&k| k - n).collect();
        let block = DMatrix::from_fn(rows.len(), cols.len(), |a, b| s[(rows[a], cols[b])]);

        let best_col = (0..cols.len())
            .max_by(|&a, &b| block.column(a).norm().total_cmp(&block.column(b).norm()))
            .expect("non-empty block");
        let best_row = (0..rows.len())
            .max_by(|&a, &b| block.row(a).norm().total_cmp(&block.row(b).norm()))
            .expect("non-empty block");
        let u_hat = normalized(block.column(best_col).iter().copied().collect());
        let v_hat = normalized(block.row(best_row).iter().copied().collect());
        let sigma: f64 = (0..rows.len())
            .flat_map(|a| (0..cols.len()).map(move |b| (a, b)))
            .map(|(a, b)| u_hat[a] * block[(a, b)] * v_hat[b])
            .sum();
        let residual = (0..rows.len())
            .flat_map(|a| (0..cols.len()).map(move |b| (a, b)))
            .map(|(a, b)| (block[(a, b)] - sigma * u_hat[a] * v_hat[b]).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual > tol || u_hat.iter().chain(&v_hat).any(|&x| x <= 0.0) {
            return Err(Error::BlockNotRankOne {
                indices: rows,
                residual,
            });
        }
        let root = sigma.sqrt();
        blocks.push(IsometryBlock {
            rows,
            cols,
            u: u_hat.iter().map(|a| a * root).collect(),
            v: v_hat.iter().map(|b| b * root).collect(),
            norm_product: sigma * sigma,
        });
    }

    let norm_products_binary = blocks
        .iter()
        .all(|b| b.norm_product.abs() <= tol.sqrt() || (b.norm_product - 1.0).abs() <= tol.sqrt());
    Ok(IsometryDecomposition {
        blocks,
        zero_rows: (0..n).filter(|&i| !active[i]).collect(),
        zero_cols: (0..n).filter(|&j| !active[n + j]).collect(),
        norm_products_binary,
    })
}

/// Worst relative gap between `S_ij²` and `(S Sᵀ)_ii (Sᵀ S)_jj` over entries above `tol`.
pub fn sqrt_xi_eta_residual(s: &DMatrix<f64>, tol: f64) -> Result<f64> {
    require_nonnegative(s, "matrix")?;
    let left = s * s.transpose();
    let right = s.transpose() * s;
    for (name, p) in [("S Sᵀ", &left), ("Sᵀ S", &right)] {
        let (idem, sym) = projection_residuals(p);
        if idem > tol || sym > tol {
            return Err(Error::PreconditionViolated(format!(
                "{name} is not a projection (residual {:e})",
                idem.max(sym)
            )));
        }
    }
    let n = s.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let v = s[(i, j)];
            if v > tol {
                let sq = v * v;
                worst = worst
                    .max((sq - left[(i, i)] * right[(j, j)]).abs() / sq.max(f64::MIN_POSITIVE));
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceReport {
    /// Distinct traces over the whole set.
    pub over_all: Vec<f64>,
    /// Distinct traces over the positive part.
    pub over_positive: Vec<f64>,
    /// For each index `i`, the distinct values of `S_ii` over the positive part.
    pub diagonal_families: Vec<Vec<f64>>,
}

pub fn trace_range_report(set: &OperatorSet, cluster_tol: f64) -> TraceReport {
    let over_all = cluster_values(
        set.elements.iter().map(|m| m.trace()).collect(),
        cluster_tol,
    );
    let over_positive = cluster_values(
        set.positive_part
            .iter()
            .map(|&i| set.elements[i].trace())
            .collect(),
        cluster_tol,
    );
    let diagonal_families = (0..set.dim())
        .map(|k| {
            cluster_values(
                set.positive_part
                    .iter()
                    .map(|&i| set.elements[i][(k, k)])
                    .collect(),
                cluster_tol,
            )
        })
        .collect();
    TraceReport {
        over_all,
        over_positive,
        diagonal_families,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorTolerances {
    pub tol: f64,
    pub idempotent_tol: f64,
    pub cluster_tol: f64,
}

impl Default for OperatorTolerances {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            idempotent_tol: DEFAULT_IDEMPOTENT_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElementVerdict {
    pub index: usize,
    pub partial_isometry: PartialIsometryCheck,
    pub positive_semidefinite: bool,
    pub projection: bool,
    pub rank: usize,
    pub trace: f64,
    pub nonnegative: bool,
    /// Present for nonnegative elements whose `S Sᵀ` and `Sᵀ S` are projections.
    pub sqrt_xi_eta_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: &'static str,
    pub holds: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OperatorReport {
    pub dim: usize,
    pub count: usize,
    pub self_adjoint_closed: bool,
    pub missing_adjoints: Vec<usize>,
    pub positive_part: Vec<usize>,
    pub projections: Vec<usize>,
    pub elements: Vec<ElementVerdict>,
    pub traces: TraceReport,
    pub r: Option<f64>,
    pub projection_commutativity_residual: f64,
    pub idempotent_symmetry_residual: f64,
    pub rank_bound_ok: Option<bool>,
    pub projection_decompositions: Vec<(usize, ProjectionDecomposition)>,
    pub assertions: Vec<Assertion>,
}

impl OperatorReport {
    pub fn all_hold(&self) -> bool {
        self.assertions.iter().all(|a| a.holds)
    }

    pub fn first_failure(&self) -> Option<&Assertion> {
        self.assertions.iter().find(|a| !a.holds)
    }
}

/// Runs every check on `elements` and collects the verdicts.
pub fn analyze(elements: &[DMatrix<f64>], tols: &OperatorTolerances) -> Result<OperatorReport> {
    let set = classify(elements, tols.tol)?;
    let tol = tols.tol;

    let verdicts: Vec<ElementVerdict> = set
        .elements
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let nonnegative = is_nonnegative(m);
            ElementVerdict {
                index: i,
                partial_isometry: check_partial_isometry(m, tol),
                positive_semidefinite: set.positive_part.contains(&i),
                projection: set.projections.contains(&i),
                rank: numerical_rank(m, tol),
                trace: m.trace(),
                nonnegative,
                sqrt_xi_eta_residual: if nonnegative {
                    sqrt_xi_eta_residual(m, tol).ok()
                } else {
                    None
                },
            }
        })
        .collect();

    let rank = check_rank_bound(&set, tol).ok();
    let commute = projections_commute_residual(&set);
    let idem = idempotent_symmetry_residual(&set, tol);
    let projection_decompositions = set
        .projections
        .iter()
        .filter(|&&i| is_nonnegative(&set.elements[i]))
        .filter_map(|&i| {
            decompose_nonneg_projection(&set.elements[i], tol)
                .ok()
                .map(|d| (i, d))
        })
        .collect();

    let worst_pi = verdicts
        .iter()
        .map(|v| {
            v.partial_isometry
                .residual
                .max(v.partial_isometry.norm_defect.unwrap_or(0.0))
        })
        .fold(0.0, f64::max);
    let worst_ss = verdicts
        .iter()
        .map(|v| v.partial_isometry.residual)
        .fold(0.0, f64::max);
    let rank_excess = rank
        .as_ref()
        .map(|rc| {
            let bound = rc.r.round();
            rc.ranks
                .iter()
                .map(|&k| k as f64 - bound)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .unwrap_or(f64::INFINITY);

    let assertions = vec![
        Assertion {
            name: "partial_isometry",
            holds: worst_pi <= tol,
            value: worst_pi,
            threshold: tol,
        },
        Assertion {
            name: "ss_transpose_projection",
            holds: worst_ss <= tol,
            value: worst_ss,
            threshold: tol,
        },
        Assertion {
            name: "idempotents_symmetric",
            holds: idem <= tols.idempotent_tol,
            value: idem,
            threshold: tols.idempotent_tol,
        },
        Assertion {
            name: "projections_commute",
            holds: commute <= tol,
            value: commute,
            threshold: tol,
        },
        Assertion {
            name: "rank_bound",
            holds: rank_excess <= 0.0,
            value: rank_excess,
            threshold: 0.0,
        },
    ];

    Ok(OperatorReport {
        dim: set.dim(),
        count: set.elements.len(),
        self_adjoint_closed: set.self_adjoint_closed,
        missing_adjoints: set.missing_adjoints.clone(),
        positive_part: set.positive_part.clone(),
        projections: set.projections.clone(),
        elements: verdicts,
        traces: trace_range_report(&set, tols.cluster_tol),
        r: rank.as_ref().map(|rc| rc.r),
        projection_commutativity_residual: commute,
        idempotent_symmetry_residual: idem,
        rank_bound_ok: rank.map(|rc| rc.ok),
        projection_decompositions,
        assertions,
    })
}
