//! Command implementations behind the `nnsg` binary.
//!
//! Each command takes the raw input text plus parsed flags and returns a
//! [`Report`]; exit codes follow [`Status`]: 0 pass, 1 a property failed,
//! 2 divergence or an incomplete closure prevented certification, 3 invalid
//! input. Indices in reports are 1-based.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::counterexample::{self, build_instance};
use crate::error::Error;
use crate::ext_real::ExtReal;
use crate::io::MatrixSetFile;
use crate::operator::{self, OperatorTolerances};
use crate::report::{self, num, Report, Status};
use crate::scaling::{self, AdditivePotential, Orientation, DEFAULT_ABS_TOL};
use crate::semigroup::{
    binary_diagonal_rescale, bounded_semigroup_scaling, entrywise_bound_report, generate_closure,
    indecomposability_witness, semigroup_scaling, ClosureOptions, ClosureStatus,
    DominationCertificate, Verification, DEFAULT_CAP, DEFAULT_DEDUP_TOL,
};
use crate::tropical::{walk_supremum, WalkClosure, POSITIVE_CYCLE_THRESHOLD};

/// Flags shared by every command. Flags override the file's `config`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CommonOptions {
    pub tol: Option<f64>,
    pub cap: Option<usize>,
    pub strict: bool,
    pub reproducible: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TropicalArgs {
    /// Name of the matrix used as `μ`; the first one when absent.
    pub matrix: Option<String>,
    /// 1-based.
    pub basepoint: Option<usize>,
    pub bump: Option<f64>,
    /// Require a potential even without an explicit basepoint.
    pub potential: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleArgs {
    pub m: Option<f64>,
    /// 1-based position at which `s(u, v)` is reported.
    pub u: usize,
    pub v: usize,
}

impl Default for ScaleArgs {
    fn default() -> Self {
        Self {
            m: None,
            u: 1,
            v: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleArgs {
    pub len: usize,
    pub m_max: u32,
}

impl Default for CounterexampleArgs {
    fn default() -> Self {
        Self {
            len: counterexample::DEFAULT_LEN,
            m_max: counterexample::DEFAULT_M_MAX,
        }
    }
}

fn finish(mut r: Report, opts: &CommonOptions) -> Report {
    r.set(
        "settings",
        json!({
            "tol": opts.tol.map(num),
            "cap": opts.cap,
            "strict": opts.strict,
        }),
    );
    r.stamp(opts.reproducible);
    r
}

fn invalid(mut r: Report, e: &Error, opts: &CommonOptions) -> Report {
    r.set("failure", report::error_value(e));
    r.fail(Status::InvalidInput, e.to_string());
    finish(r, opts)
}

fn parse(r: &mut Report, text: &str) -> Result<MatrixSetFile, Error> {
    let file = MatrixSetFile::parse(text)?;
    r.set("matrix_names", json!(file.names()));
    Ok(file)
}

fn walk_matrix(w: &WalkClosure) -> Value {
    let n = w.n();
    Value::Array(
        (0..n)
            .map(|x| {
                Value::Array(
                    (0..n)
                        .map(|y| w.weight(x, y).map_or(json!("inf"), report::ext))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn potential_value(p: &AdditivePotential, w: &WalkClosure) -> Value {
    json!({
        "rho": report::nums(&p.rho),
        "basepoint": p.basepoint + 1,
        "orientation": match p.orientation {
            Orientation::IntoBasepoint => "into_basepoint",
            Orientation::OutOfBasepoint => "out_of_basepoint",
        },
        "max_slack": num(p.max_slack(w)),
    })
}

/// `max W(x, y) + W(y, z) − W(x, z)` over finite `W(x, y)`, `W(y, z)`.
fn triangle_defect(w: &WalkClosure) -> f64 {
    let n = w.n();
    let fin = |x, y| w.weight(x, y).and_then(ExtReal::finite);
    let mut worst = f64::NEG_INFINITY;
    for x in 0..n {
        for y in 0..n {
            let Some(a) = fin(x, y) else { continue };
            for z in 0..n {
                let Some(b) = fin(y, z) else { continue };
                let c = w.weight(x, z).map_or(f64::INFINITY, ExtReal::value);
                worst = worst.max(a + b - c);
            }
        }
    }
    worst
}

fn status_for(e: &Error) -> Status {
    match e {
        Error::Divergent { .. }
        | Error::BasepointUnusable { .. }
        | Error::ClosureIncomplete { .. } => Status::NotCertified,
        Error::NotIndecomposable { .. }
        | Error::NotBinaryDiagonal { .. }
        | Error::NotBinaryAfterRescale { .. }
        | Error::NotAProjection { .. }
        | Error::BlockNotRankOne { .. } => Status::PropertyFailed,
        Error::PreconditionViolated(_) => Status::NotCertified,
        _ => Status::InvalidInput,
    }
}

pub fn cmd_tropical(text: &str, args: &TropicalArgs, opts: &CommonOptions) -> Report {
    let mut r = Report::new("tropical", text.as_bytes());
    let file = match parse(&mut r, text) {
        Ok(f) => f,
        Err(e) => return invalid(r, &e, opts),
    };
    let tol = opts
        .tol
        .or(file.config().tol)
        .unwrap_or(POSITIVE_CYCLE_THRESHOLD);
    let named = match &args.matrix {
        Some(name) => file.get(name),
        None => file.matrices.first(),
    };
    let Some(named) = named else {
        return invalid(
            r,
            &Error::InvalidInput("no matrix selected as mu".into()),
            opts,
        );
    };
    let mu = match named.extended() {
        Ok(m) => m,
        Err(e) => return invalid(r, &e, opts),
    };
    if let Some(b) = args.basepoint {
        if b == 0 || b > mu.n() {
            let e = Error::InvalidInput(format!("basepoint {b} out of range 1..={}", mu.n()));
            return invalid(r, &e, opts);
        }
    }

    let w = walk_supremum(&mu);
    r.set("mu_name", json!(named.name));
    r.set("walk_supremum", walk_matrix(&w));
    r.set("divergent_pairs", report::pairs(w.divergent_pairs()));
    r.set(
        "positive_cycle_vertices",
        report::indices(&w.positive_cycle_vertices()),
    );
    if !w.has_divergence() {
        let defect = triangle_defect(&w);
        r.set("triangle_defect", num(defect));
        if defect > tol {
            r.fail(
                Status::PropertyFailed,
                format!("triangle inequality violated by {defect:e}"),
            );
        }
    }

    let requested = args.basepoint.is_some() || args.potential;
    let potential = match args.basepoint {
        Some(b) => scaling::potential_from_basepoint(&w, b - 1),
        None => scaling::auto_potential(&w),
    };
    match potential {
        Ok(p) => {
            let slack = p.max_slack(&w);
            r.set("potential", potential_value(&p, &w));
            if slack > tol {
                r.fail(
                    Status::PropertyFailed,
                    format!("potential misses domination by {slack:e}"),
                );
            }
        }
        Err(e) => {
            r.set("potential", Value::Null);
            r.set("potential_failure", report::error_value(&e));
            if requested {
                r.fail(status_for(&e), e.to_string());
            }
        }
    }

    if let Some(k) = args.bump {
        if !(k.is_finite() && k > 0.0) {
            return invalid(
                r,
                &Error::InvalidInput(format!("--bump must be a positive real, got {k}")),
                opts,
            );
        }
        match scaling::bump(&mu, k) {
            Ok(lambda) => {
                let wl = walk_supremum(&lambda);
                let n = mu.n();
                let mut below = true;
                let mut closure_ordered = true;
                let mut within_k = true;
                for x in 0..n {
                    for y in 0..n {
                        below &= mu.get(x, y) <= lambda.get(x, y);
                        let l = lambda.get(x, y).value();
                        within_k &= (-k..=k).contains(&l);
                        let wm = w.weight(x, y).map_or(f64::INFINITY, ExtReal::value);
                        let wv = wl.weight(x, y).map_or(f64::INFINITY, ExtReal::value);
                        closure_ordered &= wm <= wv && wv <= k + POSITIVE_CYCLE_THRESHOLD;
                    }
                }
                let lambda_rows: Vec<Vec<f64>> = lambda
                    .rows()
                    .iter()
                    .map(|row| row.iter().map(|e| e.value()).collect())
                    .collect();
                let bounded = scaling::bounded_potential(&mu, k).ok();
                r.set(
                    "bump",
                    json!({
                        "k": num(k),
                        "lambda": report::rows(&lambda_rows),
                        "walk_supremum": walk_matrix(&wl),
                        "mu_below_lambda": below,
                        "closures_ordered": closure_ordered,
                        "entries_within_k": within_k,
                        "bounded_potential": bounded.map(|p| potential_value(&p, &wl)),
                    }),
                );
                if !(below && closure_ordered && within_k) {
                    r.fail(
                        Status::PropertyFailed,
                        "bump output violates its guarantees",
                    );
                }
            }
            Err(e) => {
                r.set("bump", Value::Null);
                r.set("bump_failure", report::error_value(&e));
                r.fail(Status::NotCertified, e.to_string());
            }
        }
    }
    finish(r, opts)
}

fn closure_options(file: &MatrixSetFile, opts: &CommonOptions) -> ClosureOptions {
    let cfg = file.config();
    ClosureOptions {
        cap: opts.cap.or(cfg.cap).unwrap_or(DEFAULT_CAP),
        dedup_tol: cfg.dedup_tol.unwrap_or(DEFAULT_DEDUP_TOL),
    }
}

fn closure_status(s: ClosureStatus) -> Value {
    match s {
        ClosureStatus::Complete => json!({"state": "complete"}),
        ClosureStatus::Capped { cap, overflow } => {
            json!({"state": "capped", "cap": cap, "overflow": overflow})
        }
    }
}

fn certificate_value(c: &DominationCertificate) -> Value {
    json!({
        "d": report::nums(c.d.values()),
        "d_normalized": report::nums(&c.d.normalized()),
        "basepoint": c.d.basepoint().map(|b| b + 1),
        "bounds": c.d.bounds().map(num),
        "verified_against": match c.verified_against {
            Verification::CompleteClosure => json!({"kind": "complete_closure"}),
            Verification::EnumeratedPrefix(k) => json!({"kind": "enumerated_prefix", "count": k}),
        },
        "max_violation": num(c.max_violation),
    })
}

pub fn cmd_scale(text: &str, args: &ScaleArgs, opts: &CommonOptions) -> Report {
    let mut r = Report::new("scale", text.as_bytes());
    let file = match parse(&mut r, text) {
        Ok(f) => f,
        Err(e) => return invalid(r, &e, opts),
    };
    let (gens, rule) = match file.nonneg_all().and_then(|g| Ok((g, file.rule()?))) {
        Ok(v) => v,
        Err(e) => return invalid(r, &e, opts),
    };
    if gens.is_empty() {
        return invalid(r, &Error::InvalidInput("no generators given".into()), opts);
    }
    let n = file.dim;
    if !(1..=n).contains(&args.u) || !(1..=n).contains(&args.v) {
        let e = Error::InvalidInput(format!("--u/--v must lie in 1..={n}"));
        return invalid(r, &e, opts);
    }
    if let Some(m) = args.m {
        if !(m.is_finite() && m >= 1.0) {
            return invalid(
                r,
                &Error::InvalidInput(format!("--M must be a real >= 1, got {m}")),
                opts,
            );
        }
    }
    let tol = opts.tol.or(file.config().tol).unwrap_or(DEFAULT_ABS_TOL);

    let witness = indecomposability_witness(&gens);
    r.set("indecomposable", json!(witness.is_none()));
    if let Some((row, col)) = witness {
        let e = Error::NotIndecomposable { row, col };
        r.set("failure", report::error_value(&e));
        r.fail(Status::NotCertified, e.to_string());
        return finish(r, opts);
    }

    let closure = match generate_closure(&gens, &rule, &closure_options(&file, opts)) {
        Ok(c) => c,
        Err(e) => return invalid(r, &e, opts),
    };
    r.set("closure_size", json!(closure.len()));
    r.set("closure_status", closure_status(closure.status()));
    if !closure.is_complete() && opts.strict {
        r.fail(
            Status::NotCertified,
            format!("closure enumeration stopped at {} elements", closure.len()),
        );
    }

    let bound = entrywise_bound_report(&closure);
    let defect = scaling::compression_defect(&bound.sup);
    r.set(
        "sup_function",
        json!({
            "s": report::nonneg(&bound.sup),
            "global_max": num(bound.global_max),
            "lower_bound": bound.lower_bound,
            "compression_defect": num(defect),
            "s_uv": num(bound.sup.get(args.u - 1, args.v - 1)),
        }),
    );
    if closure.is_complete() && defect > tol {
        r.fail(
            Status::PropertyFailed,
            format!("sup function is not compressed (defect {defect:e})"),
        );
    }

    let cert = match args.m {
        Some(m) => bounded_semigroup_scaling(&closure, m),
        None => semigroup_scaling(&closure, args.u - 1, args.v - 1).map(|(c, _)| c),
    };
    match cert {
        Ok(c) => {
            r.set("certificate", certificate_value(&c));
            if c.max_violation > 1.0 + tol {
                r.fail(
                    Status::PropertyFailed,
                    format!("certificate violated: max_violation = {}", c.max_violation),
                );
            }
        }
        Err(e) => {
            r.set("certificate", Value::Null);
            r.set("failure", report::error_value(&e));
            r.fail(status_for(&e), e.to_string());
        }
    }
    finish(r, opts)
}

pub fn cmd_binary(text: &str, opts: &CommonOptions) -> Report {
    let mut r = Report::new("binary", text.as_bytes());
    let file = match parse(&mut r, text) {
        Ok(f) => f,
        Err(e) => return invalid(r, &e, opts),
    };
    let gens = match file.nonneg_all() {
        Ok(g) if !g.is_empty() => g,
        Ok(_) => return invalid(r, &Error::InvalidInput("no generators given".into()), opts),
        Err(e) => return invalid(r, &e, opts),
    };
    let tol = opts.tol.or(file.config().tol).unwrap_or(DEFAULT_ABS_TOL);

    match binary_diagonal_rescale(&gens, &closure_options(&file, opts), tol) {
        Ok(b) => {
            let max_deviation = b
                .rescaled
                .elements()
                .iter()
                .flat_map(|m| m.rows().into_iter().flatten())
                .map(|v| v.abs().min((v - 1.0).abs()))
                .fold(0.0, f64::max);
            let rescaled_generators: Vec<Value> = b
                .rescaled
                .generator_indices()
                .iter()
                .zip(file.names())
                .map(|(&i, name)| json!({"name": name, "entries": report::nonneg(&b.rescaled.elements()[i])}))
                .collect();
            r.set("d", report::nums(b.d.values()));
            r.set("d_normalized", report::nums(&b.d.normalized()));
            r.set("certificate", certificate_value(&b.certificate));
            r.set("closure_size", json!(b.closure.len()));
            r.set("rescaled_generators", Value::Array(rescaled_generators));
            r.set("max_binary_deviation", num(max_deviation));
            if max_deviation > tol {
                r.fail(
                    Status::PropertyFailed,
                    format!("rescaled entries deviate from {{0, 1}} by {max_deviation:e}"),
                );
            }
        }
        Err(e) => {
            r.set("failure", report::error_value(&e));
            r.fail(status_for(&e), e.to_string());
        }
    }
    finish(r, opts)
}

pub fn cmd_operator(text: &str, opts: &CommonOptions) -> Report {
    let mut r = Report::new("operator", text.as_bytes());
    let file = match parse(&mut r, text) {
        Ok(f) => f,
        Err(e) => return invalid(r, &e, opts),
    };
    let elements = match file.dense_all() {
        Ok(e) if !e.is_empty() => e,
        Ok(_) => return invalid(r, &Error::InvalidInput("the set is empty".into()), opts),
        Err(e) => return invalid(r, &e, opts),
    };
    let tols = OperatorTolerances {
        tol: opts
            .tol
            .or(file.config().tol)
            .unwrap_or(operator::DEFAULT_TOL),
        ..OperatorTolerances::default()
    };
    let rep = match operator::analyze(&elements, &tols) {
        Ok(rep) => rep,
        Err(e) => return invalid(r, &e, opts),
    };
    let names = file.names();
    let named = |idx: &[usize]| json!(idx.iter().map(|&i| names[i]).collect::<Vec<_>>());

    let verdicts: Vec<Value> = rep
        .elements
        .iter()
        .map(|v| {
            json!({
                "name": names[v.index],
                "partial_isometry": v.partial_isometry.is_partial_isometry,
                "ss_transpose_residual": num(v.partial_isometry.residual),
                "norm": num(v.partial_isometry.norm),
                "norm_defect": v.partial_isometry.norm_defect.map(num),
                "positive_semidefinite": v.positive_semidefinite,
                "projection": v.projection,
                "rank": v.rank,
                "trace": num(v.trace),
                "nonnegative": v.nonnegative,
                "sqrt_xi_eta_residual": v.sqrt_xi_eta_residual.map(num),
            })
        })
        .collect();
    let decompositions: Vec<Value> = rep
        .projection_decompositions
        .iter()
        .map(|(i, d)| {
            json!({
                "name": names[*i],
                "blocks": d.blocks.iter().map(|b| json!({
                    "indices": report::indices(&b.indices),
                    "x": report::nums(&b.x),
                })).collect::<Vec<_>>(),
                "zero_indices": report::indices(&d.zero_indices),
                "entry_law_residual": num(d.entry_law_residual),
                "reconstruction_residual": num(d.reconstruction_residual),
            })
        })
        .collect();
    let families: Vec<Value> = rep
        .traces
        .diagonal_families
        .iter()
        .enumerate()
        .map(|(i, vals)| json!({"index": i + 1, "values": report::nums(vals)}))
        .collect();
    let assertions: Vec<Value> = rep
        .assertions
        .iter()
        .map(|a| json!({"name": a.name, "holds": a.holds, "value": num(a.value), "threshold": num(a.threshold)}))
        .collect();

    r.set("dim", json!(rep.dim));
    r.set("count", json!(rep.count));
    r.set("self_adjoint_closed", json!(rep.self_adjoint_closed));
    r.set("missing_adjoints", named(&rep.missing_adjoints));
    r.set("positive_part", named(&rep.positive_part));
    r.set("projections", named(&rep.projections));
    r.set("elements", Value::Array(verdicts));
    r.set(
        "traces",
        json!({
            "over_all": report::nums(&rep.traces.over_all),
            "over_positive": report::nums(&rep.traces.over_positive),
            "diagonal_families": families,
        }),
    );
    r.set("r", rep.r.map_or(Value::Null, num));
    r.set("rank_bound_ok", json!(rep.rank_bound_ok));
    r.set(
        "projection_commutativity_residual",
        num(rep.projection_commutativity_residual),
    );
    r.set(
        "idempotent_symmetry_residual",
        num(rep.idempotent_symmetry_residual),
    );
    r.set("projection_decompositions", Value::Array(decompositions));
    r.set("assertions", Value::Array(assertions));
    if let Some(a) = rep.first_failure() {
        r.set("failed_assertion", json!(a.name));
        r.fail(
            Status::PropertyFailed,
            format!(
                "assertion {} failed: value {:e} exceeds {:e}",
                a.name, a.value, a.threshold
            ),
        );
    }
    finish(r, opts)
}

pub fn cmd_counterexample(args: &CounterexampleArgs, opts: &CommonOptions) -> Report {
    let key = format!("counterexample N={} m_max={}", args.len, args.m_max);
    let mut r = Report::new("counterexample", key.as_bytes());
    let inst = match build_instance(args.len, args.m_max) {
        Ok(i) => i,
        Err(e) => return invalid(r, &e, opts),
    };
    let tol = opts
        .tol
        .unwrap_or_else(|| counterexample::tolerance(args.len));
    let rep = counterexample::verify_with_tolerance(&inst, tol);
    r.set(
        "verification",
        serde_json::to_value(&rep).expect("finite report"),
    );
    if !rep.passed {
        r.fail(
            Status::PropertyFailed,
            format!(
                "largest residual {:e} exceeds {:e}",
                rep.max_residual, rep.tolerance
            ),
        );
    }
    finish(r, opts)
}

/// Report for input that could not be read at all.
pub fn unreadable(
    command: &'static str,
    path: &Path,
    e: &std::io::Error,
    opts: &CommonOptions,
) -> Report {
    let r = Report::new(command, path.to_string_lossy().as_bytes());
    invalid(
        r,
        &Error::InvalidInput(format!("cannot read {}: {e}", path.display())),
        opts,
    )
}

/// Writes the report to `output`, or stdout when absent.
pub fn emit(report: &Report, output: Option<&Path>) -> std::io::Result<()> {
    let text = report.to_json();
    match output {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
