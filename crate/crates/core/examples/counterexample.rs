//! A semigroup of nonnegative projections with traces in {1, 2} whose first
//! diagonal entries take infinitely many values, checked at finite truncation.
//!
//! cargo run --example counterexample [-- N M_MAX]

use nonneg_semigroups::counterexample::{build_instance, tolerance, verify_all};

fn main() -> nonneg_semigroups::Result<()> {
    let mut args = std::env::args().skip(1);
    let len = args.next().and_then(|a| a.parse().ok()).unwrap_or(256);
    let m_max = args.next().and_then(|a| a.parse().ok()).unwrap_or(5);

    let inst = build_instance(len, m_max)?;
    let report = verify_all(&inst);
    println!("N = {len}, m_max = {m_max}, tolerance {:e}", tolerance(len));
    for c in &report.norms {
        println!(
            "m = {}: |g|^2 = {:.17} (closed form {:.17}), exact truncation error {:e}",
            c.m, c.g_norm_sq, c.g_closed_form, c.g_truncation
        );
    }
    println!("traces: P {}, Q_m {}", inst.p().trace(), inst.q(1).trace());
    println!(
        "(1,1) entries of P, Q_1, ...: {:?}",
        report.diagonal_family.entries
    );
    println!("largest floating residual {:e}", report.max_residual);
    println!(
        "largest exact truncation residual {:e}",
        report.max_truncation
    );
    println!("passed: {}", report.passed);
    Ok(())
}
