//! Projection and partial-isometry structure of a self-adjoint set of
//! matrices: partial isometries, rank bound, the geometric-mean entry law
//! and rank-one block decompositions of nonnegative projections.
//!
//! cargo run --example operator_report

use nalgebra::DMatrix;
use nonneg_semigroups::operator::{analyze, decompose_nonneg_projection, OperatorTolerances};

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

fn main() -> nonneg_semigroups::Result<()> {
    let n = 3;
    let mut set = vec![DMatrix::zeros(n, n)];
    for i in 0..n {
        for j in 0..n {
            set.push(unit(n, i, j));
        }
    }
    let report = analyze(&set, &OperatorTolerances::default())?;
    println!("matrix units of size {n}: {} elements", report.count);
    for a in &report.assertions {
        println!(
            "  {:<24} holds = {:<5} value = {:e}",
            a.name, a.holds, a.value
        );
    }
    println!(
        "  traces over the positive part: {:?}",
        report.traces.over_positive
    );

    // two doubled units: not partial isometries
    let doubled = vec![unit(2, 0, 1) * 2.0, unit(2, 1, 0) * 2.0];
    let report = analyze(&doubled, &OperatorTolerances::default())?;
    println!(
        "\ndoubled units: first failure {:?}",
        report.first_failure().map(|a| a.name)
    );

    let x = [0.6, 0.8];
    let p = DMatrix::from_fn(3, 3, |i, j| if i < 2 && j < 2 { x[i] * x[j] } else { 0.0 });
    let dec = decompose_nonneg_projection(&p, 1e-10)?;
    for b in &dec.blocks {
        let idx: Vec<usize> = b.indices.iter().map(|i| i + 1).collect();
        println!("\nblock on {idx:?}: x = {:?}", b.x);
    }
    println!(
        "entry law residual {:e}, reconstruction {:e}",
        dec.entry_law_residual, dec.reconstruction_residual
    );
    Ok(())
}
