//! Closure of a finitely generated semigroup, its sup function, and a
//! diagonal certificate bounding every element.
//!
//! cargo run --example semigroup_certificate

use nonneg_semigroups::matrix::NonnegMatrix;
use nonneg_semigroups::scaling::is_compressed;
use nonneg_semigroups::semigroup::{
    entrywise_bound_report, generate_closure, semigroup_scaling, sup_function, ClosureOptions,
    CompositionRule,
};

fn main() -> nonneg_semigroups::Result<()> {
    // a 3-cycle and a partial permutation, conjugated by diag(1, 4, 0.5)
    let d = [1.0, 4.0, 0.5];
    let conj = |b: [[f64; 3]; 3]| {
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|i| (0..3).map(|j| d[i] * b[i][j] / d[j]).collect())
            .collect();
        NonnegMatrix::from_rows(&rows)
    };
    let gens = vec![
        conj([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])?,
        conj([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])?,
    ];

    let closure = generate_closure(
        &gens,
        &CompositionRule::Standard,
        &ClosureOptions::default(),
    )?;
    println!(
        "closure: {} elements, {:?}",
        closure.len(),
        closure.status()
    );

    let sup = sup_function(&closure);
    println!("sup function (exact = {}): {:?}", sup.exact, sup.s.rows());
    println!("compressed: {}", is_compressed(&sup.s, 1e-9));

    let (cert, s11) = semigroup_scaling(&closure, 0, 0)?;
    println!("s(1, 1) = {s11}");
    println!("d = {:?}", cert.d.normalized());
    println!(
        "verified against {:?}, max violation {}",
        cert.verified_against, cert.max_violation
    );

    // doubling generators never close: the bound report is a lower bound
    let grow = vec![
        NonnegMatrix::unit(2, 0, 1, 2.0)?,
        NonnegMatrix::unit(2, 1, 0, 2.0)?,
    ];
    let capped = generate_closure(
        &grow,
        &CompositionRule::Standard,
        &ClosureOptions {
            cap: 40,
            ..Default::default()
        },
    )?;
    let report = entrywise_bound_report(&capped);
    println!(
        "\ndoubling pair: {:?}, global max {} (lower bound: {})",
        capped.status(),
        report.global_max,
        report.lower_bound
    );
    Ok(())
}
