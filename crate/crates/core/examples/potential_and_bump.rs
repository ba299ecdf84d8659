//! Potentials dominating a walk closure, and the bump that makes every
//! weight finite while keeping walk suprema below a bound.
//!
//! cargo run --example potential_and_bump

use nonneg_semigroups::ext_real::ExtendedWeightMatrix;
use nonneg_semigroups::scaling::{
    auto_potential, bounded_potential, bump, potential_from_basepoint,
};
use nonneg_semigroups::tropical::walk_supremum;

const NEG: f64 = f64::NEG_INFINITY;

fn main() -> nonneg_semigroups::Result<()> {
    let mu =
        ExtendedWeightMatrix::from_rows(&[[NEG, 1.0, NEG], [-1.0, NEG, 0.5], [NEG, -2.0, NEG]])?;
    let w = walk_supremum(&mu);

    let p = auto_potential(&w)?;
    println!(
        "auto basepoint {} ({:?}): rho = {:?}",
        p.basepoint + 1,
        p.orientation,
        p.rho
    );
    println!("  max W(x,y) - rho(x) + rho(y) = {}", p.max_slack(&w));

    for x0 in 0..w.n() {
        match potential_from_basepoint(&w, x0) {
            Ok(p) => println!("basepoint {}: rho = {:?}", x0 + 1, p.rho),
            Err(e) => println!("basepoint {}: {e}", x0 + 1),
        }
    }

    let k = 2.0;
    let lambda = bump(&mu, k)?;
    println!("\nbump with K = {k}:");
    for row in lambda.rows() {
        let cells: Vec<String> = row
            .iter()
            .map(|v| format!("{:>5}", v.to_string()))
            .collect();
        println!("  {}", cells.join(" "));
    }
    let bounded = bounded_potential(&mu, k)?;
    println!("potential within [-K, K]: {:?}", bounded.rho);
    Ok(())
}
