//! Diagonal scalings `d` with `f(x, y) <= d(x) / d(y)` for a single
//! nonnegative matrix, through the product supremum over walks.
//!
//! cargo run --example product_scaling

use nonneg_semigroups::matrix::NonnegMatrix;
use nonneg_semigroups::scaling::{
    bounded_scaling, is_compressed, mult_walk_supremum, synthesize_scaling,
};

fn main() -> nonneg_semigroups::Result<()> {
    let f = NonnegMatrix::from_rows(&[[0.0, 3.0, 0.0], [0.2, 0.0, 2.0], [0.1, 0.0, 0.0]])?;
    let c = mult_walk_supremum(&f);
    if c.has_divergence() {
        println!("product supremum diverges at {:?}", c.divergent_pairs());
        return Ok(());
    }
    let c = c.to_matrix()?;
    println!("C_f = {:?}", c.rows());
    println!("C_f compressed: {}", is_compressed(&c, 1e-12));

    let d = synthesize_scaling(&f)?;
    println!("d = {:?} (normalized {:?})", d.values(), d.normalized());
    println!("max f(x,y) d(y)/d(x) = {}", d.max_violation(&f));

    let m = c.max_entry().max(1.0);
    let b = bounded_scaling(&f, m)?;
    println!("bounded with M = {m}: d = {:?}", b.values());
    println!("  max violation {}", b.max_violation(&f));
    Ok(())
}
