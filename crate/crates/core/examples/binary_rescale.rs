//! Recovering 0/1 matrices from a diagonally conjugated semigroup whose
//! diagonals are all 0 or 1.
//!
//! cargo run --example binary_rescale

use nonneg_semigroups::matrix::NonnegMatrix;
use nonneg_semigroups::semigroup::binary_diagonal_rescale_default;

fn main() -> nonneg_semigroups::Result<()> {
    let d = [3.0, 1.0, 0.25, 7.0];
    let conj = |b: &[[f64; 4]; 4]| {
        let rows: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| d[i] * b[i][j] / d[j]).collect())
            .collect();
        NonnegMatrix::from_rows(&rows)
    };
    let cycle = [
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
    ];
    let partial = [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ];
    let gens = vec![conj(&cycle)?, conj(&partial)?];

    let r = binary_diagonal_rescale_default(&gens)?;
    println!("closure size {}", r.closure.len());
    println!("recovered d (normalized) = {:?}", r.d.normalized());
    println!(
        "conjugating d (normalized) = {:?}",
        d.iter().map(|v| v / d[0]).collect::<Vec<_>>()
    );
    for (i, g) in r.rescaled.generators().iter().enumerate() {
        println!("rescaled generator {}: {:?}", i + 1, g.rows());
    }

    let bad = NonnegMatrix::from_rows(&[[0.5, 1.0], [1.0, 0.0]])?;
    if let Err(e) = binary_diagonal_rescale_default(&[bad]) {
        println!("\nnon-binary diagonal: {e}");
    }
    Ok(())
}
