//! Composition rules and the inequality `(f * g)(x, z) >= f(x, y) g(y, z)`.
//!
//! cargo run --example matrix_like_rules

use nonneg_semigroups::matrix::NonnegMatrix;
use nonneg_semigroups::semigroup::{matrix_like_check, matrix_like_defect, CompositionRule};

fn main() -> nonneg_semigroups::Result<()> {
    let fs = vec![
        NonnegMatrix::from_rows(&[[0.2, 1.5, 0.0], [0.0, 0.3, 2.0], [1.0, 0.0, 0.4]])?,
        NonnegMatrix::from_rows(&[[1.0, 0.0, 0.7], [0.5, 0.5, 0.0], [0.0, 2.5, 0.1]])?,
    ];
    for (label, rule) in [
        ("standard", CompositionRule::standard()),
        (
            "atom weights (1, 2, 3)",
            CompositionRule::atom_weighted(vec![1.0, 2.0, 3.0])?,
        ),
        (
            "atom weights (1, 0.5, 1)",
            CompositionRule::atom_weighted_unchecked(vec![1.0, 0.5, 1.0]),
        ),
    ] {
        println!(
            "{label:<26} matrix-like: {:<5} worst defect {:+.3e}",
            matrix_like_check(&fs, &rule, 1e-12),
            matrix_like_defect(&fs, &rule)
        );
    }
    Ok(())
}
