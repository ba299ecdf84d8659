//! Supremal walk weights in the max-plus semiring, with divergence detection.
//!
//! cargo run --example walk_closure

use nonneg_semigroups::ext_real::ExtendedWeightMatrix;
use nonneg_semigroups::tropical::walk_supremum;

const NEG: f64 = f64::NEG_INFINITY;

fn show(label: &str, mu: &ExtendedWeightMatrix) {
    let w = walk_supremum(mu);
    println!("{label}");
    for x in 0..w.n() {
        let row: Vec<String> = (0..w.n())
            .map(|y| match w.weight(x, y) {
                Some(v) => format!("{:>6}", v.to_string()),
                None => format!("{:>6}", "+inf"),
            })
            .collect();
        println!("  {}", row.join(" "));
    }
    let pairs: Vec<String> = w
        .divergent_pairs()
        .iter()
        .map(|(x, y)| format!("({}, {})", x + 1, y + 1))
        .collect();
    println!("  divergent pairs: [{}]\n", pairs.join(", "));
}

fn main() {
    let two_cycle = ExtendedWeightMatrix::from_rows(&[[NEG, 1.0], [-1.0, NEG]]).unwrap();
    show("zero-weight 2-cycle", &two_cycle);

    let chain =
        ExtendedWeightMatrix::from_rows(&[[NEG, 2.0, NEG], [NEG, NEG, -3.0], [NEG, NEG, NEG]])
            .unwrap();
    show("acyclic chain 1 -> 2 -> 3", &chain);

    // vertex 1 has a positive loop; everything reachable through it diverges
    let looped =
        ExtendedWeightMatrix::from_rows(&[[0.5, 1.0, NEG], [NEG, NEG, NEG], [-1.0, NEG, NEG]])
            .unwrap();
    show("positive loop at 1", &looped);
}
