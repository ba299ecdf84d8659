//! Runs each CLI command on the bundled example files and prints the status
//! line of every report.
//!
//! cargo run --example json_reports

use std::path::Path;

use nonneg_semigroups::cli::{self, CommonOptions, CounterexampleArgs, ScaleArgs, TropicalArgs};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let read = |name: &str| std::fs::read_to_string(data.join(name)).expect("bundled example file");
    let opts = CommonOptions {
        reproducible: true,
        ..CommonOptions::default()
    };

    let reports = vec![
        (
            "tropical two_cycle",
            cli::cmd_tropical(&read("two_cycle.json"), &TropicalArgs::default(), &opts),
        ),
        (
            "scale ratio_three",
            cli::cmd_scale(&read("ratio_three.json"), &ScaleArgs::default(), &opts),
        ),
        (
            "scale doubling",
            cli::cmd_scale(&read("doubling.json"), &ScaleArgs::default(), &opts),
        ),
        (
            "binary conjugated_cycle",
            cli::cmd_binary(&read("conjugated_cycle.json"), &opts),
        ),
        (
            "binary half_diagonal",
            cli::cmd_binary(&read("half_diagonal.json"), &opts),
        ),
        (
            "operator matrix_units",
            cli::cmd_operator(&read("matrix_units.json"), &opts),
        ),
        (
            "operator doubled_units",
            cli::cmd_operator(&read("doubled_units.json"), &opts),
        ),
        (
            "counterexample 64/2",
            cli::cmd_counterexample(&CounterexampleArgs { len: 64, m_max: 2 }, &opts),
        ),
    ];
    for (label, r) in &reports {
        println!(
            "{label:<26} exit {}  {}",
            r.exit_code(),
            r.error.as_deref().unwrap_or("ok")
        );
    }
    println!(
        "\nfull report for 'scale ratio_three':\n{}",
        reports[1].1.to_json()
    );
}
