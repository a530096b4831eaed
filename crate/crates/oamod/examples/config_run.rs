//! Drive the config-based runner from code: load the documented example
//! configuration, execute it, and summarize the report (the `oamod` binary
//! wraps exactly this path).
//!
//! Run with: cargo run --example config_run

use oamod::runner::{run, RunConfig};

fn main() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/config.example.json");
    let text = std::fs::read_to_string(&path).expect("documented example config");
    let config = RunConfig::from_json(&text).unwrap();

    let report = run(&config).unwrap();
    println!("verdict: {:?}", report.verdict);
    if let Some(d) = &report.decomposition {
        println!(
            "residual max {:.3e} (threshold {:.0e}), evaluations {}",
            d.residual.max.unwrap_or(0.0),
            d.residual.threshold,
            d.eval_budget_used
        );
        println!(
            "table blocks: {}",
            d.phi_table
                .iter()
                .map(|b| format!("{} units", b.units.len()))
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    println!(
        "orthogonal additivity: violation {:.2e} over {} pairs",
        report.orthogonal_additivity.max_violation, report.orthogonal_additivity.samples
    );
    println!("properties checked: {}", report.properties.len());
    for entry in report.properties.iter().filter(|e| !e.passed) {
        println!("  failed: {} at {:.3e}", entry.name, entry.max_violation);
    }
    println!("exit code would be {}", report.exit_code());
}
