//! Thin CLI over the library runner: read a JSON config, execute, write the
//! JSON report to --out or stdout. Logs go to stderr.
//!
//! Exit codes: 0 on success (including expected failures of the
//! counterexample maps), 1 when an unexpected invariant breaks (a partial
//! report is still written), 2 on configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use oamod::runner::{run, RunConfig};

#[derive(Parser)]
#[command(name = "oamod", version, about = "Decompose orthogonally additive maps on Hilbert modules over matrix algebras")]
struct Args {
    /// Path to the JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Override the seed from the config file.
    #[arg(long)]
    seed: Option<u64>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Suppress progress logging on stderr.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();

    let text = match std::fs::read_to_string(&args.config) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read config {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let mut config = match RunConfig::from_json(&text) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }

    if !args.quiet {
        eprintln!(
            "running map '{}' with seed {} and {} samples",
            serde_json::to_value(&config.map)
                .ok()
                .and_then(|v| v.get("kind").cloned())
                .map(|v| v.as_str().unwrap_or_default().to_string())
                .unwrap_or_default(),
            config.seed,
            config.samples
        );
    }

    let report = match run(&config) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let rendered = report.to_json();
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered + "\n") {
                eprintln!("error: cannot write report to {}: {e}", path.display());
                return ExitCode::from(1);
            }
            if !args.quiet {
                eprintln!("report written to {}", path.display());
            }
        }
        None => println!("{rendered}"),
    }

    if !args.quiet {
        eprintln!("verdict: {:?}", report.verdict);
    }
    ExitCode::from(u8::try_from(report.exit_code()).unwrap_or(1))
}
