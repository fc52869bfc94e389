use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use krein_frames::io::{parse_spec, run, Command, IoError, Problem, RunOptions, ToleranceSpec};
use krein_frames::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Certify J-fusion frames and check their bounds, duals and transforms.
#[derive(Debug, Parser)]
#[command(name = "krein-frames", version)]
struct Cli {
    /// Task to run.
    #[arg(value_enum)]
    command: Command,
    /// Problem specification (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Seed for every random draw; falls back to KREIN_FRAMES_SEED, then the spec, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Random samples per sampling check.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    tol_sym: Option<f64>,
    #[arg(long)]
    tol_rank: Option<f64>,
    #[arg(long)]
    tol_def: Option<f64>,
    #[arg(long)]
    tol_num: Option<f64>,
    /// Index subset I1 for `identity`, comma-separated and 0-based; repeat
    /// the flag for several subsets. An empty string is the empty subset.
    #[arg(long, value_parser = parse_subset)]
    subset: Vec<Vec<usize>>,
}

fn parse_subset(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("not an index: {t:?}")))
        .collect()
}

fn resolve_seed(flag: Option<u64>, spec_seed: Option<u64>) -> Result<u64, IoError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(v) = std::env::var("KREIN_FRAMES_SEED") {
        return v
            .trim()
            .parse()
            .map_err(|_| IoError::Usage(format!("KREIN_FRAMES_SEED is not an integer: {v:?}")));
    }
    Ok(spec_seed.unwrap_or(0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(passed) => ExitCode::from(if passed { 0 } else { 1 }),
        Err(e) => {
            eprintln!("krein-frames: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cli: &Cli) -> Result<bool, IoError> {
    let text = std::fs::read_to_string(&cli.spec)
        .map_err(|e| IoError::Usage(format!("cannot read {}: {e}", cli.spec.display())))?;
    let spec = parse_spec(&text)?;
    let seed = resolve_seed(cli.seed, spec.seed)?;
    let flags = ToleranceSpec {
        tau_sym: cli.tol_sym,
        tau_rank: cli.tol_rank,
        tau_def: cli.tol_def,
        tau_num: cli.tol_num,
    };
    let tol = flags.apply(spec.tolerances.unwrap_or_default().apply(Tolerances::default()));
    let problem = Problem::resolve(&spec, tol, seed)?;
    let opts = RunOptions {
        seed,
        samples: cli.samples,
        subsets: if cli.subset.is_empty() {
            vec![vec![0]]
        } else {
            cli.subset.clone()
        },
    };
    let report = run(cli.command, &problem, &opts);
    match cli.format {
        Format::Json => {
            let json = serde_json::to_string_pretty(&report).map_err(|e| IoError::Usage(e.to_string()))?;
            println!("{json}");
        }
        Format::Text => print!("{}", report.text()),
    }
    eprint!("{}", report.summary());
    Ok(report.passed)
}
