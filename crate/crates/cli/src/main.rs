//! `pullback-lab <scenario> [--config FILE] [--out DIR] [--seed N]
//! [--format csv|json|both] [--jobs K] [--<key> VALUE ...]`
//!
//! Exit status: 0 success, 1 failed verification, 2 configuration or
//! validation error, 3 convergence failure, 4 I/O error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pullback_lab::Execution;

use pullback_lab_cli::config::{self, Format, Kind};
use pullback_lab_cli::error::CliError;
use pullback_lab_cli::scenarios::Run;

#[derive(Parser)]
#[command(
    name = "pullback-lab",
    version,
    about = "Extremal trajectories and pullback-attractor samples for the Heaviside inclusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form and discrete positive equilibria for constant b, omega.
    Equilibria(Common),
    /// Trajectories from one initial datum under each selection policy.
    Simulate(Common),
    /// Extremal complete trajectories on a time window.
    Extremal(Common),
    /// Pullback-attractor sample at one time.
    Pullback(Common),
    /// Distance to the limit attractor and equilibrium at checkpoints.
    Asymptotic(Common),
    /// Run the acceptance criteria.
    Verify(Common),
}

#[derive(Args)]
struct Common {
    /// TOML scenario file; defaults apply to anything it leaves out.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for sampling and bare random_switch policies (overrides sampling.seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Artifact format (overrides output.format).
    #[arg(long)]
    format: Option<Format>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long)]
    jobs: Option<usize>,
    /// Any configuration key as `--key value`, e.g. `--n_interior 127 --b 2`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "OVERRIDES")]
    overrides: Vec<String>,
}

fn execution(jobs: Option<usize>) -> Result<Execution, CliError> {
    match jobs {
        Some(0) => Err(CliError::Config("--jobs must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(k) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global()
                .map_err(|e| CliError::Config(format!("--jobs {k}: {e}")))?;
            Ok(Execution::Parallel)
        }
        _ => Ok(Execution::default()),
    }
}

fn run(kind: Kind, mut args: Common) -> Result<(), CliError> {
    let mut overrides = Vec::new();
    // Common flags given after the first override land in the trailing list.
    for (key, value) in config::parse_overrides(&args.overrides)? {
        let bad = |e: String| CliError::Config(format!("--{key} {value:?}: {e}"));
        match key.as_str() {
            "config" => args.config = Some(value.into()),
            "out" => args.out = Some(value.into()),
            "seed" => args.seed = Some(value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?),
            "format" => args.format = Some(value.parse().map_err(&bad)?),
            "jobs" => args.jobs = Some(value.parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?),
            _ => overrides.push((key, value)),
        }
    }
    if let Some(out) = &args.out {
        overrides.push(("output.dir".into(), format!("{:?}", out.display().to_string())));
    }
    if let Some(seed) = args.seed {
        overrides.push(("sampling.seed".into(), seed.to_string()));
    }
    if let Some(f) = args.format {
        let name = match f {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Both => "both",
        };
        overrides.push(("output.format".into(), format!("{name:?}")));
    }
    let cfg = config::load(args.config.as_deref(), &overrides)?;
    let exec = execution(args.jobs)?;
    let out = Run {
        kind,
        config: &cfg,
        exec,
    }
    .execute()?;
    for path in out.written() {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::Equilibria(a) => (Kind::Equilibria, a),
        Command::Simulate(a) => (Kind::Simulate, a),
        Command::Extremal(a) => (Kind::Extremal, a),
        Command::Pullback(a) => (Kind::Pullback, a),
        Command::Asymptotic(a) => (Kind::Asymptotic, a),
        Command::Verify(a) => (Kind::Verify, a),
    };
    match run(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pullback-lab {kind}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
