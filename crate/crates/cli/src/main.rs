use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use freedim_cli::{
    emit_report, run_from_path, write_atomically, CliError, Format, Scenario, TOL_ENV,
};

#[derive(Parser, Debug)]
#[command(name = "freedim", version, about = "Free entropy dimension workbench")]
struct Args {
    /// delta | dual_system | cutoff | group_finite | group_free | counterexample
    scenario: String,
    /// JSON scenario configuration.
    #[arg(long)]
    config: PathBuf,
    /// json | csv | text
    #[arg(long, default_value = "json")]
    format: String,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Timing and diagnostics on stderr.
    #[arg(long)]
    verbose: bool,
}

fn run(args: &Args) -> Result<(), CliError> {
    let scenario = Scenario::parse(&args.scenario)
        .ok_or_else(|| CliError::Config(format!("unknown scenario `{}`", args.scenario)))?;
    let format = Format::parse(&args.format)?;
    let env_tol = std::env::var(TOL_ENV).ok();
    let start = Instant::now();
    let report = run_from_path(&args.config, scenario, args.seed, env_tol.as_deref())?;
    let bytes = emit_report(&report, format)?;
    if args.verbose {
        eprintln!(
            "{scenario}: seed {}, config sha256 {}, {:.3} s",
            report.seed,
            report.config_hash,
            start.elapsed().as_secs_f64()
        );
    }
    match &args.output {
        Some(path) => write_atomically(path, &bytes),
        None => std::io::stdout().write_all(&bytes).map_err(CliError::Io),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("freedim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
