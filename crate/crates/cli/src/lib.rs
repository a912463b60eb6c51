//! Batch runner: one JSON config in, one report out.

pub mod config;
pub mod error;
pub mod report;
pub mod run;

use std::path::Path;

use freedim_core::Tolerances;

pub use config::{Scenario, ScenarioConfig};
pub use error::CliError;
pub use report::{emit_report, Format};
pub use run::{run_scenario, ReportBody, RunReport};

/// Environment variable overriding the default residual threshold.
pub const TOL_ENV: &str = "FREEDIM_TOL";

/// Central defaults, then `FREEDIM_TOL`, then the config's own overrides.
pub fn resolve_tolerances(
    config: &ScenarioConfig,
    env_residual: Option<&str>,
) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    if let Some(raw) = env_residual {
        let v: f64 = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{TOL_ENV}={raw:?} is not a number")))?;
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Config(format!("{TOL_ENV} must be positive")));
        }
        tol.residual = v;
    }
    Ok(config.tolerances.unwrap_or_default().apply(tol))
}

/// Parses raw config bytes and runs `scenario`; `seed` overrides the config seed.
pub fn run_from_bytes(
    raw: &[u8],
    scenario: Scenario,
    seed: Option<u64>,
    env_residual: Option<&str>,
) -> Result<RunReport, CliError> {
    let text = std::str::from_utf8(raw).map_err(|e| CliError::Config(e.to_string()))?;
    let config = ScenarioConfig::from_json(text)?;
    let tolerances = resolve_tolerances(&config, env_residual)?;
    let seed = seed.or(config.seed).unwrap_or(0);
    let body = run_scenario(&config, scenario, seed, &tolerances)?;
    Ok(RunReport {
        scenario,
        seed,
        config_hash: report::config_hash(raw),
        tolerances,
        body,
    })
}

pub fn run_from_path(
    path: &Path,
    scenario: Scenario,
    seed: Option<u64>,
    env_residual: Option<&str>,
) -> Result<RunReport, CliError> {
    let raw = std::fs::read(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    run_from_bytes(&raw, scenario, seed, env_residual)
}

/// Writes through a sibling temporary file and a rename, so a reader never
/// sees a partial report.
pub fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Config(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(file_name);
    tmp_name.push(".partial");
    let tmp = path.with_file_name(tmp_name);
    std::fs::write(&tmp, bytes).map_err(CliError::Io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        CliError::Io(e)
    })
}
