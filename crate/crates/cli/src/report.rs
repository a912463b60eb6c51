//! Report envelopes and the json / csv / text renderings.

use std::fmt::Write as _;

use freedim_core::cutoff::sweep_csv;
use freedim_core::Tolerances;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Scenario;
use crate::error::CliError;
use crate::run::{ReportBody, RunReport};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "freedim";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    pub fn parse(name: &str) -> Result<Format, CliError> {
        match name {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(CliError::UnsupportedFormat(format!(
                "unknown format `{other}`"
            ))),
        }
    }
}

pub fn config_hash(raw: &[u8]) -> String {
    let digest = Sha256::digest(raw);
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Serialize)]
struct ToleranceEcho {
    residual: f64,
    rank: f64,
    well_defined: f64,
    invariance: f64,
    dimension: f64,
}

impl From<&Tolerances> for ToleranceEcho {
    fn from(t: &Tolerances) -> Self {
        Self {
            residual: t.residual,
            rank: t.rank,
            well_defined: t.well_defined,
            invariance: t.invariance,
            dimension: t.dimension,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    tool: &'static str,
    version: &'static str,
    scenario: Scenario,
    seed: u64,
    config_hash: &'a str,
    tolerances: ToleranceEcho,
    #[serde(flatten)]
    results: &'a ReportBody,
}

/// Renders a report. Wall-clock time is deliberately absent so that equal
/// inputs give byte-identical output.
pub fn emit_report(report: &RunReport, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let envelope = Envelope {
                schema: SCHEMA_VERSION,
                tool: TOOL,
                version: VERSION,
                scenario: report.scenario,
                seed: report.seed,
                config_hash: &report.config_hash,
                tolerances: ToleranceEcho::from(&report.tolerances),
                results: &report.body,
            };
            let mut bytes = serde_json::to_vec_pretty(&envelope).map_err(|e| {
                CliError::Computation(freedim_core::Error::IllDefined(e.to_string()))
            })?;
            bytes.push(b'\n');
            Ok(bytes)
        }
        Format::Csv => match &report.body {
            ReportBody::Cutoff(r) => Ok(sweep_csv(&r.sweep).into_bytes()),
            _ => Err(CliError::UnsupportedFormat(format!(
                "csv is only available for the cutoff sweep, not `{}`",
                report.scenario
            ))),
        },
        Format::Text => Ok(text_summary(report).into_bytes()),
    }
}

fn frac(f: &Option<freedim_core::Fraction>) -> String {
    f.map_or_else(|| "-".to_string(), |f| f.to_string())
}

fn text_summary(report: &RunReport) -> String {
    let mut out = format!(
        "{TOOL} {VERSION} | scenario {} | seed {}\n",
        report.scenario, report.seed
    );
    match &report.body {
        ReportBody::Delta(r) => {
            let _ = writeln!(out, "Delta = {} ({})", r.delta, frac(&r.delta_fraction));
            let _ = writeln!(
                out,
                "beta0 = {} ({}), closed form {}",
                r.beta0,
                frac(&r.beta0_fraction),
                r.closed_form_beta0
            );
            for (name, d) in [("H0", &r.dim_h0), ("H1", &r.dim_h1), ("H2", &r.dim_h2)] {
                let _ = writeln!(
                    out,
                    "dim {name} = {} ({}), complex dim {}",
                    d.value,
                    frac(&d.fraction),
                    d.complex_dim
                );
            }
            let blocks: Vec<String> = r
                .blocks
                .iter()
                .map(|b| format!("M{} @ {}", b.size, frac(&b.weight_fraction)))
                .collect();
            let _ = writeln!(out, "blocks: {}", blocks.join(", "));
            let _ = writeln!(
                out,
                "delta* = delta_blackstar = {} (pinned by the estimate chain)",
                r.pinned.delta_star
            );
        }
        ReportBody::DualSystem(r) => {
            let _ = writeln!(
                out,
                "derivation kind: {}, instances: {}",
                r.kind,
                r.instances.len()
            );
            for i in &r.instances {
                match &i.residuals {
                    Some(res) => {
                        let _ = writeln!(
                            out,
                            "  #{}: defect {:.2e}, residuals Y1 {:.2e} [Y,X]-T {:.2e} Y*1-xi {:.2e} bilinear {:.2e}",
                            i.instance, i.defect, res.y1, res.commutators, res.adjoint, res.bilinear
                        );
                    }
                    None => {
                        let _ = writeln!(
                            out,
                            "  #{}: not well defined, defect {:.3e}",
                            i.instance, i.defect
                        );
                    }
                }
            }
            let _ = writeln!(out, "max residual {:.3e}", r.max_residual);
            let phi = if r.phi_star_infinite {
                "infinite".to_string()
            } else {
                r.phi_star.map_or("-".to_string(), |v| v.to_string())
            };
            let _ = writeln!(out, "Phi* = {phi}");
        }
        ReportBody::Cutoff(r) => {
            let _ = writeln!(
                out,
                "{} cutoff, D = {}, spectral radius {:.6}",
                r.kind, r.dim, r.spectral_radius
            );
            for p in &r.sweep {
                let _ = writeln!(
                    out,
                    "  R = {:<8} ||T^(R) - T||_HS = {:.3e}",
                    p.radius, p.hs_error
                );
            }
            let _ = writeln!(
                out,
                "max error for R >= rho: {:.3e}; monotone: {}",
                r.max_error_beyond_radius, r.monotone
            );
        }
        ReportBody::GroupFinite(r) => {
            let _ = writeln!(
                out,
                "|G| = {}, generators {}",
                r.order,
                r.generators.join(", ")
            );
            let blocks: Vec<String> = r
                .blocks
                .iter()
                .map(|b| format!("M{} @ {}", b.size, frac(&b.weight_fraction)))
                .collect();
            let _ = writeln!(out, "blocks: {}", blocks.join(", "));
            let _ = writeln!(
                out,
                "Delta = {} ({}); Betti formula 1 - 1/|G| = {}; gap {:.1e}",
                r.delta,
                frac(&r.delta_fraction),
                r.betti_delta,
                r.formula_gap
            );
        }
        ReportBody::GroupFree(r) => {
            let _ = writeln!(out, "free group of rank {}: delta = {}", r.rank, r.delta);
            if let Some(k) = &r.kernel {
                let _ = writeln!(
                    out,
                    "kernel: index {}, rank {}, generators {}",
                    k.index(),
                    k.rank(),
                    k.rendered_generators().join(", ")
                );
                if let Some(d) = r.kernel_delta {
                    let _ = writeln!(out, "delta(kernel) = {d}");
                }
            }
            if let Some(u) = &r.user_supplied {
                let _ = writeln!(
                    out,
                    "user-supplied Betti numbers (unvalidated): delta = {}",
                    u.delta
                );
            }
        }
        ReportBody::Counterexample(r) => out.push_str(&r.text_summary()),
    }
    out
}
