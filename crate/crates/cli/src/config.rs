//! Scenario configuration files (JSON).

use std::fmt;

use freedim_core::linalg::{c, CMat};
use freedim_core::Tolerances;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Delta,
    DualSystem,
    Cutoff,
    GroupFinite,
    GroupFree,
    Counterexample,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::Delta,
        Scenario::DualSystem,
        Scenario::Cutoff,
        Scenario::GroupFinite,
        Scenario::GroupFree,
        Scenario::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Delta => "delta",
            Scenario::DualSystem => "dual_system",
            Scenario::Cutoff => "cutoff",
            Scenario::GroupFinite => "group_finite",
            Scenario::GroupFree => "group_free",
            Scenario::Counterexample => "counterexample",
        }
    }

    pub fn parse(name: &str) -> Option<Scenario> {
        Scenario::ALL.into_iter().find(|s| s.name() == name)
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A complex matrix as rows of `[re, im]` pairs.
pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

pub fn matrix(spec: &MatrixSpec, what: &str) -> Result<CMat, CliError> {
    let rows = spec.len();
    let cols = spec.first().map_or(0, Vec::len);
    if rows == 0 || spec.iter().any(|r| r.len() != cols) {
        return Err(CliError::Config(format!(
            "{what}: matrix rows must be non-empty and of equal length"
        )));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| {
        let [re, im] = spec[i][j];
        c(re, im)
    }))
}

/// A trace weight: a number or an exact `"p/q"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Weight {
    Number(f64),
    Text(String),
}

impl Weight {
    pub fn value(&self) -> Result<f64, CliError> {
        match self {
            Weight::Number(x) => Ok(*x),
            Weight::Text(s) => {
                let parse = |t: &str| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Config(format!("bad weight {s:?}")))
                };
                match s.split_once('/') {
                    Some((p, q)) => Ok(parse(p)? / parse(q)?),
                    None => parse(s),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<usize>,
    pub weights: Vec<Weight>,
    /// Each generator as its list of diagonal blocks.
    pub generators: Vec<Vec<MatrixSpec>>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub subalgebra_mode: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    /// Built-in group: `Z<n>`, `S<n>`, `D<n>`, `Z2xZ2`, `trivial`.
    #[serde(default)]
    pub name: Option<String>,
    /// Multiplication table over `0..order`.
    #[serde(default)]
    pub table: Option<Vec<Vec<usize>>>,
    /// Generating permutations in cycle notation.
    #[serde(default)]
    pub permutations: Option<Vec<String>>,
    /// Elements whose real and imaginary parts generate the group algebra.
    #[serde(default)]
    pub elements: Option<Vec<usize>>,
    #[serde(default)]
    pub order_cap: Option<usize>,
    /// Rank of the free group.
    #[serde(default)]
    pub rank: Option<usize>,
    /// Images of the free generators, in cycle notation.
    #[serde(default)]
    pub images: Option<Vec<String>>,
    /// Degree of the permutations.
    #[serde(default)]
    pub degree: Option<usize>,
    /// Externally supplied L²-Betti numbers.
    #[serde(default)]
    pub betti: Option<BettiSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BettiSpec {
    pub beta0: f64,
    pub beta1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivationKind {
    /// `T_j = [B, L_{X_j}]`.
    Inner,
    /// Explicit targets `T_j`.
    Tuple,
    /// Free difference quotient in one slot.
    DifferenceQuotient,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationConfig {
    pub kind: DerivationKind,
    /// `B` in GNS coordinates (`D × D`).
    #[serde(default)]
    pub b: Option<MatrixSpec>,
    /// Number of seeded random `B` for `inner`.
    #[serde(default)]
    pub random_instances: Option<usize>,
    #[serde(default)]
    pub targets: Option<Vec<MatrixSpec>>,
    #[serde(default)]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CutoffKindSpec {
    #[default]
    ExpClamp,
    SmoothBlend,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomOperators {
    pub dim: usize,
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default = "one_usize")]
    pub tuple_length: usize,
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutoffConfig {
    pub radii: Vec<f64>,
    #[serde(default)]
    pub kind: CutoffKindSpec,
    #[serde(default)]
    pub a: Option<MatrixSpec>,
    #[serde(default)]
    pub xs: Option<Vec<MatrixSpec>>,
    #[serde(default)]
    pub random: Option<RandomOperators>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub residual: Option<f64>,
    pub rank: Option<f64>,
    pub well_defined: Option<f64>,
    pub invariance: Option<f64>,
    pub dimension: Option<f64>,
}

impl ToleranceOverrides {
    pub fn apply(&self, base: Tolerances) -> Tolerances {
        Tolerances {
            residual: self.residual.unwrap_or(base.residual),
            rank: self.rank.unwrap_or(base.rank),
            well_defined: self.well_defined.unwrap_or(base.well_defined),
            invariance: self.invariance.unwrap_or(base.invariance),
            dimension: self.dimension.unwrap_or(base.dimension),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub scenario: Option<Scenario>,
    #[serde(default)]
    pub algebra: Option<AlgebraSpec>,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub derivation: Option<DerivationConfig>,
    #[serde(default)]
    pub cutoff: Option<CutoffConfig>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub tolerances: Option<ToleranceOverrides>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Checks that exactly the sections used by `scenario` are present.
    pub fn validate(&self, scenario: Scenario) -> Result<(), CliError> {
        if let Some(declared) = self.scenario {
            if declared != scenario {
                return Err(CliError::Config(format!(
                    "config declares scenario `{declared}` but `{scenario}` was requested"
                )));
            }
        }
        let present = [
            ("algebra", self.algebra.is_some()),
            ("group", self.group.is_some()),
            ("derivation", self.derivation.is_some()),
            ("cutoff", self.cutoff.is_some()),
        ];
        let required: &[&str] = match scenario {
            Scenario::Delta => &["algebra"],
            Scenario::DualSystem => &["algebra", "derivation"],
            Scenario::Cutoff => &["cutoff"],
            Scenario::GroupFinite | Scenario::GroupFree => &["group"],
            Scenario::Counterexample => &[],
        };
        for (name, is_present) in present {
            let needed = required.contains(&name);
            if needed && !is_present {
                return Err(CliError::Config(format!(
                    "scenario `{scenario}` requires an `{name}` section"
                )));
            }
            if !needed && is_present {
                return Err(CliError::Config(format!(
                    "scenario `{scenario}` does not use an `{name}` section"
                )));
            }
        }
        Ok(())
    }
}
