//! Scenario dispatch: each scenario turns a validated config into a result body.

use freedim_core::cutoff::{spectral_radius, CutoffFamily};
use freedim_core::group::{
    betti_delta_formula, counterexample_report, regular_rep_algebra_with, schreier_rank,
    BettiInput, CounterexampleReport, FiniteGroupTable, Permutation, SchreierGraph,
    DEFAULT_ORDER_CAP,
};
use freedim_core::linalg::{c, random_hermitian, random_matrix, CMat};
use freedim_core::tracial::AlgebraOptions;
use freedim_core::{
    commutator_identity_check, construct_dual_operator, convergence_sweep, delta_report,
    derivation_well_defined, gns_structure, phi_star, BlockMultiplicity, CutoffKind, DeltaReport,
    DerivationSpec, Fraction, GnsStructure, SweepPoint, Tolerances, TracialAlgebra, VnDimension,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{
    matrix, AlgebraSpec, CutoffConfig, CutoffKindSpec, DerivationConfig, DerivationKind, GroupSpec,
    Scenario, ScenarioConfig,
};
use crate::error::CliError;

/// Everything a scenario run produced, before formatting.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub scenario: Scenario,
    pub seed: u64,
    pub config_hash: String,
    pub tolerances: Tolerances,
    pub body: ReportBody,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ReportBody {
    Delta(DeltaResults),
    DualSystem(DualSystemResults),
    Cutoff(CutoffResults),
    GroupFinite(GroupFiniteResults),
    GroupFree(GroupFreeResults),
    Counterexample(Box<CounterexampleReport>),
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionEntry {
    pub value: f64,
    pub fraction: Option<Fraction>,
    pub complex_dim: usize,
    pub multiplicities: Vec<BlockMultiplicity>,
}

impl DimensionEntry {
    fn from(dim: &VnDimension) -> Self {
        Self {
            value: dim.value,
            fraction: dim.fraction,
            complex_dim: dim.blocks.iter().map(|b| b.complex_dim).sum(),
            multiplicities: dim.blocks.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Pinned {
    pub delta_star: f64,
    pub delta_blackstar: f64,
    pub provenance: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockEntry {
    pub size: usize,
    pub weight: f64,
    pub weight_fraction: Option<Fraction>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaResults {
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "Delta_fraction")]
    pub delta_fraction: Option<Fraction>,
    pub beta0: f64,
    pub beta0_fraction: Option<Fraction>,
    pub closed_form_beta0: f64,
    #[serde(rename = "dim_H0")]
    pub dim_h0: DimensionEntry,
    #[serde(rename = "dim_H1")]
    pub dim_h1: DimensionEntry,
    #[serde(rename = "dim_H2")]
    pub dim_h2: DimensionEntry,
    pub pinned: Pinned,
    pub blocks: Vec<BlockEntry>,
    pub n: usize,
    pub d: usize,
    pub generators: Vec<String>,
    pub commutant_dim: usize,
    pub distance_h0_h1: f64,
    pub distance_h0_h2: f64,
    pub agreement: freedim_core::cocycle::AgreementFlags,
}

impl DeltaResults {
    fn from(rep: &DeltaReport, labels: &[String]) -> Self {
        let blocks = rep
            .block_sizes
            .iter()
            .zip(&rep.trace_weights)
            .map(|(&size, &weight)| BlockEntry {
                size,
                weight,
                weight_fraction: Fraction::recover(
                    weight,
                    freedim_core::fraction::MAX_DENOMINATOR,
                    1e-9,
                ),
            })
            .collect();
        Self {
            delta: rep.delta,
            delta_fraction: rep.delta_fraction,
            beta0: rep.beta0,
            beta0_fraction: rep.beta0_fraction,
            closed_form_beta0: rep.closed_form_beta0,
            dim_h0: DimensionEntry::from(&rep.dim_h0),
            dim_h1: DimensionEntry::from(&rep.dim_h1),
            dim_h2: DimensionEntry::from(&rep.dim_h2),
            pinned: Pinned {
                delta_star: rep.delta_star,
                delta_blackstar: rep.delta_blackstar,
                provenance: "pinned by dim H0 <= delta* <= delta_blackstar <= Delta, not computed",
            },
            blocks,
            n: rep.n,
            d: rep.d,
            generators: labels.to_vec(),
            commutant_dim: rep.commutant_dim,
            distance_h0_h1: rep.distance_h0_h1,
            distance_h0_h2: rep.distance_h0_h2,
            agreement: rep.agreement.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DualInstance {
    pub instance: usize,
    pub well_defined: bool,
    pub defect: f64,
    pub residuals: Option<DualResiduals>,
    /// `‖ξ − (B* − JBJ)·1̂‖` for inner derivations.
    pub inner_formula_residual: Option<f64>,
    pub xi_norm: Option<f64>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DualResiduals {
    pub y1: f64,
    pub commutators: f64,
    pub adjoint: f64,
    pub bilinear: f64,
}

impl DualResiduals {
    pub fn max(&self) -> f64 {
        self.y1
            .max(self.commutators)
            .max(self.adjoint)
            .max(self.bilinear)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DualSystemResults {
    pub kind: &'static str,
    pub instances: Vec<DualInstance>,
    pub max_residual: f64,
    pub phi_star: Option<f64>,
    pub phi_star_infinite: bool,
    pub difference_quotient_defects: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CutoffResults {
    pub kind: &'static str,
    pub dim: usize,
    pub tuple_length: usize,
    pub spectral_radius: f64,
    pub sweep: Vec<SweepPoint>,
    /// Largest error over radii `R ≥ ρ(A)`.
    pub max_error_beyond_radius: f64,
    pub monotone: bool,
    pub max_identity_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupFiniteResults {
    pub order: usize,
    pub generating_elements: Vec<usize>,
    pub generators: Vec<String>,
    pub blocks: Vec<BlockEntry>,
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "Delta_fraction")]
    pub delta_fraction: Option<Fraction>,
    pub betti: BettiInput,
    pub betti_delta: f64,
    pub formula_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupFreeResults {
    pub rank: usize,
    pub betti: BettiInput,
    pub delta: f64,
    pub kernel: Option<SchreierGraph>,
    pub kernel_delta: Option<f64>,
    pub user_supplied: Option<UserBetti>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UserBetti {
    pub betti: BettiInput,
    pub delta: f64,
    pub flagged: bool,
}

pub fn build_algebra(spec: &AlgebraSpec) -> Result<TracialAlgebra, CliError> {
    let weights = spec
        .weights
        .iter()
        .map(|w| w.value())
        .collect::<Result<Vec<_>, _>>()?;
    let generators = spec
        .generators
        .iter()
        .enumerate()
        .map(|(j, blocks)| {
            blocks
                .iter()
                .map(|m| matrix(m, &format!("generator {j}")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let options = AlgebraOptions {
        subalgebra_mode: spec.subalgebra_mode,
        labels: spec.labels.clone(),
    };
    Ok(TracialAlgebra::build(
        &spec.blocks,
        &weights,
        &generators,
        options,
    )?)
}

fn run_delta(spec: &AlgebraSpec, seed: u64, tol: &Tolerances) -> Result<ReportBody, CliError> {
    let alg = build_algebra(spec)?;
    let gns = gns_structure(&alg)?;
    let rep = delta_report(&alg, &gns, seed, tol)?;
    Ok(ReportBody::Delta(DeltaResults::from(&rep, alg.labels())))
}

fn square(m: CMat, d: usize, what: &str) -> Result<CMat, CliError> {
    if m.nrows() != d || m.ncols() != d {
        return Err(CliError::Config(format!(
            "{what} must be {d}x{d} (GNS coordinates)"
        )));
    }
    Ok(m)
}

fn dual_instance(
    gns: &GnsStructure,
    spec: &DerivationSpec,
    b: Option<&CMat>,
    instance: usize,
    tol: &Tolerances,
) -> Result<DualInstance, CliError> {
    let report = construct_dual_operator(gns, spec, tol)?;
    let inner_formula_residual = b.map(|b| {
        let expected = (b.adjoint() - b.map(|z| z.conj())) * &gns.trace_vector;
        (&report.xi - expected).norm()
    });
    Ok(DualInstance {
        instance,
        well_defined: true,
        defect: report.defect,
        residuals: Some(DualResiduals {
            y1: report.residual_y1,
            commutators: report.residual_commutators,
            adjoint: report.residual_adjoint,
            bilinear: report.residual_bilinear,
        }),
        inner_formula_residual,
        xi_norm: Some(report.xi.norm()),
    })
}

fn run_dual_system(
    spec: &AlgebraSpec,
    der: &DerivationConfig,
    seed: u64,
    tol: &Tolerances,
) -> Result<ReportBody, CliError> {
    let alg = build_algebra(spec)?;
    let gns = gns_structure(&alg)?;
    let d = gns.dim;
    let n = alg.generators().len();
    let mut instances = Vec::new();
    let kind = match der.kind {
        DerivationKind::Inner => {
            let mut bs = Vec::new();
            if let Some(b) = &der.b {
                bs.push(square(matrix(b, "derivation.b")?, d, "derivation.b")?);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..der.random_instances.unwrap_or(0) {
                bs.push(random_matrix(&mut rng, d, d));
            }
            if bs.is_empty() {
                return Err(CliError::Config(
                    "inner derivation needs `b` or `random_instances`".into(),
                ));
            }
            for (k, b) in bs.iter().enumerate() {
                let spec = DerivationSpec::inner(&gns, b);
                instances.push(dual_instance(&gns, &spec, Some(b), k, tol)?);
            }
            "inner"
        }
        DerivationKind::Tuple => {
            let targets = der
                .targets
                .as_ref()
                .ok_or_else(|| CliError::Config("tuple derivation needs `targets`".into()))?
                .iter()
                .map(|m| square(matrix(m, "derivation.targets")?, d, "derivation target"))
                .collect::<Result<Vec<_>, _>>()?;
            let spec = DerivationSpec::Tuple(targets);
            instances.push(dual_instance(&gns, &spec, None, 0, tol)?);
            "tuple"
        }
        DerivationKind::DifferenceQuotient => {
            let index = der.index.unwrap_or(0);
            let spec = DerivationSpec::FreeDifferenceQuotient(index);
            let wd = derivation_well_defined(&gns, &spec, tol)?;
            if wd.well_defined {
                instances.push(dual_instance(&gns, &spec, None, 0, tol)?);
            } else {
                instances.push(DualInstance {
                    instance: 0,
                    well_defined: false,
                    defect: wd.defect,
                    residuals: None,
                    inner_formula_residual: None,
                    xi_norm: None,
                });
            }
            "difference_quotient"
        }
    };
    let phi = if n > 0 {
        Some(phi_star(&gns, tol)?)
    } else {
        None
    };
    let max_residual = instances
        .iter()
        .filter_map(|i| i.residuals.map(|r| r.max()))
        .fold(0.0, f64::max);
    Ok(ReportBody::DualSystem(DualSystemResults {
        kind,
        instances,
        max_residual,
        phi_star: phi.as_ref().filter(|p| !p.is_infinite()).map(|p| p.value),
        phi_star_infinite: phi.as_ref().is_some_and(|p| p.is_infinite()),
        difference_quotient_defects: phi.map(|p| p.defects).unwrap_or_default(),
    }))
}

/// Error magnitude treated as exactly zero beyond the spectral radius.
pub const SWEEP_ZERO: f64 = 1e-10;

fn run_cutoff(cfg: &CutoffConfig, seed: u64) -> Result<ReportBody, CliError> {
    if cfg.radii.is_empty() || cfg.radii.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(CliError::Config(
            "cutoff.radii must be non-negative numbers".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, xs) = match (&cfg.a, &cfg.xs, &cfg.random) {
        (Some(a), Some(xs), None) => {
            let a = matrix(a, "cutoff.a")?;
            let d = a.nrows();
            let xs = xs
                .iter()
                .map(|x| square(matrix(x, "cutoff.xs")?, d, "cutoff.xs entry"))
                .collect::<Result<Vec<_>, _>>()?;
            (square(a, d, "cutoff.a")?, xs)
        }
        (None, None, Some(r)) => {
            if r.dim == 0 || r.tuple_length == 0 {
                return Err(CliError::Config(
                    "cutoff.random needs dim and tuple_length >= 1".into(),
                ));
            }
            let a = random_hermitian(&mut rng, r.dim) * c(r.scale, 0.0);
            let xs = (0..r.tuple_length)
                .map(|_| random_hermitian(&mut rng, r.dim))
                .collect();
            (a, xs)
        }
        _ => {
            return Err(CliError::Config(
                "cutoff needs either `a` and `xs`, or `random`".into(),
            ))
        }
    };
    let kind = match cfg.kind {
        CutoffKindSpec::ExpClamp => CutoffKind::ExpClamp,
        CutoffKindSpec::SmoothBlend => CutoffKind::SmoothBlend,
    };
    let sweep = convergence_sweep(&a, &xs, &cfg.radii, kind)?;
    let rho = spectral_radius(&a);
    let max_error_beyond_radius = sweep
        .iter()
        .filter(|p| p.radius >= rho)
        .map(|p| p.hs_error)
        .fold(0.0, f64::max);
    let mut ordered = sweep.clone();
    ordered.sort_by(|p, q| p.radius.total_cmp(&q.radius));
    let monotone = ordered
        .windows(2)
        .all(|w| w[1].hs_error <= w[0].hs_error + 1e-12);
    let mut max_identity_residual: f64 = 0.0;
    for &radius in &cfg.radii {
        for x in &xs {
            let f = CutoffFamily { radius, kind };
            max_identity_residual =
                max_identity_residual.max(commutator_identity_check(&a, x, &f)?);
        }
    }
    Ok(ReportBody::Cutoff(CutoffResults {
        kind: match kind {
            CutoffKind::ExpClamp => "exp_clamp",
            CutoffKind::SmoothBlend => "smooth_blend",
        },
        dim: a.nrows(),
        tuple_length: xs.len(),
        spectral_radius: rho,
        sweep,
        max_error_beyond_radius,
        monotone,
        max_identity_residual,
    }))
}

fn parse_permutations(
    cycles: &[String],
    degree: Option<usize>,
) -> Result<Vec<Permutation>, CliError> {
    let largest = cycles
        .iter()
        .flat_map(|s| s.split(|ch: char| !ch.is_ascii_digit()))
        .filter_map(|t| t.parse::<usize>().ok())
        .max()
        .unwrap_or(1);
    let degree = degree.unwrap_or(largest).max(1);
    cycles
        .iter()
        .map(|s| Permutation::parse_cycles(s, degree).map_err(CliError::from))
        .collect()
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroupTable, CliError> {
    let sources = [
        spec.name.is_some(),
        spec.table.is_some(),
        spec.permutations.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(CliError::Config(
            "group needs exactly one of `name`, `table`, `permutations`".into(),
        ));
    }
    let table = if let Some(name) = &spec.name {
        FiniteGroupTable::named(name)
    } else if let Some(rows) = &spec.table {
        FiniteGroupTable::from_table(rows.clone())
    } else {
        let perms = parse_permutations(spec.permutations.as_deref().unwrap_or(&[]), spec.degree)?;
        FiniteGroupTable::from_permutations(&perms)
    };
    // malformed group data is an input problem
    table.map_err(|e| CliError::Config(e.to_string()))
}

fn reject_fields(scenario: Scenario, fields: &[(&str, bool)]) -> Result<(), CliError> {
    if let Some((name, _)) = fields.iter().find(|(_, present)| *present) {
        return Err(CliError::Config(format!(
            "group.{name} is not used by scenario `{scenario}`"
        )));
    }
    Ok(())
}

fn run_group_finite(spec: &GroupSpec, seed: u64, tol: &Tolerances) -> Result<ReportBody, CliError> {
    reject_fields(
        Scenario::GroupFinite,
        &[
            ("rank", spec.rank.is_some()),
            ("images", spec.images.is_some()),
            ("betti", spec.betti.is_some()),
        ],
    )?;
    let table = build_group(spec)?;
    let cap = spec.order_cap.unwrap_or(DEFAULT_ORDER_CAP);
    let elements = spec.elements.clone();
    let alg = regular_rep_algebra_with(&table, elements.as_deref(), cap, seed)?;
    let gns = gns_structure(&alg)?;
    let rep = delta_report(&alg, &gns, seed, tol)?;
    let betti = BettiInput::finite_group(table.order);
    let betti_delta = betti_delta_formula(&betti);
    let generating_elements = elements.unwrap_or_else(|| table.minimal_generating_set());
    let blocks = DeltaResults::from(&rep, alg.labels()).blocks;
    Ok(ReportBody::GroupFinite(GroupFiniteResults {
        order: table.order,
        generating_elements,
        generators: alg.labels().to_vec(),
        blocks,
        delta: rep.delta,
        delta_fraction: rep.delta_fraction,
        betti,
        betti_delta,
        formula_gap: (betti_delta - rep.delta).abs(),
    }))
}

fn run_group_free(spec: &GroupSpec) -> Result<ReportBody, CliError> {
    reject_fields(
        Scenario::GroupFree,
        &[
            ("name", spec.name.is_some()),
            ("table", spec.table.is_some()),
            ("permutations", spec.permutations.is_some()),
            ("elements", spec.elements.is_some()),
            ("order_cap", spec.order_cap.is_some()),
        ],
    )?;
    let rank = spec
        .rank
        .ok_or_else(|| CliError::Config("group_free needs `group.rank`".into()))?;
    let betti = BettiInput::free_group(rank);
    let delta = betti_delta_formula(&betti);
    let kernel = match &spec.images {
        Some(images) => {
            let perms = parse_permutations(images, spec.degree)?;
            Some(schreier_rank(rank, &perms)?)
        }
        None => None,
    };
    let kernel_delta = kernel
        .as_ref()
        .map(|k| betti_delta_formula(&BettiInput::free_group(k.rank())));
    let user_supplied = spec.betti.map(|b| {
        let input = BettiInput::user_supplied(b.beta0, b.beta1);
        UserBetti {
            delta: betti_delta_formula(&input),
            flagged: input.is_flagged(),
            betti: input,
        }
    });
    Ok(ReportBody::GroupFree(GroupFreeResults {
        rank,
        betti,
        delta,
        kernel,
        kernel_delta,
        user_supplied,
    }))
}

/// Runs a validated scenario.
pub fn run_scenario(
    config: &ScenarioConfig,
    scenario: Scenario,
    seed: u64,
    tolerances: &Tolerances,
) -> Result<ReportBody, CliError> {
    config.validate(scenario)?;
    match scenario {
        Scenario::Delta => run_delta(
            config.algebra.as_ref().expect("validated"),
            seed,
            tolerances,
        ),
        Scenario::DualSystem => run_dual_system(
            config.algebra.as_ref().expect("validated"),
            config.derivation.as_ref().expect("validated"),
            seed,
            tolerances,
        ),
        Scenario::Cutoff => run_cutoff(config.cutoff.as_ref().expect("validated"), seed),
        Scenario::GroupFinite => {
            run_group_finite(config.group.as_ref().expect("validated"), seed, tolerances)
        }
        Scenario::GroupFree => run_group_free(config.group.as_ref().expect("validated")),
        Scenario::Counterexample => Ok(ReportBody::Counterexample(Box::new(
            counterexample_report(),
        ))),
    }
}
