//! Derivations `∂_T`, conjugate variables and dual operators.
//!
//! `∂_T` is first defined on the free algebra by the Leibniz rule
//! `∂_T(X_j w) = T_j L_w + L_{X_j} ∂_T(w)` with `∂_T(X_j) = T_j`, where `HS`
//! is an `M`-bimodule by composition with left multiplications. Whether it
//! descends to `L²(M)` through the relations among the generators is decided
//! by a least-squares fit over a spanning family of words.
//!
//! In finite dimensions every operator is bounded, so the closability content
//! of the unbounded dual-system theory is vacuous; what is tested here are the
//! constructive formulas: `Y(Q·1̂) = ∂_T(Q)·1̂`, `Y*·1̂ = ∂_T*(P₁)` and the
//! formal adjoint `Y*(Q·1̂) = −(∂_T(Q*))*·1̂ + Q·∂_T*(P₁)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, commutator, flatten_tuple, least_squares, CMat, CVec, SpanBuilder, C64};
use crate::tol::{self, Tolerances};
use crate::tracial::GnsStructure;

/// The values `T = (T_1, …, T_n)` prescribed on the generators.
#[derive(Debug, Clone, PartialEq)]
pub enum DerivationSpec {
    Tuple(Vec<CMat>),
    /// `T = (0, …, P₁, …, 0)` with `P₁` in slot `j` (zero based).
    FreeDifferenceQuotient(usize),
}

impl DerivationSpec {
    /// Inner derivation `T_j = [B, L_{X_j}]`.
    pub fn inner(gns: &GnsStructure, b: &CMat) -> Self {
        DerivationSpec::Tuple(
            gns.generator_mult()
                .iter()
                .map(|lx| commutator(b, lx))
                .collect(),
        )
    }

    pub fn targets(&self, gns: &GnsStructure) -> Result<Vec<CMat>> {
        let n = gns.generator_mult().len();
        let d = gns.dim;
        match self {
            DerivationSpec::Tuple(t) => {
                if t.len() != n || t.iter().any(|m| m.nrows() != d || m.ncols() != d) {
                    return Err(Error::ShapeMismatch(format!(
                        "derivation target must be {n} matrices of size {d}x{d}"
                    )));
                }
                Ok(t.clone())
            }
            DerivationSpec::FreeDifferenceQuotient(j) => {
                if *j >= n {
                    return Err(Error::ShapeMismatch(format!(
                        "difference quotient index {j} out of range for {n} generators"
                    )));
                }
                Ok((0..n)
                    .map(|i| {
                        if i == *j {
                            gns.p1.clone()
                        } else {
                            CMat::zeros(d, d)
                        }
                    })
                    .collect())
            }
        }
    }
}

/// Result of fitting `∂_T` as a linear map on `L²(M)`.
#[derive(Debug, Clone)]
pub struct WellDefinedness {
    pub well_defined: bool,
    /// Largest residual of the least-squares fit over all enumerated words.
    pub defect: f64,
    /// `∂̂(e_k)` for the GNS basis vectors `e_k`.
    pub map: Vec<CMat>,
    pub words: usize,
}

impl WellDefinedness {
    /// `∂̂(v)` for an arbitrary vector of `L²`.
    pub fn apply(&self, v: &CVec) -> CMat {
        let d = v.len();
        self.map
            .iter()
            .zip(v.iter())
            .fold(CMat::zeros(d, d), |acc, (m, z)| acc + m * *z)
    }
}

struct Word {
    coords: CVec,
    left: CMat,
    value: CMat,
}

/// Decides whether the Leibniz extension of `T` descends to `L²(M)`.
pub fn derivation_well_defined(
    gns: &GnsStructure,
    spec: &DerivationSpec,
    tolerances: &Tolerances,
) -> Result<WellDefinedness> {
    let targets = spec.targets(gns)?;
    let d = gns.dim;
    let lmult = gns.generator_mult();

    let unit = Word {
        coords: gns.trace_vector.clone(),
        left: CMat::identity(d, d),
        value: CMat::zeros(d, d),
    };
    let mut span = SpanBuilder::new(tol::RANK);
    span.try_add(&unit.coords);
    let mut rows: Vec<(CVec, CVec)> = vec![(
        unit.coords.clone(),
        flatten_tuple(std::slice::from_ref(&unit.value)),
    )];
    let mut frontier = vec![unit];
    // only words extending an independent word need to be expanded further
    for _ in 0..=d {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for w in &frontier {
            for (lx, t) in lmult.iter().zip(&targets) {
                let word = Word {
                    coords: lx * &w.coords,
                    left: lx * &w.left,
                    value: t * &w.left + lx * &w.value,
                };
                rows.push((
                    word.coords.clone(),
                    flatten_tuple(std::slice::from_ref(&word.value)),
                ));
                if span.try_add(&word.coords) {
                    next.push(word);
                }
            }
        }
        frontier = next;
    }

    let r = rows.len();
    let coords = CMat::from_fn(r, d, |i, k| rows[i].0[k]);
    let values = CMat::from_fn(r, d * d, |i, k| rows[i].1[k]);
    let solution = least_squares(&coords, &values, tol::RANK);
    let fitted = &coords * &solution;
    let defect = (0..r)
        .map(|i| (fitted.row(i) - values.row(i)).norm())
        .fold(0.0, f64::max);
    let map = (0..d)
        .map(|k| CMat::from_iterator(d, d, solution.row(k).iter().copied()))
        .collect();
    Ok(WellDefinedness {
        well_defined: defect <= tolerances.well_defined,
        defect,
        map,
        words: r,
    })
}

/// `ξ = ∂_T*(P₁)`: the solution of `⟨ξ, Q·1̂⟩ = ⟨P₁, ∂_T(Q)⟩_HS` over the basis.
pub fn conjugate_variable(
    gns: &GnsStructure,
    spec: &DerivationSpec,
    tolerances: &Tolerances,
) -> Result<CVec> {
    let wd = derivation_well_defined(gns, spec, tolerances)?;
    if !wd.well_defined {
        return Err(Error::NotDefined { defect: wd.defect });
    }
    Ok(conjugate_from_map(gns, &wd))
}

fn conjugate_from_map(gns: &GnsStructure, wd: &WellDefinedness) -> CVec {
    let omega = &gns.trace_vector;
    // ⟨P₁, S⟩_HS = Tr(S* P₁) = conj(ω* S ω)
    CVec::from_iterator(
        gns.dim,
        wd.map.iter().map(|s| omega.dotc(&(s * omega)).conj()),
    )
}

/// Free Fisher information `Φ* = Σ_j ‖∂_j*(P₁)‖²`, infinite when some
/// difference quotient fails to descend.
#[derive(Debug, Clone, Serialize)]
pub struct PhiStar {
    pub value: f64,
    /// Least-squares defect of each free difference quotient.
    pub defects: Vec<f64>,
}

impl PhiStar {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

pub fn phi_star(gns: &GnsStructure, tolerances: &Tolerances) -> Result<PhiStar> {
    let n = gns.generator_mult().len();
    let mut value = 0.0;
    let mut defects = Vec::with_capacity(n);
    for j in 0..n {
        let wd =
            derivation_well_defined(gns, &DerivationSpec::FreeDifferenceQuotient(j), tolerances)?;
        defects.push(wd.defect);
        if wd.well_defined {
            value += conjugate_from_map(gns, &wd).norm_squared();
        } else {
            value = f64::INFINITY;
        }
    }
    Ok(PhiStar { value, defects })
}

#[derive(Debug, Clone, Serialize)]
pub struct DualOperatorReport {
    #[serde(skip)]
    pub y: CMat,
    #[serde(skip)]
    pub xi: CVec,
    /// `‖Y·1̂‖`.
    pub residual_y1: f64,
    /// `max_j ‖[Y, L_{X_j}] − T_j‖_HS`.
    pub residual_commutators: f64,
    /// `‖Y*·1̂ − ξ‖`.
    pub residual_adjoint: f64,
    /// `max |⟨Y Q·1̂, R·1̂⟩ − ⟨Q·1̂, Y♯ R·1̂⟩|` with `Y♯` from the formal adjoint formula.
    pub residual_bilinear: f64,
    pub defect: f64,
}

impl DualOperatorReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_y1
            .max(self.residual_commutators)
            .max(self.residual_adjoint)
    }
}

/// Builds `Y` with `Y·1̂ = 0`, `[Y, L_{X_j}] = T_j` from `Y(Q·1̂) = ∂_T(Q)·1̂`.
pub fn construct_dual_operator(
    gns: &GnsStructure,
    spec: &DerivationSpec,
    tolerances: &Tolerances,
) -> Result<DualOperatorReport> {
    let targets = spec.targets(gns)?;
    let wd = derivation_well_defined(gns, spec, tolerances)?;
    if !wd.well_defined {
        return Err(Error::IllDefined(format!(
            "derivation does not descend to L2 (defect {:.3e})",
            wd.defect
        )));
    }
    let xi = conjugate_from_map(gns, &wd);
    let omega = &gns.trace_vector;
    let cols: Vec<CVec> = wd.map.iter().map(|s| s * omega).collect();
    let y = CMat::from_columns(&cols);

    let residual_y1 = (&y * omega).norm();
    let residual_commutators = gns
        .generator_mult()
        .iter()
        .zip(&targets)
        .map(|(lx, t)| (commutator(&y, lx) - t).norm())
        .fold(0.0, f64::max);
    let residual_adjoint = (y.adjoint() * omega - &xi).norm();
    let residual_bilinear = bilinear_residual(gns, &wd, &y, &xi);

    let report = DualOperatorReport {
        y,
        xi,
        residual_y1,
        residual_commutators,
        residual_adjoint,
        residual_bilinear,
        defect: wd.defect,
    };
    for (which, residual) in [
        ("Y1", report.residual_y1),
        ("[Y,X]-T", report.residual_commutators),
        ("Y*1-xi", report.residual_adjoint),
        ("bilinear adjoint", report.residual_bilinear),
    ] {
        if residual > tolerances.residual || residual.is_nan() {
            return Err(Error::ResidualTooLarge {
                which,
                residual,
                threshold: tolerances.residual,
            });
        }
    }
    Ok(report)
}

/// The formal adjoint `Y♯(Q·1̂) = −(∂_T(Q*))*·1̂ + Q·ξ`, on the self-adjoint GNS basis.
pub fn formal_adjoint(gns: &GnsStructure, wd: &WellDefinedness, xi: &CVec) -> CMat {
    let omega = &gns.trace_vector;
    let cols: Vec<CVec> = wd
        .map
        .iter()
        .zip(gns.basis_mult())
        .map(|(s, lq)| -(s.adjoint() * omega) + lq * xi)
        .collect();
    CMat::from_columns(&cols)
}

fn bilinear_residual(gns: &GnsStructure, wd: &WellDefinedness, y: &CMat, xi: &CVec) -> f64 {
    let sharp = formal_adjoint(gns, wd, xi);
    let d = gns.dim;
    let mut worst: f64 = 0.0;
    for q in 0..d {
        for r in 0..d {
            // ⟨Y e_q, e_r⟩ = Y_{rq},  ⟨e_q, Y♯ e_r⟩ = conj(Y♯_{qr})
            let lhs: C64 = y[(r, q)];
            let rhs: C64 = sharp[(q, r)].conj();
            worst = worst.max((lhs - rhs).norm());
        }
    }
    worst
}

/// `Ỹ_j = ½(Y_j − Y_j*)`.
pub fn antisymmetrize(ys: &[CMat]) -> Vec<CMat> {
    ys.iter().map(|y| (y - y.adjoint()) * c(0.5, 0.0)).collect()
}

/// `‖[½(Y − Y*), L] − ½([Y, L] + [Y, L]*)‖` for self-adjoint `L`.
pub fn antisymmetrize_identity_residual(y: &CMat, lx: &CMat) -> f64 {
    let tilde = (y - y.adjoint()) * c(0.5, 0.0);
    let comm = commutator(y, lx);
    let expected = (&comm + comm.adjoint()) * c(0.5, 0.0);
    crate::linalg::max_abs(&(commutator(&tilde, lx) - expected))
}
