//! Commutator cocycle spaces `H₀`, `H₁`, `H₂` and the δ-chain report.
//!
//! In finite dimensions every witness operator is a bounded matrix and weak
//! and norm closures agree, so all three spaces coincide; they are still
//! built by separate routes so that the coincidence is checked, not assumed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::linalg::{c, commutator, flatten_tuple, matrix_unit, null_space, CMat, CVec, I};
use crate::tol::Tolerances;
use crate::tracial::{GnsStructure, TracialAlgebra};
use crate::vn_dimension::{central_decomposition, vn_dimension, HsSubspace, VnDimension};

/// `([Y, L_{X_1}], …, [Y, L_{X_n}])`.
pub fn cocycle_map(gns: &GnsStructure, y: &CMat) -> Vec<CMat> {
    gns.generator_mult()
        .iter()
        .map(|lx| commutator(y, lx))
        .collect()
}

fn require_generating(algebra: &TracialAlgebra) -> Result<()> {
    let g = algebra.generation();
    if g.generates {
        Ok(())
    } else {
        Err(Error::NotGenerating {
            generated: g.generated_dim,
            total: algebra.dim(),
        })
    }
}

fn span_of_cocycles(
    gns: &GnsStructure,
    witnesses: impl Iterator<Item = CMat>,
    tolerances: &Tolerances,
) -> HsSubspace {
    let n = gns.generator_mult().len();
    let vectors: Vec<CVec> = witnesses
        .map(|y| flatten_tuple(&cocycle_map(gns, &y)))
        .collect();
    HsSubspace::from_vectors(n, gns, &vectors, tolerances.rank)
}

/// Bounded witnesses: the span of cocycles of all matrix units `E_kl` on `L²`.
pub fn compute_h0(
    algebra: &TracialAlgebra,
    gns: &GnsStructure,
    tolerances: &Tolerances,
) -> Result<HsSubspace> {
    require_generating(algebra)?;
    let d = gns.dim;
    let units = (0..d).flat_map(move |k| (0..d).map(move |l| matrix_unit(d, k, l)));
    Ok(span_of_cocycles(gns, units, tolerances))
}

/// Self-adjoint witnesses only, then the complex span.
pub fn compute_h1(
    algebra: &TracialAlgebra,
    gns: &GnsStructure,
    tolerances: &Tolerances,
) -> Result<HsSubspace> {
    require_generating(algebra)?;
    let d = gns.dim;
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut hermitian = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in k..d {
            if k == l {
                hermitian.push(matrix_unit(d, k, k));
            } else {
                let sym = (matrix_unit(d, k, l) + matrix_unit(d, l, k)) * c(half, 0.0);
                let anti = (matrix_unit(d, k, l) - matrix_unit(d, l, k)) * (I * half);
                hermitian.push(sym);
                hermitian.push(anti);
            }
        }
    }
    Ok(span_of_cocycles(gns, hermitian.into_iter(), tolerances))
}

/// Weak limits of bounded cocycles; in finite dimensions this is `H₀` itself.
pub fn compute_h2(
    algebra: &TracialAlgebra,
    gns: &GnsStructure,
    tolerances: &Tolerances,
) -> Result<HsSubspace> {
    compute_h0(algebra, gns, tolerances)
}

/// Complex dimension of `{Y : [Y, L_{X_j}] = 0 ∀j}`.
pub fn commutant_dim(gns: &GnsStructure, tolerances: &Tolerances) -> usize {
    let d = gns.dim;
    let n = gns.generator_mult().len();
    if n == 0 {
        return d * d;
    }
    let mut system = CMat::zeros(n * d * d, d * d);
    for k in 0..d {
        for l in 0..d {
            let col = flatten_tuple(&cocycle_map(gns, &matrix_unit(d, k, l)));
            system.set_column(l * d + k, &col);
        }
    }
    null_space(&system, tolerances.rank).len()
}

#[derive(Debug, Clone, Serialize)]
pub struct AgreementFlags {
    /// `H₀ = H₁` as subspaces.
    pub h0_equals_h1: bool,
    /// `H₀ = H₂` as subspaces.
    pub h0_equals_h2: bool,
    /// `|β₀ − Σ α_i²/n_i²| ≤ tol`.
    pub beta0_matches_closed_form: bool,
    /// `dim_ℂ H₀ + dim_ℂ(commutant) = D²`.
    pub rank_nullity: bool,
    /// Recovered central blocks equal the declared ones (vacuous for group algebras).
    pub blocks_match_declared: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeltaReport {
    pub n: usize,
    pub d: usize,
    pub block_sizes: Vec<usize>,
    pub trace_weights: Vec<f64>,
    pub dim_h0: VnDimension,
    pub dim_h1: VnDimension,
    pub dim_h2: VnDimension,
    pub complex_dim_h0: usize,
    pub commutant_dim: usize,
    /// `Δ = dim H₂`.
    pub delta: f64,
    pub delta_fraction: Option<Fraction>,
    /// `β₀ = 1 − Δ`.
    pub beta0: f64,
    pub beta0_fraction: Option<Fraction>,
    pub closed_form_beta0: f64,
    /// Pinned by the squeeze `dim H₀ ≤ δ* ≤ δ⋆ ≤ Δ`, never computed directly.
    pub delta_star: f64,
    pub delta_blackstar: f64,
    pub distance_h0_h1: f64,
    pub distance_h0_h2: f64,
    pub agreement: AgreementFlags,
}

/// Assembles `dim H₀ = dim H₁ = dim H₂ = Δ`, `β₀ = 1 − Δ` and the pinned δ values.
pub fn delta_report(
    algebra: &TracialAlgebra,
    gns: &GnsStructure,
    seed: u64,
    tolerances: &Tolerances,
) -> Result<DeltaReport> {
    require_generating(algebra)?;
    let decomposition = central_decomposition(algebra, gns, seed)?;
    let h0 = compute_h0(algebra, gns, tolerances)?;
    let h1 = compute_h1(algebra, gns, tolerances)?;
    let h2 = compute_h2(algebra, gns, tolerances)?;
    let dim_h0 = vn_dimension(&h0, &decomposition, tolerances)?;
    let dim_h1 = vn_dimension(&h1, &decomposition, tolerances)?;
    let dim_h2 = vn_dimension(&h2, &decomposition, tolerances)?;
    if dim_h0.value > dim_h2.value + tolerances.dimension {
        return Err(Error::ChainViolation {
            dim_h0: dim_h0.value,
            dim_h2: dim_h2.value,
        });
    }

    let d = gns.dim;
    let commutant = commutant_dim(gns, tolerances);
    let delta = dim_h2.value;
    let beta0 = 1.0 - delta;
    let closed_form_beta0 = decomposition.closed_form_beta0();
    let distance_h0_h1 = h0.distance(&h1);
    let distance_h0_h2 = h0.distance(&h2);
    let declared = algebra.block_sizes().is_empty() || decomposition.matches_declared(algebra);

    Ok(DeltaReport {
        n: gns.generator_mult().len(),
        d,
        block_sizes: decomposition.sizes.clone(),
        trace_weights: decomposition.weights.clone(),
        complex_dim_h0: h0.complex_dim(),
        commutant_dim: commutant,
        delta,
        delta_fraction: dim_h2.fraction,
        beta0,
        beta0_fraction: dim_h2
            .fraction
            .map(|f| Fraction(num_rational::Ratio::from_integer(1) - f.0)),
        closed_form_beta0,
        delta_star: delta,
        delta_blackstar: delta,
        distance_h0_h1,
        distance_h0_h2,
        agreement: AgreementFlags {
            h0_equals_h1: distance_h0_h1 <= tolerances.dimension,
            h0_equals_h2: distance_h0_h2 <= tolerances.dimension,
            beta0_matches_closed_form: (beta0 - closed_form_beta0).abs() <= tolerances.dimension,
            rank_nullity: h0.complex_dim() + commutant == d * d,
            blocks_match_declared: declared,
        },
        dim_h0,
        dim_h1,
        dim_h2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, ONE, ZERO};
    use crate::tracial::{gns_structure, AlgebraOptions};

    fn scalar(x: f64) -> CMat {
        CMat::from_element(1, 1, c(x, 0.0))
    }

    #[test]
    fn identity_and_commutant_give_zero_cocycles() {
        let sx = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let sz = CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]);
        let alg = TracialAlgebra::build(
            &[2],
            &[1.0],
            &[vec![sx], vec![sz]],
            AlgebraOptions::default(),
        )
        .unwrap();
        let gns = gns_structure(&alg).unwrap();
        for t in cocycle_map(&gns, &CMat::identity(4, 4)) {
            assert_eq!(max_abs(&t), 0.0);
        }
        for r in gns.commutant_basis() {
            for t in cocycle_map(&gns, &r) {
                assert!(max_abs(&t) < 1e-12);
            }
        }
    }

    #[test]
    fn off_diagonal_cocycle_in_two_point_algebra() {
        let alg = TracialAlgebra::build(
            &[1, 1],
            &[0.5, 0.5],
            &[vec![scalar(0.0), scalar(1.0)]],
            AlgebraOptions::default(),
        )
        .unwrap();
        let gns = gns_structure(&alg).unwrap();
        // L_X = diag(0, 1), so [E_12, L_X] = E_12 (λ_2 − λ_1)
        let t = cocycle_map(&gns, &matrix_unit(2, 0, 1));
        assert!(max_abs(&(&t[0] - matrix_unit(2, 0, 1))) < 1e-12);
        let report = delta_report(&alg, &gns, 0, &Tolerances::default()).unwrap();
        assert_eq!(report.complex_dim_h0, 2);
        assert_eq!(report.delta_fraction, Some(Fraction::new(1, 2)));
        assert_eq!(report.beta0_fraction, Some(Fraction::new(1, 2)));
    }

    #[test]
    fn zero_generators_give_trivial_spaces() {
        let alg = TracialAlgebra::build(&[1], &[1.0], &[], AlgebraOptions::default()).unwrap();
        let gns = gns_structure(&alg).unwrap();
        let tol = Tolerances::default();
        let h1 = compute_h1(&alg, &gns, &tol).unwrap();
        assert_eq!(h1.complex_dim(), 0);
        let report = delta_report(&alg, &gns, 0, &tol).unwrap();
        assert_eq!(report.delta, 0.0);
        assert!((report.beta0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_generating_tuple_is_refused() {
        let sx = CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]);
        let alg = TracialAlgebra::build(
            &[2],
            &[1.0],
            &[vec![sx]],
            AlgebraOptions {
                subalgebra_mode: true,
                labels: None,
            },
        )
        .unwrap();
        let gns = gns_structure(&alg).unwrap();
        let err = compute_h0(&alg, &gns, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::NotGenerating { .. }));
    }
}
