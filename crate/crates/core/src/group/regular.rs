use crate::error::{Error, Result};
use crate::linalg::{c, CMat, I};
use crate::tracial::{gns_structure, AlgebraOptions, TracialAlgebra};
use crate::vn_dimension::central_decomposition;

use super::table::FiniteGroupTable;

/// Largest group order accepted unless a different cap is passed.
pub const DEFAULT_ORDER_CAP: usize = 24;

/// `ℂG` on `ℓ²(G)` with `τ(x) = ⟨x δ_e, δ_e⟩`, generated by the real and
/// imaginary parts of a minimal generating set.
pub fn regular_rep_algebra(table: &FiniteGroupTable) -> Result<TracialAlgebra> {
    regular_rep_algebra_with(table, None, DEFAULT_ORDER_CAP, 0)
}

/// Left regular representation `λ_g δ_h = δ_{gh}`.
fn lambda(table: &FiniteGroupTable, g: usize) -> CMat {
    let n = table.order;
    let mut m = CMat::zeros(n, n);
    for h in 0..n {
        m[(table.mult[g][h], h)] = c(1.0, 0.0);
    }
    m
}

/// As [`regular_rep_algebra`] with explicit group elements, order cap and the
/// seed for the numerical block discovery.
pub fn regular_rep_algebra_with(
    table: &FiniteGroupTable,
    elements: Option<&[usize]>,
    cap: usize,
    seed: u64,
) -> Result<TracialAlgebra> {
    let order = table.order;
    if order > cap {
        return Err(Error::TooLarge { order, cap });
    }
    let chosen = match elements {
        Some(e) => {
            if let Some(&bad) = e.iter().find(|&&g| g >= order) {
                return Err(Error::InvalidGroup(format!(
                    "element {bad} outside a group of order {order}"
                )));
            }
            if !table.generates(e) {
                return Err(Error::NotGeneratingSet);
            }
            e.to_vec()
        }
        None => table.minimal_generating_set(),
    };

    let lambdas: Vec<CMat> = (0..order).map(|g| lambda(table, g)).collect();
    let half = std::f64::consts::FRAC_1_SQRT_2;

    // orthonormal self-adjoint basis: λ_g for g = g⁻¹, otherwise the real and
    // imaginary parts of λ_g scaled by √2; the identity comes first
    let mut order_of_elements: Vec<usize> = vec![table.identity];
    order_of_elements.extend((0..order).filter(|&g| g != table.identity));
    let mut basis = Vec::with_capacity(order);
    for &g in &order_of_elements {
        let inv = table.inverse[g];
        if inv == g {
            basis.push(lambdas[g].clone());
        } else if g < inv {
            basis.push((&lambdas[g] + &lambdas[inv]) * c(half, 0.0));
            basis.push((&lambdas[g] - &lambdas[inv]) * (I * half));
        }
    }

    let mut density = CMat::zeros(order, order);
    density[(table.identity, table.identity)] = c(1.0, 0.0);

    let mut generators = Vec::new();
    let mut labels = Vec::new();
    for &g in &chosen {
        let inv = table.inverse[g];
        generators.push((&lambdas[g] + &lambdas[inv]) * c(0.5, 0.0));
        labels.push(format!("Re g{g}"));
        // Im g vanishes for involutions and is left out
        if inv != g {
            generators.push((&lambdas[g] - &lambdas[inv]) * c(0.0, -0.5));
            labels.push(format!("Im g{g}"));
        }
    }

    let options = AlgebraOptions {
        subalgebra_mode: false,
        labels: Some(labels),
    };
    let mut algebra = TracialAlgebra::from_basis(basis, density, generators, options)?;
    let gns = gns_structure(&algebra)?;
    let dec = central_decomposition(&algebra, &gns, seed)?;
    algebra.set_blocks(dec.sizes, dec.weights);
    Ok(algebra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn blocks(table: &FiniteGroupTable) -> (Vec<usize>, Vec<f64>) {
        let alg = regular_rep_algebra(table).unwrap();
        (alg.block_sizes().to_vec(), alg.trace_weights().to_vec())
    }

    #[test]
    fn abelian_groups_split_into_characters() {
        for n in [2, 3, 4] {
            let (sizes, weights) = blocks(&FiniteGroupTable::cyclic(n));
            assert_eq!(sizes, vec![1; n]);
            assert!(weights.iter().all(|w| (w - 1.0 / n as f64).abs() < 1e-10));
        }
    }

    #[test]
    fn symmetric_group_s3() {
        let (sizes, weights) = blocks(&FiniteGroupTable::symmetric(3));
        assert_eq!(sizes, vec![1, 1, 2]);
        let expected = [1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0];
        for (w, e) in weights.iter().zip(expected) {
            assert!((w - e).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_is_identity_coefficient() {
        let table = FiniteGroupTable::cyclic(3);
        let alg = regular_rep_algebra(&table).unwrap();
        assert!((alg.trace(&CMat::identity(3, 3)).re - 1.0).abs() < 1e-15);
        let g = lambda(&table, 1);
        assert!(alg.trace(&g).norm() < 1e-15);
        assert!(max_abs(&(&g * lambda(&table, 2) - CMat::identity(3, 3))) < 1e-15);
    }

    #[test]
    fn errors() {
        let s4 = FiniteGroupTable::symmetric(4);
        assert!(matches!(
            regular_rep_algebra_with(&s4, None, 12, 0),
            Err(Error::TooLarge { order: 24, cap: 12 })
        ));
        let z4 = FiniteGroupTable::cyclic(4);
        assert!(matches!(
            regular_rep_algebra_with(&z4, Some(&[2]), DEFAULT_ORDER_CAP, 0),
            Err(Error::NotGeneratingSet)
        ));
        assert!(regular_rep_algebra_with(&z4, Some(&[1, 2]), DEFAULT_ORDER_CAP, 0).is_ok());
    }
}
