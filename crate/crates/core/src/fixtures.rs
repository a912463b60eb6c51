//! Small reference algebras and seeded random objects shared by tests,
//! benchmarks and the scenario runner.

use rand::Rng;

use crate::error::Result;
use crate::linalg::{c, random_matrix, CMat, I, ONE, ZERO};
use crate::tracial::{AlgebraOptions, GnsStructure, TracialAlgebra};
use crate::vn_dimension::HsSubspace;

pub fn scalar(x: f64) -> CMat {
    CMat::from_element(1, 1, c(x, 0.0))
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

fn build(sizes: &[usize], weights: &[f64], gens: Vec<Vec<CMat>>) -> Result<TracialAlgebra> {
    TracialAlgebra::build(sizes, weights, &gens, AlgebraOptions::default())
}

/// `ℂ²` with `τ = (½, ½)`; tuples of length 1, 2 and 3.
pub fn c2_tuples() -> Vec<Vec<Vec<CMat>>> {
    let d = |a: f64, b: f64| vec![scalar(a), scalar(b)];
    vec![
        vec![d(0.0, 1.0)],
        vec![d(1.0, 2.0), d(3.0, -1.0)],
        vec![d(1.0, 1.0), d(0.5, 0.5), d(-2.0, 4.0)],
    ]
}

/// `M₂` with the normalized trace; tuples of length 2, 3 and 4.
pub fn m2_tuples() -> Vec<Vec<Vec<CMat>>> {
    let half = c(0.5, 0.0);
    vec![
        vec![vec![pauli_x()], vec![pauli_z()]],
        vec![vec![pauli_x()], vec![pauli_y()], vec![pauli_z()]],
        vec![
            vec![pauli_x() + pauli_z()],
            vec![pauli_y() * half],
            vec![CMat::identity(2, 2) * half + pauli_x()],
            vec![pauli_z()],
        ],
    ]
}

/// `ℂ ⊕ M₂` with weights `(1/3, 2/3)`; tuples of length 2, 3 and 4.
pub fn c_m2_tuples() -> Vec<Vec<Vec<CMat>>> {
    let zero2 = CMat::zeros(2, 2);
    vec![
        vec![vec![scalar(2.0), pauli_x()], vec![scalar(0.0), pauli_z()]],
        vec![
            vec![scalar(1.0), pauli_x()],
            vec![scalar(0.0), pauli_y()],
            vec![scalar(0.0), pauli_z()],
        ],
        vec![
            vec![scalar(0.0), pauli_x()],
            vec![scalar(0.0), pauli_z()],
            vec![scalar(1.0), zero2],
            vec![scalar(3.0), pauli_y() * c(0.5, 0.0)],
        ],
    ]
}

pub fn c2() -> TracialAlgebra {
    build(&[1, 1], &[0.5, 0.5], c2_tuples().remove(0)).expect("valid fixture")
}

pub fn m2() -> TracialAlgebra {
    build(&[2], &[1.0], m2_tuples().remove(0)).expect("valid fixture")
}

pub fn c_m2() -> TracialAlgebra {
    build(&[1, 2], &[1.0 / 3.0, 2.0 / 3.0], c_m2_tuples().remove(0)).expect("valid fixture")
}

/// Name, block sizes, weights and generating tuples of one fixture algebra.
type Family = (
    &'static str,
    &'static [usize],
    &'static [f64],
    Vec<Vec<Vec<CMat>>>,
);

/// Every fixture algebra with every fixture tuple, labelled.
pub fn all_tuples() -> Vec<(String, TracialAlgebra)> {
    let families: [Family; 3] = [
        ("C2", &[1, 1], &[0.5, 0.5], c2_tuples()),
        ("M2", &[2], &[1.0], m2_tuples()),
        ("C+M2", &[1, 2], &[1.0 / 3.0, 2.0 / 3.0], c_m2_tuples()),
    ];
    let mut out = Vec::new();
    for (name, sizes, weights, tuples) in families {
        for t in tuples {
            let label = format!("{name}/n={}", t.len());
            out.push((label, build(sizes, weights, t).expect("valid fixture")));
        }
    }
    out
}

/// Random element of `M` (on `L²`) of low rank: `L_m` for `m` supported on a
/// random matrix-unit pattern.
fn random_sparse_element<R: Rng>(rng: &mut R, gns: &GnsStructure) -> CMat {
    let d = gns.dim;
    let keep: Vec<usize> = (0..d).filter(|_| rng.random_bool(0.4)).collect();
    let mut coords = crate::linalg::CVec::zeros(d);
    for k in keep {
        coords[k] = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    }
    gns.left_mult(&gns.element(&coords))
}

/// Commutant-invariant subspace of `HS(L²)ⁿ`: the bimodule hull of a few
/// tuples `L_m S L_p` with random sparse `m, p ∈ M`.
pub fn random_invariant_subspace<R: Rng>(
    rng: &mut R,
    gns: &GnsStructure,
    n: usize,
    seeds: usize,
) -> HsSubspace {
    let d = gns.dim;
    let tuples: Vec<Vec<CMat>> = (0..seeds)
        .map(|_| {
            let lm = random_sparse_element(rng, gns);
            let lp = random_sparse_element(rng, gns);
            (0..n)
                .map(|_| &lm * random_matrix(rng, d, d) * &lp)
                .collect()
        })
        .collect();
    HsSubspace::invariant_hull(n, gns, &tuples)
}
