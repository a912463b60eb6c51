//! Finite-dimensional tracial algebras and their GNS representation.
//!
//! An algebra is stored concretely: a unital *-subalgebra of `M_N(ℂ)` together
//! with an orthonormal basis of self-adjoint elements and a trace density `ρ`
//! so that `τ(x) = Tr(ρ x)`. Multi-matrix algebras `⊕ M_{n_i}` with weights
//! `α_i` use `ρ = ⊕ (α_i / n_i) 1`; group algebras use `ρ = e_{ee}`.
//!
//! Because the basis is self-adjoint, the modular conjugation `J: x̂ ↦ x̂*`
//! acts on GNS coordinates as entrywise complex conjugation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    block_diag, c, flatten_tuple, hermitian_residual, max_abs, CMat, CVec, SpanBuilder, C64, I, ONE,
};
use crate::tol;

/// Outcome of the span iteration over words in the generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenerationCheck {
    pub generated_dim: usize,
    pub generates: bool,
}

#[derive(Debug, Clone)]
pub struct TracialAlgebra {
    ambient: usize,
    block_sizes: Vec<usize>,
    trace_weights: Vec<f64>,
    generators: Vec<CMat>,
    labels: Vec<String>,
    basis: Vec<CMat>,
    trace_density: CMat,
    generation: GenerationCheck,
    subalgebra_mode: bool,
}

/// Optional knobs for [`TracialAlgebra::build`].
#[derive(Debug, Clone, Default)]
pub struct AlgebraOptions {
    /// Accept a non-generating tuple; the effective algebra is then the generated one.
    pub subalgebra_mode: bool,
    pub labels: Option<Vec<String>>,
}

impl TracialAlgebra {
    /// Validates block data and generators (each generator given as its list of
    /// diagonal blocks) and runs the generation check.
    pub fn build(
        block_sizes: &[usize],
        trace_weights: &[f64],
        generators: &[Vec<CMat>],
        options: AlgebraOptions,
    ) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::ShapeMismatch(
                "block sizes must be a non-empty list of positive integers".into(),
            ));
        }
        if block_sizes.len() != trace_weights.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks but {} trace weights",
                block_sizes.len(),
                trace_weights.len()
            )));
        }
        if let Some(w) = trace_weights.iter().find(|w| !w.is_finite() || **w <= 0.0) {
            return Err(Error::WeightError(format!("weight {w} is not positive")));
        }
        let total: f64 = trace_weights.iter().sum();
        if (total - 1.0).abs() > tol::SCALAR {
            return Err(Error::WeightError(format!("weights sum to {total}, not 1")));
        }

        let mut full = Vec::with_capacity(generators.len());
        for (j, blocks) in generators.iter().enumerate() {
            if blocks.len() != block_sizes.len() {
                return Err(Error::ShapeMismatch(format!(
                    "generator {j} has {} blocks, expected {}",
                    blocks.len(),
                    block_sizes.len()
                )));
            }
            for (b, (m, &n)) in blocks.iter().zip(block_sizes).enumerate() {
                if m.nrows() != n || m.ncols() != n {
                    return Err(Error::ShapeMismatch(format!(
                        "generator {j} block {b} is {}x{}, expected {n}x{n}",
                        m.nrows(),
                        m.ncols()
                    )));
                }
            }
            let x = block_diag(blocks);
            let residual = hermitian_residual(&x);
            if residual > tol::SCALAR {
                return Err(Error::NotSelfAdjoint { index: j, residual });
            }
            full.push(x);
        }

        let (basis, density) = matrix_unit_basis(block_sizes, trace_weights);
        let ambient = block_sizes.iter().sum();
        Self::assemble(
            ambient,
            block_sizes.to_vec(),
            trace_weights.to_vec(),
            full,
            basis,
            density,
            options,
        )
    }

    /// Algebra given directly by a self-adjoint orthonormal basis and a trace
    /// density; block data is filled in later (see the group tools).
    pub(crate) fn from_basis(
        basis: Vec<CMat>,
        trace_density: CMat,
        generators: Vec<CMat>,
        options: AlgebraOptions,
    ) -> Result<Self> {
        let ambient = trace_density.nrows();
        Self::assemble(
            ambient,
            Vec::new(),
            Vec::new(),
            generators,
            basis,
            trace_density,
            options,
        )
    }

    fn assemble(
        ambient: usize,
        block_sizes: Vec<usize>,
        trace_weights: Vec<f64>,
        generators: Vec<CMat>,
        basis: Vec<CMat>,
        trace_density: CMat,
        options: AlgebraOptions,
    ) -> Result<Self> {
        let labels = match options.labels {
            Some(l) if l.len() == generators.len() => l,
            Some(l) => {
                return Err(Error::ShapeMismatch(format!(
                    "{} labels for {} generators",
                    l.len(),
                    generators.len()
                )))
            }
            None => (1..=generators.len()).map(|j| format!("X{j}")).collect(),
        };
        let mut algebra = Self {
            ambient,
            block_sizes,
            trace_weights,
            generators,
            labels,
            basis,
            trace_density,
            generation: GenerationCheck {
                generated_dim: 0,
                generates: false,
            },
            subalgebra_mode: options.subalgebra_mode,
        };
        algebra.generation = generation_check(&algebra);
        if !algebra.generation.generates && !algebra.subalgebra_mode {
            return Err(Error::NotGenerating {
                generated: algebra.generation.generated_dim,
                total: algebra.dim(),
            });
        }
        Ok(algebra)
    }

    /// Complex dimension `D` of the algebra (equivalently of `L²(M, τ)`).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Size `N` of the matrices the algebra is realized in.
    pub fn ambient_size(&self) -> usize {
        self.ambient
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn trace_weights(&self) -> &[f64] {
        &self.trace_weights
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn generation(&self) -> GenerationCheck {
        self.generation
    }

    pub fn subalgebra_mode(&self) -> bool {
        self.subalgebra_mode
    }

    pub fn trace(&self, x: &CMat) -> C64 {
        (&self.trace_density * x).trace()
    }

    pub(crate) fn trace_density(&self) -> &CMat {
        &self.trace_density
    }

    pub(crate) fn set_blocks(&mut self, sizes: Vec<usize>, weights: Vec<f64>) {
        self.block_sizes = sizes;
        self.trace_weights = weights;
    }

    /// Same algebra with a different generating tuple.
    pub fn with_generators(&self, generators: Vec<CMat>, options: AlgebraOptions) -> Result<Self> {
        for (index, g) in generators.iter().enumerate() {
            if g.nrows() != self.ambient || g.ncols() != self.ambient {
                return Err(Error::ShapeMismatch(format!(
                    "generator {index} is {}x{}, expected {}x{}",
                    g.nrows(),
                    g.ncols(),
                    self.ambient,
                    self.ambient
                )));
            }
            let residual = hermitian_residual(g);
            if residual > tol::SCALAR {
                return Err(Error::NotSelfAdjoint { index, residual });
            }
        }
        Self::assemble(
            self.ambient,
            self.block_sizes.clone(),
            self.trace_weights.clone(),
            generators,
            self.basis.clone(),
            self.trace_density.clone(),
            options,
        )
    }
}

/// Scaled Hermitian matrix units, block by block.
fn matrix_unit_basis(sizes: &[usize], weights: &[f64]) -> (Vec<CMat>, CMat) {
    let ambient: usize = sizes.iter().sum();
    let mut basis = Vec::new();
    let mut density = CMat::zeros(ambient, ambient);
    let mut offset = 0;
    for (&n, &alpha) in sizes.iter().zip(weights) {
        let nf = n as f64;
        let diag_scale = (nf / alpha).sqrt();
        let off_scale = (nf / (2.0 * alpha)).sqrt();
        for k in 0..n {
            density[(offset + k, offset + k)] = c(alpha / nf, 0.0);
            for l in k..n {
                let (a, b) = (offset + k, offset + l);
                if k == l {
                    let mut m = CMat::zeros(ambient, ambient);
                    m[(a, a)] = c(diag_scale, 0.0);
                    basis.push(m);
                } else {
                    let mut sym = CMat::zeros(ambient, ambient);
                    sym[(a, b)] = c(off_scale, 0.0);
                    sym[(b, a)] = c(off_scale, 0.0);
                    basis.push(sym);
                    let mut anti = CMat::zeros(ambient, ambient);
                    anti[(a, b)] = I * off_scale;
                    anti[(b, a)] = -I * off_scale;
                    basis.push(anti);
                }
            }
        }
        offset += n;
    }
    (basis, density)
}

/// Spans words in the generators (and the identity) until the span stabilizes.
pub fn generation_check(algebra: &TracialAlgebra) -> GenerationCheck {
    let n = algebra.ambient;
    let total = algebra.dim();
    let mut span = SpanBuilder::new(tol::RANK);
    let identity = CMat::identity(n, n);
    span.try_add(&flatten_tuple(std::slice::from_ref(&identity)));
    let mut frontier = vec![identity];
    // every round either grows the span or ends the loop
    for _ in 0..=total {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for w in &frontier {
            for x in &algebra.generators {
                let word = x * w;
                if span.try_add(&flatten_tuple(std::slice::from_ref(&word))) {
                    next.push(word);
                }
            }
        }
        frontier = next;
    }
    let generated_dim = span.len();
    GenerationCheck {
        generated_dim,
        generates: generated_dim == total,
    }
}

/// Orthonormal coordinates for `L²(M, τ)`.
#[derive(Debug, Clone)]
pub struct GnsStructure {
    /// `D = dim_ℂ L²(M, τ)`.
    pub dim: usize,
    /// Coordinates of the unit `1̂`.
    pub trace_vector: CVec,
    /// Rank-one projection onto the trace vector.
    pub p1: CMat,
    basis: Vec<CMat>,
    weighted_basis: Vec<CMat>,
    basis_mult: Vec<CMat>,
    generator_mult: Vec<CMat>,
}

impl GnsStructure {
    /// Coordinates `x̂_k = ⟨x, b_k⟩ = τ(b_k x)`.
    pub fn coords(&self, x: &CMat) -> CVec {
        CVec::from_iterator(
            self.dim,
            self.weighted_basis
                .iter()
                .map(|w| w.iter().zip(x.transpose().iter()).map(|(a, b)| a * b).sum()),
        )
    }

    /// Algebra element with the given coordinates.
    pub fn element(&self, coords: &CVec) -> CMat {
        let n = self.basis.first().map_or(0, |b| b.nrows());
        self.basis
            .iter()
            .zip(coords.iter())
            .fold(CMat::zeros(n, n), |acc, (b, z)| acc + b * *z)
    }

    /// Left multiplication `L_a` on `L²(M, τ)`.
    pub fn left_mult(&self, a: &CMat) -> CMat {
        let cols: Vec<CVec> = self.basis.iter().map(|b| self.coords(&(a * b))).collect();
        CMat::from_columns(&cols)
    }

    /// Right multiplication by `a`, i.e. `J L_{a*} J`.
    pub fn right_mult(&self, a: &CMat) -> CMat {
        self.conjugate_op(&self.left_mult(&a.adjoint()))
    }

    /// `J` on vectors.
    pub fn conjugate(&self, v: &CVec) -> CVec {
        v.map(|z| z.conj())
    }

    /// `J A J` for a linear operator `A`.
    pub fn conjugate_op(&self, a: &CMat) -> CMat {
        a.map(|z| z.conj())
    }

    /// `L_{b_k}` for the basis elements.
    pub fn basis_mult(&self) -> &[CMat] {
        &self.basis_mult
    }

    /// `L_{X_j}` for the generators.
    pub fn generator_mult(&self) -> &[CMat] {
        &self.generator_mult
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    /// Right multiplications by basis elements: the commutant `J M J`.
    pub fn commutant_basis(&self) -> Vec<CMat> {
        self.basis_mult
            .iter()
            .map(|l| self.conjugate_op(l))
            .collect()
    }
}

/// Builds the GNS coordinates and checks the structural identities.
pub fn gns_structure(algebra: &TracialAlgebra) -> Result<GnsStructure> {
    let d = algebra.dim();
    let n = algebra.ambient;
    let weighted_basis: Vec<CMat> = algebra
        .basis
        .iter()
        .map(|b| algebra.trace_density() * b)
        .collect();
    let mut gns = GnsStructure {
        dim: d,
        trace_vector: CVec::zeros(d),
        p1: CMat::zeros(d, d),
        basis: algebra.basis.clone(),
        weighted_basis,
        basis_mult: Vec::new(),
        generator_mult: Vec::new(),
    };
    let identity = CMat::identity(n, n);
    gns.trace_vector = gns.coords(&identity);
    gns.p1 = &gns.trace_vector * gns.trace_vector.adjoint();
    gns.basis_mult = algebra.basis.iter().map(|b| gns.left_mult(b)).collect();
    gns.generator_mult = algebra
        .generators
        .iter()
        .map(|x| gns.left_mult(x))
        .collect();

    check_gns(algebra, &gns)?;
    Ok(gns)
}

fn violation(check: &'static str, residual: f64, threshold: f64) -> Result<()> {
    if residual > threshold || residual.is_nan() {
        Err(Error::InvariantViolation { check, residual })
    } else {
        Ok(())
    }
}

fn check_gns(algebra: &TracialAlgebra, gns: &GnsStructure) -> Result<()> {
    let d = gns.dim;
    violation(
        "unit trace vector",
        (gns.trace_vector.norm() - 1.0).abs(),
        tol::OPERATOR,
    )?;

    let mut ortho: f64 = 0.0;
    let mut cyclic: f64 = 0.0;
    for (k, b) in algebra.basis.iter().enumerate() {
        let coords = gns.coords(b);
        for l in 0..d {
            let expected = if l == k { ONE } else { c(0.0, 0.0) };
            ortho = ortho.max((coords[l] - expected).norm());
        }
        cyclic = cyclic.max((&gns.basis_mult[k] * &gns.trace_vector - &coords).norm());
    }
    violation("orthonormal basis", ortho, tol::OPERATOR)?;
    violation("cyclicity of the trace vector", cyclic, tol::OPERATOR)?;

    // exhaustive pair checks are quadratic in D; larger algebras use generators × basis
    let lhs: Vec<(&CMat, &CMat)> = if d <= 16 {
        algebra.basis.iter().zip(gns.basis_mult.iter()).collect()
    } else {
        algebra
            .generators
            .iter()
            .zip(gns.generator_mult.iter())
            .collect()
    };
    let mut hom: f64 = 0.0;
    let mut star: f64 = 0.0;
    let mut commutant: f64 = 0.0;
    let mut trace: f64 = 0.0;
    for (a, la) in &lhs {
        star = star.max(max_abs(&(gns.left_mult(&a.adjoint()) - la.adjoint())));
        let ra = gns.right_mult(a);
        for (b, lb) in algebra.basis.iter().zip(gns.basis_mult.iter()) {
            let lab = gns.left_mult(&(*a * b));
            hom = hom.max(max_abs(&(lab - *la * lb)));
            commutant = commutant.max(max_abs(&(&ra * lb - lb * &ra)));
            trace = trace.max((algebra.trace(&(*a * b)) - algebra.trace(&(b * *a))).norm());
        }
    }
    violation("L is multiplicative", hom, tol::OPERATOR)?;
    violation("L is a *-map", star, tol::OPERATOR)?;
    violation("JMJ commutes with M", commutant, tol::OPERATOR)?;
    violation("traciality", trace, tol::SCALAR)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, ZERO};

    fn scalar(x: f64) -> CMat {
        CMat::from_element(1, 1, c(x, 0.0))
    }

    fn pauli_x() -> CMat {
        CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
    }

    fn pauli_z() -> CMat {
        CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
    }

    fn c2() -> TracialAlgebra {
        TracialAlgebra::build(
            &[1, 1],
            &[0.5, 0.5],
            &[vec![scalar(0.0), scalar(1.0)]],
            AlgebraOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn two_point_algebra() {
        let alg = c2();
        assert_eq!(alg.dim(), 2);
        let gns = gns_structure(&alg).unwrap();
        let s = 0.5f64.sqrt();
        assert!((gns.trace_vector[0] - c(s, 0.0)).norm() < 1e-14);
        assert!((gns.trace_vector[1] - c(s, 0.0)).norm() < 1e-14);
        assert!(gns.p1.iter().all(|z| (z - c(0.5, 0.0)).norm() < 1e-14));
        let lx = &gns.generator_mult()[0];
        let expected = CMat::from_row_slice(2, 2, &[ZERO, ZERO, ZERO, ONE]);
        assert!(max_abs(&(lx - expected)) < 1e-14);
    }

    #[test]
    fn full_matrix_algebra() {
        let alg = TracialAlgebra::build(
            &[2],
            &[1.0],
            &[vec![pauli_x()], vec![pauli_z()]],
            AlgebraOptions::default(),
        )
        .unwrap();
        assert_eq!(alg.dim(), 4);
        assert_eq!(
            alg.generation(),
            GenerationCheck {
                generated_dim: 4,
                generates: true
            }
        );
        let gns = gns_structure(&alg).unwrap();
        assert!((gns.conjugate(&gns.trace_vector) - &gns.trace_vector).norm() < 1e-14);
    }

    #[test]
    fn weights_must_sum_to_one() {
        let err = TracialAlgebra::build(
            &[1, 1],
            &[0.5, 0.4],
            &[vec![scalar(0.0), scalar(1.0)]],
            AlgebraOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::WeightError(_)));
        let err = TracialAlgebra::build(&[1, 1], &[1.5, -0.5], &[], AlgebraOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::WeightError(_)));
    }

    #[test]
    fn rejects_non_self_adjoint_and_bad_shapes() {
        let upper = CMat::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        let err = TracialAlgebra::build(&[2], &[1.0], &[vec![upper]], AlgebraOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::NotSelfAdjoint { index: 0, .. }));
        let err = TracialAlgebra::build(
            &[2],
            &[1.0],
            &[vec![scalar(1.0)]],
            AlgebraOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch(_)));
    }

    #[test]
    fn single_pauli_does_not_generate() {
        let err =
            TracialAlgebra::build(&[2], &[1.0], &[vec![pauli_x()]], AlgebraOptions::default())
                .unwrap_err();
        assert_eq!(
            err,
            Error::NotGenerating {
                generated: 2,
                total: 4
            }
        );
        let alg = TracialAlgebra::build(
            &[2],
            &[1.0],
            &[vec![pauli_x()]],
            AlgebraOptions {
                subalgebra_mode: true,
                labels: None,
            },
        )
        .unwrap();
        assert_eq!(alg.generation().generated_dim, 2);
        assert!(!alg.generation().generates);
    }

    #[test]
    fn scalars_generate_one_dimensional_algebra() {
        let alg = TracialAlgebra::build(
            &[1],
            &[1.0],
            &[vec![scalar(1.0)]],
            AlgebraOptions::default(),
        )
        .unwrap();
        assert_eq!(
            alg.generation(),
            GenerationCheck {
                generated_dim: 1,
                generates: true
            }
        );
    }

    #[test]
    fn right_multiplication_is_conjugated_left_multiplication() {
        // J L_{a*} J x̂ = (x a)^ on basis pairs, for C ⊕ M_2
        let a_blocks = vec![
            scalar(0.3),
            CMat::from_row_slice(2, 2, &[ONE, c(0.0, 2.0), c(1.0, -1.0), c(0.5, 0.0)]),
        ];
        let alg = TracialAlgebra::build(
            &[1, 2],
            &[1.0 / 3.0, 2.0 / 3.0],
            &[vec![scalar(1.0), pauli_x()], vec![scalar(0.0), pauli_z()]],
            AlgebraOptions::default(),
        )
        .unwrap();
        let gns = gns_structure(&alg).unwrap();
        let a = block_diag(&a_blocks);
        let ra = gns.right_mult(&a);
        for b in alg.basis() {
            let lhs = &ra * gns.coords(b);
            let rhs = gns.coords(&(b * &a));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }
}
