//! von Neumann dimension of commutant-invariant subspaces of `HS(L²(M))ⁿ`.
//!
//! The ambient `HS(L²)ⁿ` carries the bimodule action of the commutant
//! `M' = J M J`: `T ↦ (R_a T_j)_j` and `T ↦ (T_j R_a)_j`. A subspace `K`
//! invariant under both sides splits along the minimal central projections
//! as `⊕_{i,j} z_i K z_j`, and
//!
//! ```text
//! dim K = Σ_{i,j} α_i α_j · dim_ℂ(z_i K z_j) / (n_i n_j)²
//! ```
//!
//! which is normalized so that the full space `HSⁿ` has dimension `n`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraction::{Fraction, MAX_DENOMINATOR};
use crate::linalg::{
    c, commutator, flatten_tuple, left_singular, max_abs, null_space, unflatten_tuple, CMat, CVec,
};
use crate::tol::{self, Tolerances};
use crate::tracial::{GnsStructure, TracialAlgebra};

/// Retries allowed when a random central element has colliding eigenvalues.
pub const CENTER_RETRIES: usize = 5;

/// Below this singular value a projected orthonormal set counts as zero.
const ABSOLUTE_RANK_FLOOR: f64 = 1e-7;

/// Families whose largest singular value is below this span nothing.
const SPAN_FLOOR: f64 = 1e-12;

/// Minimal central projections of `M` acting on `L²(M, τ)`.
#[derive(Debug, Clone)]
pub struct CentralDecomposition {
    pub projections: Vec<CMat>,
    pub sizes: Vec<usize>,
    pub weights: Vec<f64>,
}

impl CentralDecomposition {
    pub fn blocks(&self) -> usize {
        self.sizes.len()
    }

    /// Whether the recovered blocks agree with the declared block data.
    pub fn matches_declared(&self, algebra: &TracialAlgebra) -> bool {
        algebra.block_sizes() == self.sizes.as_slice()
            && algebra
                .trace_weights()
                .iter()
                .zip(&self.weights)
                .all(|(a, b)| (a - b).abs() <= 1e-10)
    }

    /// `β₀ = Σ α_i² / n_i²`.
    pub fn closed_form_beta0(&self) -> f64 {
        self.sizes
            .iter()
            .zip(&self.weights)
            .map(|(&n, &a)| a * a / (n * n) as f64)
            .sum()
    }

    pub fn weight_fractions(&self) -> Option<Vec<Fraction>> {
        self.weights
            .iter()
            .map(|&w| Fraction::recover(w, MAX_DENOMINATOR, 1e-9))
            .collect()
    }
}

/// Diagonalizes a random self-adjoint central element and groups its spectral
/// projections into minimal central projections.
pub fn central_decomposition(
    algebra: &TracialAlgebra,
    gns: &GnsStructure,
    seed: u64,
) -> Result<CentralDecomposition> {
    let d = gns.dim;
    // x is central iff it commutes with a generating set
    let testers: &[CMat] = if algebra.generation().generates {
        gns.generator_mult()
    } else {
        gns.basis_mult()
    };
    let rows = testers.len() * d * d;
    let mut system = CMat::zeros(rows.max(1), d);
    for (k, lb) in gns.basis_mult().iter().enumerate() {
        let comms: Vec<CMat> = testers.iter().map(|lx| commutator(lb, lx)).collect();
        if !comms.is_empty() {
            system.set_column(k, &flatten_tuple(&comms));
        }
    }
    let center = null_space(&system, tol::RANK);
    // real and imaginary parts of central vectors are self-adjoint central elements
    let real_parts: Vec<Vec<f64>> = center
        .iter()
        .flat_map(|v| [v.map(|z| z.re), v.map(|z| z.im)])
        .map(|v| v.iter().copied().collect())
        .collect();
    let center_dim = center.len();

    for attempt in 0..CENTER_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let mut coeffs = vec![0.0; d];
        for part in &real_parts {
            let w: f64 = rng.random_range(-1.0..1.0);
            for (c_k, p_k) in coeffs.iter_mut().zip(part) {
                *c_k += w * p_k;
            }
        }
        let lz = gns
            .basis_mult()
            .iter()
            .zip(&coeffs)
            .fold(CMat::zeros(d, d), |acc, (l, &w)| acc + l * c(w, 0.0));
        let (values, vectors) = crate::linalg::hermitian_eigen(&lz);
        let spread = values.last().copied().unwrap_or(0.0) - values.first().copied().unwrap_or(0.0);
        let gap = 1e-6 * spread.max(1e-3);
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for (k, &v) in values.iter().enumerate() {
            match clusters.last_mut() {
                Some(cl) if v - values[*cl.last().unwrap()] <= gap => cl.push(k),
                _ => clusters.push(vec![k]),
            }
        }
        if clusters.len() != center_dim {
            continue;
        }
        let mut blocks = Vec::with_capacity(center_dim);
        let mut square = true;
        for cl in &clusters {
            let cols: Vec<CVec> = cl.iter().map(|&k| vectors.column(k).into_owned()).collect();
            let q = CMat::from_columns(&cols);
            let p = &q * q.adjoint();
            let n = (cl.len() as f64).sqrt().round() as usize;
            if n * n != cl.len() {
                square = false;
                break;
            }
            let weight = (&p * &gns.trace_vector).norm_squared();
            let first = (0..d).find(|&k| p[(k, k)].re > 1e-8).unwrap_or(d);
            blocks.push((first, p, n, weight));
        }
        if !square {
            continue;
        }
        // ties on the first index (group algebras) fall back to size, then weight
        blocks.sort_by(|a, b| (a.0, a.2).cmp(&(b.0, b.2)).then(a.3.total_cmp(&b.3)));
        let decomposition = CentralDecomposition {
            projections: blocks.iter().map(|b| b.1.clone()).collect(),
            sizes: blocks.iter().map(|b| b.2).collect(),
            weights: blocks.iter().map(|b| b.3).collect(),
        };
        check_decomposition(&decomposition, gns)?;
        return Ok(decomposition);
    }
    Err(Error::CenterResolutionError {
        attempts: CENTER_RETRIES,
    })
}

fn check_decomposition(dec: &CentralDecomposition, gns: &GnsStructure) -> Result<()> {
    let d = gns.dim;
    let sum = dec
        .projections
        .iter()
        .fold(CMat::zeros(d, d), |acc, p| acc + p);
    let mut residual = max_abs(&(sum - CMat::identity(d, d)));
    for (i, p) in dec.projections.iter().enumerate() {
        for (j, q) in dec.projections.iter().enumerate() {
            let expected = if i == j { p.clone() } else { CMat::zeros(d, d) };
            residual = residual.max(max_abs(&(p * q - expected)));
        }
        for l in gns.basis_mult() {
            residual = residual.max(max_abs(&commutator(p, l)));
        }
    }
    if residual > tol::OPERATOR {
        return Err(Error::InvariantViolation {
            check: "central projections",
            residual,
        });
    }
    Ok(())
}

/// Orthonormal basis of the span of `vectors`, relative singular value cutoff `tol`.
pub fn numerical_span(vectors: &[CVec], tol: f64) -> Vec<CVec> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = CMat::from_columns(vectors);
    let (u, sigma) = left_singular(&m);
    let smax = sigma.first().copied().unwrap_or(0.0);
    // an all-zero family only produces rounding noise
    if smax <= SPAN_FLOOR {
        return Vec::new();
    }
    sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol * smax)
        .map(|(k, _)| u.column(k).into_owned())
        .collect()
}

/// A subspace of `HS(L²)ⁿ` with an invariance certificate.
#[derive(Debug, Clone)]
pub struct HsSubspace {
    /// Tuple length.
    pub n: usize,
    /// `D = dim L²`.
    pub d: usize,
    basis: Vec<CVec>,
    /// Largest distance from (action · basis vector) to the subspace.
    pub invariance_residual: f64,
}

impl HsSubspace {
    /// Span of tuples (already flattened), certified against the commutant action.
    pub fn from_vectors(n: usize, gns: &GnsStructure, vectors: &[CVec], rel_tol: f64) -> Self {
        let basis = numerical_span(vectors, rel_tol);
        let mut k = Self {
            n,
            d: gns.dim,
            basis,
            invariance_residual: 0.0,
        };
        k.invariance_residual = k.measure_invariance(gns);
        k
    }

    pub fn from_tuples(n: usize, gns: &GnsStructure, tuples: &[Vec<CMat>], rel_tol: f64) -> Self {
        let vectors: Vec<CVec> = tuples.iter().map(|t| flatten_tuple(t)).collect();
        Self::from_vectors(n, gns, &vectors, rel_tol)
    }

    /// All of `HS(L²)ⁿ`.
    pub fn full(n: usize, gns: &GnsStructure) -> Self {
        let len = n * gns.dim * gns.dim;
        let vectors: Vec<CVec> = (0..len)
            .map(|k| {
                let mut v = CVec::zeros(len);
                v[k] = crate::linalg::ONE;
                v
            })
            .collect();
        Self::from_vectors(n, gns, &vectors, tol::RANK)
    }

    /// Smallest invariant subspace containing the given tuples.
    pub fn invariant_hull(n: usize, gns: &GnsStructure, seeds: &[Vec<CMat>]) -> Self {
        let commutant = gns.commutant_basis();
        let mut vectors = Vec::new();
        for seed in seeds {
            for ra in &commutant {
                for rb in &commutant {
                    let t: Vec<CMat> = seed.iter().map(|m| ra * m * rb).collect();
                    vectors.push(flatten_tuple(&t));
                }
            }
        }
        Self::from_vectors(n, gns, &vectors, tol::RANK)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n * self.d * self.d
    }

    pub fn complex_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CVec] {
        &self.basis
    }

    pub fn basis_tuples(&self) -> Vec<Vec<CMat>> {
        self.basis
            .iter()
            .map(|v| unflatten_tuple(v, self.n, self.d))
            .collect()
    }

    fn basis_matrix(&self) -> CMat {
        if self.basis.is_empty() {
            CMat::zeros(self.ambient_dim(), 0)
        } else {
            CMat::from_columns(&self.basis)
        }
    }

    pub fn orthonormality_residual(&self) -> f64 {
        crate::linalg::orthonormality_residual(&self.basis_matrix())
    }

    /// Largest `‖(I − P_K) v‖` over `v` in the other basis.
    fn excess(&self, other: &HsSubspace) -> f64 {
        let q = self.basis_matrix();
        other
            .basis
            .iter()
            .map(|v| crate::linalg::distance_to_span(&q, v))
            .fold(0.0, f64::max)
    }

    /// Symmetric subspace distance; zero iff the subspaces coincide.
    pub fn distance(&self, other: &HsSubspace) -> f64 {
        self.excess(other).max(other.excess(self))
    }

    /// Whether `other ⊆ self` up to `tol`.
    pub fn contains(&self, other: &HsSubspace, tol: f64) -> bool {
        self.excess(other) <= tol
    }

    /// Orthogonal complement of `self` inside `outer` (assumes `self ⊆ outer`).
    pub fn complement_within(&self, outer: &HsSubspace, gns: &GnsStructure) -> HsSubspace {
        let q = self.basis_matrix();
        let residuals: Vec<CVec> = outer
            .basis
            .iter()
            .map(|v| {
                if q.ncols() == 0 {
                    v.clone()
                } else {
                    v - &q * (q.adjoint() * v)
                }
            })
            .collect();
        // residuals are either rounding noise or of order one
        let basis = if residuals.iter().all(|r| r.norm() < 1e-8) {
            Vec::new()
        } else {
            numerical_span(&residuals, tol::RANK)
        };
        let mut k = HsSubspace {
            n: self.n,
            d: self.d,
            basis,
            invariance_residual: 0.0,
        };
        k.invariance_residual = k.measure_invariance(gns);
        k
    }

    fn measure_invariance(&self, gns: &GnsStructure) -> f64 {
        if self.basis.is_empty() {
            return 0.0;
        }
        let q = self.basis_matrix();
        let qh = q.adjoint();
        let mut worst: f64 = 0.0;
        for ra in gns.commutant_basis() {
            for side in [Side::Left, Side::Right] {
                let images: Vec<CVec> = self
                    .basis
                    .iter()
                    .map(|v| act(v, &ra, side, self.n, self.d))
                    .collect();
                let w = CMat::from_columns(&images);
                let r = &w - &q * (&qh * &w);
                for col in r.column_iter() {
                    worst = worst.max(col.norm());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn act(v: &CVec, r: &CMat, side: Side, n: usize, d: usize) -> CVec {
    let t: Vec<CMat> = unflatten_tuple(v, n, d)
        .into_iter()
        .map(|m| match side {
            Side::Left => r * m,
            Side::Right => m * r,
        })
        .collect();
    flatten_tuple(&t)
}

/// `dim_ℂ(z_i K z_j)` and its multiplicity `m_ij = dim / (n_i n_j)`.
#[derive(Debug, Clone, Serialize)]
pub struct BlockMultiplicity {
    pub row: usize,
    pub col: usize,
    pub complex_dim: usize,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct VnDimension {
    pub value: f64,
    pub fraction: Option<Fraction>,
    pub blocks: Vec<BlockMultiplicity>,
}

/// von Neumann dimension of an invariant subspace over `M ⊗ M^op`.
pub fn vn_dimension(
    k: &HsSubspace,
    decomposition: &CentralDecomposition,
    tolerances: &Tolerances,
) -> Result<VnDimension> {
    if k.invariance_residual > tolerances.invariance {
        return Err(Error::NotInvariant {
            residual: k.invariance_residual,
        });
    }
    let tuples = k.basis_tuples();
    let b = decomposition.blocks();
    let mut blocks = Vec::with_capacity(b * b);
    for (i, zi) in decomposition.projections.iter().enumerate() {
        for (j, zj) in decomposition.projections.iter().enumerate() {
            let unit = decomposition.sizes[i] * decomposition.sizes[j];
            let projected: Vec<CVec> = tuples
                .iter()
                .map(|t| {
                    let cut: Vec<CMat> = t.iter().map(|m| zi * m * zj).collect();
                    flatten_tuple(&cut)
                })
                .collect();
            let (rank, soft) = block_rank(&projected, tolerances.rank);
            if rank % unit != 0 || (soft - rank as f64).abs() > tol::INTEGRALITY_SLACK {
                return Err(Error::IntegralityError {
                    row: i,
                    col: j,
                    complex_dim: soft,
                    unit,
                });
            }
            blocks.push(BlockMultiplicity {
                row: i,
                col: j,
                complex_dim: rank,
                multiplicity: rank / unit,
            });
        }
    }
    let value = blocks
        .iter()
        .map(|bm| {
            let (i, j) = (bm.row, bm.col);
            let unit = (decomposition.sizes[i] * decomposition.sizes[j]) as f64;
            decomposition.weights[i] * decomposition.weights[j] * bm.multiplicity as f64 / unit
        })
        .sum();
    let fraction = decomposition.weight_fractions().map(|w| {
        let total = blocks.iter().fold(Ratio::from_integer(0i64), |acc, bm| {
            let (i, j) = (bm.row, bm.col);
            let unit = (decomposition.sizes[i] * decomposition.sizes[j]) as i64;
            acc + w[i].0 * w[j].0 * Ratio::new(bm.multiplicity as i64, unit)
        });
        Fraction(total)
    });
    Ok(VnDimension {
        value,
        fraction,
        blocks,
    })
}

/// Numerical rank and `Σ σ²` of a set of projected orthonormal vectors.
fn block_rank(vectors: &[CVec], rel_tol: f64) -> (usize, f64) {
    if vectors.is_empty() {
        return (0, 0.0);
    }
    let m = CMat::from_columns(vectors);
    let (_, sigma) = left_singular(&m);
    let smax = sigma.first().copied().unwrap_or(0.0);
    let cutoff = (rel_tol * smax).max(ABSOLUTE_RANK_FLOOR);
    let rank = sigma.iter().filter(|&&s| s > cutoff).count();
    let soft = sigma.iter().map(|s| s * s).sum();
    (rank, soft)
}
