//! Complex matrix helpers shared by every module.
//!
//! Operators on `L²(M, τ)` are `D × D` complex matrices in the orthonormal GNS
//! basis. Tuples in `HSⁿ` are flattened column-major into vectors of length
//! `n·D²` so that subspaces of `HSⁿ` are ordinary column spans.

use faer::{Mat, MatRef};
use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ZERO: C64 = Complex { re: 0.0, im: 0.0 };
pub const ONE: C64 = Complex { re: 1.0, im: 0.0 };
pub const I: C64 = Complex { re: 0.0, im: 1.0 };

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    max_abs(&(m - m.adjoint()))
}

/// Hilbert–Schmidt inner product `⟨S, T⟩ = Tr(T* S)`, linear in `S`.
pub fn hs_inner(s: &CMat, t: &CMat) -> C64 {
    s.iter().zip(t.iter()).map(|(a, b)| a * b.conj()).sum()
}

/// `‖Σ_j T_j‖` over a tuple in the Hilbert–Schmidt norm.
pub fn tuple_norm(t: &[CMat]) -> f64 {
    t.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

pub fn flatten_tuple(t: &[CMat]) -> CVec {
    let len: usize = t.iter().map(|m| m.len()).sum();
    let mut out = CVec::zeros(len);
    let mut offset = 0;
    for m in t {
        for (k, z) in m.iter().enumerate() {
            out[offset + k] = *z;
        }
        offset += m.len();
    }
    out
}

pub fn unflatten_tuple(v: &CVec, n: usize, d: usize) -> Vec<CMat> {
    assert_eq!(v.len(), n * d * d, "tuple length mismatch");
    (0..n)
        .map(|j| CMat::from_iterator(d, d, v.iter().skip(j * d * d).take(d * d).copied()))
        .collect()
}

pub fn matrix_unit(d: usize, row: usize, col: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(row, col)] = ONE;
    m
}

// Decompositions go through faer: nalgebra's complex SVD can return factors
// whose product misses the input by 1e-2 without reporting non-convergence.

fn to_faer(m: &CMat) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: MatRef<'_, C64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Hermitian eigendecomposition with eigenvalues in ascending order.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let d = a.nrows();
    if d == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let sym = (a + a.adjoint()) * c(0.5, 0.0);
    let eig = to_faer(&sym)
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("Hermitian eigensolver failed on finite input");
    let values = eig.S().column_vector().iter().map(|z| z.re).collect();
    (values, from_faer(eig.U()))
}

/// `M = U diag(σ) V*` with `σ` non-increasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    /// Thin factors: `U` is `rows × k`, `V` is `cols × k`, `k = min(rows, cols)`.
    pub fn thin(m: &CMat) -> Svd {
        Self::compute(m, true)
    }

    /// Full factors: `U` and `V` are square.
    pub fn full(m: &CMat) -> Svd {
        Self::compute(m, false)
    }

    fn compute(m: &CMat, thin: bool) -> Svd {
        let (r, k) = (m.nrows(), m.ncols());
        if r == 0 || k == 0 {
            let (ur, vk) = if thin { (0, 0) } else { (r, k) };
            return Svd {
                u: CMat::identity(r, ur),
                sigma: Vec::new(),
                v: CMat::identity(k, vk),
            };
        }
        let fm = to_faer(m);
        let svd = if thin { fm.thin_svd() } else { fm.svd() }.expect("SVD failed on finite input");
        Svd {
            u: from_faer(svd.U()),
            sigma: svd.S().column_vector().iter().map(|z| z.re).collect(),
            v: from_faer(svd.V()),
        }
    }

    pub fn max_singular(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }
}

/// Thin SVD returning `(U, σ)` with columns sorted by decreasing singular value.
pub fn left_singular(m: &CMat) -> (CMat, Vec<f64>) {
    let svd = Svd::thin(m);
    (svd.u, svd.sigma)
}

/// Minimum-norm least-squares solution of `A X = B`, singular values below
/// `rel_tol · σ_max` treated as zero.
pub fn least_squares(a: &CMat, b: &CMat, rel_tol: f64) -> CMat {
    let svd = Svd::thin(a);
    let cutoff = rel_tol * svd.max_singular();
    let ub = svd.u.adjoint() * b;
    let mut scaled = CMat::zeros(svd.sigma.len(), b.ncols());
    for (k, &s) in svd.sigma.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            scaled.set_row(k, &(ub.row(k) / c(s, 0.0)));
        }
    }
    svd.v * scaled
}

/// Numerical rank with cutoff `rel_tol · σ_max`.
pub fn numerical_rank(m: &CMat, rel_tol: f64) -> usize {
    let (_, sigma) = left_singular(m);
    count_above(&sigma, rel_tol)
}

fn count_above(sigma: &[f64], rel_tol: f64) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax <= f64::MIN_POSITIVE {
        return 0;
    }
    sigma.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Singular values below this are zero regardless of the scale of the matrix.
const NULL_FLOOR: f64 = 1e-12;

/// Orthonormal basis of the kernel of `m`, cutoff `max(rel_tol · σ_max, 1e-12)`.
pub fn null_space(m: &CMat, rel_tol: f64) -> Vec<CVec> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    if m.nrows() == 0 {
        return (0..cols)
            .map(|k| CMat::identity(cols, cols).column(k).into_owned())
            .collect();
    }
    let svd = Svd::full(m);
    let cutoff = (rel_tol * svd.max_singular()).max(NULL_FLOOR);
    // columns of V beyond the singular values span the kernel of a wide matrix
    (0..cols)
        .filter(|&i| svd.sigma.get(i).is_none_or(|&s| s <= cutoff))
        .map(|i| svd.v.column(i).into_owned())
        .collect()
}

/// Residual `‖(I − QQ*) v‖`, with `Q` having orthonormal columns.
pub fn distance_to_span(q: &CMat, v: &CVec) -> f64 {
    if q.ncols() == 0 {
        return v.norm();
    }
    let coeffs = q.adjoint() * v;
    (v - q * coeffs).norm()
}

/// Largest deviation of `Q*Q` from the identity.
pub fn orthonormality_residual(q: &CMat) -> f64 {
    let g = q.adjoint() * q;
    max_abs(&(g - CMat::identity(q.ncols(), q.ncols())))
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let m = random_matrix(rng, d, d);
    (&m + m.adjoint()) * c(0.5, 0.0)
}

pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> CMat {
    let (_, u) = hermitian_eigen(&random_hermitian(rng, d));
    u
}

/// Block-diagonal matrix from square blocks.
pub fn block_diag(blocks: &[CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = CMat::zeros(n, n);
    let mut offset = 0;
    for b in blocks {
        m.view_mut((offset, offset), (b.nrows(), b.ncols()))
            .copy_from(b);
        offset += b.nrows();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flatten_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = vec![random_matrix(&mut rng, 3, 3), random_matrix(&mut rng, 3, 3)];
        let v = flatten_tuple(&t);
        assert_eq!(v.len(), 18);
        assert_eq!(unflatten_tuple(&v, 2, 3), t);
        assert!((v.norm() - tuple_norm(&t)).abs() < 1e-14);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = CMat::from_row_slice(1, 3, &[ONE, ONE, ZERO]);
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&m * v).norm() < 1e-12);
        }
    }

    #[test]
    fn svd_reconstructs_rank_deficient_wide_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        // 12 × 30 of rank 7
        let m = random_matrix(&mut rng, 12, 7) * random_matrix(&mut rng, 7, 30);
        let svd = Svd::thin(&m);
        assert!(svd.sigma.windows(2).all(|w| w[0] >= w[1]));
        let sig = CMat::from_diagonal(&CVec::from_iterator(
            12,
            svd.sigma.iter().map(|&s| c(s, 0.0)),
        ));
        assert!(max_abs(&(&svd.u * sig * svd.v.adjoint() - &m)) < 1e-12);
        assert_eq!(numerical_rank(&m, 1e-9), 7);
        assert_eq!(null_space(&m, 1e-9).len(), 23);
    }

    #[test]
    fn least_squares_is_minimum_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let a = random_matrix(&mut rng, 6, 3) * random_matrix(&mut rng, 3, 4);
        let x_true = random_matrix(&mut rng, 4, 2);
        let b = &a * &x_true;
        let x = least_squares(&a, &b, 1e-10);
        assert!(max_abs(&(&a * &x - &b)) < 1e-10);
        // no component along the kernel
        for v in null_space(&a, 1e-9) {
            assert!((v.adjoint() * &x).norm() < 1e-10);
        }
    }

    #[test]
    fn eigen_sorted_and_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(&mut rng, 6);
        let (vals, u) = hermitian_eigen(&a);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        let lam = CMat::from_diagonal(&CVec::from_iterator(6, vals.iter().map(|&x| c(x, 0.0))));
        assert!(max_abs(&(&u * lam * u.adjoint() - &a)) < 1e-12);
    }

    #[test]
    fn hs_inner_is_trace_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = random_matrix(&mut rng, 4, 4);
        let t = random_matrix(&mut rng, 4, 4);
        let tr = (t.adjoint() * &s).trace();
        assert!((hs_inner(&s, &t) - tr).norm() < 1e-12);
    }
}

/// Incrementally grown orthonormal basis (modified Gram–Schmidt, two passes).
#[derive(Debug, Clone)]
pub struct SpanBuilder {
    basis: Vec<CVec>,
    rel_tol: f64,
}

impl SpanBuilder {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            basis: Vec::new(),
            rel_tol,
        }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Adds `v` if it leaves the current span; returns whether it did.
    pub fn try_add(&mut self, v: &CVec) -> bool {
        let scale = v.norm();
        if scale <= f64::MIN_POSITIVE {
            return false;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &self.basis {
                let proj = q.dotc(&r);
                r -= q * proj;
            }
        }
        let rn = r.norm();
        if rn > self.rel_tol * scale {
            self.basis.push(r / c(rn, 0.0));
            true
        } else {
            false
        }
    }

    pub fn into_basis(self) -> Vec<CVec> {
        self.basis
    }
}
