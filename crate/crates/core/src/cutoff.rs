//! Spectral cutoffs `f_R`, their difference quotients and the convergence
//! `[f_R(A), X_j] → [A, X_j]`.
//!
//! For a Hermitian `A = U Λ U*`, the commutator with a function of `A` is a
//! Schur multiplier in the eigenbasis: `(U*[f(A), X]U)_{kl} = g(λ_k, λ_l) ·
//! (U*[A, X]U)_{kl}` with `g(s, t) = (f(s) − f(t)) / (s − t)` and `g(s, s) = f′(s)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, commutator, hermitian_eigen, hermitian_residual, max_abs, CMat, CVec};
use crate::tol;

/// Below this separation the difference quotient switches to the derivative.
pub const QUOTIENT_SWITCH: f64 = 1e-8;

/// A real function applied through the spectral theorem.
pub trait SpectralFunction {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;

    /// Symmetric difference quotient, `f′` at the midpoint for nearby arguments.
    fn quotient(&self, s: f64, t: f64) -> f64 {
        if (s - t).abs() < QUOTIENT_SWITCH {
            self.derivative(0.5 * (s + t))
        } else {
            (self.value(s) - self.value(t)) / (s - t)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CutoffKind {
    /// `f(x) = sign(x)(R + 1 − e^{R − |x|})` outside `[−R, R]`; C¹ at `±R`.
    #[default]
    ExpClamp,
    /// Smooth blend: `f′ = 1 − ψ(|x| − R)` with a C^∞ step `ψ`; C^∞ everywhere.
    SmoothBlend,
}

/// `f_R`: the identity on `[−R, R]`, bounded by `R + 1`, 1-Lipschitz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffFamily {
    pub radius: f64,
    pub kind: CutoffKind,
}

impl CutoffFamily {
    pub fn new(radius: f64) -> Self {
        Self {
            radius,
            kind: CutoffKind::ExpClamp,
        }
    }

    pub fn smooth(radius: f64) -> Self {
        Self {
            radius,
            kind: CutoffKind::SmoothBlend,
        }
    }
}

impl SpectralFunction for CutoffFamily {
    fn value(&self, x: f64) -> f64 {
        let r = self.radius;
        let excess = x.abs() - r;
        if excess <= 0.0 {
            return x;
        }
        let tail = match self.kind {
            CutoffKind::ExpClamp => r + 1.0 - (-excess).exp(),
            CutoffKind::SmoothBlend => r + blend_integral(excess),
        };
        tail.copysign(x)
    }

    fn derivative(&self, x: f64) -> f64 {
        let excess = x.abs() - self.radius;
        if excess <= 0.0 {
            return 1.0;
        }
        match self.kind {
            CutoffKind::ExpClamp => (-excess).exp(),
            CutoffKind::SmoothBlend => 1.0 - smooth_step(excess),
        }
    }
}

/// `ψ(s)`: 0 for `s ≤ 0`, 1 for `s ≥ 1`, C^∞, with `ψ(s) + ψ(1 − s) = 1`.
fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / s).exp();
    let b = (-1.0 / (1.0 - s)).exp();
    a / (a + b)
}

/// `∫_0^u (1 − ψ)`, which saturates at ½ for `u ≥ 1`.
fn blend_integral(u: f64) -> f64 {
    let upper = u.min(1.0);
    // composite Simpson; the integrand is smooth
    const PANELS: usize = 256;
    let h = upper / PANELS as f64;
    let f = |s: f64| 1.0 - smooth_step(s);
    let mut acc = f(0.0) + f(upper);
    for k in 1..PANELS {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(k as f64 * h);
    }
    acc * h / 3.0
}

/// `f_R(x)`.
pub fn cutoff_eval(radius: f64, x: f64) -> f64 {
    CutoffFamily::new(radius).value(x)
}

/// `g_R(s, t)`.
pub fn quotient_eval(radius: f64, s: f64, t: f64) -> f64 {
    CutoffFamily::new(radius).quotient(s, t)
}

/// Real polynomial `Σ a_k x^k`, used for the telescoping identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl SpectralFunction for Polynomial {
    fn value(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, a| acc * x + a)
    }

    fn derivative(&self, x: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, a)| acc * x + k as f64 * a)
    }

    /// Exact divided difference: `Σ_k a_k Σ_{i+j=k−1} s^i t^j`.
    fn quotient(&self, s: f64, t: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| {
                let sum: f64 = (0..k)
                    .map(|i| s.powi(i as i32) * t.powi((k - 1 - i) as i32))
                    .sum();
                a * sum
            })
            .sum()
    }
}

fn require_hermitian(a: &CMat) -> Result<()> {
    let residual = hermitian_residual(a);
    if residual > tol::OPERATOR {
        return Err(Error::NotSelfAdjoint { index: 0, residual });
    }
    Ok(())
}

/// `f(A) = U f(Λ) U*`.
pub fn apply_function(a: &CMat, f: &impl SpectralFunction) -> Result<CMat> {
    require_hermitian(a)?;
    let (values, u) = hermitian_eigen(a);
    let diag = CVec::from_iterator(values.len(), values.iter().map(|&x| c(f.value(x), 0.0)));
    Ok(&u * CMat::from_diagonal(&diag) * u.adjoint())
}

/// `f_R(A)` for the default cutoff family.
pub fn apply_cutoff(a: &CMat, radius: f64) -> Result<CMat> {
    apply_function(a, &CutoffFamily::new(radius))
}

/// Max entrywise deviation of `U*[f(A), X]U` from `g(λ_k, λ_l)·(U*[A, X]U)_{kl}`.
pub fn commutator_identity_check(a: &CMat, x: &CMat, f: &impl SpectralFunction) -> Result<f64> {
    require_hermitian(a)?;
    require_hermitian(x)?;
    let (values, u) = hermitian_eigen(a);
    let diag = CVec::from_iterator(values.len(), values.iter().map(|&v| c(f.value(v), 0.0)));
    let fa = &u * CMat::from_diagonal(&diag) * u.adjoint();
    let lhs = u.adjoint() * commutator(&fa, x) * &u;
    let base = u.adjoint() * commutator(a, x) * &u;
    let rhs = CMat::from_fn(values.len(), values.len(), |k, l| {
        base[(k, l)] * f.quotient(values[k], values[l])
    });
    Ok(max_abs(&(lhs - rhs)))
}

/// One point of the sweep `R ↦ ‖T^(R) − T‖_HS`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    #[serde(rename = "R")]
    pub radius: f64,
    pub hs_error: f64,
}

/// `‖([f_R(A), X_j] − [A, X_j])_j‖_HS` over a grid of radii.
pub fn convergence_sweep(
    a: &CMat,
    xs: &[CMat],
    radii: &[f64],
    kind: CutoffKind,
) -> Result<Vec<SweepPoint>> {
    require_hermitian(a)?;
    let targets: Vec<CMat> = xs.iter().map(|x| commutator(a, x)).collect();
    radii
        .iter()
        .map(|&radius| {
            let fa = apply_function(a, &CutoffFamily { radius, kind })?;
            let err2: f64 = xs
                .iter()
                .zip(&targets)
                .map(|(x, t)| (commutator(&fa, x) - t).norm_squared())
                .sum();
            Ok(SweepPoint {
                radius,
                hs_error: err2.sqrt(),
            })
        })
        .collect()
}

/// Spectral radius of a Hermitian matrix.
pub fn spectral_radius(a: &CMat) -> f64 {
    let (values, _) = hermitian_eigen(a);
    values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("R,hs_error\n");
    for p in points {
        out.push_str(&format!("{},{:.6e}\n", p.radius, p.hs_error));
    }
    out
}
