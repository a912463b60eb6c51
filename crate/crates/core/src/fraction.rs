//! Exact rational reconstruction of dimensions.

use std::fmt;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

/// Largest denominator accepted when recovering a weight from its float value.
pub const MAX_DENOMINATOR: i64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction(pub Ratio<i64>);

impl Fraction {
    pub fn new(num: i64, den: i64) -> Self {
        Fraction(Ratio::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        Fraction(Ratio::from_integer(n))
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// Best rational approximation with denominator at most `max_den`, accepted
    /// only if it reproduces `x` within `tol`.
    pub fn recover(x: f64, max_den: i64, tol: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        let sign = if x < 0.0 { -1 } else { 1 };
        let target = x.abs();
        // continued fraction convergents
        let (mut h0, mut h1) = (0i64, 1i64);
        let (mut k0, mut k1) = (1i64, 0i64);
        let mut rest = target;
        for _ in 0..64 {
            let a = rest.floor();
            if a > i64::MAX as f64 / 4.0 {
                break;
            }
            let a = a as i64;
            let h2 = a.checked_mul(h1)?.checked_add(h0)?;
            let k2 = a.checked_mul(k1)?.checked_add(k0)?;
            if k2 > max_den {
                break;
            }
            (h0, h1, k0, k1) = (h1, h2, k1, k2);
            if ((h1 as f64 / k1 as f64) - target).abs() <= tol * 1e-3 {
                break;
            }
            let frac = rest - a as f64;
            if frac < 1e-15 {
                break;
            }
            rest = 1.0 / frac;
        }
        if k1 == 0 {
            return None;
        }
        let candidate = Fraction::new(sign * h1, k1);
        ((candidate.to_f64() - x).abs() <= tol).then_some(candidate)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
