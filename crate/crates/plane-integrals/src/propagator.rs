use field_gamma::{FieldPoint, HalfInt};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::PlaneError;

/// Exponent of a propagator [z]^{−α} = z^{−α} z̄^{−ᾱ}.
///
/// Single-valuedness on the plane needs an integer label m = α − ᾱ.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldPoint", into = "FieldPoint")]
pub struct PropExponent {
    alpha: FieldPoint,
}

impl PropExponent {
    pub fn new(m: i64, mu: Complex64) -> Self {
        PropExponent { alpha: FieldPoint::new(HalfInt::from_int(m), mu) }
    }

    pub fn real(m: i64, mu: f64) -> Self {
        PropExponent::new(m, Complex64::new(mu, 0.0))
    }

    pub fn point(&self) -> FieldPoint {
        self.alpha
    }

    pub fn m(&self) -> i64 {
        self.alpha.m.as_int()
    }

    /// μ = (α + ᾱ)/2.
    pub fn mu(&self) -> Complex64 {
        self.alpha.mu
    }

    /// The exponent 1 − α, i.e. (1 − α, 1 − ᾱ).
    pub fn one_minus(&self) -> Self {
        PropExponent::new(-self.m(), Complex64::new(1.0, 0.0) - self.mu())
    }

    /// ln D_α(z) from ln|z| and arg z.
    pub(crate) fn ln_value(&self, ln_abs: f64, arg: f64) -> Complex64 {
        -2.0 * self.mu() * ln_abs - Complex64::i() * (self.m() as f64 * arg)
    }
}

impl TryFrom<FieldPoint> for PropExponent {
    type Error = PlaneError;
    fn try_from(alpha: FieldPoint) -> Result<Self, PlaneError> {
        if !alpha.m.is_integer() {
            return Err(PlaneError::HalfIntegerLabel(alpha));
        }
        Ok(PropExponent { alpha })
    }
}

impl From<PropExponent> for FieldPoint {
    fn from(p: PropExponent) -> FieldPoint {
        p.alpha
    }
}

impl std::ops::Add for PropExponent {
    type Output = PropExponent;
    fn add(self, o: PropExponent) -> PropExponent {
        PropExponent { alpha: self.alpha + o.alpha }
    }
}

/// D_α(z) = [z]^{−α} = |z|^{−(α+ᾱ)} e^{−i m arg z}.
pub fn propagator(alpha: PropExponent, z: Complex64) -> Result<Complex64, PlaneError> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(PlaneError::AtSingularity);
    }
    Ok(alpha.ln_value(z.norm().ln(), z.arg()).exp())
}
