use std::f64::consts::PI;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::GammaError;

/// Largest log-magnitude that still converts to a finite f64.
const MAX_LOG_MAG: f64 = 709.0;

/// A complex number held as (log|z|, arg z) with the phase kept unreduced.
///
/// Zero is represented by `log_mag = -inf`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

impl LogComplex {
    pub const ONE: LogComplex = LogComplex { log_mag: 0.0, phase: 0.0 };
    pub const ZERO: LogComplex = LogComplex { log_mag: f64::NEG_INFINITY, phase: 0.0 };

    /// From a complex logarithm.
    pub fn from_ln(l: Complex64) -> Self {
        LogComplex { log_mag: l.re, phase: l.im }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        LogComplex { log_mag: z.norm().ln(), phase: z.arg() }
    }

    pub fn ln(self) -> Complex64 {
        Complex64::new(self.log_mag, self.phase)
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    pub fn inv(self) -> Self {
        LogComplex { log_mag: -self.log_mag, phase: -self.phase }
    }

    pub fn powi(self, k: i32) -> Self {
        if self.is_zero() {
            return if k == 0 { Self::ONE } else { self };
        }
        LogComplex { log_mag: self.log_mag * k as f64, phase: self.phase * k as f64 }
    }

    /// Phase reduced to (−π, π].
    pub fn principal_phase(self) -> f64 {
        let p = self.phase.rem_euclid(2.0 * PI);
        if p > PI {
            p - 2.0 * PI
        } else {
            p
        }
    }

    pub fn to_complex(self) -> Result<Complex64, GammaError> {
        if self.is_zero() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if !(self.log_mag <= MAX_LOG_MAG) || !self.phase.is_finite() {
            return Err(GammaError::Overflow(self.log_mag));
        }
        Ok(Complex64::from_polar(self.log_mag.exp(), self.principal_phase()))
    }
}

impl Mul for LogComplex {
    type Output = LogComplex;
    fn mul(self, rhs: LogComplex) -> LogComplex {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        LogComplex { log_mag: self.log_mag + rhs.log_mag, phase: self.phase + rhs.phase }
    }
}

impl Div for LogComplex {
    type Output = LogComplex;
    fn div(self, rhs: LogComplex) -> LogComplex {
        self * rhs.inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_arithmetic() {
        let a = Complex64::new(-3.0, 4.0);
        let b = Complex64::new(0.5, -0.25);
        let la = LogComplex::from_complex(a);
        let lb = LogComplex::from_complex(b);
        assert!(((la * lb).to_complex().unwrap() - a * b).norm() < 1e-14);
        assert!(((la / lb).to_complex().unwrap() - a / b).norm() < 1e-13);
        assert!((la.powi(3).to_complex().unwrap() - a * a * a).norm() < 1e-12);
    }

    #[test]
    fn unreduced_phase_converts() {
        let z = LogComplex { log_mag: 0.0, phase: 1001.0 * PI };
        assert!((z.to_complex().unwrap() + 1.0).norm() < 1e-12);
    }

    #[test]
    fn overflow_is_an_error() {
        let z = LogComplex { log_mag: 800.0, phase: 0.0 };
        assert!(matches!(z.to_complex(), Err(GammaError::Overflow(_))));
        assert_eq!(LogComplex::ZERO.to_complex().unwrap(), Complex64::new(0.0, 0.0));
    }
}
