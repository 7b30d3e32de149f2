use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::loggamma::{gamma_pole_order, ln_gamma_unchecked};
use crate::{FieldPoint, GammaError, LogComplex};

/// Where the singular behaviour of 𝚪(p) = Γ(z)/Γ(1−z̄) comes from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoleLocation {
    Regular,
    /// Γ(z) has a pole and Γ(1−z̄) does not: 𝚪 has a pole.
    Numerator,
    /// Γ(1−z̄) has a pole and Γ(z) does not: 𝚪 vanishes.
    Denominator,
    /// Both Γ's have poles; they cancel and 𝚪 is finite and nonzero.
    Cancelled,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleReport {
    /// Net order: +1 pole, −1 zero, 0 regular.
    pub order: i32,
    pub location: PoleLocation,
}

pub fn pole_report(p: &FieldPoint) -> PoleReport {
    let num = gamma_pole_order(p.holo());
    let den = gamma_pole_order(Complex64::new(1.0, 0.0) - p.anti());
    let location = match (num, den) {
        (0, 0) => PoleLocation::Regular,
        (_, 0) => PoleLocation::Numerator,
        (0, _) => PoleLocation::Denominator,
        _ => PoleLocation::Cancelled,
    };
    PoleReport { order: num - den, location }
}

/// log 𝚪(p) with no pole checks.
///
/// Integer labels M use 𝚪 = (−1)^M Γ(|M|/2+μ)/Γ(1+|M|/2−μ) for M < 0, which
/// keeps both arguments on the side where cancelling pole pairs cannot occur.
/// Zeros come out with real part −∞; poles are non-finite.
pub fn ln_cgamma_unchecked(p: &FieldPoint) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let tm = p.m.twice();
    if tm < 0 && tm % 2 == 0 {
        let h = (-tm) as f64 / 4.0;
        let num = ln_gamma_unchecked(p.mu + h);
        let den = ln_gamma_unchecked(one + h - p.mu);
        num - den + Complex64::new(0.0, PI * p.m.value())
    } else {
        ln_gamma_unchecked(p.holo()) - ln_gamma_unchecked(one - p.anti())
    }
}

/// 𝚪(p) = Γ(z)/Γ(1−z̄) in log form.
pub fn cgamma(p: &FieldPoint) -> Result<LogComplex, GammaError> {
    let rep = pole_report(p);
    if rep.order > 0 {
        return Err(GammaError::FieldPole(*p));
    }
    if rep.order < 0 {
        return Ok(LogComplex::ZERO);
    }
    Ok(LogComplex::from_ln(ln_cgamma_unchecked(p)))
}

/// a(α) = Γ(1−ᾱ)/Γ(α), the reciprocal of 𝚪(α).
pub fn a_func(p: &FieldPoint) -> Result<LogComplex, GammaError> {
    match cgamma(p) {
        Ok(g) if g.is_zero() => Err(GammaError::FieldPole(*p)),
        Ok(g) => Ok(g.inv()),
        Err(GammaError::FieldPole(_)) => Ok(LogComplex::ZERO),
        Err(e) => Err(e),
    }
}

/// Π 𝚪(p_i)^{e_i} accumulated in input order.
///
/// A net pole is an error; a net zero returns zero; singular factors whose
/// orders cancel across the product are reported as unresolved.
pub fn product_log(factors: &[(FieldPoint, i32)]) -> Result<LogComplex, GammaError> {
    let mut net = 0;
    let mut singular = Vec::new();
    for (i, (p, e)) in factors.iter().enumerate() {
        let r = pole_report(p);
        if r.order != 0 {
            net += r.order * e;
            singular.push(i);
        }
    }
    if net > 0 {
        return Err(GammaError::ProductPole(singular));
    }
    if net < 0 {
        return Ok(LogComplex::ZERO);
    }
    if !singular.is_empty() {
        return Err(GammaError::Unresolved(singular));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (p, e) in factors {
        acc += ln_cgamma_unchecked(p) * (*e as f64);
    }
    Ok(LogComplex::from_ln(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::HalfInt;

    #[test]
    fn integer_scalar_point_is_gamma_ratio() {
        // (m=0, μ=0.3): Γ(0.3)/Γ(0.7)
        let g = cgamma(&FieldPoint::real(0, 0.3)).unwrap().to_complex().unwrap();
        let want = 2.991_568_987_687_590_5 / 1.298_055_332_647_557_9;
        assert!((g.re - want).abs() < 1e-13 * want && g.im.abs() < 1e-14);
    }

    #[test]
    fn cancelled_poles_give_finite_value() {
        let p = FieldPoint::real(-2, 0.0);
        let rep = pole_report(&p);
        assert_eq!(rep, PoleReport { order: 0, location: PoleLocation::Cancelled });
        let g = cgamma(&p).unwrap().to_complex().unwrap();
        assert!((g - 1.0).norm() < 1e-15);
    }

    #[test]
    fn genuine_poles_and_zeros() {
        assert!(matches!(cgamma(&FieldPoint::real(0, 0.0)), Err(GammaError::FieldPole(_))));
        assert!(cgamma(&FieldPoint::real(0, 1.0)).unwrap().is_zero());
        assert!(a_func(&FieldPoint::real(0, 0.0)).unwrap().is_zero());
        assert!(a_func(&FieldPoint::real(2, 3.0)).is_err());
    }

    #[test]
    fn half_integer_label() {
        // m = 1/2: z = 1/4 + μ, z̄ = -1/4 + μ
        let p = FieldPoint::new(HalfInt::from_twice(1), Complex64::new(0.5, 0.0));
        let g = cgamma(&p).unwrap().ln();
        let want = ln_gamma_unchecked(Complex64::new(0.75, 0.0))
            - ln_gamma_unchecked(Complex64::new(0.75, 0.0));
        assert!((g - want).norm() < 1e-15);
    }

    #[test]
    fn product_pole_bookkeeping() {
        let pole = FieldPoint::real(0, 0.0);
        let zero = FieldPoint::real(0, 1.0);
        let reg = FieldPoint::real(1, 0.3);
        assert!(matches!(product_log(&[(reg, 1), (pole, 1)]), Err(GammaError::ProductPole(v)) if v == vec![1]));
        assert!(product_log(&[(reg, 1), (pole, -1)]).unwrap().is_zero());
        assert!(matches!(product_log(&[(pole, 1), (zero, 1)]), Err(GammaError::Unresolved(_))));
        let v = product_log(&[(reg, 2), (reg, -1)]).unwrap();
        assert!((v.ln() - cgamma(&reg).unwrap().ln()).norm() < 1e-14);
    }
}
