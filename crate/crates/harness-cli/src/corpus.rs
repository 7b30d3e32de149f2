//! Fixed exponent sets for the plane-integral checks, indexed from 1 like seeds.

use num_complex::Complex64;
use plane_integrals::PropExponent;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainCase {
    pub alpha: PropExponent,
    pub beta: PropExponent,
    pub z: [Complex64; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarCase {
    pub exps: [PropExponent; 3],
    pub z: [Complex64; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierCase {
    pub alpha: PropExponent,
    pub p: Complex64,
}

pub fn chain_cases() -> Vec<ChainCase> {
    vec![
        ChainCase { alpha: PropExponent::real(0, 0.6), beta: PropExponent::real(0, 0.9), z: [c(0.0, 0.0), c(1.0, 0.0)] },
        ChainCase { alpha: PropExponent::real(1, 0.6), beta: PropExponent::real(-1, 0.9), z: [c(0.3, 0.1), c(-0.5, 0.7)] },
        ChainCase {
            alpha: PropExponent::new(2, c(0.6, 0.2)),
            beta: PropExponent::real(-1, 0.9),
            z: [c(0.3, 0.1), c(-0.5, 0.7)],
        },
        ChainCase {
            alpha: PropExponent::new(0, c(0.55, 0.3)),
            beta: PropExponent::new(0, c(0.75, -0.1)),
            z: [c(0.0, 0.0), c(0.4, -1.2)],
        },
        ChainCase {
            alpha: PropExponent::real(1, 0.7),
            beta: PropExponent::new(1, c(0.8, -0.2)),
            z: [c(-0.2, 0.3), c(0.9, 0.1)],
        },
    ]
}

/// Exponent sets satisfying Σ m = 0 and Σ μ = 2.
pub fn star_cases() -> Vec<StarCase> {
    vec![
        StarCase {
            exps: [PropExponent::real(0, 0.6), PropExponent::real(0, 0.7), PropExponent::real(0, 0.7)],
            z: [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)],
        },
        StarCase {
            exps: [PropExponent::real(1, 0.6), PropExponent::real(-1, 0.7), PropExponent::real(0, 0.7)],
            z: [c(0.0, 0.0), c(1.0, 0.0), c(0.2, 0.9)],
        },
        StarCase {
            exps: [
                PropExponent::new(1, c(0.6, 0.1)),
                PropExponent::new(1, c(0.7, -0.3)),
                PropExponent::new(-2, c(0.7, 0.2)),
            ],
            z: [c(0.0, 0.0), c(1.2, 0.3), c(-0.4, 0.8)],
        },
    ]
}

pub fn fourier_cases() -> Vec<FourierCase> {
    [0, 1, 2].into_iter().map(|m| FourierCase { alpha: PropExponent::new(m, c(0.7, 0.1)), p: c(0.6, -0.8) }).collect()
}
