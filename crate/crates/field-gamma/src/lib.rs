//! Gamma function of the complex field.
//!
//! For a pair (z, z̄) with z − z̄ = m ∈ ½ℤ, the field gamma is
//! 𝚪(z, z̄) = Γ(z)/Γ(1−z̄). Everything is evaluated in log space on top of a
//! principal-branch complex log-gamma.

mod field;
mod halfint;
mod logc;
mod loggamma;
mod point;

pub use field::{a_func, cgamma, ln_cgamma_unchecked, pole_report, product_log, PoleLocation, PoleReport};
pub use halfint::HalfInt;
pub use logc::LogComplex;
pub use loggamma::{gamma_pole_order, ln_gamma, ln_gamma_ratio, ln_gamma_unchecked, POLE_TOL};
pub use point::FieldPoint;

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GammaError {
    #[error("Gamma has a pole at z = {0}")]
    Pole(Complex64),
    #[error("field gamma has a pole at {0}")]
    FieldPole(FieldPoint),
    #[error("net pole in product, singular factors {0:?}")]
    ProductPole(Vec<usize>),
    #[error("cancelling singular factors {0:?} need a limit")]
    Unresolved(Vec<usize>),
    #[error("magnitude exp({0}) is outside the f64 range")]
    Overflow(f64),
}
