//! Plane integrals of power-law propagators D_α(z) = [z]^{−α}: the chain
//! rule, the Fourier transform and the star-triangle relation, each checked
//! by genuine two-dimensional quadrature against its closed form.
//!
//! d²w is the Lebesgue measure dRe w dIm w.

mod checks;
mod config;
mod diagram;
mod fourier;
mod propagator;

pub use checks::{chain_check, chain_diagram, chain_rhs, star_diagram, star_triangle_check, star_triangle_rhs};
pub use config::{Check, Integrator, Method, PlaneError, PlaneQuadConfig, PlaneReport};
pub use diagram::{Diagram, Leg};
pub use fourier::{bessel_j, fourier_check, radial_bessel_integral, wynn_epsilon};
pub use propagator::{propagator, PropExponent};
