//! The complex-field Gustafson-type sum-integral identities: closed forms,
//! left-hand-side integrands, parameter validation and sampling, numerical
//! verification, and the separated-variable kernels they are derived from.

mod integrand;
mod kinds;
mod sample;
pub mod sov;
mod verify;

pub use integrand::{barnes_explicit, cross_factor, dbw_explicit, lhs_integrand, prefactor};
pub use kinds::{
    convergence_sum, margin, rhs, validate, IdentityKind, IdentityParams, Violation, DEFAULT_DELTA_MIN,
    G3_CONTOUR_SHIFT,
};
pub use sample::{sample_params, shift_labels, shift_transform};
pub use verify::{verify, IdentityReport, Verdict, VerifyConfig, VerifyError, RESIDUAL_FLOOR};
