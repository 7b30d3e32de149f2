//! Numerical evaluation of sums over a discrete label combined with line
//! integrals, Σ_n ∫ dt/(2π) f(n, t), in one or more nested dimensions.
//!
//! Line integrals use adaptive Gauss–Kronrod panels on a core window and a
//! tanh-sinh rule on the inverted tails. Mode sums are taken over symmetric
//! shells growing by a factor of about 1.5, and the algebraic tail is removed
//! by Richardson extrapolation with known exponents (or Aitken's Δ² as a
//! fallback).
//! Shell evaluations run in parallel; reductions are sequential in a fixed
//! order, so results are independent of the thread count.

mod config;
mod line;
mod margin;
mod modes;
mod problem;

pub use config::{EngineError, Estimate, QuadConfig};
pub use line::{integrate_interval, integrate_line};
pub use margin::{contour_margin, PoleLine};
pub use modes::{sum_over_modes, ModeLattice};
pub use problem::{evaluate, Integrand, SumIntegralProblem, TailExponents, TailModel, MAX_DIM};
