use field_gamma::{FieldPoint, GammaError};
use identities::Verdict;
use mb_engine::{EngineError, Estimate};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::PropExponent;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    PolarPatch,
    StratifiedMc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PlaneQuadConfig {
    pub method: Method,
    /// Step of the polar rule in the sinh-mapped log radius.
    pub step: f64,
    /// Angular nodes of the polar rule.
    pub angles: usize,
    /// Monte Carlo strata per singular point, radial × angular.
    pub radial_strata: usize,
    pub angular_strata: usize,
    pub samples_per_stratum: usize,
    pub seed: u64,
    /// Target relative accuracy; a check passes when the residual is below it.
    /// For Monte Carlo the 3σ band must also be below it.
    pub rel_tol: f64,
}

impl Default for PlaneQuadConfig {
    fn default() -> Self {
        PlaneQuadConfig {
            method: Method::PolarPatch,
            step: 0.02,
            angles: 256,
            radial_strata: 32,
            angular_strata: 16,
            samples_per_stratum: 512,
            seed: 1,
            rel_tol: 1e-4,
        }
    }
}

impl PlaneQuadConfig {
    pub fn monte_carlo(seed: u64) -> Self {
        PlaneQuadConfig { method: Method::StratifiedMc, seed, rel_tol: 1e-2, ..Default::default() }
    }

    /// Set one field from a `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(k: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value {v:?} for plane.{k}"))
        }
        match key {
            "method" => {
                self.method = match value {
                    "polar-patch" => Method::PolarPatch,
                    "stratified-mc" => Method::StratifiedMc,
                    _ => return Err(format!("unknown plane method {value:?}")),
                }
            }
            "step" => self.step = parse(key, value)?,
            "angles" => self.angles = parse(key, value)?,
            "radial_strata" => self.radial_strata = parse(key, value)?,
            "angular_strata" => self.angular_strata = parse(key, value)?,
            "samples_per_stratum" => self.samples_per_stratum = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "rel_tol" => self.rel_tol = parse(key, value)?,
            _ => return Err(format!("unknown plane key {key:?}")),
        }
        Ok(())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Chain,
    Fourier,
    StarTriangle,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    PolarPatch,
    StratifiedMc,
    RadialBessel,
}

/// Outcome of one plane-integral check.
///
/// For Monte Carlo `lhs.err` is one standard error.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneReport {
    pub check: Check,
    pub integrator: Integrator,
    pub exponents: Vec<PropExponent>,
    pub points: Vec<Complex64>,
    pub lhs: Estimate,
    pub rhs: Complex64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub verdict: Verdict,
    pub config: PlaneQuadConfig,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlaneError {
    #[error("propagator label of {0} is not an integer")]
    HalfIntegerLabel(FieldPoint),
    #[error("propagator evaluated at its singular point")]
    AtSingularity,
    #[error("points {0} and {1} coincide")]
    Coincident(usize, usize),
    #[error("integral diverges {0}")]
    Divergent(String),
    #[error("uniqueness condition fails: exponents sum to {0:?}, expected (0, 2)")]
    Uniqueness((i64, Complex64)),
    #[error("closed form: {0}")]
    Gamma(#[from] GammaError),
    #[error("quadrature: {0}")]
    Engine(#[from] EngineError),
    #[error("{what} did not converge: estimate {value}, err {err:e}")]
    NonConvergence { what: &'static str, value: Complex64, err: f64 },
    #[error("bad configuration: {0}")]
    Config(String),
}
