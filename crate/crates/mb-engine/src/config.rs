use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tolerances and resource limits for the engine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Half-width of the core window in t for mode 0; mode n uses `t_window + |n|/2`.
    pub t_window: f64,
    /// Radius of the first shell of modes.
    pub max_mode: i64,
    /// Number of shell enlargements (by a factor ≈ 1.5) after the first shell.
    pub max_refinements: u32,
    /// Safety factor applied to tail and extrapolation error estimates.
    pub tail_safety: f64,
    /// Panel budget of one adaptive line integral.
    pub max_panels: usize,
    /// Maximum number of correction terms in the shell extrapolation.
    pub max_terms: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            rel_tol: 1e-8,
            abs_tol: 1e-15,
            t_window: 8.0,
            max_mode: 4,
            max_refinements: 10,
            tail_safety: 4.0,
            max_panels: 4000,
            max_terms: 6,
        }
    }
}

impl QuadConfig {
    /// The same configuration with relative tolerance scaled by `f`.
    pub fn tightened(&self, f: f64) -> Self {
        QuadConfig { rel_tol: self.rel_tol * f, abs_tol: self.abs_tol * f, ..self.clone() }
    }

    /// Set one field from a `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn parse<T: std::str::FromStr>(k: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value {v:?} for engine.{k}"))
        }
        match key {
            "rel_tol" => self.rel_tol = parse(key, value)?,
            "abs_tol" => self.abs_tol = parse(key, value)?,
            "t_window" => self.t_window = parse(key, value)?,
            "max_mode" => self.max_mode = parse(key, value)?,
            "max_refinements" => self.max_refinements = parse(key, value)?,
            "tail_safety" => self.tail_safety = parse(key, value)?,
            "max_panels" => self.max_panels = parse(key, value)?,
            "max_terms" => self.max_terms = parse(key, value)?,
            _ => return Err(format!("unknown engine key {key:?}")),
        }
        Ok(())
    }

    pub(crate) fn tol_for(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

/// A numerical estimate with its error bound and diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex64,
    pub err: f64,
    /// Integrand evaluations spent.
    pub evals: u64,
    /// Largest shell radius reached, per summation depth.
    pub modes_used: Vec<i64>,
    /// Decay exponent q of the summand, |g(n)| ~ |n|^q, from the outermost sum.
    pub decay_exponent: Option<f64>,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Estimate { value, err: 0.0, evals: 0, modes_used: Vec::new(), decay_exponent: None }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("{stage} did not converge: value {value}, err {err:e} > tolerance {tol:e}")]
    NonConvergence { stage: &'static str, value: Complex64, err: f64, tol: f64 },
    #[error("integrand is not finite at modes {modes:?}, t = {ts:?}")]
    NonFinite { modes: Vec<f64>, ts: Vec<f64> },
    #[error("mode sum diverges: fitted summand exponent {0} is not below -1")]
    Divergent(f64),
}
