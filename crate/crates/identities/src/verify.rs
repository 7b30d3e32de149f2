use field_gamma::GammaError;
use mb_engine::{evaluate, EngineError, Estimate, QuadConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::integrand::lhs_integrand;
use crate::kinds::{margin, rhs, validate, IdentityKind, IdentityParams, Violation, DEFAULT_DELTA_MIN};

/// Floor of the denominator in the relative residual.
pub const RESIDUAL_FLOOR: f64 = 1e-300;

/// Engine tolerance as a fraction of the verification tolerance.
const ENGINE_SHARE: f64 = 0.25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Relative tolerance on both the residual and the LHS error bar.
    pub tol: f64,
    pub delta_min: f64,
    pub engine: QuadConfig,
}

impl VerifyConfig {
    /// Engine tolerance derived from the verification tolerance.
    pub fn new(tol: f64) -> Self {
        let engine = QuadConfig { rel_tol: (tol * ENGINE_SHARE).max(1e-12), ..QuadConfig::default() };
        VerifyConfig { tol, delta_min: DEFAULT_DELTA_MIN, engine }
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig::new(1e-6)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub kind: IdentityKind,
    pub params: IdentityParams,
    pub lhs: Estimate,
    pub rhs: Complex64,
    pub abs_residual: f64,
    /// |lhs − rhs| / max(|rhs|, RESIDUAL_FLOOR).
    pub rel_residual: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub config: VerifyConfig,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("invalid parameters: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("closed form: {0}")]
    Gamma(#[from] GammaError),
    #[error("left-hand side: {0}")]
    Engine(#[from] EngineError),
}

/// Compare the numerically evaluated left-hand side with the closed form.
pub fn verify(kind: IdentityKind, params: &IdentityParams, cfg: &VerifyConfig) -> Result<IdentityReport, VerifyError> {
    let violations = validate(kind, params, cfg.delta_min);
    if !violations.is_empty() {
        return Err(VerifyError::Invalid(violations));
    }
    let rhs = rhs(kind, params)?.to_complex()?;
    let lhs = evaluate(&lhs_integrand(kind, params), &cfg.engine)?;
    let abs_residual = (lhs.value - rhs).norm();
    let scale = rhs.norm().max(RESIDUAL_FLOOR);
    let rel_residual = abs_residual / scale;
    let verdict = if rel_residual < cfg.tol && lhs.err / scale < cfg.tol { Verdict::Pass } else { Verdict::Fail };
    Ok(IdentityReport {
        kind,
        params: params.clone(),
        lhs,
        rhs,
        abs_residual,
        rel_residual,
        margin: margin(kind, params),
        verdict,
        config: cfg.clone(),
    })
}
