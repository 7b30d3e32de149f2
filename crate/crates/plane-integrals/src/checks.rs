use std::f64::consts::PI;

use field_gamma::product_log;
use identities::{Verdict, RESIDUAL_FLOOR};
use mb_engine::Estimate;
use num_complex::Complex64;

use crate::{
    propagator, Check, Diagram, Integrator, Leg, Method, PlaneError, PlaneQuadConfig, PlaneReport, PropExponent,
};

/// Tolerance on the uniqueness condition Σ μ = 2.
const UNIQUENESS_TOL: f64 = 1e-12;

fn report(
    check: Check,
    exponents: Vec<PropExponent>,
    points: Vec<Complex64>,
    lhs: Estimate,
    rhs: Complex64,
    cfg: &PlaneQuadConfig,
) -> PlaneReport {
    let abs_residual = (lhs.value - rhs).norm();
    let scale = rhs.norm().max(RESIDUAL_FLOOR);
    let rel_residual = abs_residual / scale;
    let ok = match cfg.method {
        Method::PolarPatch => rel_residual < cfg.rel_tol && lhs.err / scale < cfg.rel_tol,
        Method::StratifiedMc => abs_residual <= 3.0 * lhs.err && 3.0 * lhs.err / scale < cfg.rel_tol,
    };
    let integrator = match cfg.method {
        Method::PolarPatch => Integrator::PolarPatch,
        Method::StratifiedMc => Integrator::StratifiedMc,
    };
    PlaneReport {
        check,
        integrator,
        exponents,
        points,
        lhs,
        rhs,
        abs_residual,
        rel_residual,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        config: cfg.clone(),
    }
}

/// The chain diagram ∫d²w D_α(z₁−w) D_β(w−z₂).
pub fn chain_diagram(alpha: PropExponent, beta: PropExponent, z1: Complex64, z2: Complex64) -> Diagram {
    Diagram {
        legs: vec![Leg { alpha, point: 0, reversed: false }, Leg { alpha: beta, point: 1, reversed: true }],
        points: vec![z1, z2],
    }
}

/// π a(α)a(β)/a(γ) D_γ(z₁−z₂) with γ = α + β − 1.
pub fn chain_rhs(alpha: PropExponent, beta: PropExponent, z1: Complex64, z2: Complex64) -> Result<Complex64, PlaneError> {
    let gamma = PropExponent::new(alpha.m() + beta.m(), alpha.mu() + beta.mu() - 1.0);
    let g = product_log(&[(gamma.point(), 1), (alpha.point(), -1), (beta.point(), -1)])?.to_complex()?;
    Ok(PI * g * propagator(gamma, z1 - z2)?)
}

/// Chain rule: ∫d²w [z₁−w]^{−α}[w−z₂]^{−β} = π a(α)a(β)/a(γ) [z₁−z₂]^{−γ}, γ = α+β−1.
pub fn chain_check(
    alpha: PropExponent,
    beta: PropExponent,
    z1: Complex64,
    z2: Complex64,
    cfg: &PlaneQuadConfig,
) -> Result<PlaneReport, PlaneError> {
    let s = alpha.mu().re + beta.mu().re;
    if !(s > 1.0 && s < 2.0) {
        return Err(PlaneError::Divergent(format!("chain needs 1 < Re(μ_α + μ_β) < 2, got {s}")));
    }
    let diagram = chain_diagram(alpha, beta, z1, z2);
    diagram.convergence_margin()?;
    let rhs = chain_rhs(alpha, beta, z1, z2)?;
    let lhs = diagram.integrate(cfg)?;
    Ok(report(Check::Chain, vec![alpha, beta], vec![z1, z2], lhs, rhs, cfg))
}

/// The star diagram ∫d²w D_α(z₁−w) D_β(z₂−w) D_γ(z₃−w).
pub fn star_diagram(exps: [PropExponent; 3], zs: [Complex64; 3]) -> Diagram {
    Diagram {
        legs: exps.iter().enumerate().map(|(i, &alpha)| Leg { alpha, point: i, reversed: false }).collect(),
        points: zs.to_vec(),
    }
}

/// π a(α)a(β)a(γ) D_{1−γ}(z₁−z₂) D_{1−α}(z₂−z₃) D_{1−β}(z₃−z₁).
pub fn star_triangle_rhs(exps: [PropExponent; 3], zs: [Complex64; 3]) -> Result<Complex64, PlaneError> {
    let [a, b, c] = exps;
    let g = product_log(&[(a.point(), -1), (b.point(), -1), (c.point(), -1)])?.to_complex()?;
    Ok(PI
        * g
        * propagator(c.one_minus(), zs[0] - zs[1])?
        * propagator(a.one_minus(), zs[1] - zs[2])?
        * propagator(b.one_minus(), zs[2] - zs[0])?)
}

/// Star-triangle relation in the uniqueness form α + β + γ = 2 (both components).
pub fn star_triangle_check(
    alpha: PropExponent,
    beta: PropExponent,
    gamma: PropExponent,
    z1: Complex64,
    z2: Complex64,
    z3: Complex64,
    cfg: &PlaneQuadConfig,
) -> Result<PlaneReport, PlaneError> {
    let exps = [alpha, beta, gamma];
    let zs = [z1, z2, z3];
    let m: i64 = exps.iter().map(|e| e.m()).sum();
    let mu: Complex64 = exps.iter().map(|e| e.mu()).sum();
    if m != 0 || (mu - 2.0).norm() > UNIQUENESS_TOL {
        return Err(PlaneError::Uniqueness((m, mu)));
    }
    let diagram = star_diagram(exps, zs);
    diagram.convergence_margin()?;
    let rhs = star_triangle_rhs(exps, zs)?;
    let lhs = diagram.integrate(cfg)?;
    Ok(report(Check::StarTriangle, exps.to_vec(), zs.to_vec(), lhs, rhs, cfg))
}
