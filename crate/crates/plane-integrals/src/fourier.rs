use std::f64::consts::PI;

use field_gamma::product_log;
use identities::{Verdict, RESIDUAL_FLOOR};
use mb_engine::{integrate_interval, Estimate, QuadConfig};
use num_complex::Complex64;

use crate::{propagator, Check, Integrator, PlaneError, PlaneQuadConfig, PlaneReport, PropExponent};

const MIN_SEGMENTS: usize = 12;
const MAX_SEGMENTS: usize = 400;

/// Bessel function J_m(x) for integer m from
/// J_m(x) = (1/2π) ∫_0^{2π} cos(mτ − x sin τ) dτ.
///
/// The integrand is periodic and entire, so the trapezoid rule converges
/// exponentially once the node count exceeds |x| + |m| by a margin that
/// covers the turning-point region of width ~|x|^{1/3}.
pub fn bessel_j(m: i64, x: f64) -> f64 {
    let n = (x.abs() + m.unsigned_abs() as f64 + 10.0 * x.abs().cbrt() + 40.0).ceil() as usize;
    let h = 2.0 * PI / n as f64;
    let s: f64 = (0..n)
        .map(|k| {
            let t = k as f64 * h;
            (m as f64 * t - x * t.sin()).cos()
        })
        .sum();
    s / n as f64
}

/// Limit of a sequence of partial sums by Wynn's ε-algorithm.
///
/// Returns the even-column entry built from the most terms.
pub fn wynn_epsilon(sums: &[Complex64]) -> Complex64 {
    let n = sums.len();
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut prev = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut cur: Vec<Complex64> = sums.to_vec();
    let mut best = sums[n - 1];
    for k in 1..n {
        let mut next = Vec::with_capacity(n - k);
        for j in 0..n - k {
            let d = cur[j + 1] - cur[j];
            if d.norm() == 0.0 {
                return if k % 2 == 1 { cur[j + 1] } else { best };
            }
            next.push(prev[j + 1] + 1.0 / d);
        }
        prev = cur;
        cur = next;
        if k % 2 == 0 {
            best = cur[cur.len() - 1];
        }
    }
    best
}

/// K = ∫_0^∞ x^{1−2μ} J_m(x) dx, summed between approximate zeros of J_m
/// and accelerated by Wynn's ε-algorithm.
pub fn radial_bessel_integral(m: i64, mu: Complex64, rel_tol: f64) -> Result<Estimate, PlaneError> {
    if !(mu.re > 0.5 && mu.re < 1.0) {
        return Err(PlaneError::Divergent(format!("radial integral needs 1/2 < Re μ < 1, got {mu}")));
    }
    let seg_cfg = QuadConfig { rel_tol: 1e-13, abs_tol: 1e-16, max_panels: 400, ..QuadConfig::default() };
    let zero = |k: usize| (k as f64 + m.unsigned_abs() as f64 / 2.0 - 0.25) * PI;
    let one = Complex64::new(1.0, 0.0);
    // first segment with x = b v^q, q = 1/(2 − 2 Re μ), which flattens the power at 0
    let b1 = zero(1);
    let q = 1.0 / (2.0 - 2.0 * mu.re);
    let pw = (2.0 - 2.0 * mu) * q - one;
    let first = integrate_interval(
        |v| {
            let x = b1 * v.powf(q);
            (pw * v.ln()).exp() * bessel_j(m, x)
        },
        0.0,
        1.0,
        &seg_cfg,
    )?;
    let scale = ((2.0 - 2.0 * mu) * b1.ln()).exp() * q;
    let mut sum = first.value * scale;
    let mut err = first.err * scale.norm();
    let mut evals = first.evals;
    let mut sums = vec![sum];
    let mut last = [Complex64::new(f64::NAN, 0.0); 2];
    for k in 1..MAX_SEGMENTS {
        let seg = integrate_interval(|x| ((one - 2.0 * mu) * x.ln()).exp() * bessel_j(m, x), zero(k), zero(k + 1), &seg_cfg)?;
        sum += seg.value;
        err += seg.err;
        evals += seg.evals;
        sums.push(sum);
        let acc = wynn_epsilon(&sums);
        let diff = (acc - last[1]).norm().max((last[1] - last[0]).norm());
        last = [last[1], acc];
        if sums.len() >= MIN_SEGMENTS && diff <= rel_tol * acc.norm() {
            return Ok(Estimate { value: acc, err: diff + err, evals, modes_used: Vec::new(), decay_exponent: None });
        }
    }
    Err(PlaneError::NonConvergence { what: "radial Bessel integral", value: last[1], err: (last[1] - last[0]).norm() })
}

/// ∫d²z e^{i(pz+p̄z̄)} D_α(z) against π i^{α−ᾱ} a(α) D_{1−α}(p).
///
/// With z = r e^{iθ}, p = |p| e^{iφ} the phase is e^{2i|p|r cos(θ+φ)} and
/// D_α(z) = r^{−2μ} e^{−imθ}. The angular integral is 2π i^m e^{imφ} J_m(2|p|r),
/// so the left side is 2π i^m e^{imφ} (2|p|)^{2μ−2} ∫_0^∞ x^{1−2μ} J_m(x) dx.
pub fn fourier_check(alpha: PropExponent, p: Complex64, cfg: &PlaneQuadConfig) -> Result<PlaneReport, PlaneError> {
    if p == Complex64::new(0.0, 0.0) {
        return Err(PlaneError::AtSingularity);
    }
    let m = alpha.m();
    let mu = alpha.mu();
    let k = radial_bessel_integral(m, mu, (cfg.rel_tol * 0.1).max(1e-13))?;
    let i_m = Complex64::i().powi(m as i32);
    let pre = 2.0 * PI * i_m * Complex64::from_polar(1.0, m as f64 * p.arg()) * ((2.0 * mu - 2.0) * (2.0 * p.norm()).ln()).exp();
    let lhs = Estimate { value: pre * k.value, err: pre.norm() * k.err, ..k };
    let a = product_log(&[(alpha.point(), -1)])?.to_complex()?;
    let rhs = PI * i_m * a * propagator(alpha.one_minus(), p)?;
    let abs_residual = (lhs.value - rhs).norm();
    let scale = rhs.norm().max(RESIDUAL_FLOOR);
    let rel_residual = abs_residual / scale;
    let verdict = if rel_residual < cfg.rel_tol && lhs.err / scale < cfg.rel_tol { Verdict::Pass } else { Verdict::Fail };
    Ok(PlaneReport {
        check: Check::Fourier,
        integrator: Integrator::RadialBessel,
        exponents: vec![alpha],
        points: vec![p],
        lhs,
        rhs,
        abs_residual,
        rel_residual,
        verdict,
        config: cfg.clone(),
    })
}
