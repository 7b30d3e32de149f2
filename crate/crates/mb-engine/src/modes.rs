use std::collections::BTreeMap;

use field_gamma::HalfInt;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{EngineError, Estimate, QuadConfig};

/// Summation lattice of the discrete variable: ℤ or ℤ+½.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeLattice {
    Integer,
    HalfInteger,
}

impl ModeLattice {
    /// The lattice whose class matches the label `m`.
    pub fn for_label(m: HalfInt) -> Self {
        if m.is_integer() {
            ModeLattice::Integer
        } else {
            ModeLattice::HalfInteger
        }
    }

    /// Modes with `inner < |n| <= outer`, ordered by |n| then sign (negative first).
    pub fn shell(self, inner: Option<i64>, outer: i64) -> Vec<HalfInt> {
        let mut out = Vec::new();
        match self {
            ModeLattice::Integer => {
                let start = match inner {
                    None => {
                        out.push(HalfInt::ZERO);
                        1
                    }
                    Some(r) => r + 1,
                };
                for k in start..=outer {
                    out.push(HalfInt::from_int(-k));
                    out.push(HalfInt::from_int(k));
                }
            }
            ModeLattice::HalfInteger => {
                // |n| = j + 1/2 < outer
                let start = inner.unwrap_or(0);
                for j in start..outer {
                    out.push(HalfInt::from_twice(-(2 * j + 1)));
                    out.push(HalfInt::from_twice(2 * j + 1));
                }
            }
        }
        out
    }
}

/// Exponent ladder e_b + j built from base exponents, ordered by real part.
fn exponent_ladder(base: &[Complex64], count: usize) -> Vec<Complex64> {
    let mut all: Vec<Complex64> = Vec::new();
    for b in base {
        for j in 0..count {
            all.push(b + j as f64);
        }
    }
    all.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut out: Vec<Complex64> = Vec::new();
    for e in all {
        if out.iter().all(|o| (o - e).norm() > 0.05) {
            out.push(e);
        }
    }
    out.truncate(count);
    out
}

/// Quadrature error of an extrapolated value Σ_l λ_l S_l. Shell j enters with
/// weight Λ_j = Σ_{l≥j} λ_l (Λ_j = 1 for shells before the stencil, as Σ λ_l = 1).
fn propagated_noise(lambda: &[Complex64], shell_errs: &[f64]) -> f64 {
    let k = shell_errs.len();
    let first = k - lambda.len();
    let mut noise: f64 = shell_errs[..=first].iter().sum();
    let mut cum: Complex64 = lambda.iter().sum();
    for (j, l) in lambda.iter().enumerate().take(lambda.len() - 1) {
        cum -= l;
        noise += cum.norm() * shell_errs[first + j + 1];
    }
    noise
}

/// Limit of S_N = S + Σ_j c_j N^{−e_j} from the last `exps.len()+1` levels.
///
/// Returns the extrapolated value and the weights applied to each used level.
fn richardson(sums: &[Complex64], radii: &[i64], exps: &[Complex64]) -> Option<(Complex64, Vec<Complex64>)> {
    let j = exps.len();
    let k = sums.len();
    if k < j + 1 {
        return None;
    }
    let lv = &radii[k - j - 1..];
    let sv = &sums[k - j - 1..];
    let top = *lv.last().unwrap() as f64;
    let n = j + 1;
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for (row, &r) in lv.iter().enumerate() {
        let x = r as f64 / top;
        a[(row, 0)] = Complex64::new(1.0, 0.0);
        for (col, e) in exps.iter().enumerate() {
            a[(row, col + 1)] = Complex64::new(x, 0.0).powc(-e);
        }
    }
    let mut e1 = DVector::<Complex64>::zeros(n);
    e1[0] = Complex64::new(1.0, 0.0);
    let lambda = a.transpose().lu().solve(&e1)?;
    let value = lambda.iter().zip(sv).map(|(l, s)| l * s).sum();
    Some((value, lambda.iter().copied().collect()))
}

/// Σ_n g(n) over the lattice using symmetric shells |n| ≤ N_k, N_0 = max_mode, N_{k+1} ≈ 1.5·N_k.
///
/// With `exponents` (asymptotic exponents e of the partial-sum tail, S − S_N ~ N^{−e})
/// the tail is removed by Richardson extrapolation; without, Aitken's Δ² on the
/// last three shells is used and the fitted decay is reported.
pub fn sum_over_modes<G>(
    g: G,
    lattice: ModeLattice,
    exponents: Option<&[Complex64]>,
    cfg: &QuadConfig,
) -> Result<Estimate, EngineError>
where
    G: Fn(HalfInt) -> Result<Estimate, EngineError> + Sync,
{
    sum_modes_planned(|n, _: Option<&()>| g(n).map(|e| (e, ())), lattice, exponents, cfg, None).map(|(e, _)| e)
}

/// Per-mode plans keyed by twice the mode.
pub(crate) type ModePlans<P> = BTreeMap<i64, P>;

/// [`sum_over_modes`] where each summand may be warm-started from a plan and
/// returns the plan it ended with.
pub(crate) fn sum_modes_planned<G, P>(
    g: G,
    lattice: ModeLattice,
    exponents: Option<&[Complex64]>,
    cfg: &QuadConfig,
    start: Option<&ModePlans<P>>,
) -> Result<(Estimate, ModePlans<P>), EngineError>
where
    G: Fn(HalfInt, Option<&P>) -> Result<(Estimate, P), EngineError> + Sync,
    P: Send + Sync,
{
    let mut plans = ModePlans::new();
    let mut sums: Vec<Complex64> = Vec::new();
    // quadrature error carried by each shell
    let mut errs: Vec<f64> = Vec::new();
    let mut radii: Vec<i64> = Vec::new();
    let mut extrapolated: Vec<(Complex64, f64)> = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut err_acc = 0.0;
    let mut evals = 0u64;
    let mut inner_modes: Vec<i64> = Vec::new();
    let mut prev_radius = None;
    let mut last_shell = Complex64::new(f64::INFINITY, 0.0);
    let mut fitted_q = None;
    let base_q = exponents.and_then(|e| e.iter().map(|x| x.re).min_by(f64::total_cmp)).map(|e| -(e + 1.0));

    let mut radius = 0;
    for level in 0..=cfg.max_refinements {
        radius = if level == 0 { cfg.max_mode.max(2) } else { (3 * radius + 1) / 2 };
        let modes = lattice.shell(prev_radius, radius);
        let results: Vec<Result<(Estimate, P), EngineError>> =
            modes.par_iter().map(|&n| g(n, start.and_then(|s| s.get(&n.twice())))).collect();
        let mut shell = Complex64::new(0.0, 0.0);
        let mut shell_err = 0.0;
        for (n, r) in modes.iter().zip(results) {
            let (r, plan) = r?;
            plans.insert(n.twice(), plan);
            shell += r.value;
            shell_err += r.err;
            evals += r.evals;
            for (d, m) in r.modes_used.iter().enumerate() {
                if inner_modes.len() <= d {
                    inner_modes.push(*m);
                } else {
                    inner_modes[d] = inner_modes[d].max(*m);
                }
            }
        }
        total += shell;
        err_acc += shell_err;
        sums.push(total);
        errs.push(shell_err);
        radii.push(radius);
        prev_radius = Some(radius);

        let done = |value: Complex64, err: f64, q: Option<f64>| {
            let mut modes_used = vec![radius];
            modes_used.extend(&inner_modes);
            Estimate { value, err, evals, modes_used, decay_exponent: q }
        };

        let tol = cfg.tol_for(total.norm());
        // Fast (e.g. geometric) convergence: two consecutive negligible shells.
        if level >= 1 && shell.norm() * cfg.tail_safety <= tol && last_shell.norm() <= tol {
            return Ok((done(total, shell.norm() * cfg.tail_safety + err_acc, base_q.or(fitted_q)), plans));
        }
        last_shell = shell;

        let est = match exponents {
            Some(base) => {
                let terms = level.min(cfg.max_terms as u32) as usize;
                if terms == 0 {
                    continue;
                }
                let exps = exponent_ladder(base, terms);
                richardson(&sums, &radii, &exps).map(|(v, w)| (v, propagated_noise(&w, &errs)))
            }
            None => {
                if sums.len() < 3 {
                    continue;
                }
                let k = sums.len();
                let d1 = sums[k - 2] - sums[k - 3];
                let d2 = sums[k - 1] - sums[k - 2];
                if d1.norm() == 0.0 {
                    Some((total, err_acc))
                } else {
                    let r = d2 / d1;
                    let ratio = radii[k - 2] as f64 / radii[k - 3] as f64;
                    let e = -r.norm().ln() / ratio.ln();
                    fitted_q = Some(-(e + 1.0));
                    if r.norm() >= 1.0 {
                        None
                    } else {
                        let w = 1.0 / (1.0 - r).norm();
                        Some((total + d2 * r / (1.0 - r), err_acc * (1.0 + 2.0 * w)))
                    }
                }
            }
        };
        let Some((value, noise)) = est else { continue };
        extrapolated.push((value, noise));
        if extrapolated.len() >= 2 {
            let prev = extrapolated[extrapolated.len() - 2].0;
            let delta = (value - prev).norm();
            let tol = cfg.tol_for(value.norm());
            if delta + noise <= tol {
                return Ok((done(value, delta + noise, base_q.or(fitted_q)), plans));
            }
            if delta <= tol && noise > tol {
                // Truncation is resolved but the summands are not accurate
                // enough; further shells cannot help.
                return Err(EngineError::NonConvergence { stage: "mode sum", value, err: delta + noise, tol });
            }
        }
    }

    if let Some(q) = fitted_q {
        if q >= -1.0 {
            return Err(EngineError::Divergent(q));
        }
    }
    let (value, err) = match extrapolated.len() {
        0 => (total, f64::INFINITY),
        1 => (extrapolated[0].0, f64::INFINITY),
        n => (extrapolated[n - 1].0, (extrapolated[n - 1].0 - extrapolated[n - 2].0).norm() + extrapolated[n - 1].1),
    };
    Err(EngineError::NonConvergence { stage: "mode sum", value, err, tol: cfg.tol_for(value.norm()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(v: Complex64) -> Result<Estimate, EngineError> {
        Ok(Estimate::exact(v))
    }

    #[test]
    fn shells_partition_the_lattice() {
        let a = ModeLattice::Integer.shell(None, 2);
        let b = ModeLattice::Integer.shell(Some(2), 4);
        let all: Vec<i64> = a.iter().chain(&b).map(|n| n.twice()).collect();
        assert_eq!(all, vec![0, -2, 2, -4, 4, -6, 6, -8, 8]);
        let h = ModeLattice::HalfInteger.shell(None, 2);
        assert_eq!(h.iter().map(|n| n.twice()).collect::<Vec<_>>(), vec![-1, 1, -3, 3]);
    }

    #[test]
    fn geometric_sum() {
        let cfg = QuadConfig::default();
        let e = sum_over_modes(|n| term(Complex64::new(0.5f64.powf(n.value().abs()), 0.0)), ModeLattice::Integer, None, &cfg)
            .unwrap();
        assert!((e.value.re - 3.0).abs() < 1e-12, "{e:?}");
    }

    #[test]
    fn algebraic_sum_with_known_exponent() {
        // Σ_{n∈ℤ} 1/(1+n²) = π coth π; tail of partial sums ~ N^{-1}
        let cfg = QuadConfig { rel_tol: 1e-10, ..Default::default() };
        let exps = [Complex64::new(1.0, 0.0)];
        let e = sum_over_modes(|n| term(Complex64::new(1.0 / (1.0 + n.value().powi(2)), 0.0)), ModeLattice::Integer, Some(&exps), &cfg)
            .unwrap();
        let want = std::f64::consts::PI / std::f64::consts::PI.tanh();
        assert!((e.value.re - want).abs() < 1e-9, "{e:?} vs {want}");
        assert_eq!(e.decay_exponent, Some(-2.0));
    }

    #[test]
    fn aitken_fallback_on_algebraic_sum() {
        let cfg = QuadConfig { rel_tol: 1e-3, ..Default::default() };
        let e = sum_over_modes(|n| term(Complex64::new(1.0 / (1.0 + n.value().powi(2)), 0.0)), ModeLattice::Integer, None, &cfg)
            .unwrap();
        let want = std::f64::consts::PI / std::f64::consts::PI.tanh();
        assert!((e.value.re - want).abs() < 1e-3 * want, "{e:?}");
        let q = e.decay_exponent.unwrap();
        assert!((q + 2.0).abs() < 0.1, "{q}");
    }

    #[test]
    fn divergent_sum_is_reported() {
        let cfg = QuadConfig { max_refinements: 4, ..Default::default() };
        let r = sum_over_modes(|n| term(Complex64::new(1.0 / (1.0 + n.value().abs()).sqrt(), 0.0)), ModeLattice::Integer, None, &cfg);
        assert!(matches!(r, Err(EngineError::Divergent(_))), "{r:?}");
    }

    #[test]
    fn half_integer_lattice_with_complex_exponent() {
        // Σ_{n∈ℤ+1/2} (n²+1)^{-0.8-0.3i}: compare fine-shell extrapolation with a long direct sum + tail integral
        let p = Complex64::new(-0.8, -0.3);
        let f = |x: f64| Complex64::new(x * x + 1.0, 0.0).powc(p);
        let cfg = QuadConfig { rel_tol: 1e-10, ..Default::default() };
        let exps = [-(2.0 * p + 1.0)];
        let e = sum_over_modes(|n| term(f(n.value())), ModeLattice::HalfInteger, Some(&exps), &cfg).unwrap();
        // reference: Euler–Maclaurin midpoint sum to |n| < 200000 plus integral tail
        let big = 200_000i64;
        let mut s = Complex64::new(0.0, 0.0);
        for j in (0..big).rev() {
            s += 2.0 * f(j as f64 + 0.5);
        }
        let tail = 2.0 * Complex64::new(big as f64, 0.0).powc(2.0 * p + 1.0) / (-(2.0 * p + 1.0));
        let want = s + tail;
        assert!((e.value - want).norm() < 1e-8 * want.norm(), "{} vs {}", e.value, want);
    }
}
