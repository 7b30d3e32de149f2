use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use field_gamma::HalfInt;
use num_complex::Complex64;

use crate::config::{EngineError, Estimate, QuadConfig};
use crate::line::{integrate_samples, LinePlan, Sample};
use crate::modes::{sum_modes_planned, ModeLattice, ModePlans};

pub type Integrand = Arc<dyn Fn(&[HalfInt], &[f64]) -> Complex64 + Send + Sync>;

/// Base asymptotic exponents of the partial-sum tail at summation depth `depth`,
/// given the already fixed outer coordinates.
pub type TailExponents = Arc<dyn Fn(usize, &[HalfInt], &[f64]) -> Vec<Complex64> + Send + Sync>;

#[derive(Clone)]
pub enum TailModel {
    /// Fit the tail from the last shells.
    Fitted,
    /// Exponent families known analytically.
    Known(TailExponents),
}

/// Σ_{n ∈ L^d} ∫_{ℝ^d} f(n, t) Π dt_k/(2π), times `prefactor`.
#[derive(Clone)]
pub struct SumIntegralProblem {
    pub dim: usize,
    pub lattice: ModeLattice,
    pub integrand: Integrand,
    pub tail: TailModel,
    pub prefactor: Complex64,
    /// The integrand has peaks at t_k = ±t_j of the outer variables, so inner
    /// lines get extra panels around them.
    pub coupled_peaks: bool,
}

impl std::fmt::Debug for SumIntegralProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SumIntegralProblem")
            .field("dim", &self.dim)
            .field("lattice", &self.lattice)
            .field("prefactor", &self.prefactor)
            .finish_non_exhaustive()
    }
}

/// Evaluate a sum-integral problem. Dimensions are nested: each outer point
/// (n_1, t_1) triggers a full inner sum-integral.
///
/// Inner sum-integrals are warm-started from the partition found at a fixed
/// reference point (smallest outer modes, t = 0), so neighbouring outer
/// samples see the same rule unless they need more refinement. This keeps the
/// inner values smooth in the outer variables.
pub fn evaluate(problem: &SumIntegralProblem, cfg: &QuadConfig) -> Result<Estimate, EngineError> {
    assert!((1..=MAX_DIM).contains(&problem.dim), "problem dimension must be in 1..={MAX_DIM}");
    let (mut est, _) = level(problem, cfg, &[], &[], None)?;
    est.value *= problem.prefactor;
    est.err *= problem.prefactor.norm();
    Ok(est)
}

fn merge_reach(acc: &mut Vec<i64>, new: &[i64]) {
    for (d, m) in new.iter().enumerate() {
        match acc.get_mut(d) {
            Some(a) => *a = (*a).max(*m),
            None => acc.push(*m),
        }
    }
}

/// Largest supported number of nested (n, t) pairs.
pub const MAX_DIM: usize = 4;

/// Share of the tolerance given to each line integral inside a mode sum.
const LINE_SHARE: f64 = 0.1;
/// Tolerance of a nested inner sum-integral relative to the line it feeds.
const INNER_SHARE: f64 = 0.5;

type Plans = ModePlans<LinePlan>;

/// Absolute tolerance profile for inner sum-integrals at outer point (n, t),
/// relative to the inner value at the reference point. Its total mass under
/// Σ_n ∫ dt/(2π) is about 1, so the floors add at most one reference value
/// times the inner tolerance. Far outer points, whose inner values are
/// negligible, then stop at the first shell instead of being resolved to
/// full relative accuracy. Their error bars are still carried outward.
fn inner_profile(n: HalfInt, t: f64, window: f64) -> f64 {
    let w2 = window * window;
    let r2 = (n.value().powi(2) / 4.0 + t * t) / w2;
    1.0 / (w2 * (1.0 + r2).powi(2))
}

fn level(
    p: &SumIntegralProblem,
    cfg: &QuadConfig,
    modes: &[HalfInt],
    ts: &[f64],
    start: Option<&Plans>,
) -> Result<(Estimate, Plans), EngineError> {
    let depth = modes.len();
    let innermost = depth + 1 == p.dim;
    let exps = match &p.tail {
        TailModel::Fitted => None,
        TailModel::Known(f) => Some(f(depth, modes, ts)),
    };
    let line_cfg = cfg.tightened(LINE_SHARE);
    let inner_cfg = line_cfg.tightened(INNER_SHARE);
    let inner_plan = if innermost {
        None
    } else {
        let n0 = p.lattice.shell(None, 1)[0];
        let mut m2 = modes.to_vec();
        m2.push(n0);
        let mut t2 = ts.to_vec();
        t2.push(0.0);
        match level(p, &inner_cfg, &m2, &t2, None) {
            Ok((e, plan)) => Some((e.value.norm(), plan)),
            Err(EngineError::NonConvergence { .. }) => None,
            Err(e) => return Err(e),
        }
    };
    let inner_scale = inner_plan.as_ref().map_or(0.0, |(s, _)| *s);
    let inner_plan = inner_plan.map(|(_, plan)| plan);
    let (est, plans) = sum_modes_planned(
        |n, line_plan: Option<&LinePlan>| {
            let mut m2 = modes.to_vec();
            m2.push(n);
            let window = cfg.t_window + n.value().abs() / 2.0;
            let centers: Vec<f64> =
                if p.coupled_peaks { ts.iter().flat_map(|&t| [-t, t]).collect() } else { Vec::new() };
            // deepest shells reached by the inner sums of this line
            let reach: Mutex<Vec<i64>> = Mutex::new(Vec::new());
            let line = integrate_samples(
                |t| {
                    let mut buf = [0.0; MAX_DIM];
                    buf[..depth].copy_from_slice(ts);
                    buf[depth] = t;
                    let t2 = &buf[..=depth];
                    if innermost {
                        let v = (p.integrand)(&m2, t2);
                        if !v.re.is_finite() || !v.im.is_finite() {
                            return Err(EngineError::NonFinite {
                                modes: m2.iter().map(|m| m.value()).collect(),
                                ts: t2.to_vec(),
                            });
                        }
                        Ok(Sample { value: v, err: 0.0, evals: 1 })
                    } else {
                        // An inner sum that misses its own tolerance still carries
                        // an honest error bar; the outer accounting absorbs it.
                        let floor = inner_cfg.rel_tol * inner_scale * inner_profile(n, t, cfg.t_window);
                        let cfg_t = QuadConfig { abs_tol: inner_cfg.abs_tol.max(floor), ..inner_cfg.clone() };
                        match level(p, &cfg_t, &m2, t2, inner_plan.as_ref()) {
                            Ok((e, _)) => {
                                merge_reach(&mut reach.lock().expect("reach lock"), &e.modes_used);
                                Ok(Sample { value: e.value, err: e.err, evals: e.evals })
                            }
                            Err(EngineError::NonConvergence { stage: "mode sum", value, err, .. }) if err.is_finite() => {
                                Ok(Sample { value, err, evals: 0 })
                            }
                            Err(e) => Err(e),
                        }
                    }
                },
                window,
                &centers,
                &line_cfg,
                line_plan,
            );
            // A line that misses its tolerance still has a usable value and error;
            // the enclosing sum decides whether the total is good enough.
            let (line, plan) = match line {
                Ok(r) => r,
                Err(EngineError::NonConvergence { value, err, .. }) if err.is_finite() => {
                    (Estimate { value, err, evals: 0, modes_used: Vec::new(), decay_exponent: None }, LinePlan::default())
                }
                Err(e) => return Err(e),
            };
            let modes_used = reach.into_inner().expect("reach lock");
            Ok((Estimate { value: line.value / (2.0 * PI), err: line.err / (2.0 * PI), modes_used, ..line }, plan))
        },
        p.lattice,
        exps.as_deref(),
        cfg,
        start,
    )?;
    Ok((est, plans))
}
