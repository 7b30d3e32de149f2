use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::config::{EngineError, Estimate, QuadConfig};

/// One integrand sample: value, its own error bar and the evaluations it cost.
#[derive(Copy, Clone, Debug)]
pub(crate) struct Sample {
    pub value: Complex64,
    pub err: f64,
    pub evals: u64,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    noise: f64,
}

struct ByErr(f64, usize);

impl PartialEq for ByErr {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for ByErr {}
impl PartialOrd for ByErr {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for ByErr {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0).then(o.1.cmp(&self.1))
    }
}

fn gk21<F>(f: &F, a: f64, b: f64, evals: &mut u64) -> Result<Panel, EngineError>
where
    F: Fn(f64) -> Result<Sample, EngineError>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [Complex64::new(0.0, 0.0); 21];
    let mut noise = 0.0;
    let mut k = 0;
    for (i, x) in XGK.iter().enumerate() {
        let pts: &[f64] = if i == 10 { &[0.0] } else { &[-1.0, 1.0] };
        for s in pts {
            let smp = f(c + s * h * x)?;
            *evals += smp.evals;
            fv[k] = smp.value;
            noise += WGK[i] * smp.err;
            k += 1;
        }
    }
    let mut rk = Complex64::new(0.0, 0.0);
    let mut rg = Complex64::new(0.0, 0.0);
    let mut rabs = 0.0;
    k = 0;
    for i in 0..11 {
        let n = if i == 10 { 1 } else { 2 };
        for _ in 0..n {
            rk += WGK[i] * fv[k];
            rabs += WGK[i] * fv[k].norm();
            if i % 2 == 1 {
                rg += WG[i / 2] * fv[k];
            }
            k += 1;
        }
    }
    let mean = rk * 0.5;
    let mut rasc = 0.0;
    k = 0;
    for i in 0..11 {
        let n = if i == 10 { 1 } else { 2 };
        for _ in 0..n {
            rasc += WGK[i] * (fv[k] - mean).norm();
            k += 1;
        }
    }
    let mut err = ((rk - rg) * h).norm();
    let rasc = rasc * h;
    if rasc != 0.0 && err != 0.0 {
        err = rasc * (200.0 * err / rasc).powf(1.5).min(1.0);
    }
    err = err.max(50.0 * f64::EPSILON * rabs * h);
    Ok(Panel { a, b, value: rk * h, err, noise: noise * h })
}

/// Result of one mapped tail: value, error, carried sample error and the level reached.
struct Tail {
    value: Complex64,
    err: f64,
    noise: f64,
    level: u32,
}

/// Integral of f over [T, ∞) with t = T/x and tanh-sinh on x ∈ (0, 1].
///
/// Step halving continues at least to `min_level` and until successive levels agree.
fn tail<F>(f: &F, t0: f64, dir: f64, tol_of: impl Fn(f64) -> f64, min_level: u32, evals: &mut u64) -> Result<Tail, EngineError>
where
    F: Fn(f64) -> Result<Sample, EngineError>,
{
    const S_MAX: f64 = 3.4;
    const MAX_LEVEL: u32 = 9;
    let node = |s: f64, evals: &mut u64| -> Result<(Complex64, f64), EngineError> {
        let e = (-PI * s.sinh()).exp();
        let x = 1.0 / (1.0 + e);
        let w = PI * s.cosh() * x * (e * x);
        if w == 0.0 {
            return Ok((Complex64::new(0.0, 0.0), 0.0));
        }
        let t = t0 / x;
        let smp = f(dir * t)?;
        *evals += smp.evals;
        let jac = w * t0 / (x * x);
        Ok((smp.value * jac, smp.err * jac))
    };
    let min_level = min_level.max(2);
    let mut h = 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut noise = 0.0;
    let n0 = (S_MAX / h) as i64;
    for k in -n0..=n0 {
        let (v, e) = node(k as f64 * h, evals)?;
        sum += v;
        noise += e;
    }
    let mut prev = sum * h;
    let mut diff = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        h *= 0.5;
        let n = (S_MAX / h) as i64;
        let mut k = -n + if n % 2 == 0 { 1 } else { 0 };
        while k <= n {
            let (v, e) = node(k as f64 * h, evals)?;
            sum += v;
            noise += e;
            k += 2;
        }
        let cur = sum * h;
        diff = (cur - prev).norm();
        if level >= min_level && diff <= tol_of(cur.norm()).max(noise * h) {
            return Ok(Tail { value: cur, err: diff, noise: noise * h, level });
        }
        prev = cur;
    }
    Err(EngineError::NonConvergence { stage: "tail quadrature", value: prev, err: diff, tol: tol_of(prev.norm()) })
}

/// Contiguous partition of the union hull of `panels`: all endpoints become
/// breakpoints and gaps between disjoint groups become single panels.
fn cover(panels: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut pts: Vec<f64> = panels.iter().flat_map(|&(a, b)| [a, b]).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Final partition of a line integral, used to warm-start a similar one.
#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct LinePlan {
    panels: Vec<(f64, f64)>,
    tail_levels: [u32; 2],
}

/// ∫_{−∞}^{∞} f(t) dt for integrands that may carry their own error bars.
///
/// Starts from `plan` when given (same window assumed), otherwise from a uniform
/// partition of [−window, window]. Each point of `centers` lying outside
/// [−window/2, window/2] gets its own window of the same width, and the core
/// is extended to cover it, so peaks far out on the line are not left to the
/// mapped tails.
pub(crate) fn integrate_samples<F>(
    f: F,
    window: f64,
    centers: &[f64],
    cfg: &QuadConfig,
    plan: Option<&LinePlan>,
) -> Result<(Estimate, LinePlan), EngineError>
where
    F: Fn(f64) -> Result<Sample, EngineError>,
{
    const N_INIT: usize = 4;
    let mut evals = 0u64;
    let plan = plan.filter(|p| !p.panels.is_empty());
    let uniform = |c: f64| {
        let width = 2.0 * window / N_INIT as f64;
        (0..N_INIT).map(move |i| (c - window + i as f64 * width, c - window + (i + 1) as f64 * width))
    };
    let mut initial: Vec<(f64, f64)> = match plan {
        Some(p) => p.panels.clone(),
        None => uniform(0.0).collect(),
    };
    let far: Vec<f64> = centers.iter().copied().filter(|c| c.abs() > 0.5 * window).collect();
    if !far.is_empty() {
        initial = cover(initial.into_iter().chain(far.iter().flat_map(|&c| uniform(c))).collect());
    }
    let hi = initial.iter().map(|p| p.1).fold(window, f64::max);
    let lo = initial.iter().map(|p| p.0).fold(-window, f64::min);
    let mut panels = Vec::with_capacity(initial.len() + 16);
    let mut heap = BinaryHeap::new();
    let mut core = Complex64::new(0.0, 0.0);
    let mut core_err = 0.0;
    let mut core_noise = 0.0;
    for (a, b) in initial {
        let p = gk21(&f, a, b, &mut evals)?;
        core += p.value;
        core_err += p.err;
        core_noise += p.noise;
        heap.push(ByErr(p.err, panels.len()));
        panels.push(p);
    }

    let mut levels = plan.map_or([0, 0], |p| p.tail_levels);
    let tail_tol = |mag: f64| cfg.tol_for(mag) / cfg.tail_safety;
    let mut right = tail(&f, hi, 1.0, tail_tol, levels[0], &mut evals)?;
    let mut left = tail(&f, -lo, -1.0, tail_tol, levels[1], &mut evals)?;

    loop {
        let tails = right.value + left.value;
        let tails_err = (right.err + left.err) * cfg.tail_safety;
        let tails_noise = right.noise + left.noise;
        let total = core + tails;
        // Refinement cannot resolve below the error already carried by the samples.
        let tol = cfg.tol_for(total.norm()).max(core_noise + tails_noise);
        if core_err + tails_err <= tol {
            break;
        }
        if core_err < tails_err {
            // The tails were converged against their own magnitude; tighten them
            // against the full integral.
            let tail_tol = |_: f64| tol / (2.0 * cfg.tail_safety);
            if right.err > left.err {
                levels[0] = right.level + 1;
                right = tail(&f, hi, 1.0, tail_tol, levels[0], &mut evals)?;
            } else {
                levels[1] = left.level + 1;
                left = tail(&f, -lo, -1.0, tail_tol, levels[1], &mut evals)?;
            }
            continue;
        }
        if panels.len() >= cfg.max_panels {
            let core_sum: Complex64 = panels.iter().map(|p| p.value).sum();
            return Err(EngineError::NonConvergence {
                stage: "line integral",
                value: core_sum + tails,
                err: core_err + tails_err + core_noise + tails_noise,
                tol,
            });
        }
        let ByErr(_, idx) = heap.pop().expect("non-empty panel heap");
        let old = panels[idx];
        let mid = 0.5 * (old.a + old.b);
        let l = gk21(&f, old.a, mid, &mut evals)?;
        let r = gk21(&f, mid, old.b, &mut evals)?;
        core += l.value + r.value - old.value;
        core_err += l.err + r.err - old.err;
        core_noise += l.noise + r.noise - old.noise;
        panels[idx] = l;
        heap.push(ByErr(l.err, idx));
        heap.push(ByErr(r.err, panels.len()));
        panels.push(r);
    }
    let tails = right.value + left.value;
    let tails_err = (right.err + left.err) * cfg.tail_safety;
    let tails_noise = right.noise + left.noise;
    // Re-sum in panel order so the result does not depend on the refinement history.
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let core_sum: Complex64 = panels.iter().map(|p| p.value).sum();
    let core_err: f64 = panels.iter().map(|p| p.err).sum();
    let noise: f64 = panels.iter().map(|p| p.noise).sum::<f64>() + tails_noise;
    let est = Estimate {
        value: core_sum + tails,
        err: core_err + tails_err + noise,
        evals,
        modes_used: Vec::new(),
        decay_exponent: None,
    };
    let plan = LinePlan { panels: panels.iter().map(|p| (p.a, p.b)).collect(), tail_levels: [right.level, left.level] };
    Ok((est, plan))
}

/// ∫_{−∞}^{∞} f(t) dt/(2π) by adaptive Gauss–Kronrod on [−W, W] plus mapped tails.
///
/// The integrand must decay faster than |t|^{-1}.
pub fn integrate_line<F>(f: F, cfg: &QuadConfig) -> Result<Estimate, EngineError>
where
    F: Fn(f64) -> Complex64,
{
    integrate_samples(
        |t| {
            let v = f(t);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(EngineError::NonFinite { modes: vec![], ts: vec![t] });
            }
            Ok(Sample { value: v, err: 0.0, evals: 1 })
        },
        cfg.t_window,
        &[],
        cfg,
        None,
    )
    .map(|(e, _)| Estimate { value: e.value / (2.0 * PI), err: e.err / (2.0 * PI), ..e })
}

/// ∫_a^b f(t) dt by globally adaptive Gauss–Kronrod (21 points).
///
/// Bisects the panel with the largest error until the total error is within
/// `max(abs_tol, rel_tol·|I|)` or `max_panels` is reached.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Estimate, EngineError>
where
    F: Fn(f64) -> Complex64,
{
    let g = |t: f64| {
        let v = f(t);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(EngineError::NonFinite { modes: vec![], ts: vec![t] });
        }
        Ok(Sample { value: v, err: 0.0, evals: 1 })
    };
    let mut evals = 0;
    let mut panels = vec![gk21(&g, a, b, &mut evals)?];
    let mut heap = BinaryHeap::from([ByErr(panels[0].err, 0)]);
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if err <= cfg.tol_for(value.norm()) {
            return Ok(Estimate { value, err, evals, modes_used: Vec::new(), decay_exponent: None });
        }
        if panels.len() >= cfg.max_panels {
            return Err(EngineError::NonConvergence { stage: "interval quadrature", value, err, tol: cfg.tol_for(value.norm()) });
        }
        let ByErr(_, i) = heap.pop().expect("heap holds every panel");
        let p = panels[i];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(EngineError::NonConvergence { stage: "interval quadrature", value, err, tol: cfg.tol_for(value.norm()) });
        }
        panels[i] = gk21(&g, p.a, mid, &mut evals)?;
        heap.push(ByErr(panels[i].err, i));
        panels.push(gk21(&g, mid, p.b, &mut evals)?);
        heap.push(ByErr(panels[panels.len() - 1].err, panels.len() - 1));
    }
}
