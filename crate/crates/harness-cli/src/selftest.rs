//! Built-in property suites. `fast` covers the field gamma function and the
//! two one-dimensional identities; `full` adds the multidimensional
//! identities, the plane integrals and the separated-variable checks.

use std::f64::consts::PI;

use field_gamma::{a_func, cgamma, ln_gamma, FieldPoint, HalfInt, LogComplex};
use identities::sov::{s_a, tint_cross_check, CrossCheckOptions, LatticePoint, SovError, DEFAULT_EPSILON};
use identities::{sample_params, IdentityKind, VerifyConfig};
use num_complex::Complex64;
use plane_integrals::PlaneQuadConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, Target};
use crate::report::{Outcome, Record, ReportDocument};
use crate::run::{identity_record, plane_case};

/// Random points per pointwise property.
pub const POINTS: usize = 1000;
/// Points of the T-integral comparison.
pub const TINT_POINTS: usize = 100;

/// ln Γ(3/4).
const LN_GAMMA_3_4: f64 = 0.203_280_951_431_295_37;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl Level {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            _ => Err(format!("unknown selftest level {s:?} (fast or full)")),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Fast => "fast",
            Level::Full => "full",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SelftestOptions {
    pub level: Level,
    /// Scale applied to σ_N inside the T-integral comparison; 1 except when
    /// checking that the comparison detects a wrong normalization.
    pub sigma_scale: f64,
}

impl SelftestOptions {
    pub fn new(level: Level) -> Self {
        SelftestOptions { level, sigma_scale: 1.0 }
    }
}

fn val(l: LogComplex) -> Result<Complex64, String> {
    l.to_complex().map_err(|e| e.to_string())
}

/// Maximum of `err` over `count` points drawn from `draw`, checked against `tol`.
fn pointwise<P>(
    label: &str,
    seed: u64,
    count: usize,
    tol: f64,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> P,
    err: impl Fn(&P) -> Result<f64, String>,
) -> Record {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for k in 0..count {
        let p = draw(&mut rng);
        match err(&p) {
            Ok(e) if e.is_finite() => worst = worst.max(e),
            Ok(_) => return Record::new(label, Outcome::Fail).with_detail(format!("non-finite error at point {k}")),
            Err(msg) => return Record::new(label, Outcome::Fail).with_detail(format!("point {k}: {msg}")),
        }
    }
    let outcome = if worst < tol { Outcome::Pass } else { Outcome::Fail };
    Record::new(label, outcome).with_detail(format!("max error {worst:.3e} over {count} points, tolerance {tol:e}"))
}

fn draw_point(rng: &mut ChaCha8Rng, integer: bool) -> FieldPoint {
    let twice = if integer { 2 * rng.gen_range(-3i64..=3) } else { rng.gen_range(-6i64..=6) };
    let im = rng.gen_range(0.05..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    FieldPoint::new(HalfInt::from_twice(twice), Complex64::new(rng.gen_range(-3.0..3.0), im))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn sign_pow(q: f64) -> Complex64 {
    Complex64::from_polar(1.0, PI * q)
}

fn a_of(p: &FieldPoint) -> Result<Complex64, String> {
    a_func(p).map_err(|e| e.to_string()).and_then(val)
}

fn field_gamma_checks() -> Vec<Record> {
    let one = Complex64::new(1.0, 0.0);
    let mut out = vec![
        pointwise("a(x) a(1-x̄) = 1", 11, POINTS, 1e-12, |r| draw_point(r, false), |p| {
            Ok((a_of(p)? * a_of(&p.one_minus_bar())? - 1.0).norm())
        }),
        pointwise("a(x) = -[x] a(x+1)", 12, POINTS, 1e-12, |r| draw_point(r, false), |p| {
            Ok(rel(a_of(p)?, -p.bracket() * a_of(&p.shift_mu(one))?))
        }),
        pointwise("a(x) a(1-x) = (-1)^[x]", 13, POINTS, 1e-12, |r| draw_point(r, true), |p| {
            let q = FieldPoint::new(-p.m, one - p.mu);
            Ok((a_of(p)? * a_of(&q)? - sign_pow(p.m.value())).norm())
        }),
        pointwise("a(x) = (-1)^[x] a(x̄)", 14, POINTS, 1e-12, |r| draw_point(r, true), |p| {
            Ok(rel(a_of(p)?, sign_pow(p.m.value()) * a_of(&p.bar())?))
        }),
        pointwise(
            "|a(x)| = 1 on the unitary line",
            15,
            POINTS,
            1e-12,
            |r| FieldPoint::new(HalfInt::from_twice(r.gen_range(-16i64..=16)), Complex64::new(0.5, r.gen_range(-50.0..50.0))),
            |p| Ok((a_of(p)?.norm() - 1.0).abs()),
        ),
    ];
    let lg = ln_gamma(Complex64::new(0.75, 0.0)).map(|v| (v.re - LN_GAMMA_3_4).abs() + v.im.abs());
    let rec = match lg {
        Ok(e) if e < 1e-14 => Record::new("ln Γ(3/4) reference", Outcome::Pass).with_detail(format!("error {e:.3e}")),
        Ok(e) => Record::new("ln Γ(3/4) reference", Outcome::Fail).with_detail(format!("error {e:.3e}")),
        Err(e) => Record::new("ln Γ(3/4) reference", Outcome::Fail).with_detail(e.to_string()),
    };
    out.push(rec);
    // 𝚪 and a are reciprocal away from poles
    out.push(pointwise("𝚪(x) a(x) = 1", 16, POINTS, 1e-12, |r| draw_point(r, false), |p| {
        let g = cgamma(p).map_err(|e| e.to_string()).and_then(val)?;
        Ok((g * a_of(p)? - 1.0).norm())
    }));
    out
}

/// One identity task: kind, seed, half-integer class, tolerance.
type IdentityTask = (IdentityKind, u64, bool, f64);

fn identity_tasks(level: Level) -> Vec<IdentityTask> {
    let mut v = Vec::new();
    for kind in [IdentityKind::BarnesC, IdentityKind::DBWC] {
        v.push((kind, 1, false, 1e-6));
        v.push((kind, 1, true, 1e-6));
    }
    if level == Level::Full {
        for n in [2, 3] {
            let tol = if n == 2 { 1e-6 } else { 1e-3 };
            for kind in [IdentityKind::G1 { n }, IdentityKind::G2 { n }, IdentityKind::G3 { n }] {
                v.push((kind, 1, false, tol));
            }
        }
    }
    v
}

fn tint_points(rng: &mut ChaCha8Rng) -> (Vec<LatticePoint>, Vec<LatticePoint>, Vec<LatticePoint>) {
    let n = rng.gen_range(2usize..=3);
    let pt = |r: &mut ChaCha8Rng| LatticePoint::new(HalfInt::from_int(r.gen_range(-3i64..=3)), r.gen_range(-1.5..1.5));
    let xs = (0..n).map(|_| pt(rng)).collect();
    let xps = (0..n).map(|_| pt(rng)).collect();
    let u = (0..n - 1).map(|_| pt(rng)).collect();
    (xs, xps, u)
}

/// T-integral comparison at random points for two spins, and the coincident-point check.
pub fn sov_checks(sigma_scale: f64) -> Vec<Record> {
    let spins = [
        FieldPoint::new(HalfInt::from_int(0), Complex64::new(0.5, 0.3)),
        FieldPoint::new(HalfInt::from_int(1), Complex64::new(0.5, -0.1)),
    ];
    let opts = CrossCheckOptions { sigma_scale };
    let mut tint = pointwise("T-integrand equals the Γ form", 21, TINT_POINTS, 1e-10, tint_points, |(xs, xps, u)| {
        let mut worst = 0.0f64;
        let mut first = None;
        for s in &spins {
            let (a, b) = tint_cross_check(xs, xps, s, u, opts).map_err(|e| e.to_string())?;
            worst = worst.max(rel(a, b));
            // spin independence of the separated-variable side
            match first {
                None => first = Some(a),
                Some(a0) => worst = worst.max(rel(a, a0)),
            }
        }
        Ok(worst)
    });
    if sigma_scale != 1.0 {
        let d = tint.detail.take().unwrap_or_default();
        tint = tint.with_detail(format!("{d}; σ scaled by {sigma_scale}"));
    }

    let xps = [
        LatticePoint::new(HalfInt::from_int(0), 0.2),
        LatticePoint::new(HalfInt::from_int(1), -0.3),
        LatticePoint::new(HalfInt::from_int(-1), 0.5),
    ];
    let s = spins[0];
    let u = [xps[0], LatticePoint::new(HalfInt::from_int(2), 0.1)];
    let pole = matches!(s_a(&u, &xps, &s), Err(SovError::Pole { .. }));
    let shifted = [u[0].eps_shifted(DEFAULT_EPSILON), u[1]];
    let finite = s_a(&shifted, &xps, &s).ok().and_then(|v| v.to_complex().ok()).is_some_and(|v| v.re.is_finite() && v.im.is_finite());
    let coincident = Record::new(
        "coincident overlap is regularized",
        if pole && finite { Outcome::Pass } else { Outcome::Fail },
    )
    .with_detail(format!("pole reported: {pole}, ε-shifted value finite: {finite}"));
    vec![tint, coincident]
}

enum Task {
    FieldGamma,
    Identity(IdentityTask),
    Plane(Target, u64),
    ChainMonteCarlo,
    Sov,
}

/// Run the suite; records come out in a fixed order for any `jobs`.
pub fn run_selftest(opts: SelftestOptions, jobs: usize) -> ReportDocument {
    let mut tasks = vec![Task::FieldGamma];
    tasks.extend(identity_tasks(opts.level).into_iter().map(Task::Identity));
    if opts.level == Level::Full {
        tasks.extend((1..=5).map(|k| Task::Plane(Target::Chain, k)));
        tasks.push(Task::ChainMonteCarlo);
        tasks.extend((1..=3).map(|k| Task::Plane(Target::StarTriangle, k)));
        tasks.extend((1..=3).map(|k| Task::Plane(Target::Fourier, k)));
        tasks.push(Task::Sov);
    }
    let groups: Vec<Vec<Record>> = {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
        use rayon::prelude::*;
        pool.install(|| tasks.par_iter().map(|t| run_task(t, opts)).collect())
    };
    let config = RunConfig { level: Some(opts.level.name().to_string()), ..RunConfig::default() };
    ReportDocument::new("selftest", config, groups.into_iter().flatten().collect())
}

fn run_task(task: &Task, opts: SelftestOptions) -> Vec<Record> {
    match *task {
        Task::FieldGamma => field_gamma_checks(),
        Task::Identity((kind, seed, half, tol)) => {
            let p = sample_params(kind, seed, half);
            let class = if half { " half-integer" } else { "" };
            let rec = identity_record(kind, &p, &VerifyConfig::new(tol), format!("{kind} seed {seed}{class}"));
            vec![Record { seed: Some(seed), ..rec }]
        }
        Task::Plane(target, k) => {
            let cfg = PlaneQuadConfig { rel_tol: target.default_tol(), ..PlaneQuadConfig::default() };
            vec![plane_case(target, k, &cfg)]
        }
        Task::ChainMonteCarlo => {
            let mut rec = plane_case(Target::Chain, 1, &PlaneQuadConfig::monte_carlo(1));
            rec.label = "chain #1 monte carlo".into();
            vec![rec]
        }
        Task::Sov => sov_checks(opts.sigma_scale),
    }
}

