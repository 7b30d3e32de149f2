use identities::{sample_params, verify, IdentityKind, IdentityParams, Verdict, VerifyConfig, VerifyError};
use mb_engine::EngineError;
use plane_integrals::{chain_check, fourier_check, star_triangle_check, PlaneError, PlaneQuadConfig, PlaneReport};
use rayon::prelude::*;

use crate::config::{RunConfig, Target};
use crate::corpus::{chain_cases, fourier_cases, star_cases};
use crate::report::{Outcome, Record, ReportDocument};

/// Run `tasks` on at most `jobs` threads; results keep the input order.
pub fn run_parallel<T: Sync, F: Fn(&T) -> Record + Sync + Send>(tasks: &[T], jobs: usize, f: F) -> Vec<Record> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    pool.install(|| tasks.par_iter().map(&f).collect())
}

fn engine_outcome(e: &EngineError) -> Outcome {
    match e {
        EngineError::NonConvergence { .. } | EngineError::NonFinite { .. } | EngineError::Divergent(_) => {
            Outcome::NonConvergent
        }
    }
}

/// Verify one identity parameter set.
pub fn identity_record(kind: IdentityKind, params: &IdentityParams, cfg: &VerifyConfig, label: String) -> Record {
    match verify(kind, params, cfg) {
        Ok(r) => {
            let finite = [r.lhs.value.re, r.lhs.value.im, r.lhs.err, r.rhs.re, r.rhs.im, r.rel_residual]
                .iter()
                .all(|x| x.is_finite());
            if !finite {
                return Record::new(label, Outcome::NonConvergent).with_detail("non-finite estimate");
            }
            let outcome = if r.verdict == Verdict::Pass { Outcome::Pass } else { Outcome::Fail };
            Record { identity: Some(r), ..Record::new(label, outcome) }
        }
        Err(VerifyError::Invalid(v)) => Record { violations: v, ..Record::new(label, Outcome::Invalid) },
        Err(e @ VerifyError::Gamma(_)) => Record::new(label, Outcome::Invalid).with_detail(e.to_string()),
        Err(VerifyError::Engine(e)) => Record::new(label, engine_outcome(&e)).with_detail(e.to_string()),
    }
}

/// Turn a plane-check result into a record.
pub fn plane_record(label: String, r: Result<PlaneReport, PlaneError>) -> Record {
    match r {
        Ok(r) => {
            let outcome = if r.verdict == Verdict::Pass { Outcome::Pass } else { Outcome::Fail };
            Record { plane: Some(r), ..Record::new(label, outcome) }
        }
        Err(e) => {
            let outcome = match e {
                PlaneError::NonConvergence { .. } => Outcome::NonConvergent,
                PlaneError::Engine(ref inner) => engine_outcome(inner),
                _ => Outcome::Invalid,
            };
            Record::new(label, outcome).with_detail(e.to_string())
        }
    }
}

/// Plane check `index` (1-based) of the fixed corpus.
pub fn plane_case(target: Target, index: u64, cfg: &PlaneQuadConfig) -> Record {
    let k = index as usize;
    let missing = |name: &str, len: usize| {
        Record::new(format!("{name} #{index}"), Outcome::Invalid).with_detail(format!("corpus has cases 1..={len}"))
    };
    let rec = match target {
        Target::Chain => {
            let cases = chain_cases();
            let Some(c) = k.checked_sub(1).and_then(|i| cases.get(i)) else { return missing("chain", cases.len()) };
            plane_record(format!("chain #{index}"), chain_check(c.alpha, c.beta, c.z[0], c.z[1], cfg))
        }
        Target::StarTriangle => {
            let cases = star_cases();
            let Some(c) = k.checked_sub(1).and_then(|i| cases.get(i)) else { return missing("star", cases.len()) };
            let [a, b, g] = c.exps;
            plane_record(format!("star #{index}"), star_triangle_check(a, b, g, c.z[0], c.z[1], c.z[2], cfg))
        }
        Target::Fourier => {
            let cases = fourier_cases();
            let Some(c) = k.checked_sub(1).and_then(|i| cases.get(i)) else { return missing("fourier", cases.len()) };
            plane_record(format!("fourier #{index}"), fourier_check(c.alpha, c.p, cfg))
        }
        Target::Identity(_) => unreachable!("identity targets are not plane cases"),
    };
    Record { seed: Some(index), ..rec }
}

/// Parameters of an explicit run, split by the kind's arity.
fn explicit_params(kind: IdentityKind, cfg: &RunConfig) -> Result<Option<IdentityParams>, String> {
    cfg.params.as_ref().map(|pts| IdentityParams::from_points(kind, pts)).transpose()
}

/// `verify`: explicit parameters, or `count` seeds from `seed`.
pub fn run_verify(cfg: &RunConfig, jobs: usize) -> Result<ReportDocument, String> {
    let target = cfg.target()?;
    let seeds: Vec<u64> = (cfg.seed..cfg.seed + cfg.count).collect();
    let records = match target {
        Target::Identity(kind) => {
            let vcfg = cfg.verify_config();
            if let Some(p) = explicit_params(kind, cfg)? {
                vec![identity_record(kind, &p, &vcfg, format!("{kind} params"))]
            } else {
                run_parallel(&seeds, jobs, |&s| {
                    let p = sample_params(kind, s, cfg.half_integer);
                    let class = if cfg.half_integer { " half-integer" } else { "" };
                    Record { seed: Some(s), ..identity_record(kind, &p, &vcfg, format!("{kind} seed {s}{class}")) }
                })
            }
        }
        _ => {
            if cfg.params.is_some() {
                return Err("plane checks take corpus indices via --seed, not --params".into());
            }
            run_parallel(&seeds, jobs, |&s| plane_case(target, s, &cfg.plane))
        }
    };
    Ok(ReportDocument::new("verify", cfg.clone(), records))
}

/// `sweep`: set the common Re μ of every point entering the convergence sum.
pub fn run_sweep(cfg: &RunConfig, jobs: usize) -> Result<ReportDocument, String> {
    let Target::Identity(kind) = cfg.target()? else {
        return Err("sweeps are defined for the identities only".into());
    };
    let sweep = cfg.sweep.clone().ok_or("sweep needs --from, --to and --steps")?;
    let base = match explicit_params(kind, cfg)? {
        Some(p) => p,
        None => {
            let (nz, nw) = kind.arity();
            let m = field_gamma::HalfInt::from_twice(i64::from(cfg.half_integer));
            let pt = field_gamma::FieldPoint::new(m, num_complex::Complex64::new(0.0, 0.0));
            IdentityParams { z: vec![pt; nz], w: vec![pt; nw] }
        }
    };
    let vcfg = cfg.verify_config();
    let values = sweep.values();
    let records = run_parallel(&values, jobs, |&x| {
        let mut p = base.clone();
        let budget_w = !matches!(kind, IdentityKind::G3 { .. });
        for q in p.z.iter_mut() {
            q.mu.re = x;
        }
        if budget_w {
            for q in p.w.iter_mut() {
                q.mu.re = x;
            }
        }
        Record { sweep_value: Some(x), ..identity_record(kind, &p, &vcfg, format!("{kind} re_mu={x}")) }
    });
    Ok(ReportDocument::new("sweep", cfg.clone(), records))
}
