use std::collections::BTreeMap;

use field_gamma::{FieldPoint, HalfInt};
use identities::{sov::DEFAULT_EPSILON, IdentityKind, VerifyConfig, DEFAULT_DELTA_MIN};
use mb_engine::QuadConfig;
use num_complex::Complex64;
use plane_integrals::PlaneQuadConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// What a run verifies.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Identity(IdentityKind),
    Chain,
    StarTriangle,
    Fourier,
}

impl Target {
    pub fn parse(name: &str, n: Option<usize>) -> Result<Self, String> {
        match name.to_ascii_lowercase().as_str() {
            "chain" => Ok(Target::Chain),
            "star" | "star-triangle" => Ok(Target::StarTriangle),
            "fourier" => Ok(Target::Fourier),
            _ => IdentityKind::parse(name, n).map(Target::Identity),
        }
    }

    pub fn default_tol(&self) -> f64 {
        match self {
            Target::Identity(_) | Target::Fourier => 1e-6,
            Target::Chain => 1e-4,
            Target::StarTriangle => 1e-3,
        }
    }
}

/// A linear scan of one common Re μ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    /// `steps` evenly spaced values including both ends; empty if `from > to`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 0 || self.from > self.to {
            return Vec::new();
        }
        if self.steps == 1 {
            return vec![self.from];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps).map(|k| self.from + (self.to - self.from) * k as f64 / last).collect()
    }
}

/// Run settings as given on the command line or in a config file. Every
/// field is optional so the two sources can be merged.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Request {
    pub kind: Option<String>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub count: Option<u64>,
    pub half_integer: Option<bool>,
    pub params: Option<Vec<FieldPoint>>,
    pub tol: Option<f64>,
    pub delta_min: Option<f64>,
    /// Engine overrides, `key -> value`; for plane checks these set the plane quadrature.
    pub engine: BTreeMap<String, Value>,
    pub sweep: Option<SweepSpec>,
}

fn pick<T: PartialEq + std::fmt::Debug>(name: &str, cli: Option<T>, file: Option<T>, warnings: &mut Vec<String>) -> Option<T> {
    match (cli, file) {
        (Some(c), Some(f)) => {
            if c != f {
                warnings.push(format!("config file overrides {name}: {f:?} (command line had {c:?})"));
            }
            Some(f)
        }
        (c, f) => f.or(c),
    }
}

impl Request {
    /// Merge a config file into command-line settings; the file wins on conflict.
    pub fn merge(self, file: Request, warnings: &mut Vec<String>) -> Request {
        let mut engine = self.engine;
        for (k, v) in file.engine {
            if let Some(old) = engine.get(&k) {
                if *old != v {
                    warnings.push(format!("config file overrides engine.{k}: {v} (command line had {old})"));
                }
            }
            engine.insert(k, v);
        }
        Request {
            kind: pick("kind", self.kind, file.kind, warnings),
            n: pick("n", self.n, file.n, warnings),
            seed: pick("seed", self.seed, file.seed, warnings),
            count: pick("count", self.count, file.count, warnings),
            half_integer: pick("half_integer", self.half_integer, file.half_integer, warnings),
            params: pick("params", self.params, file.params, warnings),
            tol: pick("tol", self.tol, file.tol, warnings),
            delta_min: pick("delta_min", self.delta_min, file.delta_min, warnings),
            engine,
            sweep: pick("sweep", self.sweep, file.sweep, warnings),
        }
    }

    /// Fill in every default and apply the engine overrides.
    pub fn resolve(&self) -> Result<RunConfig, String> {
        let kind = self.kind.clone().ok_or("no identity or check given (use --kind)")?;
        let target = Target::parse(&kind, self.n)?;
        let tol = self.tol.unwrap_or(target.default_tol());
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(format!("tolerance must be positive, got {tol}"));
        }
        let mut engine = VerifyConfig::new(tol).engine;
        let mut plane = PlaneQuadConfig { rel_tol: tol, ..PlaneQuadConfig::default() };
        for (k, v) in &self.engine {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            match target {
                Target::Identity(_) => engine.set(k, &v)?,
                _ => plane.set(k, &v)?,
            }
        }
        Ok(RunConfig {
            kind: Some(kind.to_ascii_lowercase()),
            n: self.n,
            seed: self.seed.unwrap_or(1),
            count: self.count.unwrap_or(1),
            half_integer: self.half_integer.unwrap_or(false),
            params: self.params.clone(),
            tol,
            delta_min: self.delta_min.unwrap_or(DEFAULT_DELTA_MIN),
            epsilon: DEFAULT_EPSILON,
            engine,
            plane,
            sweep: self.sweep.clone(),
            level: None,
        })
    }
}

/// Fully resolved settings, echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub kind: Option<String>,
    pub n: Option<usize>,
    /// First seed (identities) or corpus index (plane checks).
    pub seed: u64,
    pub count: u64,
    pub half_integer: bool,
    pub params: Option<Vec<FieldPoint>>,
    pub tol: f64,
    pub delta_min: f64,
    /// ε of the coincident-point regularization in the separated-variable checks.
    pub epsilon: f64,
    pub engine: QuadConfig,
    pub plane: PlaneQuadConfig,
    pub sweep: Option<SweepSpec>,
    /// Selftest level.
    pub level: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kind: None,
            n: None,
            seed: 1,
            count: 1,
            half_integer: false,
            params: None,
            tol: 1e-6,
            delta_min: DEFAULT_DELTA_MIN,
            epsilon: DEFAULT_EPSILON,
            engine: VerifyConfig::new(1e-6).engine,
            plane: PlaneQuadConfig::default(),
            sweep: None,
            level: None,
        }
    }
}

impl RunConfig {
    pub fn target(&self) -> Result<Target, String> {
        Target::parse(self.kind.as_deref().ok_or("no kind")?, self.n)
    }

    pub fn verify_config(&self) -> VerifyConfig {
        VerifyConfig { tol: self.tol, delta_min: self.delta_min, engine: self.engine.clone() }
    }
}

/// Parse `m:re:im` triples separated by commas; `m` may be a half-integer.
pub fn parse_points(s: &str) -> Result<Vec<FieldPoint>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let parts: Vec<&str> = t.split(':').collect();
            let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?} in {t:?}"));
            let (m, re, im) = match parts.as_slice() {
                [m, re, im] => (num(m)?, num(re)?, num(im)?),
                [m, re] => (num(m)?, num(re)?, 0.0),
                _ => return Err(format!("expected m:re:im, got {t:?}")),
            };
            let m = HalfInt::from_f64(m).ok_or_else(|| format!("label {m} is not a half-integer"))?;
            Ok(FieldPoint::new(m, Complex64::new(re, im)))
        })
        .collect()
}

/// Parse a comma list of real μ for label-0 points.
pub fn parse_mu_list(s: &str) -> Result<Vec<FieldPoint>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map(|mu| FieldPoint::real(0, mu)).map_err(|_| format!("bad μ {t:?}")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_lists() {
        let p = parse_points("0:0.2:0.1, 0.5:0.3, -2:0.1:-0.4").unwrap();
        assert_eq!(p[1], FieldPoint::new(HalfInt::from_twice(1), Complex64::new(0.3, 0.0)));
        assert_eq!(p[2].m, HalfInt::from_int(-2));
        assert!(parse_points("0.3:0.2").is_err());
        assert_eq!(parse_mu_list("0.3,0.3").unwrap(), vec![FieldPoint::real(0, 0.3); 2]);
    }

    #[test]
    fn file_wins_with_warning() {
        let cli = Request { kind: Some("g1".into()), n: Some(3), tol: Some(1e-3), ..Default::default() };
        let file = Request { tol: Some(1e-4), seed: Some(9), ..Default::default() };
        let mut w = Vec::new();
        let r = cli.merge(file, &mut w);
        assert_eq!((r.tol, r.seed, r.n), (Some(1e-4), Some(9), Some(3)));
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("tol"));
    }

    #[test]
    fn resolve_applies_defaults_and_overrides() {
        let mut req = Request { kind: Some("chain".into()), ..Default::default() };
        req.engine.insert("angles".into(), Value::from(128));
        let cfg = req.resolve().unwrap();
        assert_eq!((cfg.tol, cfg.plane.angles, cfg.plane.rel_tol), (1e-4, 128, 1e-4));
        let req = Request { kind: Some("barnes".into()), tol: Some(1e-4), ..Default::default() };
        assert_eq!(req.resolve().unwrap().engine.rel_tol, 2.5e-5);
        let mut bad = Request { kind: Some("barnes".into()), ..Default::default() };
        bad.engine.insert("nope".into(), Value::from(1));
        assert!(bad.resolve().is_err());
        assert!(Request { kind: Some("g1".into()), ..Default::default() }.resolve().is_err());
    }

    #[test]
    fn sweep_values() {
        let s = SweepSpec { from: 0.1, to: 0.24, steps: 8 };
        let v = s.values();
        assert_eq!(v.len(), 8);
        assert!((v[7] - 0.24).abs() < 1e-15);
        assert!(SweepSpec { from: 0.3, to: 0.2, steps: 4 }.values().is_empty());
    }
}
