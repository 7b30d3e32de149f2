use std::fmt;

use field_gamma::{pole_report, product_log, FieldPoint, GammaError, HalfInt, LogComplex};
use mb_engine::{contour_margin, ModeLattice, PoleLine};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Real shift of the G3 contour, Re u = c.
pub const G3_CONTOUR_SHIFT: f64 = 0.1;

/// Default smallest admissible distance between contour and poles.
pub const DEFAULT_DELTA_MIN: f64 = 0.05;

/// The five sum-integral identities.
///
/// `BarnesC` is the two-point closed-chain form (complex Barnes first lemma),
/// `DBWC` the two-point open-chain form (complex de Branges–Wilson integral).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IdentityKind {
    G1 { n: usize },
    G2 { n: usize },
    G3 { n: usize },
    #[serde(rename = "barnes")]
    BarnesC,
    #[serde(rename = "dbw")]
    DBWC,
}

impl IdentityKind {
    /// Parse a CLI-style name; `n` is required for g1/g2/g3.
    pub fn parse(name: &str, n: Option<usize>) -> Result<Self, String> {
        let need_n = || n.ok_or_else(|| format!("{name} needs --n"));
        match name.to_ascii_lowercase().as_str() {
            "g1" => Ok(IdentityKind::G1 { n: need_n()? }),
            "g2" => Ok(IdentityKind::G2 { n: need_n()? }),
            "g3" => Ok(IdentityKind::G3 { n: need_n()? }),
            "barnes" | "barnesc" => Ok(IdentityKind::BarnesC),
            "dbw" | "dbwc" => Ok(IdentityKind::DBWC),
            other => Err(format!("unknown identity {other:?}")),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IdentityKind::G1 { .. } => "g1",
            IdentityKind::G2 { .. } => "g2",
            IdentityKind::G3 { .. } => "g3",
            IdentityKind::BarnesC => "barnes",
            IdentityKind::DBWC => "dbw",
        }
    }

    /// Chain length N.
    pub fn size(&self) -> usize {
        match *self {
            IdentityKind::G1 { n } | IdentityKind::G2 { n } | IdentityKind::G3 { n } => n,
            IdentityKind::BarnesC | IdentityKind::DBWC => 2,
        }
    }

    /// Number of nested (n, t) pairs on the left-hand side.
    pub fn dim(&self) -> usize {
        self.size().saturating_sub(1)
    }

    /// Expected lengths of the z and w lists.
    pub fn arity(&self) -> (usize, usize) {
        let n = self.size();
        match self {
            IdentityKind::G1 { .. } | IdentityKind::BarnesC => (n, n),
            IdentityKind::G2 { .. } | IdentityKind::DBWC => (2 * n, 0),
            IdentityKind::G3 { .. } => (n, n - 1),
        }
    }

    /// Points whose real parts share the convergence budget.
    pub fn budget_count(&self) -> usize {
        match self {
            IdentityKind::G3 { .. } => self.size(),
            _ => self.size() * 2,
        }
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityKind::G1 { n } | IdentityKind::G2 { n } | IdentityKind::G3 { n } => {
                write!(f, "{}(N={n})", self.name())
            }
            _ => f.write_str(self.name()),
        }
    }
}

/// Parameters z (and w) of an identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityParams {
    pub z: Vec<FieldPoint>,
    #[serde(default)]
    pub w: Vec<FieldPoint>,
}

impl IdentityParams {
    /// Split a flat point list into z and w according to the kind's arity.
    pub fn from_points(kind: IdentityKind, points: &[FieldPoint]) -> Result<Self, String> {
        let (nz, nw) = kind.arity();
        if points.len() != nz + nw {
            return Err(format!("{kind} takes {} points, got {}", nz + nw, points.len()));
        }
        Ok(IdentityParams { z: points[..nz].to_vec(), w: points[nz..].to_vec() })
    }

    pub fn points(&self) -> impl Iterator<Item = &FieldPoint> {
        self.z.iter().chain(self.w.iter())
    }

    /// The summation lattice matching the label class of the parameters.
    pub fn lattice(&self) -> ModeLattice {
        ModeLattice::for_label(self.z.first().map(|p| p.m).unwrap_or(HalfInt::ZERO))
    }
}

/// A reason why a parameter set cannot be verified directly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    Size { n: usize },
    Arity { expected: (usize, usize), got: (usize, usize) },
    /// Labels are not all integer or all half-integer.
    MixedLabels,
    NonPositiveReal { point: String, re: f64 },
    Convergence { sum: f64 },
    /// A numerator factor of the closed form sits on a pole.
    Pinching { factor: String },
    Margin { delta: f64, min: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Size { n } => write!(f, "chain length N = {n} is below 2"),
            Violation::Arity { expected, got } => {
                write!(f, "expected {}+{} points, got {}+{}", expected.0, expected.1, got.0, got.1)
            }
            Violation::MixedLabels => f.write_str("labels must be all integer or all half-integer"),
            Violation::NonPositiveReal { point, re } => write!(f, "Re mu of {point} is {re}, must be > 0"),
            Violation::Convergence { sum } => write!(f, "convergence needs Re sum < 1, got {sum}"),
            Violation::Pinching { factor } => write!(f, "contour pinched: {factor} is at a pole"),
            Violation::Margin { delta, min } => write!(f, "contour margin {delta} below {min}"),
        }
    }
}

fn sum_mu<'a>(pts: impl Iterator<Item = &'a FieldPoint>) -> Complex64 {
    pts.map(|p| p.mu).sum()
}

fn field_sum<'a>(pts: impl Iterator<Item = &'a FieldPoint>) -> FieldPoint {
    pts.fold(FieldPoint::real(0, 0.0), |a, &b| a + b)
}

/// Σ μ entering the convergence condition.
pub fn convergence_sum(kind: IdentityKind, params: &IdentityParams) -> Complex64 {
    match kind {
        IdentityKind::G1 { .. } | IdentityKind::BarnesC => sum_mu(params.points()),
        IdentityKind::G2 { .. } | IdentityKind::DBWC | IdentityKind::G3 { .. } => sum_mu(params.z.iter()),
    }
}

/// Signed distance between the contour and the nearest integrand pole.
pub fn margin(kind: IdentityKind, params: &IdentityParams) -> f64 {
    let lattice = params.lattice();
    let mut lines = Vec::new();
    match kind {
        IdentityKind::G1 { .. } | IdentityKind::BarnesC => {
            lines.extend(params.z.iter().map(|&point| PoleLine { point, sign: -1 }));
            lines.extend(params.w.iter().map(|&point| PoleLine { point, sign: 1 }));
        }
        IdentityKind::G2 { .. } | IdentityKind::DBWC => {
            for &point in &params.z {
                lines.push(PoleLine { point, sign: 1 });
                lines.push(PoleLine { point, sign: -1 });
            }
        }
        IdentityKind::G3 { .. } => {
            // contour at Re u = c: Γ(z − u) loses c, Γ(u ± w) gains it
            let c = G3_CONTOUR_SHIFT;
            lines.extend(params.z.iter().map(|p| PoleLine { point: p.shift_mu((-c).into()), sign: -1 }));
            for p in &params.w {
                lines.push(PoleLine { point: p.shift_mu(c.into()), sign: 1 });
                lines.push(PoleLine { point: (-*p).shift_mu(c.into()), sign: 1 });
            }
        }
    }
    contour_margin(&lines, lattice)
}

/// Check a parameter set against every precondition of direct evaluation.
pub fn validate(kind: IdentityKind, params: &IdentityParams, delta_min: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    if kind.size() < 2 {
        out.push(Violation::Size { n: kind.size() });
        return out;
    }
    let expected = kind.arity();
    let got = (params.z.len(), params.w.len());
    if expected != got {
        out.push(Violation::Arity { expected, got });
        return out;
    }
    let first = params.z[0].m.is_integer();
    if params.points().any(|p| p.m.is_integer() != first) {
        out.push(Violation::MixedLabels);
    }
    let positive: Vec<(String, &FieldPoint)> = match kind {
        IdentityKind::G3 { .. } => params.z.iter().enumerate().map(|(i, p)| (format!("z{}", i + 1), p)).collect(),
        _ => params
            .z
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("z{}", i + 1), p))
            .chain(params.w.iter().enumerate().map(|(i, p)| (format!("w{}", i + 1), p)))
            .collect(),
    };
    for (name, p) in positive {
        if !(p.mu.re > 0.0) {
            out.push(Violation::NonPositiveReal { point: name, re: p.mu.re });
        }
    }
    let s = convergence_sum(kind, params).re;
    if !(s < 1.0) {
        out.push(Violation::Convergence { sum: s });
    }
    for (p, e, name) in rhs_factors(kind, params) {
        if e > 0 && pole_report(&p).order > 0 {
            out.push(Violation::Pinching { factor: name });
        }
    }
    if !out.iter().any(|v| matches!(v, Violation::MixedLabels)) {
        let delta = margin(kind, params);
        if !(delta >= delta_min) {
            out.push(Violation::Margin { delta, min: delta_min });
        }
    }
    out
}

/// Factors 𝚪(p)^e of the closed form, with readable names.
fn rhs_factors(kind: IdentityKind, params: &IdentityParams) -> Vec<(FieldPoint, i32, String)> {
    let (z, w) = (&params.z, &params.w);
    let mut f = Vec::new();
    match kind {
        IdentityKind::G1 { .. } | IdentityKind::BarnesC => {
            for (k, zk) in z.iter().enumerate() {
                for (j, wj) in w.iter().enumerate() {
                    f.push((*zk + *wj, 1, format!("z{}+w{}", k + 1, j + 1)));
                }
            }
            f.push((field_sum(z.iter().chain(w.iter())), -1, "sum(z+w)".into()));
        }
        IdentityKind::G2 { .. } | IdentityKind::DBWC => {
            for j in 0..z.len() {
                for k in j + 1..z.len() {
                    f.push((z[j] + z[k], 1, format!("z{}+z{}", j + 1, k + 1)));
                }
            }
            f.push((field_sum(z.iter()), -1, "sum(z)".into()));
        }
        IdentityKind::G3 { .. } => {
            for (k, zk) in z.iter().enumerate() {
                for (j, wj) in w.iter().enumerate() {
                    f.push((*zk + *wj, 1, format!("z{}+w{}", k + 1, j + 1)));
                    f.push((*zk - *wj, 1, format!("z{}-w{}", k + 1, j + 1)));
                }
            }
            for k in 0..z.len() {
                for m in k + 1..z.len() {
                    f.push((z[m] + z[k], -1, format!("z{}+z{}", k + 1, m + 1)));
                }
            }
        }
    }
    f
}

/// Closed-form right-hand side.
pub fn rhs(kind: IdentityKind, params: &IdentityParams) -> Result<LogComplex, GammaError> {
    let factors: Vec<(FieldPoint, i32)> = rhs_factors(kind, params).into_iter().map(|(p, e, _)| (p, e)).collect();
    product_log(&factors)
}
