use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use field_gamma::{ln_gamma_ratio, ln_gamma_unchecked, FieldPoint, HalfInt};
use mb_engine::{Integrand, SumIntegralProblem, TailExponents, TailModel};
use num_complex::Complex64;

use crate::kinds::{IdentityKind, IdentityParams, G3_CONTOUR_SHIFT};

/// 1/(𝚪(v)𝚪(−v)) = −(−1)^M [v] for an integer label M.
pub fn cross_factor(v: &FieldPoint) -> Complex64 {
    debug_assert!(v.m.is_integer());
    let even = v.m.twice().rem_euclid(4) == 0;
    if even {
        -v.bracket()
    } else {
        v.bracket()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Family {
    G1,
    G2,
    G3,
}

/// A factor Γ(offset + dir·it)^e of an integrand on the line u = (n, c + it).
#[derive(Copy, Clone, Debug)]
struct Term {
    offset: Complex64,
    dir: f64,
    e: i8,
}

/// Append the two Euler Γ's of 𝚪(p + σu)^e with u = (n, c + it), and return
/// the constant phase of the form used.
///
/// Negative integer labels M use (−1)^M Γ(|M|/2 + μ)/Γ(1 + |M|/2 − μ), as in
/// the field-gamma evaluation.
fn push_field(terms: &mut Vec<Term>, p: &FieldPoint, sigma: i8, n: HalfInt, c: f64, e: i8) -> Complex64 {
    let s = f64::from(sigma);
    let m = if sigma > 0 { p.m + n } else { p.m - n };
    let mu0 = p.mu + s * c;
    let tm = m.twice();
    let (h, phase) = if tm < 0 && tm % 2 == 0 {
        ((-tm) as f64 / 4.0, PI * m.value() * f64::from(e))
    } else {
        (m.value() / 2.0, 0.0)
    };
    terms.push(Term { offset: mu0 + h, dir: s, e });
    terms.push(Term { offset: 1.0 + h - mu0, dir: -s, e: -e });
    Complex64::new(0.0, phase)
}

/// log Γ(a + w) − log Γ(b − w) for imaginary w, with a stable real part.
fn ln_cross_ratio(a: Complex64, b: Complex64, w: Complex64) -> Complex64 {
    let re = ln_gamma_ratio(a, b.conj(), w).re;
    let im = ln_gamma_unchecked(a + w).im + ln_gamma_unchecked(b.conj() + w).im;
    Complex64::new(re, im)
}

/// log of Π Γ(offset + dir·it)^e.
///
/// Numerator and denominator Γ's moving in the same direction are paired so
/// that their large logarithms cancel analytically; this keeps the integrand
/// accurate at the extreme t reached by the tail quadrature.
fn ln_terms(terms: &[Term], t: f64) -> Complex64 {
    let mut lists: [Vec<Complex64>; 4] = Default::default();
    for term in terms {
        let idx = usize::from(term.e < 0) * 2 + usize::from(term.dir < 0.0);
        lists[idx].push(term.offset);
    }
    let [mut num_p, mut num_m, mut den_p, mut den_m] = lists;
    let wp = Complex64::new(0.0, t);
    let mut acc = Complex64::new(0.0, 0.0);
    for (num, den, w) in [(&mut num_p, &mut den_p, wp), (&mut num_m, &mut den_m, -wp)] {
        let k = num.len().min(den.len());
        for (a, b) in num.drain(..k).zip(den.drain(..k)) {
            acc += ln_gamma_ratio(a, b, w);
        }
    }
    for (num, den, w) in [(&mut num_p, &mut den_m, wp), (&mut num_m, &mut den_p, -wp)] {
        let k = num.len().min(den.len());
        for (a, b) in num.drain(..k).zip(den.drain(..k)) {
            acc += ln_cross_ratio(a, b, w);
        }
    }
    for (list, w, sign) in [(num_p, wp, 1.0), (num_m, -wp, 1.0), (den_p, wp, -1.0), (den_m, -wp, -1.0)] {
        for a in list {
            acc += sign * ln_gamma_unchecked(a + w);
        }
    }
    acc
}

/// One-variable factors and pair couplings of the G-family integrands.
#[derive(Clone, Debug)]
struct Shape {
    family: Family,
    z: Vec<FieldPoint>,
    w: Vec<FieldPoint>,
    shift: f64,
    /// Multiply by the permutation-averaging weight (see `symmetric_weight`).
    symmetrize: bool,
}

impl Shape {
    fn point(&self, n: HalfInt, t: f64) -> FieldPoint {
        FieldPoint::new(n, Complex64::new(self.shift, t))
    }

    /// All factors depending on u = (n, c + it) alone.
    fn single(&self, n: HalfInt, t: f64) -> Complex64 {
        let c = self.shift;
        let mut terms = Vec::with_capacity(4 * (self.z.len() + self.w.len()));
        let mut ln = Complex64::new(0.0, 0.0);
        let mut poly = Complex64::new(1.0, 0.0);
        match self.family {
            Family::G1 => {
                for (z, w) in self.z.iter().zip(&self.w) {
                    ln += push_field(&mut terms, z, -1, n, c, 1) + push_field(&mut terms, w, 1, n, c, 1);
                }
            }
            Family::G2 => {
                for z in &self.z {
                    ln += push_field(&mut terms, z, 1, n, c, 1) + push_field(&mut terms, z, -1, n, c, 1);
                }
                let u = self.point(n, t);
                poly = cross_factor(&(u + u));
            }
            Family::G3 => {
                for w in &self.w {
                    ln += push_field(&mut terms, w, 1, n, c, 1) + push_field(&mut terms, &-*w, 1, n, c, 1);
                }
                for z in &self.z {
                    ln += push_field(&mut terms, z, -1, n, c, 1);
                }
            }
        }
        (ln + ln_terms(&terms, t)).exp() * poly
    }

    /// Factors coupling u_a and u_b (a before b).
    fn pair(&self, a: &FieldPoint, b: &FieldPoint) -> Complex64 {
        match self.family {
            Family::G1 => cross_factor(&(*a - *b)),
            Family::G2 => cross_factor(&(*a - *b)) * cross_factor(&(*a + *b)),
            Family::G3 => {
                // 1/𝚪(u_a + u_b) on the line of u_a + u_b
                let mut terms = Vec::with_capacity(2);
                let zero = FieldPoint::real(0, 0.0);
                let ph = push_field(&mut terms, &zero, 1, a.m + b.m, a.mu.re + b.mu.re, -1);
                cross_factor(&(*a - *b)) * (ph + ln_terms(&terms, a.mu.im + b.mu.im)).exp()
            }
        }
    }
}

static NEXT_OWNER: AtomicU64 = AtomicU64::new(1);
const CACHE_LIMIT: usize = 1 << 21;

struct FactorCache {
    owner: u64,
    map: HashMap<(i64, u64), Complex64>,
}

thread_local! {
    static CACHE: RefCell<FactorCache> = RefCell::new(FactorCache { owner: 0, map: HashMap::new() });
}

/// One-variable factors are shared between all outer points of a nested
/// sum-integral, so they are memoized per thread and per integrand.
fn cached(owner: u64, n: HalfInt, t: f64, f: impl FnOnce() -> Complex64) -> Complex64 {
    CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.owner != owner {
            c.owner = owner;
            c.map.clear();
        }
        let key = (n.twice(), t.to_bits());
        if let Some(v) = c.map.get(&key) {
            return *v;
        }
        let v = f();
        if c.map.len() >= CACHE_LIMIT {
            c.map.clear();
        }
        c.map.insert(key, v);
        v
    })
}

/// Degree of the weight w(u) = (1 + |[u]|)^{SYMMETRIC_POWER/2} in the symmetrized G3 integrand.
const SYMMETRIC_POWER: i32 = 8;

/// d·w(u_d)/Σ_k w(u_k). Averaged over permutations this is 1, so it can
/// multiply any symmetric integrand without changing the integral. It damps
/// the region where an outer variable is large and the innermost one is not,
/// which otherwise gives slow outer tails with nearly equal exponents.
fn symmetric_weight(ns: &[HalfInt], ts: &[f64]) -> f64 {
    let d = ns.len();
    let size = |k: usize| 1.0 + ns[k].value().powi(2) / 4.0 + ts[k] * ts[k];
    let last = size(d - 1);
    let total: f64 = (0..d).map(|k| (size(k) / last).powi(SYMMETRIC_POWER / 2)).sum();
    d as f64 / total
}

fn shape_integrand(shape: Shape) -> Integrand {
    let owner = NEXT_OWNER.fetch_add(1, Ordering::Relaxed);
    Arc::new(move |ns: &[HalfInt], ts: &[f64]| {
        let d = ns.len();
        let mut us = [FieldPoint::real(0, 0.0); mb_engine::MAX_DIM];
        let mut val = Complex64::new(1.0, 0.0);
        for k in 0..d {
            us[k] = shape.point(ns[k], ts[k]);
            val *= if d == 1 { shape.single(ns[k], ts[k]) } else { cached(owner, ns[k], ts[k], || shape.single(ns[k], ts[k])) };
        }
        for a in 0..d {
            for b in a + 1..d {
                val *= shape.pair(&us[a], &us[b]);
            }
        }
        if shape.symmetrize && d > 1 {
            val *= symmetric_weight(ns, ts);
        }
        val
    })
}

/// Closed-chain two-point integrand written directly as Euler Γ ratios:
/// Π_k Γ(z_k − n/2 − ν)Γ(w_k + n/2 + ν) / (Γ(1 − z̄_k − n/2 + ν)Γ(1 − w̄_k + n/2 − ν)), ν = it.
pub fn barnes_explicit(z: &[FieldPoint], w: &[FieldPoint], n: f64, t: f64) -> Complex64 {
    let nu = Complex64::new(0.0, t);
    let h = n / 2.0;
    let mut ln = Complex64::new(0.0, 0.0);
    for (zk, wk) in z.iter().zip(w) {
        ln += ln_gamma_ratio(zk.holo() - h, 1.0 - wk.anti() + h, -nu)
            + ln_gamma_ratio(wk.holo() + h, 1.0 - zk.anti() - h, nu);
    }
    ln.exp()
}

/// Open-chain two-point integrand (without the overall 1/2) as Euler Γ ratios:
/// (−1)^{2n}(n² − 4ν²) Π_k Γ(z_k ± (n/2 + ν)) / Γ(1 − z̄_k ± (n/2 − ν)), ν = it.
pub fn dbw_explicit(z: &[FieldPoint], n: f64, t: f64) -> Complex64 {
    let nu = Complex64::new(0.0, t);
    let h = n / 2.0;
    let mut ln = Complex64::new(0.0, 0.0);
    for zk in z {
        ln += ln_gamma_ratio(zk.holo() + h, 1.0 - zk.anti() - h, nu)
            + ln_gamma_ratio(zk.holo() - h, 1.0 - zk.anti() + h, -nu);
    }
    let sign = if ((2.0 * n).round() as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    ln.exp() * (sign * (n * n - 4.0 * nu * nu))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Symmetry prefactor of the left-hand side.
pub fn prefactor(kind: IdentityKind) -> f64 {
    let n = kind.size();
    match kind {
        IdentityKind::G1 { .. } | IdentityKind::G3 { .. } | IdentityKind::BarnesC => 1.0 / factorial(n - 1),
        IdentityKind::G2 { .. } | IdentityKind::DBWC => 1.0 / (2f64.powi(n as i32 - 1) * factorial(n - 1)),
    }
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Asymptotic exponents of the partial-sum tails, where they are known.
fn tail_model(kind: IdentityKind, params: &IdentityParams) -> TailModel {
    let n = kind.size();
    let smu: Complex64 = params.z.iter().map(|p| p.mu).sum();
    let sall: Complex64 = smu + params.w.iter().map(|p| p.mu).sum::<Complex64>();
    let exps: TailExponents = match (kind, n) {
        (IdentityKind::G1 { .. } | IdentityKind::BarnesC, 2) => {
            let e = 2.0 * (one() - sall);
            Arc::new(move |_, _, _| vec![e])
        }
        (IdentityKind::G1 { .. }, 3) => {
            let e = 2.0 * (one() - sall);
            let joint = 6.0 - 4.0 * sall;
            Arc::new(move |depth, _, _| if depth == 0 { vec![e, joint] } else { vec![e] })
        }
        (IdentityKind::G2 { .. } | IdentityKind::DBWC, 2) => {
            let e = 4.0 * (one() - smu);
            Arc::new(move |_, _, _| vec![e])
        }
        (IdentityKind::G2 { .. }, 3) => {
            let e = 4.0 * (one() - smu);
            let joint = 12.0 - 8.0 * smu;
            Arc::new(move |depth, _, _| if depth == 0 { vec![e, joint] } else { vec![e] })
        }
        (IdentityKind::G3 { .. }, 2) => {
            let e = 2.0 * (one() - smu);
            Arc::new(move |_, _, _| vec![e])
        }
        (IdentityKind::G3 { .. }, 3) => {
            let base = 2.0 * (one() - smu);
            let c = G3_CONTOUR_SHIFT;
            let mut outer = vec![7.0 - 4.0 * smu, 10.0 - 4.0 * smu - 4.0 * c];
            outer.extend(params.z.iter().map(|p| base + 2.0 * p.mu + f64::from(SYMMETRIC_POWER)));
            Arc::new(move |depth, _, ts: &[f64]| {
                if depth == 0 {
                    outer.clone()
                } else {
                    // the coupling 1/𝚪(u_1 + u_2) moves the inner exponent with u_1
                    vec![base + 2.0 * Complex64::new(G3_CONTOUR_SHIFT, ts[0])]
                }
            })
        }
        _ => return TailModel::Fitted,
    };
    TailModel::Known(exps)
}

/// The left-hand side as a sum-integral problem over u_k = (n_k, c + i t_k).
pub fn lhs_integrand(kind: IdentityKind, params: &IdentityParams) -> SumIntegralProblem {
    let integrand: Integrand = match kind {
        IdentityKind::BarnesC => {
            let (z, w) = (params.z.clone(), params.w.clone());
            Arc::new(move |ns: &[HalfInt], ts: &[f64]| barnes_explicit(&z, &w, ns[0].value(), ts[0]))
        }
        IdentityKind::DBWC => {
            let z = params.z.clone();
            Arc::new(move |ns: &[HalfInt], ts: &[f64]| dbw_explicit(&z, ns[0].value(), ts[0]))
        }
        IdentityKind::G1 { .. } | IdentityKind::G2 { .. } | IdentityKind::G3 { .. } => {
            let (family, shift) = match kind {
                IdentityKind::G1 { .. } => (Family::G1, 0.0),
                IdentityKind::G2 { .. } => (Family::G2, 0.0),
                _ => (Family::G3, G3_CONTOUR_SHIFT),
            };
            let symmetrize = family == Family::G3;
            shape_integrand(Shape { family, z: params.z.clone(), w: params.w.clone(), shift, symmetrize })
        }
    };
    SumIntegralProblem {
        dim: kind.dim(),
        lattice: params.lattice(),
        integrand,
        tail: tail_model(kind, params),
        prefactor: Complex64::new(prefactor(kind), 0.0),
        // 1/𝚪(u_j + u_k) peaks where t_k ≈ −t_j
        coupled_peaks: matches!(kind, IdentityKind::G3 { .. }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use field_gamma::cgamma;

    #[test]
    fn cross_factor_matches_gamma_product() {
        for (tm, mu) in [(0, Complex64::new(0.0, 0.3)), (2, Complex64::new(0.1, -0.7)), (-6, Complex64::new(0.25, 1.1))] {
            let v = FieldPoint::new(HalfInt::from_twice(tm), mu);
            let g = cgamma(&v).unwrap() * cgamma(&-v).unwrap();
            let want = 1.0 / g.to_complex().unwrap();
            assert!((cross_factor(&v) - want).norm() < 1e-12 * want.norm(), "{v}");
        }
    }

    #[test]
    fn prefactors() {
        assert_eq!(prefactor(IdentityKind::G2 { n: 3 }), 1.0 / 8.0);
        assert_eq!(prefactor(IdentityKind::G1 { n: 3 }), 0.5);
        assert_eq!(prefactor(IdentityKind::DBWC), 0.5);
        assert_eq!(prefactor(IdentityKind::BarnesC), 1.0);
    }

    fn g3_shape(symmetrize: bool) -> Shape {
        let p = crate::sample_params(IdentityKind::G3 { n: 3 }, 4, false);
        Shape { family: Family::G3, z: p.z, w: p.w, shift: G3_CONTOUR_SHIFT, symmetrize }
    }

    #[test]
    fn raw_g3_integrand_is_permutation_symmetric() {
        let f = shape_integrand(g3_shape(false));
        for (a, b) in [((1, 0.3), (-2, 1.7)), ((0, -0.4), (3, 0.0)), ((-1, 2.5), (-1, -2.5))] {
            let x = f(&[HalfInt::from_int(a.0), HalfInt::from_int(b.0)], &[a.1, b.1]);
            let y = f(&[HalfInt::from_int(b.0), HalfInt::from_int(a.0)], &[b.1, a.1]);
            assert!((x - y).norm() < 1e-12 * x.norm(), "{x} vs {y}");
        }
    }

    #[test]
    fn symmetric_weight_averages_to_one() {
        let raw = shape_integrand(g3_shape(false));
        let weighted = shape_integrand(g3_shape(true));
        let (na, nb) = ([HalfInt::from_int(2), HalfInt::from_int(-1)], [HalfInt::from_int(-1), HalfInt::from_int(2)]);
        let (ta, tb) = ([0.7, -3.1], [-3.1, 0.7]);
        let sum = weighted(&na, &ta) + weighted(&nb, &tb);
        let want = raw(&na, &ta) * 2.0;
        assert!((sum - want).norm() < 1e-12 * want.norm());
        let w = symmetric_weight(&na, &ta) + symmetric_weight(&nb, &tb);
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn open_measure_vanishes_at_origin() {
        let z = vec![FieldPoint::real(0, 0.2); 4];
        assert_eq!(dbw_explicit(&z, 0.0, 0.0), Complex64::new(0.0, 0.0));
    }
}
