//! Separated-variable kernels, measures and scalar products of the spin chain,
//! and the pointwise comparison of the separated-variable integrand with the
//! Γ-form of the open-chain identity.

use std::f64::consts::PI;

use field_gamma::{a_func, FieldPoint, GammaError, HalfInt, LogComplex};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::integrand::prefactor;
use crate::kinds::IdentityKind;

/// Default ε of the pole-bypassing prescription.
pub const DEFAULT_EPSILON: f64 = 1e-4;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A separated variable x = −i n/2 + ν, x̄ = i n/2 + ν.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint {
    pub n: HalfInt,
    pub nu: Complex64,
}

impl LatticePoint {
    pub fn new(n: HalfInt, nu: f64) -> Self {
        LatticePoint { n, nu: Complex64::new(nu, 0.0) }
    }

    pub fn x(&self) -> Complex64 {
        self.nu - I * (self.n.value() / 2.0)
    }

    pub fn xbar(&self) -> Complex64 {
        self.nu + I * (self.n.value() / 2.0)
    }

    /// [x] = x·x̄.
    pub fn bracket(&self) -> Complex64 {
        self.x() * self.xbar()
    }

    /// The pair (ix, ix̄) as a field point (n, iν).
    pub fn times_i(&self) -> FieldPoint {
        FieldPoint::new(self.n, I * self.nu)
    }

    /// ν → ν − iε, which realizes Γ(i(ν′ ± ν)) → Γ(i(ν′ ± ν) + ε).
    pub fn eps_shifted(&self, eps: f64) -> Self {
        LatticePoint { n: self.n, nu: self.nu - I * eps }
    }
}

impl std::ops::Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint { n: self.n + o.n, nu: self.nu + o.nu }
    }
}

impl std::ops::Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: LatticePoint) -> LatticePoint {
        LatticePoint { n: self.n - o.n, nu: self.nu - o.nu }
    }
}

impl std::ops::Neg for LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint { n: -self.n, nu: -self.nu }
    }
}

/// Identity variable z = −ix of a separated variable.
pub fn to_identity_point(x: &LatticePoint) -> FieldPoint {
    -x.times_i()
}

/// Separated variable x = iz of an identity variable.
pub fn from_identity_point(z: &FieldPoint) -> LatticePoint {
    LatticePoint { n: -z.m, nu: -z.mu / I }
}

/// Spin of the chain sites, s = (n, 1/2 + iν), and the chain length.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpinParams {
    pub s: FieldPoint,
    pub n_sites: usize,
}

impl SpinParams {
    /// A spin of the principal series.
    pub fn unitary(n: HalfInt, nu: f64, n_sites: usize) -> Self {
        SpinParams { s: FieldPoint::new(n, Complex64::new(0.5, nu)), n_sites }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SovError {
    #[error("{what} is singular at pair ({i}, {j})")]
    Pole { what: &'static str, i: usize, j: usize },
    #[error("expected {expected} variables, got {got}")]
    Length { expected: usize, got: usize },
    #[error(transparent)]
    Gamma(#[from] GammaError),
}

/// (−1)^q := e^{iπq}.
fn minus_one_pow(q: f64) -> LogComplex {
    LogComplex { log_mag: 0.0, phase: PI * q }
}

/// i^q := e^{iπq/2}.
fn i_pow(q: f64) -> LogComplex {
    LogComplex { log_mag: 0.0, phase: PI * q / 2.0 }
}

fn pi_pow(k: f64) -> LogComplex {
    LogComplex { log_mag: k * PI.ln(), phase: 0.0 }
}

/// a(p), treating a pole as an error.
fn a_checked(p: &FieldPoint, what: &'static str, i: usize, j: usize) -> Result<LogComplex, SovError> {
    match a_func(p) {
        Ok(v) => Ok(v),
        Err(GammaError::FieldPole(_)) => Err(SovError::Pole { what, i, j }),
        Err(e) => Err(e.into()),
    }
}

/// a(1 − i y) for a separated variable y.
fn a_one_minus_i(y: &LatticePoint, what: &'static str, i: usize, j: usize) -> Result<LogComplex, SovError> {
    a_checked(&(-y.times_i()).shift_mu(Complex64::new(1.0, 0.0)), what, i, j)
}

/// s − iy, and its swapped partner s̄ − iȳ.
fn s_minus(s: &FieldPoint, y: &LatticePoint) -> FieldPoint {
    *s - y.times_i()
}

fn s_plus(s: &FieldPoint, y: &LatticePoint) -> FieldPoint {
    *s + y.times_i()
}

/// q(x, x′) = π a(1 + i(x − x′)) a(s̄ − ix̄)/a(s − ix′).
pub fn q_kernel(x: &LatticePoint, xp: &LatticePoint, s: &FieldPoint) -> Result<LogComplex, SovError> {
    let num = a_checked(&(*x - *xp).times_i().shift_mu(Complex64::new(1.0, 0.0)), "a(1+i(x-x'))", 0, 0)?;
    let sb = a_checked(&s_minus(s, x).bar(), "a(s̄-ix̄)", 0, 0)?;
    let den = a_checked(&s_minus(s, xp), "a(s-ix')", 0, 0)?;
    Ok(pi_pow(1.0) * num * sb / den)
}

/// b(x, x′) = π² a(1 − i(x′ ± x)) a(s ± ix)/a²(s − ix′).
pub fn b_kernel(x: &LatticePoint, xp: &LatticePoint, s: &FieldPoint) -> Result<LogComplex, SovError> {
    let f1 = a_one_minus_i(&(*xp + *x), "a(1-i(x'+x))", 0, 0)?;
    let f2 = a_one_minus_i(&(*xp - *x), "a(1-i(x'-x))", 0, 0)?;
    let g = a_checked(&s_plus(s, x), "a(s+ix)", 0, 0)? * a_checked(&s_minus(s, x), "a(s-ix)", 0, 0)?;
    let den = a_checked(&s_minus(s, xp), "a(s-ix')", 0, 0)?.powi(2);
    Ok(pi_pow(2.0) * f1 * f2 * g / den)
}

/// r(x) = a(s + ix) a(s̄ − ix̄).
pub fn r_norm(x: &LatticePoint, s: &FieldPoint) -> Result<LogComplex, SovError> {
    Ok(a_checked(&s_plus(s, x), "a(s+ix)", 0, 0)? * a_checked(&s_minus(s, x).bar(), "a(s̄-ix̄)", 0, 0)?)
}

/// ϑ(x, x′) = π⁴/([x − x′][x + x′]).
pub fn theta(x: &LatticePoint, xp: &LatticePoint) -> Complex64 {
    PI.powi(4) / ((*x - *xp).bracket() * (*x + *xp).bracket())
}

/// σ_N = (−1)^{[s]N(N−1)} π^{N(3N−1)/2}.
pub fn sigma_n(s: &FieldPoint, n: usize) -> LogComplex {
    let nf = n as f64;
    minus_one_pow(s.m.value() * nf * (nf - 1.0)) * pi_pow(nf * (3.0 * nf - 1.0) / 2.0)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn vandermonde(xs: &[LatticePoint]) -> Complex64 {
    let mut v = Complex64::new(1.0, 0.0);
    for k in 0..xs.len() {
        for j in k + 1..xs.len() {
            v *= (xs[k] - xs[j]).bracket();
        }
    }
    v
}

/// μ^(A) for N = xs.len() variables.
pub fn mu_a(xs: &[LatticePoint]) -> Complex64 {
    let n = xs.len() as f64;
    vandermonde(xs) * (PI.powf(-n * n) / (2.0 * PI).powf(n) / factorial(xs.len()))
}

/// μ^(B) for N − 1 = xs.len() variables.
pub fn mu_b(xs: &[LatticePoint]) -> Complex64 {
    let n = xs.len() as f64 + 1.0;
    vandermonde(xs) * (2.0 * PI.powf(-n * n) / (2.0 * PI).powf(n) / factorial(xs.len()))
}

/// Open-chain measure μ^(𝔹) for N − 1 = xs.len() variables.
pub fn mu_open_b(xs: &[LatticePoint]) -> Complex64 {
    let n = xs.len() as f64 + 1.0;
    let mut v = vandermonde(xs);
    for k in 0..xs.len() {
        for j in k..xs.len() {
            v *= (xs[k] + xs[j]).bracket();
        }
    }
    v * (PI.powf(-2.0 * n * n) / 2f64.powf(n - 1.0) / factorial(xs.len()))
}

fn check_len(got: usize, expected: usize) -> Result<(), SovError> {
    if got != expected {
        return Err(SovError::Length { expected, got });
    }
    Ok(())
}

/// Π_{j,k} a(1 − i(x′_k ± x_j)) / Π_{k<j} a(1 − i(x′_k + x′_j)).
fn coupling(xs: &[LatticePoint], xps: &[LatticePoint]) -> Result<LogComplex, SovError> {
    let mut v = LogComplex::ONE;
    for (j, x) in xs.iter().enumerate() {
        for (k, xp) in xps.iter().enumerate() {
            v = v * a_one_minus_i(&(*xp + *x), "a(1-i(x'+x))", k, j)? * a_one_minus_i(&(*xp - *x), "a(1-i(x'-x))", k, j)?;
        }
    }
    for k in 0..xps.len() {
        for j in k + 1..xps.len() {
            v = v / a_one_minus_i(&(xps[k] + xps[j]), "a(1-i(x'+x'))", k, j)?;
        }
    }
    Ok(v)
}

/// Π_j a^N(s ± ix_j) / Π_k a^N(s − ix′_k).
fn spin_phases(xs: &[LatticePoint], xps: &[LatticePoint], s: &FieldPoint, n: usize) -> Result<LogComplex, SovError> {
    let n = n as i32;
    let mut v = LogComplex::ONE;
    for (j, x) in xs.iter().enumerate() {
        v = v * (a_checked(&s_plus(s, x), "a(s+ix)", j, j)? * a_checked(&s_minus(s, x), "a(s-ix)", j, j)?).powi(n);
    }
    for (k, xp) in xps.iter().enumerate() {
        v = v / a_checked(&s_minus(s, xp), "a(s-ix')", k, k)?.powi(n);
    }
    Ok(v)
}

/// [A_X] = A_X − Ā_X with A_X = Σ_k (s − ix_k).
fn a_label(xs: &[LatticePoint], s: &FieldPoint) -> f64 {
    xs.iter().map(|x| s_minus(s, x).m.value()).sum()
}

/// Overlap of the open-chain and A-system eigenfunctions: N − 1 variables xs, N variables xps.
pub fn s_a(xs: &[LatticePoint], xps: &[LatticePoint], s: &FieldPoint) -> Result<LogComplex, SovError> {
    let n = xps.len();
    check_len(xs.len() + 1, n)?;
    Ok(sigma_n(s, n) * i_pow(a_label(xps, s)) * spin_phases(xs, xps, s, n)? * coupling(xs, xps)?)
}

/// Overlap of the open-chain and B-system eigenfunctions: N − 1 variables each.
pub fn s_b(xs: &[LatticePoint], xps: &[LatticePoint], s: &FieldPoint) -> Result<LogComplex, SovError> {
    check_len(xps.len(), xs.len())?;
    let n = xs.len() + 1;
    Ok(sigma_n(s, n) * spin_phases(xs, xps, s, n)? * coupling(xs, xps)?)
}

/// S_BA: N variables xs, N − 1 variables xps.
pub fn s_ba(xs: &[LatticePoint], xps: &[LatticePoint], s: &FieldPoint) -> Result<LogComplex, SovError> {
    let n = xs.len();
    check_len(xps.len() + 1, n)?;
    let mut v = pi_pow(n as f64) * i_pow(a_label(xs, s));
    for x in xs {
        v = v * a_checked(&s_minus(s, x).bar(), "a(s̄-ix̄)", 0, 0)?;
        for xp in xps {
            v = v * q_kernel(x, xp, s)?;
        }
    }
    Ok(v)
}

/// Test hook: scale σ_N inside the cross-check by this factor.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CrossCheckOptions {
    pub sigma_scale: f64,
}

impl Default for CrossCheckOptions {
    fn default() -> Self {
        CrossCheckOptions { sigma_scale: 1.0 }
    }
}

/// Γ-form integrand of the open-chain identity (including its prefactor) at
/// points z and integration variables u.
pub fn g2_integrand_value(z: &[FieldPoint], u: &[FieldPoint]) -> Result<Complex64, GammaError> {
    use crate::integrand::cross_factor;
    use field_gamma::product_log;
    let mut factors = Vec::new();
    for uk in u {
        for zj in z {
            factors.push((*zj + *uk, 1));
            factors.push((*zj - *uk, 1));
        }
    }
    let mut v = product_log(&factors)?.to_complex()?;
    for (k, uk) in u.iter().enumerate() {
        v *= cross_factor(&(*uk + *uk));
        for uj in &u[k + 1..] {
            v *= cross_factor(&(*uk - *uj)) * cross_factor(&(*uk + *uj));
        }
    }
    Ok(v * prefactor(IdentityKind::G2 { n: u.len() + 1 }))
}

/// Compare the separated-variable integrand with the Γ-form integrand.
///
/// Returns (a) μ^(𝔹)(u) S_A(u, x′) conj(S_A(u, x)) divided by the
/// u-independent constant K that carries it onto the Γ-form, and (b) the
/// Γ-form integrand (with prefactor 1/(2^{N−1}(N−1)!)) at z_k = −ix_k,
/// z_{N+k} = ix′_k and u_k = i·u. The two agree pointwise, and (a) does not
/// depend on s.
///
/// K = π^{N²−N} (−1)^{2n_u·N(N−1)/2} i^{Σn−Σn′} Π_k a^N(s−ix_k)/a^N(s−ix′_k)
///     · (−1)^{(N−1)Σ2n′_k} / Π_{k<j} (−1)^{n′_k+n′_j} 𝚪(z_{N+k}+z_{N+j}) 𝚪(z_k+z_j).
pub fn tint_cross_check(
    xs: &[LatticePoint],
    xps: &[LatticePoint],
    s: &FieldPoint,
    u: &[LatticePoint],
    opts: CrossCheckOptions,
) -> Result<(Complex64, Complex64), SovError> {
    let n = xs.len();
    check_len(xps.len(), n)?;
    check_len(u.len() + 1, n)?;
    let sigma_fix = LogComplex::from_complex(Complex64::new(opts.sigma_scale * opts.sigma_scale, 0.0));
    let prime = s_a(u, xps, s)?;
    let plain = s_a(u, xs, s)?;
    let sov = mu_open_b(u) * (prime * sigma_fix).to_complex()? * plain.to_complex()?.conj();

    let z: Vec<FieldPoint> =
        xs.iter().map(to_identity_point).chain(xps.iter().map(|x| -to_identity_point(x))).collect();
    let uid: Vec<FieldPoint> = u.iter().map(|x| x.times_i()).collect();
    let gamma_form = g2_integrand_value(&z, &uid)?;

    let nf = n as f64;
    let mut k = pi_pow(nf * nf - nf);
    let two_nu = u.first().map(|x| x.n.twice()).unwrap_or(0) as f64;
    k = k * minus_one_pow(two_nu * nf * (nf - 1.0) / 2.0);
    let sum_n: f64 = xs.iter().map(|x| x.n.value()).sum();
    let sum_np: f64 = xps.iter().map(|x| x.n.value()).sum();
    k = k * i_pow(sum_n - sum_np);
    k = k * minus_one_pow((nf - 1.0) * 2.0 * sum_np);
    let ni = n as i32;
    for (x, xp) in xs.iter().zip(xps) {
        k = k * a_checked(&s_minus(s, x), "a(s-ix)", 0, 0)?.powi(ni) / a_checked(&s_minus(s, xp), "a(s-ix')", 0, 0)?.powi(ni);
    }
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            k = k / minus_one_pow(xps[a].n.value() + xps[b].n.value());
            pairs.push((z[n + a] + z[n + b], -1));
            pairs.push((z[a] + z[b], -1));
        }
    }
    k = k * field_gamma::product_log(&pairs)?;
    Ok((sov / k.to_complex()?, gamma_form))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion_round_trip() {
        let x = LatticePoint::new(HalfInt::from_int(3), 0.4);
        assert_eq!(from_identity_point(&to_identity_point(&x)), x);
        let z = to_identity_point(&x);
        // z = −ix: holomorphic part −i(−3i/2 + 0.4) = −3/2 − 0.4i
        assert!((z.holo() - Complex64::new(-1.5, -0.4)).norm() < 1e-15);
        assert!((z.anti() - (-I * x.xbar())).norm() < 1e-15);
    }

    #[test]
    fn theta_of_unit_brackets() {
        // x − x′ and x + x′ both of bracket π²: ν = ±π with n = 0
        let x = LatticePoint::new(HalfInt::ZERO, PI);
        let xp = LatticePoint::new(HalfInt::ZERO, 0.0);
        assert!((theta(&x, &xp) - 1.0).norm() < 1e-14);
    }

    #[test]
    fn single_site_measure() {
        let x = [LatticePoint::new(HalfInt::ZERO, 0.3)];
        assert!((mu_a(&x) - 1.0 / PI / (2.0 * PI)).norm() < 1e-16);
    }

    #[test]
    fn open_measure_vanishes_at_zero() {
        let xs = [LatticePoint::new(HalfInt::from_int(1), 0.2), LatticePoint::new(HalfInt::ZERO, 0.0)];
        assert_eq!(mu_open_b(&xs), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn q_is_singular_at_coincident_points() {
        let s = FieldPoint::new(HalfInt::ZERO, Complex64::new(0.5, 0.0));
        let x = LatticePoint::new(HalfInt::ZERO, 0.1);
        assert!(matches!(q_kernel(&x, &x, &s), Err(SovError::Pole { .. })));
    }
}
