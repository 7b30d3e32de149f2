//! Separated-variable kernels and overlaps against high-precision values, and
//! the pointwise agreement of the T-integral integrand with the Γ form.

use field_gamma::{a_func, FieldPoint, HalfInt, LogComplex};
use identities::sov::{
    b_kernel, mu_b, q_kernel, s_a, s_b, sigma_n, theta, tint_cross_check, CrossCheckOptions, LatticePoint, SovError,
    DEFAULT_EPSILON,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn lp(n: i64, nu: f64) -> LatticePoint {
    LatticePoint::new(HalfInt::from_int(n), nu)
}

fn spin(n: i64, nu: f64) -> FieldPoint {
    FieldPoint::new(HalfInt::from_int(n), Complex64::new(0.5, nu))
}

fn value(v: Result<LogComplex, SovError>) -> Complex64 {
    v.unwrap().to_complex().unwrap()
}

fn assert_close(got: Complex64, want: Complex64, tol: f64) {
    assert!((got - want).norm() <= tol * want.norm(), "got {got}, want {want}");
}

// reference values from tools/sov_oracle.py (mpmath, 40 digits)

#[test]
fn b_kernel_references() {
    let b = value(b_kernel(&lp(1, 0.37), &lp(-2, 0.21), &spin(0, 0.3)));
    assert_close(b, Complex64::new(-7.9432348180988917, 3.1468702646215212), 1e-11);
    let b = value(b_kernel(&lp(0, -0.45), &lp(3, 0.8), &spin(1, -0.1)));
    assert_close(b, Complex64::new(2.1819843320263689, 2.4511515150559435), 1e-11);
}

#[test]
fn b_overlap_references() {
    let s = value(s_b(&[lp(1, 0.25)], &[lp(0, -0.4)], &spin(0, 0.3)));
    assert_close(s, Complex64::new(-193.23291711815739, 688.2466368373018), 1e-11);
    let s = value(s_b(&[lp(-1, 0.6)], &[lp(2, 0.15)], &spin(1, -0.1)));
    assert_close(s, Complex64::new(-192.00402732072391, 100.65308158295642), 1e-11);
}

#[test]
fn b_measure_reference() {
    let m = mu_b(&[lp(0, 0.3), lp(1, -0.2)]);
    assert!((m.re - 6.7620993158062378e-8).abs() < 1e-12 * 6.8e-8 && m.im.abs() < 1e-20, "{m}");
}

#[test]
fn b_measure_is_a_squared_modulus() {
    // for real ν, [x − y] = |x − y|², so μ^(B) is real and positive
    let xs = [lp(2, 0.1), lp(-1, 0.7), lp(0, -0.35)];
    let mut v = 1.0;
    for k in 0..3 {
        for j in k + 1..3 {
            v *= (xs[k].x() - xs[j].x()).norm_sqr();
        }
    }
    let want = v * 2.0 * PI.powf(-16.0) / (2.0 * PI).powi(4) / 6.0;
    let got = mu_b(&xs);
    assert!((got.re - want).abs() < 1e-12 * want && got.im.abs() < 1e-12 * want, "{got} vs {want}");
}

#[test]
fn theta_matches_bracket_definition() {
    let (x, y) = (lp(1, 0.4), lp(-2, 1.1));
    let br = |p: Complex64, q: Complex64| p * q;
    let d = br(x.x() - y.x(), x.xbar() - y.xbar()) * br(x.x() + y.x(), x.xbar() + y.xbar());
    assert_close(theta(&x, &y), Complex64::from(PI.powi(4)) / d, 1e-14);
}

#[test]
fn sigma_sign_follows_spin_label() {
    let even = sigma_n(&spin(0, 0.2), 3).to_complex().unwrap();
    let half = sigma_n(&FieldPoint::new(HalfInt::from_twice(1), Complex64::new(0.5, 0.2)), 3).to_complex().unwrap();
    let p = PI.powi(12);
    assert_close(even, Complex64::from(p), 1e-13);
    // [s] N(N−1) = 3 gives (−1)^3
    assert_close(half, Complex64::from(-p), 1e-13);
}

#[test]
fn q_kernel_is_singular_at_coincident_points() {
    let x = lp(1, 0.3);
    assert!(matches!(q_kernel(&x, &x, &spin(0, 0.2)), Err(SovError::Pole { .. })));
}

#[test]
fn coincident_overlap_needs_regularization() {
    let xps = [lp(0, 0.2), lp(1, -0.3), lp(-1, 0.5)];
    let u = [xps[0], lp(2, 0.1)];
    let s = spin(0, 0.25);
    assert!(matches!(s_a(&u, &xps, &s), Err(SovError::Pole { .. })));
    let shifted = [u[0].eps_shifted(DEFAULT_EPSILON), u[1]];
    let v = value(s_a(&shifted, &xps, &s));
    assert!(v.re.is_finite() && v.im.is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn a_overlap_is_symmetric(
        n in prop::array::uniform2(-2i64..=2),
        nu in prop::array::uniform2(-1.0f64..1.0),
        flip in any::<bool>(),
    ) {
        let xps = [lp(1, 0.13), lp(-1, -0.42), lp(0, 0.61)];
        let s = spin(1, 0.2);
        let u = [lp(n[0], nu[0]), lp(n[1], nu[1])];
        prop_assume!((u[0].x() - u[1].x()).norm() > 1e-3 && (u[0].x() + u[1].x()).norm() > 1e-3);
        let base = value(s_a(&u, &xps, &s));
        let swapped = value(s_a(&[u[1], u[0]], &[xps[2], xps[0], xps[1]], &s));
        prop_assert!((base - swapped).norm() <= 1e-10 * base.norm());
        let first = if flip { u[0] } else { -u[0] };
        let reflected = value(s_a(&[first, -u[1]], &xps, &s));
        prop_assert!((base - reflected).norm() <= 1e-10 * base.norm());
    }
}

fn tint_points(half: bool) -> Vec<(Vec<LatticePoint>, Vec<LatticePoint>, Vec<LatticePoint>)> {
    let lift = |n: i64| HalfInt::from_twice(2 * n + i64::from(half));
    let mut out = Vec::new();
    for k in 0..100 {
        let kf = k as f64;
        let n = 2 + k % 2;
        let xs: Vec<_> = (0..n).map(|j| LatticePoint::new(lift(j as i64 - 1), 0.1 + 0.37 * j as f64 + 0.01 * kf)).collect();
        let xps: Vec<_> = (0..n).map(|j| LatticePoint::new(lift(2 - j as i64), -0.2 + 0.29 * j as f64)).collect();
        let u: Vec<_> = (0..n - 1)
            .map(|j| LatticePoint::new(lift((k % 7) as i64 - 3 + j as i64), 0.13 * (kf / 10.0 - 4.0) - 0.4 * j as f64))
            .collect();
        out.push((xs, xps, u));
    }
    out
}

fn tint(xs: &[LatticePoint], xps: &[LatticePoint], s: &FieldPoint, u: &[LatticePoint], scale: f64) -> (Complex64, Complex64) {
    tint_cross_check(xs, xps, s, u, CrossCheckOptions { sigma_scale: scale }).unwrap()
}

fn tint_ratio(xs: &[LatticePoint], xps: &[LatticePoint], s: &FieldPoint, u: &[LatticePoint], scale: f64) -> Complex64 {
    let (a, b) = tint(xs, xps, s, u, scale);
    a / b
}

#[test]
fn t_integrand_agrees_with_gamma_form() {
    for s in [spin(0, 0.3), spin(1, -0.1)] {
        for (xs, xps, u) in tint_points(false) {
            let r = tint_ratio(&xs, &xps, &s, &u, 1.0);
            assert!((r - 1.0).norm() < 1e-10, "s = {s}, u = {u:?}: ratio {r}");
        }
    }
}

#[test]
fn t_integrand_does_not_depend_on_spin() {
    for (xs, xps, u) in tint_points(false) {
        let (a, _) = tint(&xs, &xps, &spin(0, 0.3), &u, 1.0);
        let (b, _) = tint(&xs, &xps, &spin(1, -0.1), &u, 1.0);
        assert!((a - b).norm() < 1e-10 * a.norm(), "u = {u:?}: {a} vs {b}");
    }
}

#[test]
fn t_integrand_agrees_for_half_integer_points() {
    for s in [spin(0, 0.2), FieldPoint::new(HalfInt::from_twice(1), Complex64::new(0.5, 0.2))] {
        for (xs, xps, u) in tint_points(true) {
            let r = tint_ratio(&xs, &xps, &s, &u, 1.0);
            assert!((r - 1.0).norm() < 1e-10, "u = {u:?}: ratio {r}");
        }
    }
}

#[test]
fn pair_measure_modulus() {
    // |Π_{k<j} a(1 − i(x′_k + x′_j))⁻¹|² = Π_{k<j} [x′_k + x′_j]
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let half = rng.gen_bool(0.5);
        let xps: Vec<LatticePoint> = (0..3)
            .map(|_| LatticePoint::new(HalfInt::from_twice(2 * rng.gen_range(-3i64..=3) + i64::from(half)), rng.gen_range(-2.0..2.0)))
            .collect();
        let (mut lhs, mut rhs) = (0.0, 1.0);
        for k in 0..3 {
            for j in k + 1..3 {
                let y = xps[k] + xps[j];
                let a = a_func(&(-y.times_i()).shift_mu(Complex64::new(1.0, 0.0))).unwrap();
                lhs -= 2.0 * a.log_mag;
                rhs *= (y.x() * y.xbar()).re;
            }
        }
        assert!((lhs.exp() - rhs).abs() < 1e-10 * rhs, "{xps:?}: {} vs {rhs}", lhs.exp());
    }
}

#[test]
fn perturbed_normalization_is_detected() {
    let (xs, xps, u) = tint_points(false).swap_remove(3);
    let r = tint_ratio(&xs, &xps, &spin(0, 0.3), &u, 1.01);
    assert!((r - 1.0).norm() > 1e-2, "ratio {r}");
}
