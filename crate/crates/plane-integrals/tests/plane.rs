use std::f64::consts::PI;

use identities::Verdict;
use num_complex::Complex64;
use plane_integrals::*;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn polar(tol: f64) -> PlaneQuadConfig {
    PlaneQuadConfig { rel_tol: tol, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn propagator_reflection(m in -4i64..=4, mr in -2.0f64..2.0, mi in -1.0f64..1.0,
                             zr in -5.0f64..5.0, zi in -5.0f64..5.0) {
        prop_assume!(zr.hypot(zi) > 1e-3);
        let a = PropExponent::new(m, c(mr, mi));
        let z = c(zr, zi);
        let d = propagator(a, z).unwrap();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let back = propagator(a, -z).unwrap() * sign;
        prop_assert!((d - back).norm() <= 1e-12 * d.norm());
        let inv = propagator(PropExponent::new(-m, c(-mr, -mi)), z).unwrap();
        prop_assert!((d * inv - 1.0).norm() < 1e-12);
    }
}

#[test]
fn chain_reference_example() {
    let (a, b) = (PropExponent::real(0, 0.6), PropExponent::real(0, 0.9));
    let r = chain_check(a, b, c(0.0, 0.0), c(1.0, 0.0), &polar(1e-4)).unwrap();
    // π a(0.6) a(0.9)/a(0.5) from mpmath
    assert!((r.rhs.re - 41.658_701_130_128_5).abs() < 1e-9, "{}", r.rhs);
    assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    let mc = chain_check(a, b, c(0.0, 0.0), c(1.0, 0.0), &PlaneQuadConfig::monte_carlo(3)).unwrap();
    assert_eq!(mc.verdict, Verdict::Pass, "{mc:?}");
}

#[test]
fn chain_with_spin() {
    let (a, b) = (PropExponent::real(1, 0.6), PropExponent::real(-1, 0.9));
    let (z1, z2) = (c(0.3, 0.1), c(-0.5, 0.7));
    let r = chain_check(a, b, z1, z2, &polar(1e-4)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    let mc = chain_check(a, b, z1, z2, &PlaneQuadConfig::monte_carlo(11)).unwrap();
    assert_eq!(mc.verdict, Verdict::Pass, "{mc:?}");
}

#[test]
fn chain_translation_invariance() {
    let (a, b) = (PropExponent::new(2, c(0.6, 0.2)), PropExponent::real(-1, 0.9));
    let cfg = polar(1e-4);
    let r0 = chain_check(a, b, c(0.3, 0.1), c(-0.5, 0.7), &cfg).unwrap();
    let s = c(12.5, -3.25);
    let r1 = chain_check(a, b, c(0.3, 0.1) + s, c(-0.5, 0.7) + s, &cfg).unwrap();
    assert!((r0.lhs.value - r1.lhs.value).norm() <= r0.lhs.err + r1.lhs.err);
}

#[test]
fn chain_converges_with_refinement() {
    let (a, b) = (PropExponent::real(1, 0.6), PropExponent::real(-1, 0.9));
    let res: Vec<f64> = [(0.16, 32), (0.08, 64), (0.04, 128), (0.02, 256)]
        .iter()
        .map(|&(step, angles)| {
            let cfg = PlaneQuadConfig { step, angles, ..Default::default() };
            chain_check(a, b, c(0.3, 0.1), c(-0.5, 0.7), &cfg).unwrap().rel_residual
        })
        .collect();
    // observed: 1.7e-2, 2.9e-4, 3.1e-7, 7e-12 (faster than any power of the step)
    assert!(res.windows(2).all(|w| w[1] < w[0]), "{res:?}");
    assert!(res[3] < 1e-9);
}

#[test]
fn chain_rotation_covariance() {
    let (a, b) = (PropExponent::real(2, 0.6), PropExponent::real(-1, 0.8));
    let (z1, z2) = (c(0.3, 0.1), c(-0.5, 0.7));
    let theta = 0.7;
    let rot = Complex64::from_polar(1.0, theta);
    let d = chain_diagram(a, b, z1, z2).polar_patch(&polar(1e-4)).unwrap();
    let r = chain_diagram(a, b, z1 * rot, z2 * rot).polar_patch(&polar(1e-4)).unwrap();
    let phase = Complex64::from_polar(1.0, -((a.m() + b.m()) as f64) * theta);
    assert!((r.value - d.value * phase).norm() <= d.err + r.err);
}

#[test]
fn divergent_chain_is_rejected() {
    let cfg = polar(1e-4);
    let z = (c(0.0, 0.0), c(1.0, 0.0));
    assert!(matches!(chain_check(PropExponent::real(0, 0.3), PropExponent::real(0, 0.4), z.0, z.1, &cfg), Err(PlaneError::Divergent(_))));
    assert!(matches!(chain_check(PropExponent::real(0, 1.2), PropExponent::real(0, 0.1), z.0, z.1, &cfg), Err(PlaneError::Divergent(_))));
    assert!(matches!(chain_check(PropExponent::real(0, 0.6), PropExponent::real(0, 0.9), z.0, z.0, &cfg), Err(PlaneError::Coincident(0, 1))));
}

#[test]
fn monte_carlo_is_reproducible_across_thread_counts() {
    let (a, b) = (PropExponent::real(1, 0.6), PropExponent::real(-1, 0.9));
    let cfg = PlaneQuadConfig { samples_per_stratum: 64, ..PlaneQuadConfig::monte_carlo(5) };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| chain_check(a, b, c(0.0, 0.0), c(1.0, 0.0), &cfg).unwrap())
    };
    let (r1, r3) = (run(1), run(3));
    assert_eq!(r1.lhs.value.re.to_bits(), r3.lhs.value.re.to_bits());
    assert_eq!(r1.lhs.value.im.to_bits(), r3.lhs.value.im.to_bits());
    assert_eq!(r1.lhs.err.to_bits(), r3.lhs.err.to_bits());
    let other = chain_check(a, b, c(0.0, 0.0), c(1.0, 0.0), &PlaneQuadConfig { seed: 6, ..cfg }).unwrap();
    assert_ne!(other.lhs.value, r1.lhs.value);
}

#[test]
fn fourier_reference_and_spins() {
    let cfg = polar(1e-6);
    let r = fourier_check(PropExponent::real(0, 0.7), c(1.0, 0.0), &cfg).unwrap();
    // π a(0.7) = π Γ(0.3)/Γ(0.7), mpmath
    assert!((r.rhs.re - 7.240_285_462_451_99).abs() < 1e-10, "{}", r.rhs);
    assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    for m in [0, 1, 2, -1] {
        let r = fourier_check(PropExponent::new(m, c(0.7, 0.1)), c(0.6, -0.8), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "m = {m}: {r:?}");
    }
}

#[test]
fn fourier_scaling_and_rotation() {
    let cfg = polar(1e-6);
    let a = PropExponent::new(1, c(0.65, -0.1));
    let p = c(0.4, 0.3);
    let f1 = fourier_check(a, p, &cfg).unwrap().lhs;
    let f2 = fourier_check(a, 2.0 * p, &cfg).unwrap().lhs;
    let law = ((2.0 * a.mu() - 2.0) * 2f64.ln()).exp();
    assert!((f2.value - f1.value * law).norm() <= f2.err + f1.err * law.norm());
    let theta = 1.1;
    let fr = fourier_check(a, p * Complex64::from_polar(1.0, theta), &cfg).unwrap().lhs;
    let phase = Complex64::from_polar(1.0, a.m() as f64 * theta);
    assert!((fr.value - f1.value * phase).norm() <= fr.err + f1.err);
}

#[test]
fn fourier_outside_strip_is_rejected() {
    let cfg = polar(1e-6);
    assert!(fourier_check(PropExponent::real(0, 0.4), c(1.0, 0.0), &cfg).is_err());
    assert!(fourier_check(PropExponent::real(0, 0.7), c(0.0, 0.0), &cfg).is_err());
}

fn star_set() -> [PropExponent; 3] {
    [PropExponent::real(1, 0.6), PropExponent::real(-1, 0.7), PropExponent::real(0, 0.7)]
}

#[test]
fn star_triangle_reference_example() {
    let cfg = polar(1e-3);
    let [a, b, g] = [PropExponent::real(0, 0.6), PropExponent::real(0, 0.7), PropExponent::real(0, 0.7)];
    let r = star_triangle_check(a, b, g, c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), &cfg).unwrap();
    assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    let mc = star_triangle_check(a, b, g, c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), &PlaneQuadConfig::monte_carlo(2)).unwrap();
    assert_eq!(mc.verdict, Verdict::Pass, "{mc:?}");
}

#[test]
fn star_triangle_permutation_covariance() {
    let cfg = polar(1e-3);
    let [a, b, g] = star_set();
    let z = [c(0.0, 0.0), c(1.0, 0.0), c(0.2, 0.9)];
    let r0 = star_triangle_check(a, b, g, z[0], z[1], z[2], &cfg).unwrap();
    let r1 = star_triangle_check(b, g, a, z[1], z[2], z[0], &cfg).unwrap();
    assert!((r0.lhs.value - r1.lhs.value).norm() <= r0.lhs.err + r1.lhs.err);
    assert!((r0.rhs - r1.rhs).norm() <= 1e-12 * r0.rhs.norm());
    assert_eq!(r0.verdict, Verdict::Pass);
}

#[test]
fn star_triangle_far_point_reduces_to_chain() {
    let cfg = polar(1e-3);
    let [a, b, g] = [PropExponent::real(0, 0.6), PropExponent::real(0, 0.7), PropExponent::real(0, 0.7)];
    let far = c(1000.0, 0.0);
    let star = star_triangle_check(a, b, g, c(0.0, 0.0), c(1.0, 0.0), far, &cfg).unwrap();
    // D_γ(z₃ − w) → D_γ(z₃); D_β(z₂ − w) = (−1)^{m_β} D_β(w − z₂)
    let chain = chain_rhs(a, b, c(0.0, 0.0), c(1.0, 0.0)).unwrap();
    let scaled = star.lhs.value / propagator(g, far).unwrap();
    assert!((scaled - chain).norm() < 1e-2 * chain.norm());
}

#[test]
fn star_triangle_rotation_invariance() {
    let cfg = polar(1e-3);
    let [a, b, g] = star_set();
    let z = [c(0.0, 0.0), c(1.0, 0.0), c(0.2, 0.9)];
    let rot = Complex64::from_polar(1.0, 2.0 * PI / 7.0);
    let d0 = star_diagram([a, b, g], z).polar_patch(&cfg).unwrap();
    let d1 = star_diagram([a, b, g], z.map(|x| x * rot)).polar_patch(&cfg).unwrap();
    // total label Σ m = 0, so no phase
    assert!((d0.value - d1.value).norm() <= d0.err + d1.err);
}

#[test]
fn star_triangle_requires_uniqueness() {
    let cfg = polar(1e-3);
    let z = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
    let r = star_triangle_check(PropExponent::real(0, 0.6), PropExponent::real(0, 0.7), PropExponent::real(0, 0.8), z[0], z[1], z[2], &cfg);
    assert!(matches!(r, Err(PlaneError::Uniqueness(_))));
    let r = star_triangle_check(PropExponent::real(1, 0.6), PropExponent::real(0, 0.7), PropExponent::real(0, 0.7), z[0], z[1], z[2], &cfg);
    assert!(matches!(r, Err(PlaneError::Uniqueness(_))));
}

#[test]
fn report_round_trips_through_json() {
    let r = fourier_check(PropExponent::real(2, 0.75), c(1.0, 1.0), &polar(1e-6)).unwrap();
    let s = serde_json::to_string(&r).unwrap();
    let back: PlaneReport = serde_json::from_str(&s).unwrap();
    assert_eq!(back, r);
    assert!(serde_json::from_str::<PropExponent>(r#"{"m":0.5,"mu":[0.5,0.0]}"#).is_err());
}
