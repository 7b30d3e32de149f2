//! Closed forms against independent high-precision values, validation and
//! the parameter sampler.

use field_gamma::{FieldPoint, HalfInt};
use identities::{
    convergence_sum, rhs, sample_params, validate, IdentityKind, IdentityParams, Violation, DEFAULT_DELTA_MIN,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn fp(twice_m: i64, re: f64, im: f64) -> FieldPoint {
    FieldPoint::new(HalfInt::from_twice(twice_m), Complex64::new(re, im))
}

fn params(z: Vec<FieldPoint>, w: Vec<FieldPoint>) -> IdentityParams {
    IdentityParams { z, w }
}

fn rhs_value(kind: IdentityKind, p: &IdentityParams) -> Complex64 {
    rhs(kind, p).unwrap().to_complex().unwrap()
}

fn assert_close(got: Complex64, want: Complex64, tol: f64) {
    assert!((got - want).norm() <= tol * want.norm(), "got {got}, want {want}");
}

fn chain2() -> IdentityParams {
    params(vec![fp(2, 0.12, 0.3), fp(-4, 0.2, -0.1)], vec![fp(0, 0.15, 0.2), fp(4, 0.1, 0.0)])
}

fn chain3() -> IdentityParams {
    params(
        vec![fp(2, 0.1, 0.3), fp(0, 0.12, -0.2), fp(-2, 0.08, 0.1)],
        vec![fp(4, 0.1, 0.0), fp(0, 0.15, 0.25), fp(-4, 0.07, -0.4)],
    )
}

// reference values from tools/rhs_oracle.py (mpmath, 40 digits)

#[test]
fn two_point_chain_reference() {
    assert_close(rhs_value(IdentityKind::BarnesC, &chain2()), Complex64::new(1.7422202120407694, 1.1876740999101342), 1e-12);
}

#[test]
fn two_point_chain_half_integer_reference() {
    let p = params(vec![fp(3, 0.12, 0.3), fp(-1, 0.2, -0.1)], vec![fp(1, 0.15, 0.2), fp(5, 0.1, 0.0)]);
    assert_close(rhs_value(IdentityKind::BarnesC, &p), Complex64::new(0.87135810933730131, -0.50768322463277879), 1e-12);
}

#[test]
fn three_point_chain_reference() {
    let want = Complex64::new(-3.155691985291606, 6.1672507849619293);
    assert_close(rhs_value(IdentityKind::G1 { n: 3 }, &chain3()), want, 1e-12);
}

#[test]
fn open_chain_references() {
    let c = chain2();
    let p2 = params(c.z.iter().chain(&c.w).copied().collect(), vec![]);
    assert_close(rhs_value(IdentityKind::DBWC, &p2), Complex64::new(-2.3401659447619407, -0.89503235041101202), 1e-12);
    let c = chain3();
    let p3 = params(c.z.iter().chain(&c.w).copied().collect(), vec![]);
    assert_close(rhs_value(IdentityKind::G2 { n: 3 }, &p3), Complex64::new(25.039394921634736, -45.591161976980809), 1e-12);
}

#[test]
fn third_family_reference() {
    let p = params(
        vec![fp(2, 0.2, 0.3), fp(0, 0.25, -0.2), fp(-4, 0.3, 0.1)],
        vec![fp(2, 0.03, 0.2), fp(0, -0.02, -0.3)],
    );
    assert_close(rhs_value(IdentityKind::G3 { n: 3 }, &p), Complex64::new(31.237343834804512, 20.169223638624066), 1e-12);
}

#[test]
fn real_symmetric_references() {
    // all points (0, 0.2): 𝚪(0.4)^4/𝚪(0.8) and 𝚪(0.4)^6/𝚪(0.8)
    let all = |k| vec![FieldPoint::real(0, 0.2); k];
    let b = rhs_value(IdentityKind::BarnesC, &params(all(2), all(2)));
    assert!((b.re - 19.4098366729173).abs() < 1e-11 && b.im.abs() < 1e-12, "{b}");
    let d = rhs_value(IdentityKind::DBWC, &params(all(4), vec![]));
    assert!((d.re - 43.06316114589265).abs() < 1e-11 && d.im.abs() < 1e-12, "{d}");
}

#[test]
fn families_reduce_to_the_two_point_forms() {
    for seed in 1..=5 {
        let p = sample_params(IdentityKind::BarnesC, seed, seed % 2 == 0);
        assert_close(rhs_value(IdentityKind::G1 { n: 2 }, &p), rhs_value(IdentityKind::BarnesC, &p), 1e-14);
        let p = sample_params(IdentityKind::DBWC, seed, seed % 2 == 0);
        assert_close(rhs_value(IdentityKind::G2 { n: 2 }, &p), rhs_value(IdentityKind::DBWC, &p), 1e-14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn open_chain_rhs_is_permutation_invariant(seed in 1u64..10_000, shift in 1usize..6) {
        let kind = IdentityKind::G2 { n: 3 };
        let p = sample_params(kind, seed, false);
        let mut q = p.clone();
        q.z.rotate_left(shift);
        q.z.swap(0, 1);
        let (a, b) = (rhs_value(kind, &p), rhs_value(kind, &q));
        prop_assert!((a - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn chain_rhs_is_invariant_under_separate_permutations(seed in 1u64..10_000) {
        let kind = IdentityKind::G1 { n: 3 };
        let p = sample_params(kind, seed, seed % 2 == 1);
        let mut q = p.clone();
        q.z.rotate_left(1);
        q.w.swap(0, 2);
        let (a, b) = (rhs_value(kind, &p), rhs_value(kind, &q));
        prop_assert!((a - b).norm() <= 1e-12 * a.norm());
    }
}

#[test]
fn valid_chain_has_no_violations() {
    assert!(validate(IdentityKind::BarnesC, &chain2(), DEFAULT_DELTA_MIN).is_empty());
}

#[test]
fn convergence_bound_is_enforced() {
    let p = params(vec![FieldPoint::real(0, 0.3); 4], vec![]);
    let v = validate(IdentityKind::DBWC, &p, DEFAULT_DELTA_MIN);
    assert!(v.iter().any(|v| matches!(v, Violation::Convergence { sum } if (sum - 1.2).abs() < 1e-12)), "{v:?}");
}

#[test]
fn pinched_contour_is_reported() {
    // z1 + w1 = (0, 0) is a pole of the numerator 𝚪(z1 + w1)
    let p = params(vec![fp(0, 0.1, 0.2), fp(0, 0.2, 0.0)], vec![fp(0, -0.1, -0.2), fp(0, 0.2, 0.0)]);
    let v = validate(IdentityKind::BarnesC, &p, DEFAULT_DELTA_MIN);
    assert!(v.iter().any(|v| matches!(v, Violation::Pinching { .. })), "{v:?}");
    assert!(v.iter().any(|v| matches!(v, Violation::NonPositiveReal { .. })), "{v:?}");
}

#[test]
fn mixed_label_classes_are_reported() {
    let p = params(vec![fp(1, 0.1, 0.0), fp(0, 0.1, 0.0)], vec![fp(1, 0.1, 0.0), fp(1, 0.1, 0.0)]);
    assert!(validate(IdentityKind::BarnesC, &p, DEFAULT_DELTA_MIN).contains(&Violation::MixedLabels));
}

#[test]
fn wrong_arity_is_reported() {
    let v = validate(IdentityKind::G3 { n: 3 }, &chain2(), DEFAULT_DELTA_MIN);
    assert_eq!(v, vec![Violation::Arity { expected: (3, 2), got: (2, 2) }]);
}

#[test]
fn small_margin_is_reported() {
    let p = params(vec![fp(0, 0.01, 0.0), fp(0, 0.2, 0.0)], vec![fp(0, 0.2, 0.0), fp(0, 0.2, 0.0)]);
    let v = validate(IdentityKind::BarnesC, &p, DEFAULT_DELTA_MIN);
    assert!(v.iter().any(|v| matches!(v, Violation::Margin { delta, .. } if (delta - 0.01).abs() < 1e-12)), "{v:?}");
}

#[test]
fn sampler_is_deterministic_per_seed() {
    for kind in [IdentityKind::G1 { n: 3 }, IdentityKind::G2 { n: 3 }, IdentityKind::G3 { n: 3 }] {
        assert_eq!(sample_params(kind, 11, false), sample_params(kind, 11, false));
        assert_ne!(sample_params(kind, 11, false), sample_params(kind, 12, false));
    }
}

#[test]
fn sampled_parameters_are_admissible() {
    let kinds = [
        IdentityKind::BarnesC,
        IdentityKind::DBWC,
        IdentityKind::G1 { n: 3 },
        IdentityKind::G2 { n: 3 },
        IdentityKind::G3 { n: 3 },
        IdentityKind::G1 { n: 4 },
    ];
    for kind in kinds {
        for seed in 1..=20 {
            for half in [false, true] {
                let p = sample_params(kind, seed, half);
                assert!(validate(kind, &p, DEFAULT_DELTA_MIN).is_empty(), "{kind} seed {seed}");
                assert!(convergence_sum(kind, &p).re <= 0.95 + 1e-12);
                assert!(p.points().all(|q| q.m.is_integer() != half));
                assert!(p.points().all(|q| q.m.value().abs() <= 2.5 && q.mu.im.abs() <= 0.5));
            }
        }
    }
}

#[test]
fn open_chain_seed_seven_stays_inside_budget() {
    let kind = IdentityKind::G2 { n: 3 };
    let p = sample_params(kind, 7, false);
    let s = convergence_sum(kind, &p).re;
    assert!(s > 0.0 && s <= 0.95, "{s}");
}
