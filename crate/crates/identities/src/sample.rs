use field_gamma::{FieldPoint, HalfInt};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kinds::{rhs, validate, IdentityKind, IdentityParams, DEFAULT_DELTA_MIN};

/// Total Re μ allowed by the sampler, leaving 0.05 to the convergence bound.
const BUDGET: f64 = 0.95;
const MAX_ATTEMPTS: usize = 10_000;

fn label(rng: &mut ChaCha8Rng, half_integer: bool) -> HalfInt {
    let k: i64 = rng.gen_range(-2..=2);
    HalfInt::from_twice(2 * k + i64::from(half_integer))
}

fn point(rng: &mut ChaCha8Rng, half_integer: bool, re: (f64, f64)) -> FieldPoint {
    let m = label(rng, half_integer);
    let mu = Complex64::new(rng.gen_range(re.0..=re.1), rng.gen_range(-0.5..=0.5));
    FieldPoint::new(m, mu)
}

/// Deterministic admissible parameters for `kind`.
///
/// Labels come from {−2, …, 2} (shifted by ½ for the half-integer class),
/// Im μ ∈ [−0.5, 0.5] and Re μ ∈ [0.05, 0.95/count], so the convergence sum
/// stays at or below 0.95. For G3 the z points use Re μ ≥ 0.15 and the w
/// points |Re ξ| ≤ 0.05, which keeps the shifted contour 0.05 away from all
/// poles. Draws that fail validation or hit a zero of the closed form are
/// redrawn from the same stream.
pub fn sample_params(kind: IdentityKind, seed: u64, half_integer: bool) -> IdentityParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (nz, nw) = kind.arity();
    let hi = BUDGET / kind.budget_count() as f64;
    for _ in 0..MAX_ATTEMPTS {
        let (zr, wr) = match kind {
            IdentityKind::G3 { .. } => ((0.15, hi), (-0.05, 0.05)),
            _ => ((0.05, hi), (0.05, hi)),
        };
        let mut p = IdentityParams {
            z: (0..nz).map(|_| point(&mut rng, half_integer, zr)).collect(),
            w: (0..nw).map(|_| point(&mut rng, half_integer, wr)).collect(),
        };
        let total: f64 = crate::kinds::convergence_sum(kind, &p).re;
        if total > BUDGET {
            let f = BUDGET / total;
            for q in p.z.iter_mut().chain(p.w.iter_mut()) {
                q.mu.re *= f;
            }
        }
        if !validate(kind, &p, DEFAULT_DELTA_MIN).is_empty() {
            continue;
        }
        match rhs(kind, &p) {
            Ok(v) if !v.is_zero() && v.log_mag.is_finite() => return p,
            _ => continue,
        }
    }
    panic!("no admissible parameters for {kind} after {MAX_ATTEMPTS} draws");
}

/// Shift z labels by +δ and w labels by −δ. With δ = ½ the label class flips.
pub fn shift_labels(params: &IdentityParams, delta: HalfInt) -> IdentityParams {
    IdentityParams {
        z: params.z.iter().map(|p| FieldPoint::new(p.m + delta, p.mu)).collect(),
        w: params.w.iter().map(|p| FieldPoint::new(p.m - delta, p.mu)).collect(),
    }
}

/// The G1 shift u ↦ u + ½, z ↦ z + ½, w ↦ w − ½: z labels +1, w labels −1.
pub fn shift_transform(params: &IdentityParams) -> IdentityParams {
    shift_labels(params, HalfInt::from_int(1))
}
