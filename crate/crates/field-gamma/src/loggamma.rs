use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::GammaError;

/// Distance to the nearest non-positive integer below which Γ(z) is treated as a pole.
pub const POLE_TOL: f64 = 1e-10;

const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_C: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Order of the pole of Γ at `z` (1 at non-positive integers, else 0).
pub fn gamma_pole_order(z: Complex64) -> i32 {
    if z.re > 0.5 {
        return 0;
    }
    let k = z.re.round();
    if k <= 0.0 && Complex64::new(z.re - k, z.im).norm() < POLE_TOL {
        1
    } else {
        0
    }
}

/// Principal branch of log Γ(z).
///
/// The branch cut lies on the negative real axis; values on the cut are the
/// limit from the upper half plane.
pub fn ln_gamma(z: Complex64) -> Result<Complex64, GammaError> {
    if gamma_pole_order(z) != 0 {
        return Err(GammaError::Pole(z));
    }
    Ok(ln_gamma_unchecked(z))
}

/// `ln_gamma` without the pole test. Returns non-finite values at poles.
pub fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        lanczos(z)
    } else {
        LN_PI - ln_sin_pi(z) - lanczos(Complex64::new(1.0, 0.0) - z)
    }
}

/// |Im| above which `ln_gamma_ratio` switches to the Stirling difference.
const STIRLING_MIN: f64 = 1e3;

/// log Γ(a + w) − log Γ(b + w), accurate when w is large and a − b is not.
///
/// Both log Γ values grow like |w| log |w|, so their plain difference loses
/// all significant digits for |w| ≳ 1e15. With a, b passed separately from w
/// the difference is formed analytically from the Stirling series. The
/// result agrees with the difference of principal branches modulo 2πi.
pub fn ln_gamma_ratio(a: Complex64, b: Complex64, w: Complex64) -> Complex64 {
    let za = a + w;
    let zb = b + w;
    if za.im.abs() < STIRLING_MIN || zb.im.abs() < STIRLING_MIN || (za.im > 0.0) != (zb.im > 0.0) {
        return ln_gamma_unchecked(za) - ln_gamma_unchecked(zb);
    }
    let d = a - b;
    (zb - 0.5) * ln_1p(d / zb) + d * za.ln() - d + stirling_tail(za) - stirling_tail(zb)
}

/// log(1 + x) without cancellation for small |x|.
fn ln_1p(x: Complex64) -> Complex64 {
    if x.norm() >= 0.25 {
        return (1.0 + x).ln();
    }
    // log(1+x) = 2 atanh(y), y = x/(2+x)
    let y = x / (2.0 + x);
    let y2 = y * y;
    let mut term = y;
    let mut sum = y;
    for k in 1..40 {
        term *= y2;
        let add = term / (2 * k + 1) as f64;
        sum += add;
        if add.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    2.0 * sum
}

/// Σ B_2k / (2k(2k−1) z^{2k−1}) for |z| ≥ 1e3.
fn stirling_tail(z: Complex64) -> Complex64 {
    let r = 1.0 / z;
    let r2 = r * r;
    r * (1.0 / 12.0 + r2 * (-1.0 / 360.0 + r2 * (1.0 / 1260.0 - r2 / 1680.0)))
}

fn lanczos(z: Complex64) -> Complex64 {
    let x = z - 1.0;
    let mut a = Complex64::new(LANCZOS_C[0], 0.0);
    for (k, c) in LANCZOS_C.iter().enumerate().skip(1) {
        a += *c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (x + 0.5) * t.ln() - t + LN_SQRT_2PI + a.ln()
}

/// The branch of log sin(πz) that makes the reflection formula return the
/// principal log Γ: real on Re z = 1/2, continuous in each half plane.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    // e^{2πi z} with the real part reduced exactly to keep phase accuracy.
    let frac = z.re - z.re.round();
    if z.im >= 0.0 {
        let w = Complex64::from_polar((-2.0 * PI * z.im).exp(), 2.0 * PI * frac);
        -i * PI * z + (Complex64::new(1.0, 0.0) - w).ln() + i * (PI / 2.0) - LN_2
    } else {
        let w = Complex64::from_polar((2.0 * PI * z.im).exp(), -2.0 * PI * frac);
        i * PI * z + (Complex64::new(1.0, 0.0) - w).ln() - i * (PI / 2.0) - LN_2
    }
}
