use field_gamma::FieldPoint;
use serde::{Deserialize, Serialize};

use crate::modes::ModeLattice;

/// A factor 𝚪(c + sign·u) of the integrand, with u = (n, i t) on the contour.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleLine {
    pub point: FieldPoint,
    pub sign: i32,
}

/// Signed distance, in Re μ, between the contour and the nearest uncancelled
/// pole of any pole line over all modes of the lattice.
///
/// For an integer total label M = m_c + sign·n the poles of 𝚪 sit at
/// μ = −|M|/2 − j, giving Re μ_c + |M|/2. A half-integer M (label class not
/// matching the lattice) has poles at μ = −M/2 − j for arbitrarily negative
/// M, so the margin is −∞. A non-positive result means the contour is invalid.
pub fn contour_margin(lines: &[PoleLine], lattice: ModeLattice) -> f64 {
    let mut best = f64::INFINITY;
    for line in lines {
        let twice_n0 = match lattice {
            ModeLattice::Integer => 0,
            ModeLattice::HalfInteger => 1,
        };
        let total = line.point.m.twice() + line.sign as i64 * twice_n0;
        if total % 2 != 0 {
            return f64::NEG_INFINITY;
        }
        // the minimum of |M| over the lattice is 0 once the classes agree
        best = best.min(line.point.mu.re);
    }
    best
}
