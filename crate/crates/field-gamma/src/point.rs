use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::HalfInt;

/// A pair (z, z̄) with z = m/2 + μ and z̄ = −m/2 + μ.
///
/// The label m = z − z̄ is half-integer; μ is an arbitrary complex number.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub m: HalfInt,
    pub mu: Complex64,
}

impl FieldPoint {
    pub fn new(m: HalfInt, mu: Complex64) -> Self {
        FieldPoint { m, mu }
    }

    /// Integer label with real μ.
    pub fn real(m: i64, mu: f64) -> Self {
        FieldPoint { m: HalfInt::from_int(m), mu: Complex64::new(mu, 0.0) }
    }

    /// The scalar point (0, c): z = z̄ = c.
    pub fn scalar(c: Complex64) -> Self {
        FieldPoint { m: HalfInt::ZERO, mu: c }
    }

    pub fn holo(&self) -> Complex64 {
        self.mu + self.m.value() / 2.0
    }

    pub fn anti(&self) -> Complex64 {
        self.mu - self.m.value() / 2.0
    }

    /// The swapped pair (z̄, z).
    pub fn bar(&self) -> Self {
        FieldPoint { m: -self.m, mu: self.mu }
    }

    /// 1 − z̄ as a pair: holomorphic part 1 − z̄, antiholomorphic part 1 − z.
    pub fn one_minus_bar(&self) -> Self {
        FieldPoint { m: self.m, mu: Complex64::new(1.0, 0.0) - self.mu }
    }

    /// The product [z] = z·z̄.
    pub fn bracket(&self) -> Complex64 {
        self.holo() * self.anti()
    }

    pub fn shift_mu(&self, c: Complex64) -> Self {
        FieldPoint { m: self.m, mu: self.mu + c }
    }
}

impl Add for FieldPoint {
    type Output = FieldPoint;
    fn add(self, rhs: FieldPoint) -> FieldPoint {
        FieldPoint { m: self.m + rhs.m, mu: self.mu + rhs.mu }
    }
}

impl Sub for FieldPoint {
    type Output = FieldPoint;
    fn sub(self, rhs: FieldPoint) -> FieldPoint {
        FieldPoint { m: self.m - rhs.m, mu: self.mu - rhs.mu }
    }
}

impl Neg for FieldPoint {
    type Output = FieldPoint;
    fn neg(self) -> FieldPoint {
        FieldPoint { m: -self.m, mu: -self.mu }
    }
}

impl fmt::Display for FieldPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(m={}, mu={}{:+}i)", self.m, self.mu.re, self.mu.im)
    }
}
