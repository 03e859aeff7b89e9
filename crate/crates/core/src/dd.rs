//! Double-double arithmetic (~31 significant digits) and the scalar trait
//! that lets the eigensolver run over either f64 or Dd.
//!
//! Used to re-verify borderline eigenvalue signs: a violation that
//! persists under Dd recomputation cannot be eigensolver rounding.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Requires |a| >= |b| (or a == 0).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    pub fn new(hi: f64, lo: f64) -> Dd {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        assert!(self.hi > 0.0, "Dd::sqrt of negative number");
        // One Newton correction on top of the f64 square root.
        let s = self.hi.sqrt();
        let t = self - Dd::from_f64(s) * Dd::from_f64(s);
        let corr = t.hi / (2.0 * s);
        let (hi, lo) = quick_two_sum(s, corr);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        assert!(b.hi != 0.0, "Dd division by zero");
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::from_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::from_f64(q2);
        let q3 = r.hi / b.hi;
        Dd::from_f64(q1) + Dd::from_f64(q2) + Dd::from_f64(q3)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Dd) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

/// Scalar operations the Jacobi eigensolver needs; implemented by f64
/// (fast path) and Dd (verification path).
pub trait Real:
    Copy
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn zero() -> Self;
    fn one() -> Self;
    /// Working precision of the type, for termination thresholds.
    fn epsilon() -> f64;
}

impl Real for f64 {
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
}

impl Real for Dd {
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    fn zero() -> Dd {
        Dd::ZERO
    }
    fn one() -> Dd {
        Dd::from_f64(1.0)
    }
    fn epsilon() -> f64 {
        // ~2^-104: squared f64 precision, the usual double-double bound.
        4.93e-32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representation_error_visible() {
        // fl(0.1) + fl(0.2) - fl(0.3) is exactly 2^-55: the binary
        // expansions give 10808639105689191/2^55 - 10808639105689190/2^55.
        // Dd carries the sum exactly; f64 arithmetic returns 2^-54 instead.
        let a = Dd::from_f64(0.1) + Dd::from_f64(0.2);
        let b = a - Dd::from_f64(0.3);
        let expected = 2.0f64.powi(-55);
        assert!((b.to_f64() - expected).abs() < 1e-32);
        assert_eq!(0.1f64 + 0.2 - 0.3, 2.0f64.powi(-54));
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = Dd::new(std::f64::consts::PI, 1.2246467991473532e-16);
        let b = Dd::from_f64(1.0) / a;
        let c = a * b;
        assert!((c.to_f64() - 1.0).abs() < 1e-30);
        assert!(c.lo.abs() < 1e-28);
    }

    #[test]
    fn sqrt_squares_back() {
        let a = Dd::from_f64(2.0);
        let s = a.sqrt();
        let back = s * s - a;
        assert!(back.to_f64().abs() < 1e-31, "residual {}", back.to_f64());
    }

    #[test]
    fn ordering() {
        let a = Dd::new(1.0, 1e-20);
        let b = Dd::new(1.0, 2e-20);
        assert!(a < b);
        assert!(Dd::from_f64(-1.0) < Dd::ZERO);
    }
}
