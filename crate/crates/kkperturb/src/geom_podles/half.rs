//! Half-integers stored exactly as doubled integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A half-integer l with 2l stored as an i32, so index arithmetic is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    /// From the doubled value: `from_doubled(3)` is 3/2.
    pub fn from_doubled(doubled: i32) -> Self {
        HalfInt(doubled)
    }

    pub fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub fn doubled(self) -> i32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn abs(self) -> HalfInt {
        HalfInt(self.0.abs())
    }

    /// Inclusive range from -l to l in integer steps (projection ladder).
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let top = self.0;
        (-top..=top).step_by(2).map(HalfInt)
    }

    /// Inclusive range self..=other in integer steps.
    pub fn range_to(self, other: HalfInt) -> impl Iterator<Item = HalfInt> {
        (self.0..=other.0).step_by(2).map(HalfInt)
    }

    /// Inclusive range self..=other in half-integer steps.
    pub fn ladder_to(self, other: HalfInt) -> impl Iterator<Item = HalfInt> {
        (self.0..=other.0).map(HalfInt)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_ranges() {
        let l = HalfInt::from_doubled(3); // 3/2
        assert_eq!(l.as_f64(), 1.5);
        assert!(!l.is_integer());
        assert_eq!((l + HalfInt::HALF).as_f64(), 2.0);
        assert_eq!((-l).doubled(), -3);
        let projections: Vec<f64> = l.projections().map(HalfInt::as_f64).collect();
        assert_eq!(projections, vec![-1.5, -0.5, 0.5, 1.5]);
        assert_eq!(format!("{}", l), "3/2");
        assert_eq!(format!("{}", HalfInt::from_int(2)), "2");
    }
}
