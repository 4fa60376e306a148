//! Closed intervals, exact (rational endpoints) and floating.
//!
//! Witness supports and output windows all have rational endpoints, so the
//! pattern-level questions ("can this sign/class pattern reach the window?")
//! are answered exactly with [`RatInterval`]. Floating [`Interval`]s carry
//! enclosures of quantities built from the dispersion relation, which is
//! irrational; those are widened outward by a few ulps after every operation.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg};

pub type Rational = Ratio<i64>;

/// Shorthand for the rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Ratio::new(num, den)
}

pub fn rat_to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn zero() -> Self {
        Self::point(Rational::from_integer(0))
    }

    pub fn width(&self) -> Rational {
        self.hi - self.lo
    }

    pub fn contains(&self, x: Rational) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &RatInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Gap between the two intervals, zero when they intersect.
    pub fn distance(&self, other: &RatInterval) -> Rational {
        let zero = Rational::from_integer(0);
        if self.hi < other.lo {
            other.lo - self.hi
        } else if other.hi < self.lo {
            self.lo - other.hi
        } else {
            zero
        }
    }

    /// `k * self` for a nonnegative integer multiplicity (Minkowski sum of k copies).
    pub fn times(&self, k: u32) -> Self {
        let k = Rational::from_integer(k as i64);
        Self {
            lo: self.lo * k,
            hi: self.hi * k,
        }
    }

    pub fn to_f64(&self) -> Interval {
        Interval::new(rat_to_f64(self.lo), rat_to_f64(self.hi))
    }
}

impl Add for RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: Self) -> Self {
        Self {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Neg for RatInterval {
    type Output = RatInterval;
    fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Floating closed interval. Arithmetic rounds outward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero_inside(&self) -> bool {
        self.lo < 0.0 && 0.0 < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Widen by `ulps` units in the last place on each side.
    pub fn widened(&self, ulps: u32) -> Interval {
        let mut lo = self.lo;
        let mut hi = self.hi;
        for _ in 0..ulps {
            lo = lo.next_down();
            hi = hi.next_up();
        }
        Interval { lo, hi }
    }

    pub fn scale(&self, c: f64) -> Interval {
        let (a, b) = (self.lo * c, self.hi * c);
        Interval::new(a.min(b), a.max(b)).widened(1)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Self) -> Self {
        Interval {
            lo: (self.lo + rhs.lo).next_down(),
            hi: (self.hi + rhs.hi).next_up(),
        }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Self {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sums_are_exact() {
        let a = RatInterval::new(rat(31, 3), rat(65, 6)).unwrap();
        let c = RatInterval::new(rat(20, 1), rat(61, 3)).unwrap();
        let s = a + a + (-c);
        assert_eq!(s.lo, rat(1, 3));
        assert_eq!(s.hi, rat(5, 3));
    }

    #[test]
    fn distance_and_intersection() {
        let a = RatInterval::new(rat(0, 1), rat(1, 1)).unwrap();
        let b = RatInterval::new(rat(3, 1), rat(4, 1)).unwrap();
        assert_eq!(a.distance(&b), rat(2, 1));
        assert!(!a.intersects(&b));
        assert!(a.intersects(&RatInterval::point(rat(1, 1))));
        assert!(RatInterval::new(rat(2, 1), rat(1, 1)).is_none());
    }

    #[test]
    fn float_addition_rounds_outward() {
        let a = Interval::point(0.1);
        let s = a + Interval::point(0.2);
        assert!(s.lo < 0.30000000000000004 && s.hi >= 0.30000000000000004);
        assert!(s.contains(0.1 + 0.2));
    }
}
