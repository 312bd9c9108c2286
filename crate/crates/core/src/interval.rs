//! Closed real intervals with outward rounding.
//!
//! Every arithmetic result is widened by one ulp on each side after the
//! round-to-nearest operation, so the exact result of the operation on any
//! pair of contained reals is contained in the output. Library transcendental
//! functions (`tan`) are assumed accurate to one ulp and are widened by two.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order: [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Smallest interval containing `x` whose endpoints are the floats
    /// adjacent to the round-to-nearest value.
    pub fn around(x: f64) -> Self {
        Self { lo: x.next_down(), hi: x.next_up() }
    }

    pub fn pi() -> Self {
        // f64 PI is the nearest double below pi.
        Self { lo: PI, hi: PI.next_up() }
    }

    pub fn from_int(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    /// Tight enclosure of an exact rational.
    pub fn from_rational(r: &BigRational) -> Self {
        let guess = r.to_f64().unwrap_or(f64::NAN);
        if !guess.is_finite() {
            return if r.is_zero() {
                Self::point(0.0)
            } else if *r > BigRational::zero() {
                Self::new(f64::MAX, f64::INFINITY)
            } else {
                Self::new(f64::NEG_INFINITY, -f64::MAX)
            };
        }
        let mut lo = guess;
        while exact(lo) > *r {
            lo = lo.next_down();
        }
        let mut hi = guess;
        while exact(hi) < *r {
            hi = hi.next_up();
        }
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo).next_up()
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &RealInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Certain comparison against a float: `Some` only when every point of
    /// the interval compares the same way.
    pub fn cmp_f64(&self, x: f64) -> Option<Ordering> {
        if self.hi < x {
            Some(Ordering::Less)
        } else if self.lo > x {
            Some(Ordering::Greater)
        } else if self.lo == x && self.hi == x {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn certainly_lt(&self, other: &RealInterval) -> bool {
        self.hi < other.lo
    }

    pub fn hull(&self, other: &RealInterval) -> Self {
        Self { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Pointwise minimum of two enclosed quantities.
    pub fn min(&self, other: &RealInterval) -> Self {
        Self { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    pub fn recip(&self) -> Self {
        Self::point(1.0) / *self
    }

    pub fn sqrt(&self) -> Self {
        assert!(self.lo >= 0.0, "sqrt of interval with negative part");
        Self { lo: self.lo.sqrt().next_down().max(0.0), hi: self.hi.sqrt().next_up() }
    }

    /// Monotone tangent on an interval inside `[0, pi/2)`.
    pub fn tan(&self) -> Self {
        assert!(self.lo >= 0.0, "tan enclosure needs a non-negative argument");
        let lo = self.lo.tan().next_down().next_down().max(0.0);
        let hi = if self.hi >= std::f64::consts::FRAC_PI_2 { f64::INFINITY } else { self.hi.tan().next_up().next_up() };
        Self { lo, hi }
    }

    pub fn mul_f64(&self, s: f64) -> Self {
        *self * Self::point(s)
    }
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

impl Add for RealInterval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { lo: down(self.lo + rhs.lo), hi: up(self.hi + rhs.hi) }
    }
}

impl Sub for RealInterval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { lo: down(self.lo - rhs.hi), hi: up(self.hi - rhs.lo) }
    }
}

impl Neg for RealInterval {
    type Output = Self;
    fn neg(self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for RealInterval {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let products = [self.lo * rhs.lo, self.lo * rhs.hi, self.hi * rhs.lo, self.hi * rhs.hi];
        let lo = products.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = products.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { lo: down(lo), hi: up(hi) }
    }
}

impl Div for RealInterval {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(rhs.lo > 0.0 || rhs.hi < 0.0, "division by an interval containing zero");
        let quotients = [self.lo / rhs.lo, self.lo / rhs.hi, self.hi / rhs.lo, self.hi / rhs.hi];
        let lo = quotients.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = quotients.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { lo: down(lo), hi: up(hi) }
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.15e}, {:.15e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_enclosure_brackets_a_long_decimal_expansion() {
        let pi = RealInterval::pi();
        let digits: BigRational =
            "314159265358979323846264338327950288/100000000000000000000000000000000000".parse().unwrap();
        assert!(exact(pi.lo) < digits && digits < exact(pi.hi));
    }

    #[test]
    fn rational_enclosure_is_tight() {
        let third = BigRational::new(1.into(), 3.into());
        let iv = RealInterval::from_rational(&third);
        assert!(exact(iv.lo) < third && third < exact(iv.hi));
        assert_eq!(iv.lo.next_up(), iv.hi);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(RealInterval::from_rational(&half), RealInterval::point(0.5));
    }

    #[test]
    fn arithmetic_contains_exact_result() {
        let a = RealInterval::from_rational(&BigRational::new(1.into(), 10.into()));
        let b = RealInterval::from_rational(&BigRational::new(2.into(), 10.into()));
        let sum = a + b;
        let exact_sum = BigRational::new(3.into(), 10.into());
        assert!(exact(sum.lo) <= exact_sum && exact_sum <= exact(sum.hi));
        let q = a / b;
        assert!(q.contains(0.5));
        let p = a * b;
        let exact_p = BigRational::new(2.into(), 100.into());
        assert!(exact(p.lo) <= exact_p && exact_p <= exact(p.hi));
    }

    #[test]
    fn comparisons_are_certain_only_when_disjoint() {
        let iv = RealInterval::new(1.0, 2.0);
        assert_eq!(iv.cmp_f64(3.0), Some(Ordering::Less));
        assert_eq!(iv.cmp_f64(0.5), Some(Ordering::Greater));
        assert_eq!(iv.cmp_f64(1.5), None);
        assert!(iv.certainly_lt(&RealInterval::new(2.5, 3.0)));
        assert!(!iv.certainly_lt(&RealInterval::new(2.0, 3.0)));
    }
}
