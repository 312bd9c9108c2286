//! Exact arithmetic in a real quadratic field: numbers `(a + b*sqrt(d)) / c`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::interval::RealInterval;

/// `(a + b*sqrt(d)) / c` in lowest terms with `c > 0`.
///
/// `d` is squarefree and at least 2 whenever `b != 0`; rationals carry
/// `b == 0` and `d == 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadraticSurd {
    pub fn new(a: BigInt, b: BigInt, d: BigInt, c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidInput("zero denominator in quadratic number".into()));
        }
        if d.is_negative() {
            return Err(Error::InvalidInput(format!("negative radicand {d}")));
        }
        let (square, free) = split_square(&d);
        let mut s = Self { a, b: b * square, c, d: free };
        if s.d.is_one() {
            s.a += &s.b;
            s.b = BigInt::zero();
        }
        if s.b.is_zero() || s.d.is_zero() {
            s.b = BigInt::zero();
            s.d = BigInt::zero();
        }
        s.normalize();
        Ok(s)
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self { a: n, b: BigInt::zero(), c: BigInt::one(), d: BigInt::zero() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self { a: r.numer().clone(), b: BigInt::zero(), c: r.denom().clone(), d: BigInt::zero() }
    }

    pub fn golden_mean() -> Self {
        Self::new(1.into(), 1.into(), 5.into(), 2.into()).expect("valid literal")
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.d, &self.c)
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    fn normalize(&mut self) {
        if self.c.is_negative() {
            self.a = -&self.a;
            self.b = -&self.b;
            self.c = -&self.c;
        }
        let g = self.a.gcd(&self.b).gcd(&self.c);
        if !g.is_zero() && !g.is_one() {
            self.a /= &g;
            self.b /= &g;
            self.c /= &g;
        }
    }

    /// Sign of the numerator `a + b*sqrt(d)`, which is the sign of the value.
    pub fn signum(&self) -> Ordering {
        numerator_sign(&self.a, &self.b, &self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.div_floor(&self.c);
        }
        // For irrational sqrt(m) with s = isqrt(m), no integer lies strictly
        // between s and sqrt(m) or between -sqrt(m) and -s-1.
        let m = &self.b * &self.b * &self.d;
        let s = m.sqrt();
        let shifted = if self.b.is_positive() { &self.a + &s } else { &self.a - &s - 1 };
        shifted.div_floor(&self.c)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self.clone()).floor()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("reciprocal of zero".into()));
        }
        // c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d)
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        let mut r = Self { a: &self.c * &self.a, b: -(&self.c * &self.b), c: norm, d: self.d.clone() };
        r.normalize();
        Ok(r)
    }

    fn common_radicand(&self, other: &Self) -> BigInt {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "arithmetic across different quadratic fields");
                self.d.clone()
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        let c = self.c.to_f64().unwrap_or(f64::NAN);
        if self.is_rational() {
            return a / c;
        }
        (a + b * d.sqrt()) / c
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        let mut r = Self { a: &self.a * n, b: &self.b * n, c: self.c.clone(), d: self.d.clone() };
        if r.b.is_zero() {
            r.d = BigInt::zero();
        }
        r.normalize();
        r
    }

    /// Enclosure of the value, as tight as double precision allows. Computed
    /// from convergents of the exact expansion, so there is no cancellation.
    pub fn enclosure(&self) -> RealInterval {
        if let Some(r) = self.to_rational() {
            return RealInterval::from_rational(&r);
        }
        let (mut p, mut p_prev) = (BigInt::one(), BigInt::zero());
        let (mut q, mut q_prev) = (BigInt::zero(), BigInt::one());
        let mut current = self.clone();
        let mut last: Option<RealInterval> = None;
        loop {
            let a = current.floor();
            let p_next = &a * &p + &p_prev;
            let q_next = &a * &q + &q_prev;
            p_prev = std::mem::replace(&mut p, p_next);
            q_prev = std::mem::replace(&mut q, q_next);
            if !q_prev.is_zero() {
                let here = RealInterval::from_rational(&BigRational::new(p.clone(), q.clone()));
                let before = RealInterval::from_rational(&BigRational::new(p_prev.clone(), q_prev.clone()));
                let iv = here.hull(&before);
                if last == Some(iv) {
                    return iv;
                }
                last = Some(iv);
            }
            // Irrational, so the fractional part never vanishes.
            current = current.add_int(&-a).recip().expect("irrational complete quotient is nonzero");
        }
    }

    pub fn add_int(&self, n: &BigInt) -> Self {
        let mut r = Self { a: &self.a + n * &self.c, b: self.b.clone(), c: self.c.clone(), d: self.d.clone() };
        r.normalize();
        r
    }
}

fn numerator_sign(a: &BigInt, b: &BigInt, d: &BigInt) -> Ordering {
    let sa = a.sign();
    let sb = if d.is_zero() { num_bigint::Sign::NoSign } else { b.sign() };
    use num_bigint::Sign::*;
    match (sa, sb) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
        (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
        (Plus, Minus) => (a * a).cmp(&(b * b * d)),
        (Minus, Plus) => (b * b * d).cmp(&(a * a)),
    }
}

/// Splits `n = s^2 * f` with `f` squarefree (trial division, so intended
/// for radicands of modest size).
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    let mut square = BigInt::one();
    let mut free = n.clone();
    let mut p = BigInt::from(2u32);
    while &p * &p <= free {
        let pp = &p * &p;
        while (&free % &pp).is_zero() {
            free /= &pp;
            square *= &p;
        }
        p += 1;
    }
    (square, free)
}

impl Neg for QuadraticSurd {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b, c: self.c, d: self.d }
    }
}

impl Add for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn add(self, rhs: Self) -> QuadraticSurd {
        let d = self.common_radicand(rhs);
        let mut r = QuadraticSurd {
            a: &self.a * &rhs.c + &rhs.a * &self.c,
            b: &self.b * &rhs.c + &rhs.b * &self.c,
            c: &self.c * &rhs.c,
            d,
        };
        if r.b.is_zero() {
            r.d = BigInt::zero();
        }
        r.normalize();
        r
    }
}

impl Sub for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn sub(self, rhs: Self) -> QuadraticSurd {
        self + &(-rhs.clone())
    }
}

impl Mul for &QuadraticSurd {
    type Output = QuadraticSurd;
    fn mul(self, rhs: Self) -> QuadraticSurd {
        let d = self.common_radicand(rhs);
        let mut r = QuadraticSurd {
            a: &self.a * &rhs.a + &self.b * &rhs.b * &d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            c: &self.c * &rhs.c,
            d,
        };
        if r.b.is_zero() {
            r.d = BigInt::zero();
        }
        r.normalize();
        r
    }
}

impl Div for &QuadraticSurd {
    type Output = Result<QuadraticSurd>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Result<QuadraticSurd> {
        Ok(self * &rhs.recip()?)
    }
}

impl PartialOrd for QuadraticSurd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticSurd {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            }
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "({}{}{}*sqrt({}))/{}", self.a, sign, self.b.abs(), self.d, self.c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(a: i64, b: i64, d: i64, c: i64) -> QuadraticSurd {
        QuadraticSurd::new(a.into(), b.into(), d.into(), c.into()).unwrap()
    }

    #[test]
    fn normalizes_squares_and_signs() {
        assert_eq!(s(2, 2, 20, 4), s(1, 2, 5, 2));
        assert_eq!(s(1, 3, 4, 1), QuadraticSurd::from_integer(7.into()));
        assert_eq!(s(-1, -1, 5, -2), QuadraticSurd::golden_mean());
        assert!(s(3, 0, 7, 2).is_rational());
    }

    #[test]
    fn floor_and_ceil_are_exact() {
        let phi = QuadraticSurd::golden_mean();
        assert_eq!(phi.floor(), 1.into());
        assert_eq!(phi.ceil(), 2.into());
        assert_eq!((-phi.clone()).floor(), (-2).into());
        // 1000*sqrt(2) = 1414.2135...
        assert_eq!(s(0, 1000, 2, 1).floor(), 1414.into());
        assert_eq!(s(0, -1000, 2, 1).floor(), (-1415).into());
        assert_eq!(s(7, 0, 0, 2).floor(), 3.into());
        assert_eq!(s(-7, 0, 0, 2).floor(), (-4).into());
    }

    #[test]
    fn field_operations() {
        let phi = QuadraticSurd::golden_mean();
        // phi^2 = phi + 1
        let sq = &phi * &phi;
        assert_eq!(sq, phi.add_int(&1.into()));
        // 1/phi = phi - 1
        assert_eq!(phi.recip().unwrap(), phi.add_int(&(-1).into()));
        assert!(phi > QuadraticSurd::from_integer(1.into()));
        assert!(phi < s(162, 0, 0, 100));
        assert!(phi > s(161, 0, 0, 100));
    }

    #[test]
    fn enclosure_survives_cancellation() {
        // phi^-40 = (L40 - F40 sqrt 5)/2 ~ 4.2e-9
        let x = s(228826127, -102334155, 5, 2);
        let iv = x.enclosure();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expected = phi.powi(-40);
        assert!(iv.width() < 1e-23, "{iv}");
        assert!((iv.mid() - expected).abs() < 1e-22);
        let phi_iv = QuadraticSurd::golden_mean().enclosure();
        assert!(phi_iv.contains(phi) || phi_iv.lo.next_up() == phi || phi_iv.hi.next_down() == phi);
    }

    #[test]
    fn sign_of_near_cancellation() {
        // 99 - 70 sqrt 2 = 0.00505... > 0
        assert_eq!(s(99, -70, 2, 1).signum(), Ordering::Greater);
        assert_eq!(s(-99, 70, 2, 1).signum(), Ordering::Less);
    }
}
