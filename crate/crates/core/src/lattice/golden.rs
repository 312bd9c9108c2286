//! Exact gap counting on the golden-mean lattice `a = phi b` with `alpha < 0`.
//!
//! `A_j = (2 pi / a) (phi^{2j} - phi^{-2j}) / sqrt 5 * tan(pi/2 phi^{-2j})`.
//! There are exactly `N` gaps when `A_N < |alpha| <= A_{N+1}`, none when
//! `|alpha| <= A_1`, and infinitely many when `|alpha| > pi^2 / (sqrt 5 a)`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::diophantine::QuadraticSurd;
use crate::error::{Error, Result};
use crate::interval::RealInterval;

/// Terms of the tangent series summed explicitly in the defect.
const SERIES_TERMS: usize = 40;
/// Largest index tried when bracketing a coupling between consecutive `A_j`.
const MAX_INDEX: u64 = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapCount {
    Finite(u64),
    Infinite,
}

/// Coefficients `c_n` of `tan z = sum c_n z^(2n-1)`, from the tangent numbers.
fn tan_coefficients() -> &'static [RealInterval] {
    static COEFFS: OnceLock<Vec<RealInterval>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let n = SERIES_TERMS + 1;
        let mut t: Vec<BigInt> = vec![BigInt::from(0); n + 1];
        t[1] = BigInt::one();
        for k in 2..=n {
            t[k] = BigInt::from(k - 1) * &t[k - 1];
        }
        for k in 2..=n {
            for j in k..=n {
                t[j] = BigInt::from(j - k) * &t[j - 1] + BigInt::from(j - k + 2) * &t[j];
            }
        }
        let mut factorial = BigInt::one();
        let mut out = Vec::with_capacity(n);
        for (k, tk) in t.iter().enumerate().skip(1) {
            // (2k - 1)!
            let lo = if k == 1 { 1 } else { 2 * k - 2 };
            for f in lo..=(2 * k - 1) {
                factorial *= BigInt::from(f);
            }
            out.push(RealInterval::from_rational(&BigRational::new(tk.clone(), factorial.clone())));
        }
        out
    })
}

/// `phi^(-2j)` as an exact quadratic number.
fn phi_power(j: u64) -> QuadraticSurd {
    let step = QuadraticSurd::golden_mean().recip().expect("phi is nonzero");
    let step = &step * &step;
    let mut x = QuadraticSurd::from_integer(BigInt::one());
    for _ in 0..j {
        x = &x * &step;
    }
    x
}

/// `pi^2 / sqrt 5 - a A_j`, which is positive and decreasing in `j`.
///
/// With `z = pi/2 phi^(-2j)` this equals `(2 pi / sqrt 5) g(z)` where
/// `g(z) = (2/pi) z tan z - (pi/2)(tan z / z - 1)`, expanded in powers of `z`
/// so that no cancellation occurs for large `j`.
pub fn golden_defect(j: u64) -> Result<RealInterval> {
    if j == 0 {
        return Err(Error::InvalidInput("index j must be at least 1".into()));
    }
    let x = phi_power(j).enclosure();
    let pi = RealInterval::pi();
    let half_pi = pi.mul_f64(0.5);
    let two_over_pi = RealInterval::point(2.0) / pi;
    let z = half_pi * x;
    let z2 = z * z;
    let c = tan_coefficients();
    let mut sum = RealInterval::point(0.0);
    let mut power = z2;
    for n in 0..SERIES_TERMS {
        let coefficient = two_over_pi * c[n] - half_pi * c[n + 1];
        sum = sum + coefficient * power;
        power = power * z2;
    }
    // |coefficient of z^(2n)| <= 4.3 (2/pi)^(2n), and (2/pi) z = x.
    let xh = x.hi;
    let rest = 4.3 * xh.powi(2 * SERIES_TERMS as i32 + 2) / (1.0 - xh * xh);
    let sum = sum + RealInterval::new(-rest, rest);
    let scale = pi.mul_f64(2.0) / RealInterval::point(5.0).sqrt();
    Ok(scale * sum)
}

fn limit(a: f64) -> RealInterval {
    let pi = RealInterval::pi();
    pi * pi / RealInterval::point(5.0).sqrt() / RealInterval::point(a)
}

fn check_length(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("edge length a must be positive, got {a}")))
    }
}

/// Enclosure of `A_j` for edge length `a`.
pub fn a_sequence(j: u64, a: f64) -> Result<RealInterval> {
    check_length(a)?;
    let pi = RealInterval::pi();
    let total = pi * pi / RealInterval::point(5.0).sqrt() - golden_defect(j)?;
    Ok(total / RealInterval::point(a))
}

fn negative_coupling(alpha: f64) -> Result<f64> {
    if alpha == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    if !(alpha < 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!("this count applies to attractive coupling alpha < 0, got {alpha}")));
    }
    Ok(-alpha)
}

/// All `m <= mmax` with `(2 pi m / a) tan(pi/2 (ceil(m phi) - m phi)) < |alpha|`.
pub fn count_m_solutions(alpha: f64, a: f64, mmax: u64) -> Result<Vec<u64>> {
    let s = negative_coupling(alpha)?;
    check_length(a)?;
    if mmax == 0 {
        return Err(Error::InvalidInput("mmax must be at least 1".into()));
    }
    let phi = QuadraticSurd::golden_mean();
    let phi_iv = phi.enclosure();
    let scale = RealInterval::pi().mul_f64(2.0) / RealInterval::point(a);
    let half_pi = RealInterval::pi().mul_f64(0.5);
    let value = |x: RealInterval, m: u64| scale.mul_f64(m as f64) * (half_pi * x).tan();
    let mut out = Vec::new();
    for m in 1..=mmax {
        let me = phi_iv.mul_f64(m as f64);
        let quick = if me.lo.ceil() == me.hi.ceil() && me.hi.ceil() != me.hi {
            let x = RealInterval::point(me.hi.ceil()) - me;
            Some(value(RealInterval::new(x.lo.max(0.0), x.hi), m))
        } else {
            None
        };
        let t = match quick {
            Some(t) if t.cmp_f64(s).is_some() => t,
            _ => {
                let exact = phi.mul_int(&BigInt::from(m));
                let x = (-exact.clone()).add_int(&exact.ceil()).enclosure();
                value(x, m)
            }
        };
        match t.cmp_f64(s) {
            Some(std::cmp::Ordering::Less) => out.push(m),
            Some(_) => {}
            None => {
                return Err(Error::Undecided(format!(
                    "|alpha| = {s} lies within the enclosure {t} of the term for m = {m}"
                )))
            }
        }
    }
    Ok(out)
}

/// Number of gaps of the golden-mean lattice with edge `a` and `alpha < 0`.
pub fn predict_gap_count_golden(alpha: f64, a: f64) -> Result<GapCount> {
    let s = negative_coupling(alpha)?;
    check_length(a)?;
    let lim = limit(a);
    if s > lim.hi {
        return Ok(GapCount::Infinite);
    }
    if s >= lim.lo {
        return Err(Error::Undecided(format!("|alpha| = {s} lies within the enclosure {lim} of pi^2/(sqrt 5 a)")));
    }
    for j in 1..=MAX_INDEX {
        let aj = a_sequence(j, a)?;
        match aj.cmp_f64(s) {
            Some(std::cmp::Ordering::Greater) => return Ok(GapCount::Finite(j - 1)),
            Some(_) => {}
            None => return Err(Error::Undecided(format!("|alpha| = {s} lies within the enclosure {aj} of A_{j}"))),
        }
    }
    Err(Error::Undecided(format!("|alpha| = {s} is closer to pi^2/(sqrt 5 a) than A_{MAX_INDEX}")))
}

/// `F_n` for small `n`.
pub fn fibonacci(n: u64) -> BigInt {
    let (mut x, mut y) = (BigInt::from(0), BigInt::one());
    for _ in 0..n {
        let next = &x + &y;
        x = std::mem::replace(&mut y, next);
    }
    x
}

/// Scan range that covers the gaps of a golden-mean lattice predicted to have
/// `n` gaps: `(F_{2n+2} + 1) pi max(1/a, 1/b)`.
pub fn golden_kmax(n: u64, a: f64, b: f64) -> f64 {
    let f = num_traits::ToPrimitive::to_f64(&fibonacci(2 * n + 2)).unwrap_or(f64::INFINITY);
    (f + 1.0) * std::f64::consts::PI * (1.0 / a).max(1.0 / b)
}
