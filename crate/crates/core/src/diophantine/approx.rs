//! Best rational approximations of the third kind, and simultaneous
//! Dirichlet approximation by exhaustive search.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::cf::ContinuedFraction;
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};
use crate::interval::RealInterval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Below,
    Above,
}

/// A best approximation `p/q` of the third kind from one side, with weight
/// `q*|q*theta - p|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BestApprox {
    pub frac: BigRational,
    pub side: Side,
    pub weight: RealInterval,
}

/// The value of an expansion, exact when possible.
#[derive(Debug, Clone)]
pub(crate) enum ThetaValue {
    Exact(QuadraticSurd),
    Enclosed(RealInterval),
}

impl ThetaValue {
    pub(crate) fn of(cf: &ContinuedFraction) -> Result<Self> {
        if cf.is_open() {
            Ok(Self::Enclosed(super::cf::evaluate(cf, f64::MIN_POSITIVE).or_else(|_| {
                // Best available enclosure from the known prefix.
                let terms = cf.terms(cf.preperiod().len() + 1);
                let (p, p1, q, q1) = super::cf::convergent_pair(&terms);
                let a = RealInterval::from_rational(&BigRational::new(p.clone(), q.clone()));
                let b = RealInterval::from_rational(&BigRational::new(p + p1, q + q1));
                Ok::<_, Error>(a.hull(&b))
            })?))
        } else {
            Ok(Self::Exact(cf.to_surd()?))
        }
    }

    /// `floor(n * theta)`.
    pub(crate) fn floor_mul(&self, n: &BigInt) -> Result<BigInt> {
        match self {
            Self::Exact(x) => Ok(x.mul_int(n).floor()),
            Self::Enclosed(iv) => {
                let scaled = iv.mul_f64(bigint_f64(n));
                let (lo, hi) = (scaled.lo.floor(), scaled.hi.floor());
                if lo == hi {
                    Ok(BigInt::from(lo as i64))
                } else {
                    Err(Error::EnclosureTooWide(format!("floor({n} * theta)")))
                }
            }
        }
    }

    /// Sign of `x + y * theta`.
    pub(crate) fn sign_linear(&self, x: &BigInt, y: &BigInt) -> Result<Ordering> {
        match self {
            Self::Exact(t) => Ok(t.mul_int(y).add_int(x).signum()),
            Self::Enclosed(iv) => {
                let v = RealInterval::point(bigint_f64(x)) + iv.mul_f64(bigint_f64(y));
                v.cmp_f64(0.0).ok_or_else(|| Error::EnclosureTooWide(format!("sign of {x} + {y} * theta")))
            }
        }
    }

    /// Enclosure of `q * |q*theta - p|`.
    pub(crate) fn weight(&self, p: &BigInt, q: &BigInt) -> RealInterval {
        match self {
            Self::Exact(t) => {
                let v = t.mul_int(q).add_int(&-p).mul_int(q);
                let iv = v.enclosure();
                if iv.lo < 0.0 {
                    -iv
                } else {
                    iv
                }
            }
            Self::Enclosed(iv) => {
                let qf = RealInterval::from_int(q);
                let v = (qf * *iv - RealInterval::from_int(p)) * qf;
                if v.hi <= 0.0 {
                    -v
                } else {
                    v
                }
            }
        }
    }
}

pub(crate) fn bigint_f64(n: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::NAN)
}

/// Best approximations of the third kind from `side` with denominator at most
/// `qmax`, in increasing denominator.
///
/// This is the defining search: for each `q` the closest numerator on the
/// requested side is compared against the running record; an entry is kept
/// only when its weight is strictly smaller than every earlier weight.
pub fn best_approx(theta: &ContinuedFraction, qmax: u64, side: Side) -> Result<Vec<BestApprox>> {
    if qmax == 0 {
        return Err(Error::InvalidInput("qmax must be at least 1".into()));
    }
    if theta.is_rational() {
        return Err(Error::RationalTheta);
    }
    let value = ThetaValue::of(theta)?;
    let mut out: Vec<BestApprox> = Vec::new();
    let mut record: Option<(BigInt, BigInt)> = None;
    for q in 1..=qmax {
        let q = BigInt::from(q);
        let floor = value.floor_mul(&q)?;
        let p = match side {
            Side::Below => floor,
            Side::Above => floor + 1,
        };
        let better = match &record {
            None => true,
            Some((rp, rq)) => {
                // w(q) - w(rq) = (q^2 - rq^2) theta - (q p - rq rp)  (below)
                let dy = &q * &q - rq * rq;
                let dx = &q * &p - rq * rp;
                let ord = match side {
                    Side::Below => value.sign_linear(&-dx, &dy)?,
                    Side::Above => value.sign_linear(&dx, &-dy)?,
                };
                match ord {
                    Ordering::Less => true,
                    Ordering::Greater => false,
                    Ordering::Equal => {
                        return Err(Error::EqualWeights(
                            num_traits::ToPrimitive::to_u64(rq).unwrap_or(0),
                            num_traits::ToPrimitive::to_u64(&q).unwrap_or(0),
                        ))
                    }
                }
            }
        };
        if better {
            out.push(BestApprox { frac: BigRational::new(p.clone(), q.clone()), side, weight: value.weight(&p, &q) });
            record = Some((p, q));
        }
    }
    Ok(out)
}

pub fn best_approx_below(theta: &ContinuedFraction, qmax: u64) -> Result<Vec<BestApprox>> {
    best_approx(theta, qmax, Side::Below)
}

pub fn best_approx_above(theta: &ContinuedFraction, qmax: u64) -> Result<Vec<BestApprox>> {
    best_approx(theta, qmax, Side::Above)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletApprox {
    pub numerators: Vec<BigInt>,
    pub q: u64,
}

/// Smallest `1 <= q <= n` with integers `p_j` such that
/// `|alpha_j - p_j/q| <= 1/(q n^(1/d))` for every `j`.
///
/// The inputs are taken as the exact binary rationals they are, and the
/// inequality is decided exactly in the form `|q alpha_j - p_j|^d * n <= 1`.
pub fn dirichlet_simultaneous(alphas: &[f64], n: u64) -> Result<DirichletApprox> {
    if alphas.is_empty() {
        return Err(Error::InvalidInput("need at least one number to approximate".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    let exact: Vec<BigRational> = alphas
        .iter()
        .map(|&a| BigRational::from_float(a).ok_or_else(|| Error::InvalidInput(format!("non-finite input {a}"))))
        .collect::<Result<_>>()?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for q in 1..=n {
        let qr = BigRational::from_integer(q.into());
        let numerators: Vec<BigInt> = exact.iter().map(|a| (a * &qr + &half).floor().to_integer()).collect();
        if dirichlet_holds(&exact, &numerators, q, n) {
            return Ok(DirichletApprox { numerators, q });
        }
    }
    // Dirichlet's theorem guarantees a solution; reaching this is a bug.
    Err(Error::Undecided("no simultaneous approximation found; this contradicts Dirichlet's theorem".into()))
}

/// Exact check of the simultaneous Dirichlet inequality for one candidate.
pub fn dirichlet_holds(alphas: &[BigRational], numerators: &[BigInt], q: u64, n: u64) -> bool {
    let d = alphas.len() as u32;
    let qr = BigRational::from_integer(q.into());
    let nr = BigRational::from_integer(n.into());
    alphas.iter().zip(numerators).all(|(a, p)| {
        let err = (a * &qr - BigRational::from_integer(p.clone())).abs();
        num_traits::pow(err, d as usize) * &nr <= BigRational::one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn denominators(v: &[BestApprox]) -> Vec<i64> {
        v.iter().map(|b| num_traits::ToPrimitive::to_i64(b.frac.denom()).unwrap()).collect()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn golden_mean_from_below() {
        let phi = ContinuedFraction::golden_mean();
        let below = best_approx_below(&phi, 5).unwrap();
        assert_eq!(denominators(&below), vec![1, 2, 5]);
        assert_eq!(below[2].frac, rat(8, 5));
        assert!(below.iter().all(|b| b.frac < rat(1618034, 1000000)));
    }

    #[test]
    fn golden_mean_from_above_is_only_the_ceiling_up_to_three() {
        // Above-side weights 0.382 (2/1), 1.53 (4/2), 0.438 (5/3): only 2/1 sets a record.
        let phi = ContinuedFraction::golden_mean();
        let above = best_approx_above(&phi, 3).unwrap();
        assert_eq!(denominators(&above), vec![1]);
        assert_eq!(above[0].frac, rat(2, 1));
    }

    #[test]
    fn qmax_one_gives_floor_or_ceiling() {
        let cf: ContinuedFraction = "[0;3,3,(1)]".parse().unwrap();
        assert_eq!(best_approx_below(&cf, 1).unwrap()[0].frac, rat(0, 1));
        assert_eq!(best_approx_above(&cf, 1).unwrap()[0].frac, rat(1, 1));
    }

    #[test]
    fn rational_theta_is_rejected() {
        let cf: ContinuedFraction = "[1;2]".parse().unwrap();
        assert_eq!(best_approx_below(&cf, 4), Err(Error::RationalTheta));
    }

    #[test]
    fn dirichlet_examples() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let hit = dirichlet_simultaneous(&[phi], 10).unwrap();
        assert_eq!(hit.q, 5);
        assert_eq!(hit.numerators, vec![BigInt::from(8)]);
        let exact = vec![BigRational::from_float(phi).unwrap()];
        assert!(dirichlet_holds(&exact, &[BigInt::from(13)], 8, 10));
        let one = dirichlet_simultaneous(&[1.0], 1000).unwrap();
        assert_eq!((one.q, one.numerators[0].clone()), (1, BigInt::from(1)));
        let two = dirichlet_simultaneous(&[2f64.sqrt(), 3f64.sqrt()], 100).unwrap();
        assert!(two.q <= 100);
        for (a, p) in [2f64.sqrt(), 3f64.sqrt()].iter().zip(&two.numerators) {
            let err = (a - bigint_f64(p) / two.q as f64).abs();
            assert!(err <= 1.0 / (two.q as f64 * 10.0) + 1e-15);
        }
    }
}
