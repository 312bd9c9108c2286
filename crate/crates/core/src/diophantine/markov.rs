//! One-sided and two-sided Markov constants.
//!
//! For a convergent `p_n/q_n` of `theta = [a0; a1, ...]`,
//! `q_n |q_n theta - p_n| = 1 / (theta_{n+1} + [0; a_n, ..., a_1])`, where
//! `theta_{n+1} = [a_{n+1}; a_{n+2}, ...]` is the complete quotient. The sign of
//! `theta - p_n/q_n` is `(-1)^n`. For an eventually periodic expansion both
//! terms become periodic in `n`, which makes the lim inf computable exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::approx::{best_approx_below, ThetaValue};
use super::cf::{convergent_pair, ContinuedFraction};
use crate::error::{Error, Result};
use crate::interval::RealInterval;

/// How many periodic quotients of `[0; a_n, ..., a_1]` are used to bound it.
const BACKWARD_DEPTH: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub enclosure: RealInterval,
    /// False when the lower end rests on a heuristic rather than a proof.
    pub certified: bool,
    /// Smallest weight among best approximations from below with `q <= qmax`.
    pub observed_min: Option<f64>,
}

/// `upsilon(theta)`: the lim inf of `q (q theta - p)` over fractions `p/q`
/// below `theta`.
pub fn upsilon(theta: &ContinuedFraction, qmax: u64) -> Result<ConstantEstimate> {
    if theta.is_rational() {
        return Err(Error::RationalTheta);
    }
    let observed_min = best_approx_below(theta, qmax).ok().and_then(|v| v.last().map(|b| b.weight.mid()));
    if theta.is_periodic() {
        let conv = periodic_below_liminf(theta)?;
        // Non-convergents have weight >= 1/2 (Legendre), so they matter only
        // when the convergent lim inf exceeds 1/2.
        let lo = conv.lo.min(0.5);
        return Ok(ConstantEstimate { enclosure: RealInterval::new(lo, conv.hi), certified: true, observed_min });
    }
    // Unknown tail: use the later half of the certified below-convergents.
    let value = ThetaValue::of(theta)?;
    let known = theta.preperiod().len() + 1;
    let weights: Vec<f64> = theta
        .convergents()
        .enumerate()
        .skip(known / 2)
        .filter(|(n, _)| n % 2 == 0)
        .map(|(_, (p, q))| value.weight(&p, &q).mid())
        .collect();
    let heuristic = weights.iter().copied().fold(f64::INFINITY, f64::min);
    if !heuristic.is_finite() {
        return Err(Error::EnclosureTooWide("too few certified quotients to estimate upsilon".into()));
    }
    Ok(ConstantEstimate { enclosure: RealInterval::point(heuristic), certified: false, observed_min })
}

/// `mu(theta) = min(upsilon(theta), upsilon(1/theta))` for `theta > 0`.
pub fn markov(theta: &ContinuedFraction, qmax: u64) -> Result<ConstantEstimate> {
    if theta.is_rational() {
        return Err(Error::RationalTheta);
    }
    let direct = upsilon(theta, qmax)?;
    let inverse = upsilon(&theta.reciprocal()?, qmax)?;
    Ok(ConstantEstimate {
        enclosure: direct.enclosure.min(&inverse.enclosure),
        certified: direct.certified && inverse.certified,
        observed_min: match (direct.observed_min, inverse.observed_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        },
    })
}

/// Periodic index helper for `a_i` (valid for `i >= 1`).
fn quotient(cf: &ContinuedFraction, i: usize) -> BigInt {
    cf.term(i).expect("periodic expansion has every term")
}

/// Purely periodic complete quotient `[a_i; a_{i+1}, ...]` for `i > preperiod`.
fn complete_quotient(cf: &ContinuedFraction, i: usize) -> Result<ContinuedFraction> {
    let p = cf.period().len();
    let period: Vec<BigInt> = (1..=p).map(|k| quotient(cf, i + k)).collect();
    ContinuedFraction::new(quotient(cf, i), Vec::new(), period)
}

/// `lim [0; a_j, a_{j-1}, ..., a_1]` along `j` in one residue class: the
/// backward expansion continued periodically.
fn backward_limit(cf: &ContinuedFraction, j: usize) -> Result<ContinuedFraction> {
    let pre = cf.preperiod().len();
    let p = cf.period().len();
    let period: Vec<BigInt> = (0..p)
        .map(|k| {
            let offset = ((j - 1 - pre) as i64 - k as i64).rem_euclid(p as i64) as usize;
            cf.period()[offset].clone()
        })
        .collect();
    ContinuedFraction::new(BigInt::zero(), Vec::new(), period)
}

/// Exact lim inf of below-convergent weights for a periodic expansion.
fn periodic_below_liminf(cf: &ContinuedFraction) -> Result<RealInterval> {
    let pre = cf.preperiod().len();
    let p = cf.period().len();
    let mut best: Option<RealInterval> = None;
    for j in (pre + 1)..(pre + 1 + 2 * p) {
        if j % 2 != 0 {
            continue;
        }
        let eta = complete_quotient(cf, j + 1)?.to_surd()?;
        let rho = backward_limit(cf, j)?.to_surd()?;
        let w = (&eta + &rho).recip()?.enclosure();
        best = Some(match best {
            None => w,
            Some(b) => b.min(&w),
        });
    }
    Ok(best.expect("a period contributes at least one even index"))
}

/// Certified lower bound on `inf_{j >= start} q_j |q_j theta - p_j|` over the
/// convergents of a periodic expansion.
pub(crate) fn convergent_weight_lower_bound(cf: &ContinuedFraction, start: usize) -> Result<f64> {
    if cf.is_rational() {
        return Ok(0.0);
    }
    if !cf.is_periodic() {
        return Err(Error::EnclosureTooWide("tail of an expansion with unknown quotients".into()));
    }
    let value = ThetaValue::of(cf)?;
    let pre = cf.preperiod().len();
    let p = cf.period().len();
    let switch = start.max(pre + BACKWARD_DEPTH + 1);
    let mut bound = f64::INFINITY;
    for (j, (pj, qj)) in cf.convergents().enumerate().take(switch).skip(start) {
        debug_assert!(j >= start);
        bound = bound.min(value.weight(&pj, &qj).lo);
    }
    for r in 0..p {
        let j = switch + r;
        let eta = complete_quotient(cf, j + 1)?.to_surd()?.enclosure();
        let backward: Vec<BigInt> = (0..BACKWARD_DEPTH).map(|i| quotient(cf, j - i)).collect();
        let rho_hi = backward_sup(&backward);
        let denom = eta.hi + rho_hi;
        let w = RealInterval::point(1.0) / RealInterval::point(denom).hull(&RealInterval::around(denom));
        bound = bound.min(w.lo);
    }
    Ok(bound)
}

/// Upper end of the set of values `[0; b_1, ..., b_K, t]` with `t >= 1`.
fn backward_sup(b: &[BigInt]) -> f64 {
    let mut with_inf = vec![BigInt::zero()];
    with_inf.extend(b.iter().cloned());
    let mut with_one = with_inf.clone();
    *with_one.last_mut().unwrap() += BigInt::one();
    let (p1, _, q1, _) = convergent_pair(&with_inf);
    let (p2, _, q2, _) = convergent_pair(&with_one);
    let a = RealInterval::from_rational(&BigRational::new(p1, q1));
    let c = RealInterval::from_rational(&BigRational::new(p2, q2));
    a.hi.max(c.hi)
}

/// Largest convergent index `n` with `q_n <= bound`.
pub(crate) fn last_index_with_denominator_at_most(cf: &ContinuedFraction, bound: &BigInt) -> usize {
    let mut last = 0;
    for (n, (_, q)) in cf.convergents().enumerate() {
        if &q > bound {
            break;
        }
        last = n;
        if n > 100_000 {
            break;
        }
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv_sqrt5() -> f64 {
        1.0 / 5f64.sqrt()
    }

    #[test]
    fn golden_mean_constants_equal_inverse_sqrt5() {
        let phi = ContinuedFraction::golden_mean();
        let u = upsilon(&phi, 100).unwrap();
        assert!(u.certified);
        assert!(u.enclosure.width() < 1e-15);
        assert!((u.enclosure.mid() - inv_sqrt5()).abs() < 1e-15);
        let inv = upsilon(&phi.reciprocal().unwrap(), 100).unwrap();
        assert!((inv.enclosure.mid() - inv_sqrt5()).abs() < 1e-15);
        let mu = markov(&phi, 100).unwrap();
        assert!((mu.enclosure.mid() - inv_sqrt5()).abs() < 1e-15);
    }

    #[test]
    fn sqrt2_markov_constant() {
        // sqrt 2 = [1;(2)]: weights tend to 1/(2 sqrt 2) on both sides.
        let cf: ContinuedFraction = "[1;(2)]".parse().unwrap();
        let mu = markov(&cf, 10).unwrap();
        assert!((mu.enclosure.mid() - 1.0 / 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn observed_minimum_decreases_with_qmax() {
        let phi = ContinuedFraction::golden_mean();
        let small = upsilon(&phi, 10).unwrap().observed_min.unwrap();
        let large = upsilon(&phi, 10_000).unwrap().observed_min.unwrap();
        assert!(large <= small);
        assert!((large - inv_sqrt5()).abs() < 1e-6);
    }

    #[test]
    fn tail_bound_is_below_every_later_weight() {
        let phi = ContinuedFraction::golden_mean();
        // Weights approach 1/sqrt 5 from both sides at rate phi^(-2j).
        let bound = convergent_weight_lower_bound(&phi, 10).unwrap();
        assert!(bound < inv_sqrt5());
        assert!(inv_sqrt5() - bound < 1e-4);
        let later = convergent_weight_lower_bound(&phi, 30).unwrap();
        assert!(bound <= later && later < inv_sqrt5());
        assert!(inv_sqrt5() - later < 1e-10);
    }

    #[test]
    fn rational_theta_is_rejected() {
        let cf: ContinuedFraction = "[2;3]".parse().unwrap();
        assert_eq!(upsilon(&cf, 5), Err(Error::RationalTheta));
    }
}
