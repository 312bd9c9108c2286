//! The thresholds `gamma_+` and `gamma_-` and the finite-gap bound, and the
//! resulting classification of the gap regime.
//!
//! `gamma_+ = min over eta in {theta, 1/theta} of inf over m >= 1 of
//! (2 pi / l_eta) m tan(pi/2 (m eta - floor(m eta)))` with `l_theta = b` and
//! `l_{1/theta} = a`; `gamma_-` uses `ceil(m eta) - m eta` instead.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{LatticeParams, DEFAULT_M};
use crate::diophantine::cf::{cf_expand, ExpansionSource};
use crate::diophantine::markov::{convergent_weight_lower_bound, last_index_with_denominator_at_most};
use crate::diophantine::{upsilon, QuadraticSurd};
use crate::error::{Error, Result};
use crate::interval::RealInterval;

/// Lattice parameters with the edge ratio `theta = a/b` known exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactLattice {
    pub theta: QuadraticSurd,
    pub a: RealInterval,
    pub b: RealInterval,
    pub alpha: f64,
}

impl ExactLattice {
    /// Lattice with `b` given and `a = theta * b`.
    pub fn with_b(theta: QuadraticSurd, b: f64, alpha: f64) -> Result<Self> {
        if theta.signum() != std::cmp::Ordering::Greater {
            return Err(Error::InvalidInput(format!("edge ratio must be positive, got {theta}")));
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidInput(format!("edge length b must be positive, got {b}")));
        }
        let b_iv = RealInterval::point(b);
        Ok(Self { a: theta.enclosure() * b_iv, b: b_iv, theta, alpha })
    }

    /// Lattice with `a` given and `b = a / theta`.
    pub fn with_a(theta: QuadraticSurd, a: f64, alpha: f64) -> Result<Self> {
        if theta.signum() != std::cmp::Ordering::Greater {
            return Err(Error::InvalidInput(format!("edge ratio must be positive, got {theta}")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidInput(format!("edge length a must be positive, got {a}")));
        }
        let a_iv = RealInterval::point(a);
        Ok(Self { b: a_iv / theta.enclosure(), a: a_iv, theta, alpha })
    }

    /// The golden-mean lattice `a = phi b`.
    pub fn golden(a: f64, alpha: f64) -> Result<Self> {
        Self::with_a(QuadraticSurd::golden_mean(), a, alpha)
    }

    /// Double-precision parameters for scanning.
    pub fn params(&self) -> Result<LatticeParams> {
        LatticeParams::new(self.a.mid(), self.b.mid(), self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    NoGaps,
    FiniteNonzero,
    Infinite,
    BoundaryUndecided,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::NoGaps => "no-gaps",
            Regime::FiniteNonzero => "finite-nonzero",
            Regime::Infinite => "infinite",
            Regime::BoundaryUndecided => "boundary-undecided",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    /// `gamma_+` for `alpha > 0`, `gamma_-` for `alpha < 0`.
    pub gamma: RealInterval,
    /// Below this `|alpha|` there are at most finitely many gaps; above it
    /// infinitely many.
    pub finite_bound: RealInterval,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rounding {
    Floor,
    Ceil,
}

fn two_pi() -> RealInterval {
    RealInterval::pi().mul_f64(2.0)
}

/// `(2 pi / l) m tan(pi/2 x)`.
fn term(scale: RealInterval, m: u64, x: RealInterval) -> RealInterval {
    let z = RealInterval::pi().mul_f64(0.5) * x;
    scale.mul_f64(m as f64) * RealInterval::new(z.lo.max(0.0), z.hi).tan()
}

/// Distance from `m eta` to the integer below (`Floor`) or above (`Ceil`),
/// exactly.
fn fractional_exact(eta: &QuadraticSurd, m: u64, rounding: Rounding) -> RealInterval {
    let me = eta.mul_int(&BigInt::from(m));
    let x = match rounding {
        Rounding::Floor => me.add_int(&-me.floor()),
        Rounding::Ceil => (-me.clone()).add_int(&me.ceil()),
    };
    x.enclosure()
}

/// The same distance from a floating enclosure of `eta`, or `None` when the
/// integer part is not certain.
fn fractional_float(eta: RealInterval, m: u64, rounding: Rounding) -> Option<RealInterval> {
    let me = eta.mul_f64(m as f64);
    let (fl, fh) = (me.lo.floor(), me.hi.floor());
    if fl != fh || me.lo == fl {
        return None;
    }
    let x = match rounding {
        Rounding::Floor => me - RealInterval::point(fl),
        Rounding::Ceil => RealInterval::point(fl + 1.0) - me,
    };
    Some(RealInterval::new(x.lo.max(0.0), x.hi.min(1.0)))
}

fn gamma(lattice: &ExactLattice, m_max: u64, rounding: Rounding) -> Result<RealInterval> {
    if lattice.theta.is_rational() {
        return Err(Error::RationalTheta);
    }
    if m_max == 0 {
        return Err(Error::InvalidInput("truncation index M must be at least 1".into()));
    }
    let inverse = lattice.theta.recip()?;
    let mut lo = f64::INFINITY;
    let mut hi = f64::INFINITY;
    for (eta, ell) in [(&lattice.theta, lattice.b), (&inverse, lattice.a)] {
        let scale = two_pi() / ell;
        let eta_iv = eta.enclosure();
        let mut terms: Vec<(u64, RealInterval)> = (1..=m_max)
            .map(|m| {
                let x = fractional_float(eta_iv, m, rounding).unwrap_or_else(|| fractional_exact(eta, m, rounding));
                (m, term(scale, m, x))
            })
            .collect();
        let mut best_hi = terms.iter().map(|t| t.1.hi).fold(f64::INFINITY, f64::min);
        // Sharpen every term that could still be the minimum.
        for (m, t) in terms.iter_mut() {
            if t.lo <= best_hi {
                *t = term(scale, *m, fractional_exact(eta, *m, rounding));
                best_hi = best_hi.min(t.hi);
            }
        }
        let direct_lo = terms.iter().map(|t| t.1.lo).fold(f64::INFINITY, f64::min);
        // Tail m > M: tan z >= z and m * dist(m eta, Z) >= inf of convergent
        // weights from the last convergent with denominator <= M + 1 on.
        let cf = cf_expand(&ExpansionSource::Exact(eta.clone()), 1)?;
        let start = last_index_with_denominator_at_most(&cf, &BigInt::from(m_max + 1));
        let weight = convergent_weight_lower_bound(&cf, start)?;
        let pi = RealInterval::pi();
        let tail = (pi * pi).mul_f64(weight) / ell;
        lo = lo.min(direct_lo).min(tail.lo);
        hi = hi.min(best_hi);
    }
    Ok(RealInterval::new(lo.min(hi), hi))
}

/// Enclosure of `gamma_+`, truncating the infimum at `m_max` with a
/// certified bound on the remaining terms.
pub fn gamma_plus(lattice: &ExactLattice, m_max: u64) -> Result<RealInterval> {
    gamma(lattice, m_max, Rounding::Floor)
}

/// Enclosure of `gamma_-`.
pub fn gamma_minus(lattice: &ExactLattice, m_max: u64) -> Result<RealInterval> {
    gamma(lattice, m_max, Rounding::Ceil)
}

/// `pi^2 min(upsilon(theta)/l1, upsilon(1/theta)/l2)` with `(l1, l2) = (b, a)`
/// for `alpha > 0` and `(a, b)` for `alpha < 0`.
fn finite_bound(lattice: &ExactLattice) -> Result<RealInterval> {
    let cf = cf_expand(&ExpansionSource::Exact(lattice.theta.clone()), 1)?;
    let direct = upsilon(&cf, 1)?.enclosure;
    let inverse = upsilon(&cf.reciprocal()?, 1)?.enclosure;
    let (l1, l2) = if lattice.alpha > 0.0 { (lattice.b, lattice.a) } else { (lattice.a, lattice.b) };
    let pi = RealInterval::pi();
    let pi2 = pi * pi;
    Ok((pi2 * direct / l1).min(&(pi2 * inverse / l2)))
}

/// The gap regime of the lattice: none, finitely many (at least one), or
/// infinitely many gaps. `BoundaryUndecided` means `|alpha|` falls inside one
/// of the threshold enclosures.
pub fn classify(lattice: &ExactLattice) -> Result<ThresholdReport> {
    classify_with(lattice, DEFAULT_M)
}

pub fn classify_with(lattice: &ExactLattice, m_max: u64) -> Result<ThresholdReport> {
    let alpha = lattice.alpha;
    if alpha == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidInput(format!("coupling must be finite, got {alpha}")));
    }
    if lattice.theta.is_rational() {
        // Infinitely many gaps for every nonzero coupling.
        return Ok(ThresholdReport {
            gamma: RealInterval::point(0.0),
            finite_bound: RealInterval::point(0.0),
            regime: Regime::Infinite,
        });
    }
    let gamma = if alpha > 0.0 { gamma_plus(lattice, m_max)? } else { gamma_minus(lattice, m_max)? };
    let bound = finite_bound(lattice)?;
    let s = alpha.abs();
    let regime = if s < gamma.lo {
        Regime::NoGaps
    } else if s > bound.hi {
        Regime::Infinite
    } else if s > gamma.hi && s < bound.lo {
        Regime::FiniteNonzero
    } else {
        Regime::BoundaryUndecided
    };
    Ok(ThresholdReport { gamma, finite_bound: bound, regime })
}
