//! Simple continued fractions `[a0; a1, a2, ...]`, finite or eventually
//! periodic, with exact conversion to and from quadratic numbers.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::surd::QuadraticSurd;
use crate::error::{Error, Result};
use crate::interval::RealInterval;

/// Hard cap on expansion steps before a quadratic period must have appeared.
const MAX_EXPANSION_STEPS: usize = 100_000;

/// A continued fraction. When `period` is empty and `open_tail` is false the
/// value is the finite rational `[a0; preperiod]`. With a non-empty period
/// the period repeats forever. `open_tail` marks a certified prefix of an
/// expansion whose remaining quotients are unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    a0: BigInt,
    preperiod: Vec<BigInt>,
    period: Vec<BigInt>,
    open_tail: bool,
}

impl ContinuedFraction {
    pub fn new(a0: BigInt, preperiod: Vec<BigInt>, period: Vec<BigInt>) -> Result<Self> {
        if let Some(bad) = preperiod.iter().chain(&period).find(|q| !q.is_positive()) {
            return Err(Error::InvalidInput(format!("partial quotients after a0 must be >= 1, got {bad}")));
        }
        let mut cf = Self { a0, preperiod, period, open_tail: false };
        cf.canonicalize();
        Ok(cf)
    }

    pub fn integer(n: BigInt) -> Self {
        Self { a0: n, preperiod: Vec::new(), period: Vec::new(), open_tail: false }
    }

    pub fn golden_mean() -> Self {
        Self::new(1.into(), Vec::new(), vec![1.into()]).expect("valid literal")
    }

    /// A known prefix of an expansion whose tail was not certified.
    pub(crate) fn prefix(a0: BigInt, terms: Vec<BigInt>) -> Self {
        Self { a0, preperiod: terms, period: Vec::new(), open_tail: true }
    }

    fn canonicalize(&mut self) {
        if !self.period.is_empty() {
            // Fold a preperiod that ends with a rotation of the period.
            while let Some(last) = self.preperiod.last() {
                if *last == *self.period.last().unwrap() {
                    self.preperiod.pop();
                    self.period.rotate_right(1);
                } else {
                    break;
                }
            }
            let p = self.period.len();
            for len in 1..p {
                if p.is_multiple_of(len) && (0..p).all(|i| self.period[i] == self.period[i % len]) {
                    self.period.truncate(len);
                    break;
                }
            }
        } else if !self.preperiod.is_empty() && self.preperiod.last().unwrap().is_one() {
            // [.., x, 1] == [.., x + 1]
            self.preperiod.pop();
            match self.preperiod.last_mut() {
                Some(last) => *last += 1,
                None => self.a0 += 1,
            }
        }
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn preperiod(&self) -> &[BigInt] {
        &self.preperiod
    }

    pub fn period(&self) -> &[BigInt] {
        &self.period
    }

    pub fn is_open(&self) -> bool {
        self.open_tail
    }

    pub fn is_rational(&self) -> bool {
        self.period.is_empty() && !self.open_tail
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// Number of available terms including `a0`; `None` when infinite.
    pub fn available_terms(&self) -> Option<usize> {
        if self.period.is_empty() {
            Some(1 + self.preperiod.len())
        } else {
            None
        }
    }

    /// Partial quotient `a_i` (with `a_0` the integer part).
    pub fn term(&self, i: usize) -> Option<BigInt> {
        if i == 0 {
            return Some(self.a0.clone());
        }
        let j = i - 1;
        if j < self.preperiod.len() {
            Some(self.preperiod[j].clone())
        } else if self.period.is_empty() {
            None
        } else {
            let k = (j - self.preperiod.len()) % self.period.len();
            Some(self.period[k].clone())
        }
    }

    /// The first `n` terms (fewer if the expansion is finite and shorter).
    pub fn terms(&self, n: usize) -> Vec<BigInt> {
        (0..n).map_while(|i| self.term(i)).collect()
    }

    pub fn convergents(&self) -> Convergents<'_> {
        Convergents { cf: self, index: 0, p: (BigInt::zero(), BigInt::one()), q: (BigInt::one(), BigInt::zero()) }
    }

    /// Exact value for rational and periodic expansions.
    pub fn to_surd(&self) -> Result<QuadraticSurd> {
        if self.open_tail {
            return Err(Error::EnclosureTooWide("exact value of an expansion with an unknown tail".into()));
        }
        let head: Vec<BigInt> = std::iter::once(self.a0.clone()).chain(self.preperiod.iter().cloned()).collect();
        if self.period.is_empty() {
            let (p, q) = convergent_of(&head);
            return Ok(QuadraticSurd::from_rational(&BigRational::new(p, q)));
        }
        // Purely periodic y = [c1; c2, ..., ck, y] solves
        // Qk y^2 + (Qk-1 - Pk) y - Pk-1 = 0 with y > 1.
        let (pk, pk1, qk, qk1) = convergent_pair(&self.period);
        let b = &qk1 - &pk;
        let disc = &b * &b + BigInt::from(4) * &qk * &pk1;
        let y = QuadraticSurd::new(-b, BigInt::one(), disc, BigInt::from(2) * &qk)?;
        // x = [a0; pre..., y] = (P y + P') / (Q y + Q')
        let (p, p1, q, q1) = convergent_pair(&head);
        let num = &y.mul_int(&p) + &QuadraticSurd::from_integer(p1);
        let den = &y.mul_int(&q) + &QuadraticSurd::from_integer(q1);
        &num / &den
    }

    /// Continued fraction of `1/x` for `x > 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        if self.a0.is_negative() || (self.a0.is_zero() && self.preperiod.is_empty() && self.period.is_empty()) {
            return Err(Error::InvalidInput("reciprocal continued fraction needs a positive value".into()));
        }
        let mut out = self.clone();
        if self.a0.is_zero() {
            // 1/[0; a1, a2, ...] = [a1; a2, ...]
            if !out.preperiod.is_empty() {
                out.a0 = out.preperiod.remove(0);
            } else {
                out.a0 = out.period[0].clone();
                out.period.rotate_left(1);
            }
        } else if self.is_rational() && self.preperiod.is_empty() && self.a0.is_one() {
            // 1/1
        } else {
            out.preperiod.insert(0, std::mem::replace(&mut out.a0, BigInt::zero()));
        }
        if !out.open_tail {
            out.canonicalize();
        }
        Ok(out)
    }
}

fn convergent_of(terms: &[BigInt]) -> (BigInt, BigInt) {
    let (p, _, q, _) = convergent_pair(terms);
    (p, q)
}

/// Last two convergent numerators and denominators `(P_n, P_{n-1}, Q_n, Q_{n-1})`.
pub(crate) fn convergent_pair(terms: &[BigInt]) -> (BigInt, BigInt, BigInt, BigInt) {
    let (mut p, mut p_prev) = (BigInt::one(), BigInt::zero());
    let (mut q, mut q_prev) = (BigInt::zero(), BigInt::one());
    for a in terms {
        let p_next = a * &p + &p_prev;
        let q_next = a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    (p, p_prev, q, q_prev)
}

/// Iterator over convergents `p_n / q_n`, yielding unreduced-but-coprime
/// numerator/denominator pairs from the standard recurrence.
pub struct Convergents<'a> {
    cf: &'a ContinuedFraction,
    index: usize,
    p: (BigInt, BigInt),
    q: (BigInt, BigInt),
}

impl Iterator for Convergents<'_> {
    type Item = (BigInt, BigInt);

    fn next(&mut self) -> Option<Self::Item> {
        let a = self.cf.term(self.index)?;
        self.index += 1;
        let p = &a * &self.p.1 + &self.p.0;
        let q = &a * &self.q.1 + &self.q.0;
        self.p = (std::mem::replace(&mut self.p.1, p.clone()), p.clone());
        self.q = (std::mem::replace(&mut self.q.1, q.clone()), q.clone());
        Some((p, q))
    }
}

/// The first `n` convergents in lowest terms.
pub fn convergents(cf: &ContinuedFraction, n: usize) -> Result<Vec<BigRational>> {
    if n == 0 {
        return Err(Error::ZeroDepth);
    }
    if let Some(avail) = cf.available_terms() {
        if avail < n && cf.is_open() {
            return Err(Error::EnclosureTooWide(format!("only {avail} certified terms available, {n} requested")));
        }
    }
    Ok(cf.convergents().take(n).map(|(p, q)| BigRational::new(p, q)).collect())
}

/// Enclosure of the value of `cf` with width at most `eps` (or as narrow as
/// double precision allows), taken between consecutive convergents.
pub fn evaluate(cf: &ContinuedFraction, eps: f64) -> Result<RealInterval> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    let mut prev: Option<BigRational> = None;
    let mut best: Option<RealInterval> = None;
    for (index, (p, q)) in cf.convergents().enumerate() {
        let current = BigRational::new(p, q);
        if let Some(prev) = &prev {
            let iv = RealInterval::from_rational(prev).hull(&RealInterval::from_rational(&current));
            let stalled = best.is_some_and(|b| b == iv);
            best = Some(iv);
            if iv.width() <= eps || stalled || index > 4000 {
                return Ok(iv);
            }
        }
        prev = Some(current);
    }
    let last = prev.expect("a continued fraction has at least one term");
    if !cf.is_open() {
        // Finite expansion: the last convergent is the value.
        return Ok(RealInterval::from_rational(&last));
    }
    // Unknown tail t >= 1: the value lies between p_n/q_n and
    // (p_n + p_{n-1})/(q_n + q_{n-1}).
    let terms = cf.terms(cf.preperiod.len() + 1);
    let (p, p1, q, q1) = convergent_pair(&terms);
    let other = BigRational::new(p + p1, q + q1);
    let iv = RealInterval::from_rational(&last).hull(&RealInterval::from_rational(&other));
    if iv.width() <= eps {
        Ok(iv)
    } else {
        Err(Error::EnclosureTooWide(format!("value to width {eps:e} from {} certified terms", terms.len())))
    }
}

/// Input to [`cf_expand`].
#[derive(Debug, Clone)]
pub enum ExpansionSource {
    Exact(QuadraticSurd),
    Enclosure(RealInterval),
}

/// Expands `source` into a continued fraction.
///
/// Exact inputs produce the complete expansion (finite for rationals,
/// eventually periodic with the period detected for quadratic irrationals);
/// `depth` only has to be positive. Enclosures produce up to `depth` certified
/// quotients and fail if even the integer part cannot be certified.
pub fn cf_expand(source: &ExpansionSource, depth: usize) -> Result<ContinuedFraction> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    match source {
        ExpansionSource::Exact(x) => expand_exact(x),
        ExpansionSource::Enclosure(iv) => expand_enclosure(*iv, depth),
    }
}

fn expand_exact(x: &QuadraticSurd) -> Result<ContinuedFraction> {
    let mut seen: HashMap<QuadraticSurd, usize> = HashMap::new();
    let mut quotients: Vec<BigInt> = Vec::new();
    let mut current = x.clone();
    for step in 0..MAX_EXPANSION_STEPS {
        if step > 0 {
            if let Some(&start) = seen.get(&current) {
                let a0 = quotients.remove(0);
                let pre_len = start - 1;
                let period = quotients.split_off(pre_len);
                return ContinuedFraction::new(a0, quotients, period);
            }
            seen.insert(current.clone(), step);
        }
        let a = current.floor();
        let frac = current.add_int(&-&a);
        quotients.push(a);
        if frac.is_zero() {
            let a0 = quotients.remove(0);
            return ContinuedFraction::new(a0, quotients, Vec::new());
        }
        current = frac.recip()?;
    }
    Err(Error::EnclosureTooWide("no period detected within the expansion step limit".into()))
}

fn expand_enclosure(iv: RealInterval, depth: usize) -> Result<ContinuedFraction> {
    let lo = BigRational::from_float(iv.lo).ok_or_else(|| Error::InvalidInput("non-finite enclosure".into()))?;
    let hi = BigRational::from_float(iv.hi).ok_or_else(|| Error::InvalidInput("non-finite enclosure".into()))?;
    let mut lo = lo;
    let mut hi = hi;
    let mut quotients: Vec<BigInt> = Vec::new();
    while quotients.len() < depth {
        let a_lo = lo.floor().to_integer();
        let a_hi = hi.floor().to_integer();
        if a_lo != a_hi {
            break;
        }
        if lo == hi && lo.is_integer() {
            quotients.push(a_lo);
            let a0 = quotients.remove(0);
            return ContinuedFraction::new(a0, quotients, Vec::new());
        }
        let a = a_lo;
        let flo = &lo - BigRational::from_integer(a.clone());
        let fhi = &hi - BigRational::from_integer(a.clone());
        quotients.push(a);
        if flo.is_zero() {
            // The enclosure touches an integer: the next quotient is unbounded.
            break;
        }
        // x -> 1/(x - a) reverses the order of the endpoints.
        lo = fhi.recip();
        hi = flo.recip();
    }
    if quotients.is_empty() {
        return Err(Error::EnclosureTooWide(format!("integer part of {iv}")));
    }
    let a0 = quotients.remove(0);
    Ok(ContinuedFraction::prefix(a0, quotients))
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        let mut sep = ";";
        for a in &self.preperiod {
            write!(f, "{sep}{a}")?;
            sep = ",";
        }
        if !self.period.is_empty() {
            let body: Vec<String> = self.period.iter().map(|a| a.to_string()).collect();
            write!(f, "{sep}({})", body.join(","))?;
        } else if self.open_tail {
            write!(f, "{sep}...")?;
        }
        write!(f, "]")
    }
}

impl FromStr for ContinuedFraction {
    type Err = Error;

    /// Parses `[a0;a1,a2,(p1,p2)]`; the parenthesized period is optional.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("continued fraction literal `{s}` must be bracketed")))?;
        let (head, rest) = match body.split_once(';') {
            Some((h, r)) => (h, r),
            None => (body, ""),
        };
        let a0: BigInt = head.parse().map_err(|_| Error::Parse(format!("bad integer part `{head}`")))?;
        let (pre_str, period_str) = match rest.find('(') {
            Some(open) => {
                let inner = rest[open..]
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("period in `{s}` must close the literal")))?;
                (rest[..open].trim_end_matches(','), inner)
            }
            None => (rest, ""),
        };
        let parse_list = |list: &str| -> Result<Vec<BigInt>> {
            list.split(',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad partial quotient `{t}`"))))
                .collect()
        };
        let cf = Self::new(a0, parse_list(pre_str)?, parse_list(period_str)?)?;
        Ok(cf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn golden_mean_expands_with_period_one() {
        let cf = cf_expand(&ExpansionSource::Exact(QuadraticSurd::golden_mean()), 6).unwrap();
        assert_eq!(cf, ContinuedFraction::golden_mean());
        assert_eq!(cf.terms(6), ints(&[1, 1, 1, 1, 1, 1]));
        assert_eq!(cf.period(), &ints(&[1])[..]);
        assert_eq!(cf.to_string(), "[1;(1)]");
    }

    #[test]
    fn integers_and_rationals() {
        let one = cf_expand(&ExpansionSource::Exact(QuadraticSurd::from_integer(1.into())), 5).unwrap();
        assert_eq!(one.to_string(), "[1]");
        let r = QuadraticSurd::from_rational(&rat(415, 93));
        let cf = cf_expand(&ExpansionSource::Exact(r), 3).unwrap();
        assert_eq!(cf.terms(10), ints(&[4, 2, 6, 7]));
        assert_eq!(cf.to_surd().unwrap().to_rational().unwrap(), rat(415, 93));
    }

    #[test]
    fn zero_depth_is_rejected() {
        let src = ExpansionSource::Exact(QuadraticSurd::golden_mean());
        assert_eq!(cf_expand(&src, 0), Err(Error::ZeroDepth));
    }

    #[test]
    fn sqrt2_round_trip() {
        let sqrt2 = QuadraticSurd::new(0.into(), 1.into(), 2.into(), 1.into()).unwrap();
        let cf = cf_expand(&ExpansionSource::Exact(sqrt2.clone()), 1).unwrap();
        assert_eq!(cf.to_string(), "[1;(2)]");
        assert_eq!(cf.to_surd().unwrap(), sqrt2);
    }

    #[test]
    fn literal_parsing_and_canonical_form() {
        let cf: ContinuedFraction = "[0;3,3,(1)]".parse().unwrap();
        assert_eq!(cf.terms(6), ints(&[0, 3, 3, 1, 1, 1]));
        // trailing 1 is folded
        let cf: ContinuedFraction = "[2;3,1]".parse().unwrap();
        assert_eq!(cf.to_string(), "[2;4]");
        // preperiod absorbed into the period
        let cf: ContinuedFraction = "[1;1,1,(1,1)]".parse().unwrap();
        assert_eq!(cf.to_string(), "[1;(1)]");
        assert!("[1;0,2]".parse::<ContinuedFraction>().is_err());
        assert!("1;2".parse::<ContinuedFraction>().is_err());
    }

    #[test]
    fn convergents_of_golden_mean_are_fibonacci_ratios() {
        let c = convergents(&ContinuedFraction::golden_mean(), 5).unwrap();
        assert_eq!(c, vec![rat(1, 1), rat(2, 1), rat(3, 2), rat(5, 3), rat(8, 5)]);
        let zero = ContinuedFraction::integer(0.into());
        assert_eq!(convergents(&zero, 1).unwrap(), vec![rat(0, 1)]);
    }

    #[test]
    fn evaluate_golden_mean_and_integers() {
        let iv = evaluate(&ContinuedFraction::golden_mean(), 1e-12).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(iv.width() <= 1e-12);
        assert!(iv.contains(phi) || (iv.lo - phi).abs() < 1e-15);
        let two = evaluate(&ContinuedFraction::integer(2.into()), 1e-3).unwrap();
        assert_eq!(two, RealInterval::point(2.0));
    }

    #[test]
    fn enclosure_expansion_stops_when_uncertain() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let cf = cf_expand(&ExpansionSource::Enclosure(RealInterval::around(phi)), 10).unwrap();
        assert_eq!(cf.terms(10), ints(&[1; 10]));
        assert!(cf.is_open());
        let wide = cf_expand(&ExpansionSource::Enclosure(RealInterval::new(0.9, 1.1)), 10);
        assert!(matches!(wide, Err(Error::EnclosureTooWide(_))));
    }

    #[test]
    fn reciprocal_shifts_terms() {
        let phi = ContinuedFraction::golden_mean();
        let inv = phi.reciprocal().unwrap();
        assert_eq!(inv.to_string(), "[0;(1)]");
        assert_eq!(inv.reciprocal().unwrap(), phi);
        let cf: ContinuedFraction = "[0;3,3,(1)]".parse().unwrap();
        assert_eq!(cf.reciprocal().unwrap().to_string(), "[3;3,(1)]");
        let sqrt2: ContinuedFraction = "[1;(2)]".parse().unwrap();
        let r = sqrt2.reciprocal().unwrap();
        assert_eq!(r.to_string(), "[0;1,(2)]");
        assert_eq!(r.to_surd().unwrap(), sqrt2.to_surd().unwrap().recip().unwrap());
    }
}
