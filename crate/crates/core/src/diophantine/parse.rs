//! Text forms of exact real inputs.
//!
//! Accepted forms:
//! - `golden` or `phi`: the golden mean
//! - `(A+B*sqrt(D))/C`, `A+B*sqrt(D)`, `sqrt(D)` and signed variants
//! - `p/q` and integers
//! - continued fraction literals `[a0;a1,(p1,p2)]`
//! - decimals such as `0.61803`, taken as the exact binary float they round to

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use regex::Regex;

use super::cf::{cf_expand, ContinuedFraction, ExpansionSource};
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

fn surd_pattern() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"^\(?(?:(?P<a>[+-]?\d+))?(?:(?P<sign>[+-])?(?:(?P<b>\d+)\*)?sqrt\((?P<d>\d+)\))?\)?(?:/(?P<c>\d+))?$",
        )
        .expect("valid regex")
    })
}

/// Parses an exact quadratic number.
pub fn parse_surd(input: &str) -> Result<QuadraticSurd> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    let lower = s.to_ascii_lowercase();
    if lower == "golden" || lower == "phi" {
        return Ok(QuadraticSurd::golden_mean());
    }
    if s.starts_with('[') {
        let cf: ContinuedFraction = s.parse()?;
        return cf.to_surd();
    }
    if let Some(caps) = surd_pattern().captures(&s) {
        let has_a = caps.name("a").is_some();
        let has_d = caps.name("d").is_some();
        let balanced = s.starts_with('(') == s.contains(')') || has_d;
        if (has_a || has_d) && balanced {
            let int = |name: &str, default: i64| -> Result<BigInt> {
                caps.name(name)
                    .map(|m| {
                        m.as_str().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer in `{input}`")))
                    })
                    .unwrap_or_else(|| Ok(BigInt::from(default)))
            };
            let a = int("a", 0)?;
            let mut b = if has_d { int("b", 1)? } else { BigInt::from(0) };
            if caps.name("sign").map(|m| m.as_str()) == Some("-") {
                b = -b;
            } else if caps.name("sign").is_none() && has_a && has_d {
                return Err(Error::Parse(format!("missing sign before sqrt in `{input}`")));
            }
            let d = int("d", 0)?;
            let c = int("c", 1)?;
            if c == BigInt::from(0) {
                return Err(Error::Parse(format!("zero denominator in `{input}`")));
            }
            return QuadraticSurd::new(a, b, d, c);
        }
    }
    if let Ok(x) = s.parse::<f64>() {
        let r = BigRational::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite number `{input}`")))?;
        return Ok(QuadraticSurd::from_rational(&r));
    }
    Err(Error::Parse(format!(
        "`{input}` is not a number: expected golden, p/q, (A+B*sqrt(D))/C, a decimal, or [a0;a1,...]"
    )))
}

/// Parses any accepted form directly into a continued fraction.
pub fn parse_cf(input: &str) -> Result<ContinuedFraction> {
    let trimmed = input.trim();
    if trimmed.starts_with('[') {
        return trimmed.parse();
    }
    cf_expand(&ExpansionSource::Exact(parse_surd(trimmed)?), 1)
}

/// Parses a rational length such as `3/2`, `2` or `1.25` exactly.
pub fn parse_rational(input: &str) -> Result<BigRational> {
    let s = input.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad numerator in `{s}`")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad denominator in `{s}`")))?;
        if q == BigInt::from(0) {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(n));
    }
    // Decimal literal, read exactly in base ten.
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-BigInt::one(), rest),
        None => (BigInt::one(), s.strip_prefix('+').unwrap_or(s)),
    };
    if let Some((int, frac)) = body.split_once('.') {
        let valid = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        if valid(int) && valid(frac) && !(int.is_empty() && frac.is_empty()) {
            let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| Error::Parse(s.into()))?;
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            return Ok(BigRational::new(sign * digits, scale));
        }
    }
    Err(Error::Parse(format!("`{s}` is not a rational number")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_forms() {
        assert_eq!(parse_surd("golden").unwrap(), QuadraticSurd::golden_mean());
        assert_eq!(parse_surd("(1+sqrt(5))/2").unwrap(), QuadraticSurd::golden_mean());
        assert_eq!(parse_surd("(1 + 1*sqrt(5)) / 2").unwrap(), QuadraticSurd::golden_mean());
        let x = parse_surd("(35+sqrt(5))/122").unwrap();
        assert!((x.to_f64() - 0.3052130).abs() < 1e-6);
        let y = parse_surd("-1+sqrt(2)").unwrap();
        assert!((y.to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let z = parse_surd("(3-2*sqrt(2))").unwrap();
        assert!((z.to_f64() - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-14);
        assert_eq!(parse_surd("sqrt(4)").unwrap(), QuadraticSurd::from_integer(2.into()));
        assert_eq!(parse_surd("3/4").unwrap(), QuadraticSurd::from_rational(&BigRational::new(3.into(), 4.into())));
        assert!(parse_surd("[1;(1)]").unwrap() == QuadraticSurd::golden_mean());
    }

    #[test]
    fn bad_forms() {
        for bad in ["", "abc", "(1+sqrt(5)/0", "1/0", "sqrt(-2)"] {
            assert!(parse_surd(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cf_forms() {
        assert_eq!(parse_cf("golden").unwrap(), ContinuedFraction::golden_mean());
        assert_eq!(parse_cf("415/93").unwrap().to_string(), "[4;2,6,7]");
        assert_eq!(parse_cf("[0;3,3,(1)]").unwrap().to_string(), "[0;3,3,(1)]");
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/2").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_rational("1.25").unwrap(), BigRational::new(5.into(), 4.into()));
        assert_eq!(parse_rational("-0.1").unwrap(), BigRational::new((-1).into(), 10.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
