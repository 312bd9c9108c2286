//! Fixed-precision number formatting for text and CSV output.

use num_rational::BigRational;
use qgraph_core::diophantine::parse_rational;
use qgraph_core::RealInterval;

/// Significant digits in every printed float.
pub const DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Nearest,
    Down,
    Up,
}

/// `x` with 12 significant digits, in the style of `%.12g`.
pub fn num(x: f64) -> String {
    rounded(x, Direction::Nearest)
}

/// `[lo, hi]` with the ends rounded outward, so the printed interval still
/// contains the enclosure.
pub fn interval(iv: &RealInterval) -> String {
    format!("[{}, {}]", rounded(iv.lo, Direction::Down), rounded(iv.hi, Direction::Up))
}

fn rounded(x: f64, dir: Direction) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let mut text = scientific(x);
    if dir != Direction::Nearest {
        // Compare the printed decimal with `x` exactly; one step in the
        // requested direction corrects a rounding the wrong way.
        let exact = BigRational::from_float(x).expect("finite");
        let printed = exact_decimal(&text);
        let step = 10f64.powi(exponent(&text) - (DIGITS as i32 - 1));
        let value: f64 = text.parse().expect("formatted float parses");
        if dir == Direction::Down && printed > exact {
            text = scientific(value - step);
        } else if dir == Direction::Up && printed < exact {
            text = scientific(value + step);
        }
    }
    general(&text)
}

/// The exact value of a decimal in scientific notation.
fn exact_decimal(sci: &str) -> BigRational {
    let (mantissa, _) = sci.split_once('e').expect("scientific form");
    let m = parse_rational(mantissa).expect("formatted mantissa parses");
    let ten = BigRational::from_float(10.0).expect("finite");
    m * ten.pow(exponent(sci))
}

fn scientific(x: f64) -> String {
    format!("{:.*e}", DIGITS - 1, x)
}

fn exponent(sci: &str) -> i32 {
    sci.split_once('e').map(|(_, e)| e.parse().expect("exponent")).unwrap_or(0)
}

/// Fixed notation for moderate exponents, scientific otherwise; trailing
/// zeros are dropped.
fn general(sci: &str) -> String {
    let (mantissa, _) = sci.split_once('e').expect("scientific form");
    let e = exponent(sci);
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let body = if (-5..DIGITS as i32).contains(&e) {
        if e >= 0 {
            let (int, frac) = digits.split_at(e as usize + 1);
            trim_fraction(int, frac)
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            trim_fraction("0", &format!("{zeros}{digits}"))
        }
    } else {
        let (int, frac) = digits.split_at(1);
        format!("{}e{e}", trim_fraction(int, frac))
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(int: &str, frac: &str) -> String {
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(std::f64::consts::PI), "3.14159265359");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(-0.000123456789012345), "-0.000123456789012");
        assert_eq!(num(1.5e20), "1.5e20");
        assert_eq!(num(2.5e-9), "2.5e-9");
        assert_eq!(num(123456.0), "123456");
    }

    #[test]
    fn intervals_round_outward() {
        let iv = RealInterval::new(std::f64::consts::PI, std::f64::consts::PI);
        assert_eq!(interval(&iv), "[3.14159265358, 3.14159265359]");
        let e = RealInterval::new(std::f64::consts::E, std::f64::consts::E);
        assert_eq!(interval(&e), "[2.71828182845, 2.71828182846]");
        let exact = RealInterval::new(0.5, 2.0);
        assert_eq!(interval(&exact), "[0.5, 2]");
        // 0.3 is slightly below three tenths in binary.
        assert_eq!(interval(&RealInterval::new(0.3, 0.3)), "[0.299999999999, 0.3]");
        let neg = RealInterval::new(-std::f64::consts::PI, -1.0);
        assert_eq!(interval(&neg), "[-3.14159265359, -1]");
    }

    #[test]
    fn outward_rounding_crosses_a_power_of_ten() {
        let x = 999.9999999999999;
        let down = rounded(x, Direction::Down);
        assert!(down.parse::<f64>().unwrap() <= x);
        let up = rounded(x, Direction::Up);
        assert!(up.parse::<f64>().unwrap() >= x);
    }
}
