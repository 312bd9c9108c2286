//! The one-parameter family `theta(t) = [0; t, t, 1, 1, 1, ...]`.

use num_bigint::BigInt;

use super::cf::ContinuedFraction;
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

/// `theta(t) = (2t^3 - 2t^2 - 1 + sqrt 5) / (2(t^4 - t^3 + t^2 - t + 1))`
/// for integer `t >= 3`, with its continued fraction expansion.
pub fn theta_family(t: u64) -> Result<(QuadraticSurd, ContinuedFraction)> {
    if t < 3 {
        return Err(Error::InvalidInput(format!("family parameter t must be >= 3, got {t}")));
    }
    let t = BigInt::from(t);
    let t2 = &t * &t;
    let t3 = &t2 * &t;
    let t4 = &t3 * &t;
    let a = BigInt::from(2) * &t3 - BigInt::from(2) * &t2 - 1;
    let c = BigInt::from(2) * (&t4 - &t3 + &t2 - &t + 1);
    let value = QuadraticSurd::new(a, 1.into(), 5.into(), c)?;
    let cf = super::cf::cf_expand(&super::cf::ExpansionSource::Exact(value.clone()), 1)?;
    Ok((value, cf))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_matches_family_pattern() {
        for t in 3..=12u64 {
            let (_, cf) = theta_family(t).unwrap();
            assert_eq!(cf.to_string(), format!("[0;{t},{t},(1)]"));
        }
    }

    #[test]
    fn closed_forms() {
        let (v3, _) = theta_family(3).unwrap();
        assert_eq!(v3.to_string(), "(35+1*sqrt(5))/122");
        assert!((v3.to_f64() - 0.305213).abs() < 1e-6);
        let (v4, _) = theta_family(4).unwrap();
        assert_eq!(v4.to_string(), "(95+1*sqrt(5))/410");
    }

    #[test]
    fn small_parameters_are_rejected() {
        assert!(matches!(theta_family(2), Err(Error::InvalidInput(_))));
    }
}
