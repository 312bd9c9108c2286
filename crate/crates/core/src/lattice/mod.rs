//! The rectangular lattice graph with edges `a`, `b` and a delta coupling of
//! strength `alpha` at every vertex.
//!
//! A momentum `k > 0` lies in a gap when
//! `tan u_a + tan u_b < |alpha| / (2k)` for `alpha > 0`, and when the same holds
//! with `cot` in place of `tan` for `alpha < 0`, where
//! `u_l = k l / 2 - (pi/2) floor(k l / pi)` is the bracket of `k` for length `l`.

pub mod golden;
pub mod thresholds;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use golden::{
    a_sequence, count_m_solutions, fibonacci, golden_defect, golden_kmax, predict_gap_count_golden, GapCount,
};
pub use thresholds::{classify, classify_with, gamma_minus, gamma_plus, ExactLattice, Regime, ThresholdReport};

/// Default truncation index for the threshold infima.
pub const DEFAULT_M: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
}

impl LatticeParams {
    pub fn new(a: f64, b: f64, alpha: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("edge length {name} must be positive, got {v}")));
            }
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidInput(format!("coupling must be finite, got {alpha}")));
        }
        Ok(Self { a, b, alpha })
    }

    pub fn theta(&self) -> f64 {
        self.a / self.b
    }

    fn check_alpha(&self) -> Result<()> {
        if self.alpha == 0.0 {
            Err(Error::ZeroCoupling)
        } else {
            Ok(())
        }
    }
}

/// A maximal open interval of momenta whose squares form a spectral gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapInterval {
    /// Zero when the gap extends below the bottom of the positive half-line.
    pub k_lo: f64,
    pub k_hi: f64,
    /// False when the component was cut off by the end of the scan range.
    pub certified: bool,
}

impl GapInterval {
    pub fn energy(&self) -> (f64, f64) {
        (self.k_lo * self.k_lo, self.k_hi * self.k_hi)
    }

    pub fn contains(&self, k: f64) -> bool {
        self.k_lo < k && k < self.k_hi
    }
}

/// `u = k l / 2 - (pi/2) floor(k l / pi)`, in `[0, pi/2)`.
pub fn bracket(k: f64, ell: f64) -> f64 {
    let n = (k * ell / PI).floor();
    bracket_in_cell(k, ell, n)
}

fn bracket_in_cell(k: f64, ell: f64, n: f64) -> f64 {
    (k * ell / 2.0 - FRAC_PI_2 * n).clamp(0.0, FRAC_PI_2)
}

/// Margin `|alpha|/(2k) - (f(u_a) + f(u_b))` with `f = tan` or `cot`, using the
/// given floor indices so that cell endpoints are evaluated as one-sided limits.
fn margin_in_cell(k: f64, p: &LatticeParams, na: f64, nb: f64) -> f64 {
    let ua = bracket_in_cell(k, p.a, na);
    let ub = bracket_in_cell(k, p.b, nb);
    let rhs = p.alpha.abs() / (2.0 * k);
    let lhs = if p.alpha > 0.0 {
        if ua >= FRAC_PI_2 || ub >= FRAC_PI_2 {
            return f64::NEG_INFINITY;
        }
        ua.tan() + ub.tan()
    } else {
        if ua <= 0.0 || ub <= 0.0 {
            return f64::NEG_INFINITY;
        }
        1.0 / ua.tan() + 1.0 / ub.tan()
    };
    rhs - lhs
}

/// Whether `k` lies in a gap, and the margin of the gap inequality
/// (positive inside gaps, `-inf` at bracket singularities).
pub fn gap_condition(k: f64, p: &LatticeParams) -> Result<(bool, f64)> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::NonPositiveMomentum(k));
    }
    p.check_alpha()?;
    let na = (k * p.a / PI).floor();
    let nb = (k * p.b / PI).floor();
    let on_boundary = (k * p.a / PI) == na || (k * p.b / PI) == nb;
    let margin = if on_boundary { f64::NEG_INFINITY } else { margin_in_cell(k, p, na, nb) };
    Ok((margin > 0.0, margin))
}

/// A continuity cell `(lo, hi)` between consecutive singular momenta, with
/// the floor indices valid inside it.
#[derive(Debug, Clone, Copy)]
struct Cell {
    lo: f64,
    hi: f64,
    na: f64,
    nb: f64,
}

fn cells(p: &LatticeParams, kmax: f64) -> Vec<Cell> {
    let step_a = PI / p.a;
    let step_b = PI / p.b;
    let mut out = Vec::new();
    let (mut ia, mut ib) = (1u64, 1u64);
    let mut lo = 0.0;
    let (mut na, mut nb) = (0.0, 0.0);
    while lo < kmax {
        let next_a = ia as f64 * step_a;
        let next_b = ib as f64 * step_b;
        let hi = next_a.min(next_b);
        out.push(Cell { lo, hi, na, nb });
        // Coincident singularities advance both indices.
        if next_a <= hi * (1.0 + 4.0 * f64::EPSILON) {
            ia += 1;
            na += 1.0;
        }
        if next_b <= hi * (1.0 + 4.0 * f64::EPSILON) {
            ib += 1;
            nb += 1.0;
        }
        lo = hi;
    }
    out
}

fn bisect(mut lo: f64, mut hi: f64, tol: f64, positive_at_lo: bool, f: impl Fn(f64) -> f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// All gaps of the positive spectrum with momenta in `(0, kmax]`.
///
/// Inside each cell the margin is strictly monotone: decreasing for
/// `alpha > 0` (so a gap starts at the cell's left end) and, after
/// multiplying by `k`, increasing for `alpha < 0` (so a gap ends at the cell's
/// right end). Each cell therefore holds at most one gap, found by bisection.
pub fn scan_gaps(p: &LatticeParams, kmax: f64, tol: f64) -> Result<Vec<GapInterval>> {
    p.check_alpha()?;
    if !(kmax > 0.0 && kmax.is_finite()) {
        return Err(Error::InvalidInput(format!("kmax must be positive, got {kmax}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let mut gaps = Vec::new();
    for (index, cell) in cells(p, kmax).into_iter().enumerate() {
        let f = |k: f64| k * margin_in_cell(k, p, cell.na, cell.nb);
        let gap = if p.alpha > 0.0 {
            // The first cell starts below the spectrum.
            if index == 0 || f(cell.lo) <= 0.0 {
                continue;
            }
            let root = bisect(cell.lo, cell.hi, tol, true, f);
            (cell.lo, root)
        } else {
            let at_lo = if index == 0 {
                // k * margin tends to |alpha|/2 - 2/a - 2/b as k -> 0.
                p.alpha.abs() / 2.0 - 2.0 / p.a - 2.0 / p.b
            } else {
                f(cell.lo)
            };
            if f(cell.hi) <= 0.0 {
                continue;
            }
            let root = if at_lo > 0.0 { cell.lo } else { bisect(cell.lo, cell.hi, tol, false, f) };
            (root, cell.hi)
        };
        if gap.0 >= kmax {
            continue;
        }
        gaps.push(GapInterval { k_lo: gap.0, k_hi: gap.1.min(kmax), certified: gap.1 <= kmax });
    }
    Ok(gaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(alpha: f64) -> LatticeParams {
        LatticeParams::new(1.0, 1.0, alpha).unwrap()
    }

    #[test]
    fn bracket_examples() {
        assert!((bracket(PI / 2.0, 1.0) - PI / 4.0).abs() < 1e-15);
        assert!(bracket(PI, 1.0).abs() < 1e-15);
        assert!((bracket(1.5 * PI, 1.0) - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn gap_condition_examples() {
        let (holds, margin) = gap_condition(PI / 2.0, &square(10.0)).unwrap();
        assert!(holds);
        assert!((margin - (10.0 / PI - 2.0)).abs() < 1e-12);
        assert!(!gap_condition(PI / 2.0, &square(5.0)).unwrap().0);
        assert!(!gap_condition(PI - 1e-9, &square(10.0)).unwrap().0);
        assert_eq!(gap_condition(1.0, &square(0.0)), Err(Error::ZeroCoupling));
        assert_eq!(gap_condition(0.0, &square(1.0)), Err(Error::NonPositiveMomentum(0.0)));
    }

    #[test]
    fn cell_boundaries_are_not_gap_points() {
        let p = LatticeParams::new(1.0, 2.0, 10.0).unwrap();
        assert_eq!(gap_condition(PI, &p).unwrap().1, f64::NEG_INFINITY);
        let q = LatticeParams::new(1.0, 2.0, -10.0).unwrap();
        assert_eq!(gap_condition(PI, &q).unwrap().1, f64::NEG_INFINITY);
    }

    #[test]
    fn square_lattice_gaps_start_at_multiples_of_pi() {
        let p = square(10.0);
        // pi/2 satisfies the inequality but lies below the bottom of the spectrum.
        assert!(gap_condition(PI / 2.0, &p).unwrap().0);
        assert!(!gap_condition(1.5 * PI, &p).unwrap().0);
        let gaps = scan_gaps(&p, 10.0, 1e-12).unwrap();
        assert!(!gaps.iter().any(|g| g.contains(PI / 2.0)));
        assert_eq!(gaps.len(), 3);
        for (g, n) in gaps.iter().zip(1..) {
            assert_eq!(g.k_lo, n as f64 * PI);
            assert!(g.contains(n as f64 * PI + 1e-6));
        }
        assert!(gaps.iter().all(|g| g.certified || g.k_hi == 10.0));
    }

    #[test]
    fn scan_agrees_with_a_fine_grid() {
        for alpha in [10.0, 3.0, -3.0, -10.0, -25.0] {
            let p = LatticeParams::new(1.0, 0.618_033_988_749_894_9, alpha).unwrap();
            let gaps = scan_gaps(&p, 40.0, 1e-13).unwrap();
            let bottom = if alpha > 0.0 {
                // Below the spectrum for repulsive coupling.
                let first = PI / p.a.max(p.b);
                bisect(1e-9, first, 1e-13, true, |k| margin_in_cell(k, &p, 0.0, 0.0))
            } else {
                0.0
            };
            for i in 1..40_000 {
                let k = i as f64 * 1e-3;
                if k <= bottom + 1e-9 {
                    continue;
                }
                let in_gap = gaps.iter().any(|g| g.contains(k));
                let (holds, margin) = gap_condition(k, &p).unwrap();
                if margin.abs() > 1e-9 {
                    assert_eq!(in_gap, holds, "alpha {alpha}, k {k}");
                }
            }
        }
    }

    #[test]
    fn gap_endpoints_are_sign_changes() {
        let p = LatticeParams::new(1.0, 0.7, -12.0).unwrap();
        for g in scan_gaps(&p, 60.0, 1e-13).unwrap() {
            let mid = 0.5 * (g.k_lo + g.k_hi);
            assert!(gap_condition(mid, &p).unwrap().0);
            if g.k_lo > 0.0 {
                assert!(!gap_condition(g.k_lo - 1e-9, &p).unwrap().0);
            }
            assert!(!gap_condition(g.k_hi + 1e-9, &p).unwrap().0);
        }
    }

    #[test]
    fn rational_ratio_has_gaps_near_every_multiple_of_pi() {
        let gaps = scan_gaps(&square(0.1), 60.0, 1e-13).unwrap();
        for n in 1..19 {
            let edge = n as f64 * PI;
            assert!(gaps.iter().any(|g| (g.k_lo - edge).abs() < 1e-9), "no gap starting at {n} pi");
        }
    }

    #[test]
    fn zero_coupling_is_rejected() {
        assert_eq!(scan_gaps(&square(0.0), 10.0, 1e-9), Err(Error::ZeroCoupling));
    }
}
