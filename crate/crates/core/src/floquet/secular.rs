//! Bond scattering matrix, the secular determinant
//! `F(k; theta) = det(I - exp(i(A + kL)) S(k))` and numerical band detection.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::coupling::{vertex_scattering, CMatrix};
use super::graph::{rational_gcd, PeriodicCellGraph};
use crate::error::{Error, Result};
use crate::lattice::GapInterval;

/// Directed-bond scattering matrix: entry `(b', b)` is the amplitude for a
/// wave arriving along `b` to leave along `b'` through their common vertex.
pub fn bond_scattering(g: &PeriodicCellGraph, k: f64) -> Result<CMatrix> {
    let vertex_matrices = g.vertices().iter().map(|v| vertex_scattering(&v.coupling, k)).collect::<Result<Vec<_>>>()?;
    let n = g.bond_count();
    let mut s = CMatrix::zeros(n, n);
    for to in 0..n {
        let out = g.departs(to);
        for from in 0..n {
            let inc = g.arrives(from);
            if inc.vertex == out.vertex {
                s[(to, from)] = vertex_matrices[out.vertex][(out.slot, inc.slot)];
            }
        }
    }
    Ok(s)
}

/// `F(k; theta)` evaluated for many `theta` at one momentum.
pub struct SecularAtMomentum<'a> {
    graph: &'a PeriodicCellGraph,
    k: f64,
    s: CMatrix,
}

impl<'a> SecularAtMomentum<'a> {
    pub fn new(graph: &'a PeriodicCellGraph, k: f64) -> Result<Self> {
        Ok(Self { graph, k, s: bond_scattering(graph, k)? })
    }

    pub fn eval(&self, theta: &[f64]) -> Complex64 {
        let n = self.graph.bond_count();
        let mut m = CMatrix::identity(n, n);
        for (e, edge) in self.graph.edges().iter().enumerate() {
            let flux: f64 = edge.z.iter().zip(theta).map(|(&z, &t)| z as f64 * t).sum();
            let kl = self.k * edge.length;
            for (bond, phase) in [(2 * e, kl + flux), (2 * e + 1, kl - flux)] {
                let d = Complex64::from_polar(1.0, phase);
                for col in 0..n {
                    m[(bond, col)] -= d * self.s[(bond, col)];
                }
            }
        }
        m.lu().determinant()
    }
}

pub fn secular(g: &PeriodicCellGraph, k: f64, theta: &[f64]) -> Result<Complex64> {
    if theta.len() != g.nu() {
        return Err(Error::InvalidInput(format!("theta must have {} components, got {}", g.nu(), theta.len())));
    }
    Ok(SecularAtMomentum::new(g, k)?.eval(theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    /// Coarse grid points per quasimomentum axis.
    pub grid: usize,
    /// Threshold on `min |F|`; `None` means `1e-13` times the matrix dimension.
    pub eps: Option<f64>,
    /// Levels of local grid subdivision around each candidate minimum.
    pub depth: usize,
    pub parallel: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { grid: 24, eps: None, depth: 12, parallel: true }
    }
}

impl SpectrumOptions {
    fn validate(&self) -> Result<()> {
        if self.grid < 8 {
            return Err(Error::InvalidInput(format!("grid must be at least 8 per axis, got {}", self.grid)));
        }
        if let Some(eps) = self.eps {
            if eps.is_nan() || eps <= 0.0 {
                return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
            }
        }
        Ok(())
    }

    pub fn eps_for(&self, g: &PeriodicCellGraph) -> f64 {
        self.eps.unwrap_or(1e-13 * g.bond_count() as f64)
    }
}

/// Number of coarse minima that are refined.
const CANDIDATES: usize = 4;
const NEWTON_STEPS: usize = 30;

#[derive(Debug, Clone, PartialEq)]
pub struct SecularMinimum {
    pub value: f64,
    pub theta: Vec<f64>,
}

fn wrap(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

fn grid_point(index: usize, g: usize, nu: usize) -> Vec<f64> {
    let h = 2.0 * PI / g as f64;
    let mut rest = index;
    (0..nu)
        .map(|_| {
            let i = rest % g;
            rest /= g;
            -PI + (i + 1) as f64 * h
        })
        .collect()
}

fn neighbours(index: usize, g: usize, nu: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(2 * nu);
    let mut stride = 1;
    for _ in 0..nu {
        let i = (index / stride) % g;
        for j in [(i + 1) % g, (i + g - 1) % g] {
            out.push(index - i * stride + j * stride);
        }
        stride *= g;
    }
    out
}

/// Gauss-Newton on the real and imaginary parts of `F` with a
/// pseudo-inverse step and backtracking.
fn polish(f: &SecularAtMomentum<'_>, start: SecularMinimum, eps: f64) -> SecularMinimum {
    let nu = start.theta.len();
    let mut best = start;
    let delta = 1e-7;
    for _ in 0..NEWTON_STEPS {
        if best.value < eps * 1e-3 {
            break;
        }
        let value = f.eval(&best.theta);
        let mut jac = DMatrix::<f64>::zeros(2, nu);
        for l in 0..nu {
            let mut plus = best.theta.clone();
            let mut minus = best.theta.clone();
            plus[l] += delta;
            minus[l] -= delta;
            let d = (f.eval(&plus) - f.eval(&minus)) / (2.0 * delta);
            jac[(0, l)] = d.re;
            jac[(1, l)] = d.im;
        }
        let Ok(pinv) = jac.pseudo_inverse(1e-14) else { break };
        let step = pinv * nalgebra::DVector::from_vec(vec![-value.re, -value.im]);
        let mut scale = 1.0;
        let mut improved = false;
        for _ in 0..12 {
            let theta: Vec<f64> = best.theta.iter().zip(step.iter()).map(|(t, s)| wrap(t + scale * s)).collect();
            let v = f.eval(&theta).norm();
            if v < best.value {
                best = SecularMinimum { value: v, theta };
                improved = true;
                break;
            }
            scale *= 0.5;
        }
        if !improved {
            break;
        }
    }
    best
}

fn subdivide(f: &SecularAtMomentum<'_>, start: SecularMinimum, spacing: f64, depth: usize, eps: f64) -> SecularMinimum {
    let nu = start.theta.len();
    let mut best = start;
    let mut h = spacing;
    for _ in 0..depth {
        if best.value < eps {
            break;
        }
        h *= 0.5;
        let center = best.theta.clone();
        for code in 0..3usize.pow(nu as u32) {
            let mut rest = code;
            let theta: Vec<f64> = center
                .iter()
                .map(|t| {
                    let o = rest % 3;
                    rest /= 3;
                    wrap(t + (o as f64 - 1.0) * h)
                })
                .collect();
            let v = f.eval(&theta).norm();
            if v < best.value {
                best = SecularMinimum { value: v, theta };
            }
        }
    }
    best
}

/// Smallest `|F(k; theta)|` found over the Brillouin zone.
pub fn min_abs_secular(g: &PeriodicCellGraph, k: f64, opts: &SpectrumOptions) -> Result<SecularMinimum> {
    opts.validate()?;
    let eps = opts.eps_for(g);
    let f = SecularAtMomentum::new(g, k)?;
    let nu = g.nu();
    let size = opts.grid.pow(nu as u32);
    let values: Vec<f64> = (0..size).map(|i| f.eval(&grid_point(i, opts.grid, nu)).norm()).collect();
    let mut minima: Vec<usize> =
        (0..size).filter(|&i| neighbours(i, opts.grid, nu).iter().all(|&j| values[i] <= values[j])).collect();
    minima.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    minima.truncate(CANDIDATES);
    let mut best: Option<SecularMinimum> = None;
    for i in minima {
        let start = SecularMinimum { value: values[i], theta: grid_point(i, opts.grid, nu) };
        let spacing = 2.0 * PI / opts.grid as f64;
        let mut refined = polish(&f, subdivide(&f, start, spacing, opts.depth, eps), eps);
        if refined.value >= eps {
            // Zero sets can be thin slivers; restart at a finer scale.
            refined =
                polish(&f, subdivide(&f, refined, spacing * 2f64.powi(-(opts.depth as i32) / 2), opts.depth, eps), eps);
        }
        let done = refined.value < eps;
        if best.as_ref().is_none_or(|b| refined.value < b.value) {
            best = Some(refined);
        }
        if done {
            break;
        }
    }
    Ok(best.expect("a periodic grid has a minimum"))
}

/// Whether `k^2` lies in the spectrum: some quasimomentum makes `F` vanish.
pub fn in_spectrum(g: &PeriodicCellGraph, k: f64, opts: &SpectrumOptions) -> Result<bool> {
    Ok(min_abs_secular(g, k, opts)?.value < opts.eps_for(g))
}

/// Gaps in `[kmin, kmax]` from `in_spectrum` on a grid of step `dk`, with
/// each band edge refined by bisection to `edge_tol`.
pub fn scan_bands(
    g: &PeriodicCellGraph,
    kmin: f64,
    kmax: f64,
    dk: f64,
    opts: &SpectrumOptions,
) -> Result<Vec<GapInterval>> {
    if !(kmin > 0.0 && kmin < kmax && kmax.is_finite()) {
        return Err(Error::InvalidInput(format!("need 0 < kmin < kmax, got {kmin}, {kmax}")));
    }
    if dk.is_nan() || dk <= 0.0 {
        return Err(Error::InvalidInput(format!("dk must be positive, got {dk}")));
    }
    opts.validate()?;
    let steps = ((kmax - kmin) / dk).ceil() as usize;
    let ks: Vec<f64> = (0..=steps).map(|i| (kmin + i as f64 * dk).min(kmax)).collect();
    let test = |k: &f64| in_spectrum(g, *k, opts);
    let flags: Vec<bool> = if opts.parallel {
        ks.par_iter().map(test).collect::<Result<_>>()?
    } else {
        ks.iter().map(test).collect::<Result<_>>()?
    };
    let edge_tol = (dk * 1e-7).max(1e-12);
    let refine = |i: &usize| -> Result<f64> {
        // Boolean bisection between ks[i] and ks[i + 1].
        let (mut lo, mut hi) = (ks[*i], ks[*i + 1]);
        let left = flags[*i];
        while hi - lo > edge_tol {
            let mid = 0.5 * (lo + hi);
            if in_spectrum(g, mid, opts)? == left {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    let transitions: Vec<usize> = (0..ks.len() - 1).filter(|&i| flags[i] != flags[i + 1]).collect();
    let edges: Vec<f64> = if opts.parallel {
        transitions.par_iter().map(refine).collect::<Result<_>>()?
    } else {
        transitions.iter().map(refine).collect::<Result<_>>()?
    };
    let mut gaps = Vec::new();
    let mut open: Option<(f64, bool)> = if flags[0] { None } else { Some((kmin, false)) };
    for (&i, &edge) in transitions.iter().zip(&edges) {
        if flags[i] {
            open = Some((edge, true));
        } else if let Some((lo, certified)) = open.take() {
            gaps.push(GapInterval { k_lo: lo, k_hi: edge, certified });
        }
    }
    if let Some((lo, _)) = open {
        gaps.push(GapInterval { k_lo: lo, k_hi: kmax, certified: false });
    }
    Ok(gaps)
}

/// `2 pi / L` when every coupling is scale invariant and every edge length
/// is an exact integer multiple of a common `L`.
pub fn momentum_period(g: &PeriodicCellGraph) -> Option<f64> {
    if !g.vertices().iter().all(|v| v.coupling.is_scale_invariant()) {
        return None;
    }
    let lengths: Vec<BigRational> = g.edges().iter().map(|e| e.exact_length.clone()).collect::<Option<_>>()?;
    let base = rational_gcd(&lengths)?;
    Some(2.0 * PI / base.to_f64()?)
}
