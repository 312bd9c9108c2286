//! Runs each command against the core library and builds its report.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use qgraph_core::diophantine::{
    best_approx, cf_expand, convergents, evaluate, parse_rational, parse_surd, theta_family, ExpansionSource,
    QuadraticSurd, Side,
};
use qgraph_core::floquet::{min_abs_secular, momentum_period, scan_bands, PeriodicCellGraph, SpectrumOptions};
use qgraph_core::lattice::{
    a_sequence, classify_with, count_m_solutions, gamma_minus, gamma_plus, golden_kmax, predict_gap_count_golden,
    scan_gaps, ExactLattice, GapCount, LatticeParams, Regime, DEFAULT_M,
};
use qgraph_core::RealInterval;

use crate::args::{CfArgs, ClassifyArgs, GapsArgs, LatticeArgs, SecularArgs, ThresholdsArgs};
use crate::report::{
    CfReport, ClassifyReport, Convergent, GapRow, GapsReport, GoldenPrediction, LatticeSummary, ProfilePoint,
    SecularReport, TableRow, ThresholdsReport,
};
use crate::CliError;

const DEFAULT_DEPTH: usize = 10;
const DEFAULT_KMAX: f64 = 100.0;
const DEFAULT_TOL: f64 = 1e-10;
const DEFAULT_MMAX: u64 = 1000;
const DEFAULT_JMAX: u64 = 10;

pub fn cf(args: &CfArgs) -> Result<CfReport, CliError> {
    let depth = args.depth.unwrap_or(DEFAULT_DEPTH);
    let (input, value) = match (&args.number, args.family_t) {
        (Some(_), Some(_)) => return Err(CliError::input("give either NUMBER or --family-t, not both")),
        (Some(n), None) => (n.clone(), parse_surd(n)?),
        (None, Some(t)) => (format!("theta({t})"), theta_family(t)?.0),
        (None, None) => return Err(CliError::input("missing NUMBER (or --family-t)")),
    };
    let expansion = cf_expand(&ExpansionSource::Exact(value.clone()), depth)?;
    let terms = expansion.terms(depth);
    let convergents: Vec<Convergent> = convergents(&expansion, terms.len())?
        .into_iter()
        .enumerate()
        .map(|(n, c)| Convergent { n, p: c.numer().to_string(), q: c.denom().to_string() })
        .collect();
    let (best_below, best_above) = match args.qmax {
        Some(qmax) if !value.is_rational() => {
            let list = |side| -> Result<Vec<String>, CliError> {
                Ok(best_approx(&expansion, qmax, side)?.iter().map(|b| b.frac.to_string()).collect())
            };
            (Some(list(Side::Below)?), Some(list(Side::Above)?))
        }
        _ => (None, None),
    };
    Ok(CfReport {
        input,
        value: value.to_string(),
        expansion: expansion.to_string(),
        depth,
        terms: terms.iter().map(|t| t.to_string()).collect(),
        convergents,
        enclosure: evaluate(&expansion, 1e-15)?,
        best_below,
        best_above,
    })
}

/// A lattice resolved from flags: double-precision parameters for scanning
/// and the exact ratio `a/b` for the thresholds.
struct Lattice {
    params: LatticeParams,
    exact: ExactLattice,
    golden: bool,
    summary: LatticeSummary,
}

fn length(name: &str, text: &str) -> Result<(f64, BigRational), CliError> {
    let exact = parse_rational(text).map_err(|e| CliError::input(format!("--{name}: {e}")))?;
    let value = exact.to_f64().unwrap_or(f64::NAN);
    if !(value.is_finite() && value > 0.0) {
        return Err(CliError::input(format!("edge length {name} must be positive, got {text}")));
    }
    Ok((value, exact))
}

fn resolve(args: &LatticeArgs, alpha: Option<f64>) -> Result<Lattice, CliError> {
    let coupling = alpha.unwrap_or(1.0);
    if !coupling.is_finite() {
        return Err(CliError::input(format!("alpha must be finite, got {coupling}")));
    }
    let a = args.a.as_deref().map(|t| length("a", t)).transpose()?;
    let b = args.b.as_deref().map(|t| length("b", t)).transpose()?;
    let preset: Option<(QuadraticSurd, String)> = if args.golden {
        Some((QuadraticSurd::golden_mean(), "golden mean, a = phi b".into()))
    } else if let Some(t) = args.theta_family {
        Some((theta_family(t)?.0, format!("theta({t}) family, a = theta b")))
    } else if let Some(spec) = &args.theta {
        Some((parse_surd(spec)?, "a = theta b".into()))
    } else {
        None
    };
    let exact = match (preset.clone(), a.as_ref(), b.as_ref()) {
        (Some(_), Some(_), Some(_)) => {
            return Err(CliError::input("with a ratio preset give at most one of --a and --b"))
        }
        (Some((theta, _)), Some((a, _)), None) => ExactLattice::with_a(theta, *a, coupling)?,
        (Some((theta, _)), None, Some((b, _))) => ExactLattice::with_b(theta, *b, coupling)?,
        (Some((theta, _)), None, None) if args.golden => ExactLattice::with_a(theta, 1.0, coupling)?,
        (Some((theta, _)), None, None) => ExactLattice::with_b(theta, 1.0, coupling)?,
        (None, Some((af, ar)), Some((bf, br))) => {
            let ratio = QuadraticSurd::from_rational(&(ar / br));
            let mut lat = ExactLattice::with_b(ratio, *bf, coupling)?;
            lat.a = RealInterval::point(*af);
            lat
        }
        (None, _, _) => {
            return Err(CliError::input("lattice needs --a and --b, or one of --golden, --theta-family, --theta"))
        }
    };
    let params = match (&preset, a, b) {
        (None, Some((af, _)), Some((bf, _))) => LatticeParams::new(af, bf, coupling)?,
        _ => exact.params()?,
    };
    let summary = LatticeSummary {
        a: params.a,
        b: params.b,
        alpha,
        theta: Some(exact.theta.to_string()),
        preset: preset.map(|(_, label)| label),
    };
    Ok(Lattice { params, exact, golden: args.golden, summary })
}

fn require_alpha(args: &LatticeArgs) -> Result<f64, CliError> {
    args.alpha.ok_or_else(|| CliError::input("missing --alpha"))
}

pub fn gaps(args: &GapsArgs) -> Result<GapsReport, CliError> {
    let alpha = require_alpha(&args.lattice)?;
    let lattice = resolve(&args.lattice, Some(alpha))?;
    let p = lattice.params;
    let predicted = if lattice.golden && alpha < 0.0 { predict_gap_count_golden(alpha, p.a).ok() } else { None };
    let (kmax, origin) = match (args.kmax, predicted) {
        (Some(k), _) => (k, "given".to_string()),
        (None, Some(GapCount::Finite(n))) => {
            (golden_kmax(n, p.a, p.b), format!("(F_{} + 1) pi max(1/a, 1/b) for N = {n}", 2 * n + 2))
        }
        (None, _) => (DEFAULT_KMAX, "default".to_string()),
    };
    let tol = args.tol.unwrap_or(DEFAULT_TOL);
    let gaps = scan_gaps(&p, kmax, tol)?;
    Ok(GapsReport {
        lattice: lattice.summary,
        kmax,
        kmax_origin: origin,
        tol,
        predicted,
        gaps: gaps.iter().map(GapRow::from).collect(),
    })
}

pub fn classify(args: &ClassifyArgs) -> Result<ClassifyReport, CliError> {
    let alpha = require_alpha(&args.lattice)?;
    let lattice = resolve(&args.lattice, Some(alpha))?;
    let exact = &lattice.exact;
    let m = args.m.unwrap_or(DEFAULT_M);
    if m == 0 {
        return Err(CliError::input("--m must be at least 1"));
    }
    let report = classify_with(exact, m)?;
    let mut notes = Vec::new();
    let rational = exact.theta.is_rational();
    let (gamma_plus, gamma_minus, finite_bound) = if rational {
        notes.push("rational ratio a/b: infinitely many gaps for every nonzero coupling".to_string());
        (None, None, None)
    } else {
        let (plus, minus) =
            if alpha > 0.0 { (report.gamma, gamma_minus(exact, m)?) } else { (gamma_plus(exact, m)?, report.gamma) };
        (Some(plus), Some(minus), Some(report.finite_bound))
    };
    match report.regime {
        Regime::BoundaryUndecided => notes.push(format!(
            "|alpha| lies inside a threshold enclosure; a larger --m narrows the gamma enclosures (current M = {m})"
        )),
        Regime::FiniteNonzero if !lattice.golden => {
            notes.push("the exact gap count is only available for the golden mean; use `gaps` to list them".to_string())
        }
        _ => {}
    }
    let golden = if lattice.golden && alpha < 0.0 {
        Some(golden_prediction(alpha, lattice.params.a, args.mmax.unwrap_or(DEFAULT_MMAX), &mut notes)?)
    } else {
        None
    };
    Ok(ClassifyReport {
        lattice: lattice.summary,
        regime: report.regime,
        gamma_plus,
        gamma_minus,
        finite_bound,
        m,
        golden,
        notes,
    })
}

fn golden_prediction(alpha: f64, a: f64, mmax: u64, notes: &mut Vec<String>) -> Result<GoldenPrediction, CliError> {
    let count = match predict_gap_count_golden(alpha, a) {
        Ok(c) => Some(c),
        Err(e) if e.kind() == qgraph_core::ErrorKind::Numerical => {
            notes.push(e.to_string());
            None
        }
        Err(e) => return Err(e.into()),
    };
    let (lower, upper) = match count {
        Some(GapCount::Finite(n)) => {
            let lower = if n == 0 { None } else { Some(a_sequence(n, a)?) };
            (lower, Some(a_sequence(n + 1, a)?))
        }
        _ => (None, None),
    };
    let m_solutions = match count_m_solutions(alpha, a, mmax) {
        Ok(v) => Some(v),
        Err(e) if e.kind() == qgraph_core::ErrorKind::Numerical => {
            notes.push(e.to_string());
            None
        }
        Err(e) => return Err(e.into()),
    };
    Ok(GoldenPrediction { count, lower, upper, m_solutions, mmax })
}

pub fn thresholds(args: &ThresholdsArgs) -> Result<ThresholdsReport, CliError> {
    let lattice = resolve(&args.lattice, args.lattice.alpha)?;
    let exact = &lattice.exact;
    if exact.theta.is_rational() {
        return Err(qgraph_core::Error::RationalTheta.into());
    }
    let m = args.m.unwrap_or(DEFAULT_M);
    if m == 0 {
        return Err(CliError::input("--m must be at least 1"));
    }
    let (a_table, a_limit) = if lattice.golden {
        let a = lattice.params.a;
        let jmax = args.jmax.unwrap_or(DEFAULT_JMAX);
        let table =
            (1..=jmax).map(|j| Ok(TableRow { j, value: a_sequence(j, a)? })).collect::<Result<Vec<_>, CliError>>()?;
        let pi = RealInterval::pi();
        let limit = pi * pi / RealInterval::point(5.0).sqrt() / RealInterval::point(a);
        (Some(table), Some(limit))
    } else {
        (None, None)
    };
    Ok(ThresholdsReport {
        lattice: lattice.summary,
        m,
        gamma_plus: gamma_plus(exact, m)?,
        gamma_minus: gamma_minus(exact, m)?,
        a_table,
        a_limit,
    })
}

pub fn secular(args: &SecularArgs, with_profile: bool) -> Result<SecularReport, CliError> {
    let path = args.graph.as_ref().ok_or_else(|| CliError::input("missing graph file"))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let graph = PeriodicCellGraph::from_json(&text)?;
    let dk = args.dk.unwrap_or(0.01);
    let kmin = args.kmin.unwrap_or(dk);
    let kmax = args.kmax.unwrap_or(20.0);
    let defaults = SpectrumOptions::default();
    let opts = SpectrumOptions {
        grid: args.grid.unwrap_or(defaults.grid),
        eps: args.eps,
        depth: args.refine_depth.unwrap_or(defaults.depth),
        parallel: true,
    };
    let gaps = scan_bands(&graph, kmin, kmax, dk, &opts)?;
    let profile = if with_profile {
        let steps = ((kmax - kmin) / dk).ceil() as usize;
        let points = (0..=steps)
            .map(|i| (kmin + i as f64 * dk).min(kmax))
            .map(|k| Ok(ProfilePoint { k, min_abs_f: min_abs_secular(&graph, k, &opts)?.value }))
            .collect::<Result<Vec<_>, CliError>>()?;
        Some(points)
    } else {
        None
    };
    Ok(SecularReport {
        graph: path.display().to_string(),
        kmin,
        kmax,
        dk,
        eps: opts.eps_for(&graph),
        momentum_period: momentum_period(&graph),
        gaps: gaps.iter().map(GapRow::from).collect(),
        profile,
    })
}
