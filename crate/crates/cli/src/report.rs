//! Reports produced by each command, with their text and CSV renderings.
//! JSON is the serde form of the same structs.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use qgraph_core::lattice::{GapCount, GapInterval, Regime};
use qgraph_core::RealInterval;

use crate::format::{interval, num};
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Convergent {
    pub n: usize,
    pub p: String,
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CfReport {
    pub input: String,
    /// Exact value in `(A+B*sqrt(D))/C` form.
    pub value: String,
    /// Complete expansion with the period in parentheses.
    pub expansion: String,
    pub depth: usize,
    pub terms: Vec<String>,
    pub convergents: Vec<Convergent>,
    pub enclosure: RealInterval,
    pub best_below: Option<Vec<String>>,
    pub best_above: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub a: f64,
    pub b: f64,
    pub alpha: Option<f64>,
    /// Exact ratio `a/b` when known.
    pub theta: Option<String>,
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub k_lo: f64,
    pub k_hi: f64,
    pub e_lo: f64,
    pub e_hi: f64,
    pub certified: bool,
}

impl From<&GapInterval> for GapRow {
    fn from(g: &GapInterval) -> Self {
        let (e_lo, e_hi) = g.energy();
        GapRow { k_lo: g.k_lo, k_hi: g.k_hi, e_lo, e_hi, certified: g.certified }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapsReport {
    pub lattice: LatticeSummary,
    pub kmax: f64,
    /// How the scan range was chosen.
    pub kmax_origin: String,
    pub tol: f64,
    pub predicted: Option<GapCount>,
    pub gaps: Vec<GapRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenPrediction {
    /// `None` when `|alpha|` falls inside an enclosure of some `A_j`.
    pub count: Option<GapCount>,
    /// `A_N` (absent for `N = 0`) and `A_{N+1}`.
    pub lower: Option<RealInterval>,
    pub upper: Option<RealInterval>,
    /// The integers `m <= mmax` whose terms fall below `|alpha|`.
    pub m_solutions: Option<Vec<u64>>,
    pub mmax: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub lattice: LatticeSummary,
    pub regime: Regime,
    pub gamma_plus: Option<RealInterval>,
    pub gamma_minus: Option<RealInterval>,
    pub finite_bound: Option<RealInterval>,
    pub m: u64,
    pub golden: Option<GoldenPrediction>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub j: u64,
    pub value: RealInterval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdsReport {
    pub lattice: LatticeSummary,
    pub m: u64,
    pub gamma_plus: RealInterval,
    pub gamma_minus: RealInterval,
    /// `A_j` for a golden lattice.
    pub a_table: Option<Vec<TableRow>>,
    /// `pi^2 / (sqrt 5 a)`, the limit of `A_j`.
    pub a_limit: Option<RealInterval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub k: f64,
    pub min_abs_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecularReport {
    pub graph: String,
    pub kmin: f64,
    pub kmax: f64,
    pub dk: f64,
    pub eps: f64,
    pub momentum_period: Option<f64>,
    pub gaps: Vec<GapRow>,
    /// `min |F|` on the scan grid; omitted from text output.
    pub profile: Option<Vec<ProfilePoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Report {
    Cf(CfReport),
    Gaps(GapsReport),
    Classify(ClassifyReport),
    Thresholds(ThresholdsReport),
    Secular(SecularReport),
}

impl Report {
    pub fn json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::numerical(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn text(&self) -> String {
        match self {
            Report::Cf(r) => cf_text(r),
            Report::Gaps(r) => gaps_text(r),
            Report::Classify(r) => classify_text(r),
            Report::Thresholds(r) => thresholds_text(r),
            Report::Secular(r) => secular_text(r),
        }
    }

    pub fn csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |fields: Vec<String>| w.write_record(&fields);
        let result = match self {
            Report::Cf(r) => {
                let mut out = row(vec!["n".into(), "a_n".into(), "p_n".into(), "q_n".into()]);
                for (c, a) in r.convergents.iter().zip(&r.terms) {
                    out = out.and_then(|_| row(vec![c.n.to_string(), a.clone(), c.p.clone(), c.q.clone()]));
                }
                out
            }
            Report::Gaps(r) => gap_rows(&mut row, &r.gaps),
            Report::Classify(r) => {
                let mut out = row(vec!["quantity".into(), "lo".into(), "hi".into()]);
                let items =
                    [("gamma_plus", r.gamma_plus), ("gamma_minus", r.gamma_minus), ("finite_bound", r.finite_bound)];
                for (name, iv) in items.iter().filter_map(|(n, iv)| iv.map(|iv| (n, iv))) {
                    out = out.and_then(|_| row(interval_row(name, &iv)));
                }
                if let Some(g) = &r.golden {
                    for (name, iv) in [("A_N", g.lower), ("A_N+1", g.upper)] {
                        if let Some(iv) = iv {
                            out = out.and_then(|_| row(interval_row(name, &iv)));
                        }
                    }
                }
                out
            }
            Report::Thresholds(r) => {
                let mut out = row(vec!["quantity".into(), "lo".into(), "hi".into()]);
                out = out.and_then(|_| row(interval_row("gamma_plus", &r.gamma_plus)));
                out = out.and_then(|_| row(interval_row("gamma_minus", &r.gamma_minus)));
                for t in r.a_table.iter().flatten() {
                    out = out.and_then(|_| row(interval_row(&format!("A_{}", t.j), &t.value)));
                }
                if let Some(l) = &r.a_limit {
                    out = out.and_then(|_| row(interval_row("A_limit", l)));
                }
                out
            }
            Report::Secular(r) => {
                let mut out = row(vec!["k".into(), "min_abs_F".into()]);
                for p in r.profile.iter().flatten() {
                    out = out.and_then(|_| row(vec![num(p.k), num(p.min_abs_f)]));
                }
                out
            }
        };
        result.map_err(|e| CliError::numerical(format!("csv: {e}")))?;
        let bytes = w.into_inner().map_err(|e| CliError::numerical(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| CliError::numerical(format!("csv: {e}")))
    }
}

fn gap_rows(row: &mut impl FnMut(Vec<String>) -> csv::Result<()>, gaps: &[GapRow]) -> csv::Result<()> {
    row(["k_lo", "k_hi", "E_lo", "E_hi", "certified"].map(String::from).to_vec())?;
    for g in gaps {
        row(vec![num(g.k_lo), num(g.k_hi), num(g.e_lo), num(g.e_hi), g.certified.to_string()])?;
    }
    Ok(())
}

/// CSV ends of an enclosure, rounded outward like the text form.
fn interval_row(name: &str, iv: &RealInterval) -> Vec<String> {
    let text = interval(iv);
    let (lo, hi) = text.trim_start_matches('[').trim_end_matches(']').split_once(", ").expect("interval form");
    vec![name.to_string(), lo.to_string(), hi.to_string()]
}

fn cf_text(r: &CfReport) -> String {
    let mut s = String::new();
    let terms = match r.terms.split_first() {
        Some((a0, rest)) => format!("[{a0};{}]", rest.join(",")),
        None => "[]".into(),
    };
    let terms = terms.replace(";]", "]");
    let _ = writeln!(s, "input:       {}", r.input);
    let _ = writeln!(s, "value:       {}", r.value);
    let _ = writeln!(s, "expansion:   {}", r.expansion);
    let _ = writeln!(s, "terms:       {terms}");
    let _ = writeln!(s, "enclosure:   {}", interval(&r.enclosure));
    let _ = writeln!(s, "convergents:");
    for c in &r.convergents {
        let _ = writeln!(s, "  {:>3}  {}/{}", c.n, c.p, c.q);
    }
    for (name, list) in [("from below", &r.best_below), ("from above", &r.best_above)] {
        if let Some(list) = list {
            let _ = writeln!(s, "best approximations {name}: {}", list.join(", "));
        }
    }
    s
}

fn lattice_text(s: &mut String, l: &LatticeSummary) {
    let preset = l.preset.as_deref().map(|p| format!(" ({p})")).unwrap_or_default();
    let _ = writeln!(s, "lattice:     a = {}, b = {}{preset}", num(l.a), num(l.b));
    if let Some(t) = &l.theta {
        let _ = writeln!(s, "ratio a/b:   {t}");
    }
    if let Some(alpha) = l.alpha {
        let _ = writeln!(s, "coupling:    alpha = {}", num(alpha));
    }
}

fn count_text(c: &GapCount) -> String {
    match c {
        GapCount::Finite(n) => n.to_string(),
        GapCount::Infinite => "infinitely many".into(),
    }
}

fn gap_lines(s: &mut String, gaps: &[GapRow]) {
    for (i, g) in gaps.iter().enumerate() {
        let flag = if g.certified { "" } else { "  (cut off by the scan range)" };
        let _ = writeln!(
            s,
            "  {:>3}  k in ({}, {})  E in ({}, {}){flag}",
            i + 1,
            num(g.k_lo),
            num(g.k_hi),
            num(g.e_lo),
            num(g.e_hi)
        );
    }
}

fn gaps_text(r: &GapsReport) -> String {
    let mut s = String::new();
    lattice_text(&mut s, &r.lattice);
    let _ = writeln!(s, "scan:        0 < k <= {} ({}), tol {}", num(r.kmax), r.kmax_origin, num(r.tol));
    if let Some(p) = &r.predicted {
        let _ = writeln!(s, "predicted:   {} gap(s)", count_text(p));
    }
    let _ = writeln!(s, "gaps found:  {}", r.gaps.len());
    gap_lines(&mut s, &r.gaps);
    s
}

fn classify_text(r: &ClassifyReport) -> String {
    let mut s = String::new();
    lattice_text(&mut s, &r.lattice);
    let _ = writeln!(s, "regime:      {}", r.regime);
    if let Some(g) = &r.gamma_plus {
        let _ = writeln!(s, "gamma+:      {}", interval(g));
    }
    if let Some(g) = &r.gamma_minus {
        let _ = writeln!(s, "gamma-:      {}", interval(g));
    }
    if let Some(b) = &r.finite_bound {
        let _ = writeln!(s, "finite-gap bound: {}", interval(b));
    }
    if let Some(g) = &r.golden {
        match &g.count {
            Some(c) => {
                let _ = writeln!(s, "gap count:   N = {}", count_text(c));
            }
            None => {
                let _ = writeln!(s, "gap count:   undecided");
            }
        }
        if let (GapCount::Finite(n), Some(upper)) = (g.count.unwrap_or(GapCount::Infinite), &g.upper) {
            let lower = g.lower.as_ref().map(|l| format!("A_{n} = {} < ", interval(l))).unwrap_or_default();
            let _ = writeln!(s, "bracket:     {lower}|alpha| <= A_{} = {}", n + 1, interval(upper));
        }
        if let Some(ms) = &g.m_solutions {
            let list: Vec<String> = ms.iter().map(u64::to_string).collect();
            let _ = writeln!(s, "m-solutions: {{{}}} (m <= {})", list.join(", "), g.mmax);
        }
    }
    for note in &r.notes {
        let _ = writeln!(s, "note:        {note}");
    }
    s
}

fn thresholds_text(r: &ThresholdsReport) -> String {
    let mut s = String::new();
    lattice_text(&mut s, &r.lattice);
    let _ = writeln!(s, "gamma+:      {}", interval(&r.gamma_plus));
    let _ = writeln!(s, "gamma-:      {}", interval(&r.gamma_minus));
    let _ = writeln!(s, "truncation:  M = {}", r.m);
    if let Some(table) = &r.a_table {
        let _ = writeln!(s, "A_j:");
        for t in table {
            let _ = writeln!(s, "  {:>3}  {}", t.j, interval(&t.value));
        }
    }
    if let Some(l) = &r.a_limit {
        let _ = writeln!(s, "limit:       {}", interval(l));
    }
    s
}

fn secular_text(r: &SecularReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph:       {}", r.graph);
    let _ = writeln!(s, "scan:        {} <= k <= {}, dk {}, eps {}", num(r.kmin), num(r.kmax), num(r.dk), num(r.eps));
    match r.momentum_period {
        Some(p) => {
            let _ = writeln!(s, "momentum period: 2π/L = {} (L = {})", num(p), num(2.0 * std::f64::consts::PI / p));
        }
        None => {
            let _ = writeln!(s, "momentum period: none (needs scale-invariant couplings and commensurate lengths)");
        }
    }
    if r.gaps.is_empty() {
        let _ = writeln!(s, "no gaps detected");
    } else {
        let _ = writeln!(s, "gaps found:  {}", r.gaps.len());
        gap_lines(&mut s, &r.gaps);
    }
    s
}
