//! Command-line flags and the optional TOML config that mirrors them.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "qgraph",
    version,
    about = "Band gaps of periodic quantum graphs and of the rectangular Kronig-Penney lattice"
)]
pub struct Cli {
    /// Output format [default: text].
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to this file instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// TOML file whose keys mirror the long flags; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continued fraction, convergents and enclosure of an exact number.
    Cf(CfArgs),
    /// Gap intervals of the rectangular lattice from the closed-form condition.
    Gaps(GapsArgs),
    /// Gap regime of the rectangular lattice: none, finitely many, or infinitely many.
    Classify(ClassifyArgs),
    /// Band scan of a periodic graph from its secular determinant.
    Secular(SecularArgs),
    /// Thresholds gamma+ and gamma-, and the A_j table for the golden mean.
    Thresholds(ThresholdsArgs),
}

#[derive(Debug, Args, Clone, Default)]
pub struct CfArgs {
    /// golden, (A+B*sqrt(D))/C, p/q, an integer, a decimal or [a0;a1,(p1,p2)].
    pub number: Option<String>,
    /// Number of partial quotients and convergents to list [default: 10].
    #[arg(long)]
    pub depth: Option<usize>,
    /// Expand theta(t) = [0;t,t,1,1,...] instead of NUMBER.
    #[arg(long)]
    pub family_t: Option<u64>,
    /// Also list best approximations from both sides with denominator up to QMAX.
    #[arg(long)]
    pub qmax: Option<u64>,
}

/// Geometry and coupling of the rectangular lattice.
#[derive(Debug, Args, Clone, Default)]
pub struct LatticeArgs {
    /// Edge length along the first direction (exact decimal or p/q).
    #[arg(long)]
    pub a: Option<String>,
    /// Edge length along the second direction (exact decimal or p/q).
    #[arg(long)]
    pub b: Option<String>,
    /// Delta coupling strength at the vertex.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Golden-mean lattice a = phi b, with a = 1 unless given.
    #[arg(long)]
    pub golden: bool,
    /// Lattice a = theta(t) b, with b = 1 unless given.
    #[arg(long, conflicts_with = "golden")]
    pub theta_family: Option<u64>,
    /// Exact ratio a/b, e.g. (1+sqrt(5))/2; b = 1 unless a or b is given.
    #[arg(long, conflicts_with_all = ["golden", "theta_family"])]
    pub theta: Option<String>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct GapsArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Upper end of the momentum scan [default: covers the predicted gaps of a
    /// golden lattice, 100 otherwise].
    #[arg(long)]
    pub kmax: Option<f64>,
    /// Bisection tolerance for gap edges in k [default: 1e-10].
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Terms summed explicitly in the threshold infima [default: 10000].
    #[arg(long)]
    pub m: Option<u64>,
    /// Range searched for the integers m that produce gaps on a golden lattice [default: 1000].
    #[arg(long)]
    pub mmax: Option<u64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct ThresholdsArgs {
    #[command(flatten)]
    pub lattice: LatticeArgs,
    /// Terms summed explicitly in the threshold infima [default: 10000].
    #[arg(long)]
    pub m: Option<u64>,
    /// Rows of the A_j table for a golden lattice [default: 10].
    #[arg(long)]
    pub jmax: Option<u64>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct SecularArgs {
    /// Graph description (JSON).
    pub graph: Option<PathBuf>,
    /// Lower end of the momentum scan [default: DK].
    #[arg(long)]
    pub kmin: Option<f64>,
    /// Upper end of the momentum scan [default: 20].
    #[arg(long)]
    pub kmax: Option<f64>,
    /// Momentum grid step [default: 0.01].
    #[arg(long)]
    pub dk: Option<f64>,
    /// Quasimomentum grid points per axis [default: 24].
    #[arg(long)]
    pub grid: Option<usize>,
    /// Threshold on min |F| [default: 1e-13 times the number of bonds].
    #[arg(long)]
    pub eps: Option<f64>,
    /// Subdivision levels around each candidate minimum [default: 12].
    #[arg(long)]
    pub refine_depth: Option<usize>,
}

/// Config document; every key is optional and named after its long flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Config {
    pub format: Option<Format>,
    pub output: Option<PathBuf>,
    pub number: Option<String>,
    pub depth: Option<usize>,
    pub family_t: Option<u64>,
    pub qmax: Option<u64>,
    pub a: Option<Length>,
    pub b: Option<Length>,
    pub alpha: Option<f64>,
    pub golden: Option<bool>,
    pub theta_family: Option<u64>,
    pub theta: Option<String>,
    pub kmax: Option<f64>,
    pub tol: Option<f64>,
    pub m: Option<u64>,
    pub mmax: Option<u64>,
    pub jmax: Option<u64>,
    pub graph: Option<PathBuf>,
    pub kmin: Option<f64>,
    pub dk: Option<f64>,
    pub grid: Option<usize>,
    pub eps: Option<f64>,
    pub refine_depth: Option<usize>,
}

/// A length written as a TOML number or string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Length {
    Number(f64),
    Text(String),
}

impl Length {
    fn into_text(self) -> String {
        match self {
            Length::Number(x) => x.to_string(),
            Length::Text(s) => s,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::input(format!("config {}: {e}", path.display())))
    }

    /// Fills every flag the user left unset from the config. Relative paths
    /// in the config are taken relative to the config file.
    pub fn apply(self, cli: &mut Cli, base: &Path) {
        let rel = |p: PathBuf| if p.is_relative() { base.join(p) } else { p };
        fill(&mut cli.format, self.format);
        fill(&mut cli.output, self.output.clone().map(rel));
        let lattice = |l: &mut LatticeArgs, c: &Config| {
            fill(&mut l.a, c.a.clone().map(Length::into_text));
            fill(&mut l.b, c.b.clone().map(Length::into_text));
            fill(&mut l.alpha, c.alpha);
            l.golden |= c.golden.unwrap_or(false) && l.theta_family.is_none() && l.theta.is_none();
            if !l.golden {
                fill(&mut l.theta_family, c.theta_family);
                if l.theta_family.is_none() {
                    fill(&mut l.theta, c.theta.clone());
                }
            }
        };
        match &mut cli.command {
            Command::Cf(x) => {
                if x.family_t.is_none() {
                    fill(&mut x.number, self.number.clone());
                }
                if x.number.is_none() {
                    fill(&mut x.family_t, self.family_t);
                }
                fill(&mut x.depth, self.depth);
                fill(&mut x.qmax, self.qmax);
            }
            Command::Gaps(x) => {
                lattice(&mut x.lattice, &self);
                fill(&mut x.kmax, self.kmax);
                fill(&mut x.tol, self.tol);
            }
            Command::Classify(x) => {
                lattice(&mut x.lattice, &self);
                fill(&mut x.m, self.m);
                fill(&mut x.mmax, self.mmax);
            }
            Command::Thresholds(x) => {
                lattice(&mut x.lattice, &self);
                fill(&mut x.m, self.m);
                fill(&mut x.jmax, self.jmax);
            }
            Command::Secular(x) => {
                fill(&mut x.graph, self.graph.clone().map(rel));
                fill(&mut x.kmin, self.kmin);
                fill(&mut x.kmax, self.kmax);
                fill(&mut x.dk, self.dk);
                fill(&mut x.grid, self.grid);
                fill(&mut x.eps, self.eps);
                fill(&mut x.refine_depth, self.refine_depth);
            }
        }
    }
}

fn fill<T>(slot: &mut Option<T>, fallback: Option<T>) {
    if slot.is_none() {
        *slot = fallback;
    }
}
