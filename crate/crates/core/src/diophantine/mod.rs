//! Continued fractions, rational approximation and Markov constants.

pub mod approx;
pub mod cf;
pub mod family;
pub mod markov;
pub mod parse;
pub mod surd;

pub use approx::{
    best_approx, best_approx_above, best_approx_below, dirichlet_holds, dirichlet_simultaneous, BestApprox,
    DirichletApprox, Side,
};
pub use cf::{cf_expand, convergents, evaluate, ContinuedFraction, ExpansionSource};
pub use family::theta_family;
pub use markov::{markov, upsilon, ConstantEstimate};
pub use parse::{parse_cf, parse_rational, parse_surd};
pub use surd::QuadraticSurd;
