use thiserror::Error;

use crate::state::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Fock dimension {0}: at least 2 levels are required")]
    InvalidDimension(usize),

    #[error("invalid state: {0}")]
    InvalidState(ValidationReport),

    #[error("malformed state: {0}")]
    Malformed(String),

    #[error("degenerate correlation |r| = {0} (must be < 1)")]
    DegenerateCorrelation(f64),

    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("purity {mu} is not reachable with {levels} levels (minimum 1/{levels})")]
    Infeasible { mu: f64, levels: usize },

    #[error("{method} does not apply at mu = {mu}: {reason}")]
    PieceDomain {
        method: &'static str,
        mu: f64,
        reason: &'static str,
    },

    #[error("sampled barrier grid too coarse: {0}")]
    Resolution(String),

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
