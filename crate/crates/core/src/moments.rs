//! First and second moments, correlation coefficient and purity.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{
    validate_state, FockDensityMatrix, GaussianState, Invariant, QuantumState, ValidationReport,
    Violation, STATE_TOLERANCE, TRUNCATION_POPULATION,
};

/// `|r|` at or above this is treated as perfectly correlated.
pub const DEGENERATE_CORRELATION: f64 = 1.0 - 1e-12;

/// Populations of the two highest Fock levels when either is large enough to
/// corrupt the truncated second moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWarning {
    pub dim: usize,
    pub top_population: f64,
    pub next_population: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondMoments {
    pub mean_q: f64,
    pub mean_p: f64,
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_qp: f64,
    /// `σqp / √(σqq σpp)`
    pub r: f64,
    /// `Tr ρ²`
    pub mu: f64,
    /// `1 − μ`
    pub linear_entropy: f64,
    pub truncation: Option<TruncationWarning>,
}

impl SecondMoments {
    /// Builds moments from raw covariances and a purity; `r` and the linear
    /// entropy are derived.
    pub fn from_covariances(
        mean_q: f64,
        mean_p: f64,
        sigma_qq: f64,
        sigma_pp: f64,
        sigma_qp: f64,
        mu: f64,
    ) -> Result<Self> {
        if !(sigma_qq > 0.0 && sigma_pp > 0.0) {
            return Err(Error::domain(
                "variance",
                sigma_qq.min(sigma_pp),
                "sigma_qq, sigma_pp > 0",
            ));
        }
        let r = sigma_qp / (sigma_qq * sigma_pp).sqrt();
        if !(r.abs() < DEGENERATE_CORRELATION) {
            return Err(Error::DegenerateCorrelation(r.abs()));
        }
        Ok(SecondMoments {
            mean_q,
            mean_p,
            sigma_qq,
            sigma_pp,
            sigma_qp,
            r,
            mu,
            linear_entropy: 1.0 - mu,
            truncation: None,
        })
    }

    pub fn product(&self) -> f64 {
        self.sigma_qq * self.sigma_pp
    }

    /// `σqq σpp − σqp²`
    pub fn determinant(&self) -> f64 {
        self.sigma_qq * self.sigma_pp - self.sigma_qp * self.sigma_qp
    }
}

/// Moments of a validated state.
///
/// A Fock matrix is embedded one level higher before the quadratic
/// operators act, so its moments are exact for the matrix as given. A
/// populated top of the ladder (the input itself may be a truncation) is
/// still flagged in [`SecondMoments::truncation`].
pub fn compute_moments(state: &QuantumState) -> Result<SecondMoments> {
    validate_state(state).into_result()?;
    match state {
        QuantumState::Gaussian(g) => SecondMoments::from_covariances(
            g.mean_q,
            g.mean_p,
            g.sigma_qq,
            g.sigma_pp,
            g.sigma_qp,
            gaussian_purity(g)?,
        ),
        QuantumState::Fock(f) => fock_moments(f),
    }
}

fn fock_moments(rho: &FockDensityMatrix) -> Result<SecondMoments> {
    let embedded = rho.embed(rho.dim() + 1)?;
    let (q, p) = embedded.quadratures();
    let m = embedded.entries();
    let expect = |op: &DMatrix<Complex64>| trace_product(m, op);

    let mean_q = expect(&q);
    let mean_p = expect(&p);
    let qq = &q * &q;
    let pp = &p * &p;
    let sym = &q * &p + &p * &q;
    let sigma_qq = expect(&qq) - mean_q * mean_q;
    let sigma_pp = expect(&pp) - mean_p * mean_p;
    let sigma_qp = 0.5 * expect(&sym) - mean_q * mean_p;

    let mut moments = SecondMoments::from_covariances(
        mean_q,
        mean_p,
        sigma_qq,
        sigma_pp,
        sigma_qp,
        fock_purity(rho)?,
    )?;
    moments.truncation = truncation_warning(rho);
    Ok(moments)
}

/// `Re Tr(ρ·O)` without forming the product matrix.
fn trace_product(rho: &DMatrix<Complex64>, op: &DMatrix<Complex64>) -> f64 {
    let n = rho.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        for k in 0..n {
            acc += rho[(j, k)] * op[(k, j)];
        }
    }
    acc.re
}

pub fn truncation_warning(rho: &FockDensityMatrix) -> Option<TruncationWarning> {
    let dim = rho.dim();
    let top = rho.entries()[(dim - 1, dim - 1)].re;
    let next = rho.entries()[(dim - 2, dim - 2)].re;
    (top >= TRUNCATION_POPULATION || next >= TRUNCATION_POPULATION).then_some(TruncationWarning {
        dim,
        top_population: top,
        next_population: next,
    })
}

/// `Tr ρ²`: sum of squared eigenvalues for Fock states, `ħ/(2√det σ)` for
/// Gaussian states.
pub fn purity(state: &QuantumState) -> Result<f64> {
    match state {
        QuantumState::Gaussian(g) => gaussian_purity(g),
        QuantumState::Fock(f) => fock_purity(f),
    }
}

fn gaussian_purity(g: &GaussianState) -> Result<f64> {
    let det = g.covariance_determinant();
    if !(det > 0.0) {
        return Err(Error::InvalidState(ValidationReport {
            violations: vec![Violation {
                invariant: Invariant::Physicality,
                magnitude: -det,
                detail: format!("det sigma = {det} is not positive"),
            }],
        }));
    }
    Ok(g.hbar / (2.0 * det.sqrt()))
}

/// Eigenvalues in `(−1e−10, 0)` are clipped to zero; anything more negative
/// is an invalid state.
pub fn fock_purity(rho: &FockDensityMatrix) -> Result<f64> {
    let eigenvalues = rho.eigenvalues();
    let lowest = eigenvalues.first().copied().unwrap_or(0.0);
    if lowest < -STATE_TOLERANCE {
        return Err(Error::InvalidState(ValidationReport {
            violations: vec![Violation {
                invariant: Invariant::PositiveSemidefinite,
                magnitude: -lowest,
                detail: format!("smallest eigenvalue = {lowest:e}"),
            }],
        }));
    }
    Ok(eigenvalues.iter().map(|&l| l.max(0.0).powi(2)).sum())
}
