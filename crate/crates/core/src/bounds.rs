//! Uncertainty bounds on `σqq·σpp`: Heisenberg, Schrödinger–Robertson and
//! the purity-dependent bound `ħ²Φ²(μ)/(4(1−r²))`, together with the
//! effective Planck constant `ħΦ(μ)/√(1−r²)`.
//!
//! `Φ(μ)` is known exactly on two intervals:
//!
//! ```text
//! Φ₁(μ) = 2 − √(2μ − 1)        5/9  ≤ μ ≤ 1
//! Φ₂(μ) = 3 − √(8(μ − 1/3))    7/18 ≤ μ ≤ 5/9
//! ```
//!
//! Below `7/18` the exact mode falls back to the interpolation
//! `(4 + √(16 + 9μ²))/(9μ)` and flags the result. The `1/3` offset in `Φ₂`
//! is what makes the piece real on its interval and continuous with `Φ₁`
//! at `5/9`; the rank-3 minimiser in [`crate::oracle`] reproduces it.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moments::{SecondMoments, DEGENERATE_CORRELATION};
use crate::state::STATE_TOLERANCE;

/// Upper end of the second exact piece / lower end of the first.
pub const MU_PIECE_BOUNDARY: f64 = 5.0 / 9.0;
/// Lower end of the second exact piece.
pub const MU_EXACT_FLOOR: f64 = 7.0 / 18.0;

/// Slack allowed on the purity bound when `Φ` is not an exact piece.
pub const ADVISORY_SLACK: f64 = 0.02;

/// Relative tolerance on the strict inequality checks.
pub const BOUND_TOLERANCE: f64 = 1e-10;

const MU_OVERSHOOT: f64 = 1e-12;

/// `[[σqq, σqp + iħ/2], [σqp − iħ/2, σpp]]`, nonnegative iff the state is
/// physical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentMatrixA {
    pub entries: [[Complex64; 2]; 2],
    /// Ascending.
    pub eigenvalues: [f64; 2],
}

impl MomentMatrixA {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn is_physical(&self) -> bool {
        self.eigenvalues[0] >= -STATE_TOLERANCE
    }
}

pub fn moment_matrix(m: &SecondMoments, hbar: f64) -> MomentMatrixA {
    moment_matrix_from(m.sigma_qq, m.sigma_pp, m.sigma_qp, hbar)
}

pub fn moment_matrix_from(sigma_qq: f64, sigma_pp: f64, sigma_qp: f64, hbar: f64) -> MomentMatrixA {
    let off = Complex64::new(sigma_qp, 0.5 * hbar);
    let entries = [
        [Complex64::new(sigma_qq, 0.0), off],
        [off.conj(), Complex64::new(sigma_pp, 0.0)],
    ];
    let half_trace = 0.5 * (sigma_qq + sigma_pp);
    let half_gap = (0.25 * (sigma_qq - sigma_pp).powi(2) + off.norm_sqr()).sqrt();
    MomentMatrixA {
        entries,
        eigenvalues: [half_trace - half_gap, half_trace + half_gap],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhiMode {
    /// Exact pieces where known, interpolation (flagged) below `7/18`.
    #[default]
    Exact,
    Interpolation,
    Asymptote,
}

impl PhiMode {
    pub fn name(self) -> &'static str {
        match self {
            PhiMode::Exact => "exact",
            PhiMode::Interpolation => "interpolation",
            PhiMode::Asymptote => "asymptote",
        }
    }
}

impl std::str::FromStr for PhiMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(PhiMode::Exact),
            "interpolation" => Ok(PhiMode::Interpolation),
            "asymptote" => Ok(PhiMode::Asymptote),
            other => Err(format!(
                "unknown phi mode `{other}` (expected exact, interpolation or asymptote)"
            )),
        }
    }
}

/// Which formula produced a `Φ` value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiBranch {
    ExactPiece1,
    ExactPiece2,
    Interpolation,
    Asymptote,
}

impl PhiBranch {
    pub fn name(self) -> &'static str {
        match self {
            PhiBranch::ExactPiece1 => "exact-piece-1",
            PhiBranch::ExactPiece2 => "exact-piece-2",
            PhiBranch::Interpolation => "interpolation",
            PhiBranch::Asymptote => "asymptote",
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, PhiBranch::ExactPiece1 | PhiBranch::ExactPiece2)
    }
}

impl fmt::Display for PhiBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiValue {
    pub value: f64,
    pub branch: PhiBranch,
    /// Exact mode was requested but no exact piece covers `μ`.
    pub fallback: bool,
}

pub fn phi_piece_1(mu: f64) -> f64 {
    2.0 - (2.0 * mu - 1.0).sqrt()
}

pub fn phi_piece_2(mu: f64) -> f64 {
    3.0 - (8.0 * (mu - 1.0 / 3.0)).sqrt()
}

pub fn phi_interpolation(mu: f64) -> f64 {
    (4.0 + (16.0 + 9.0 * mu * mu).sqrt()) / (9.0 * mu)
}

pub fn phi_asymptote(mu: f64) -> f64 {
    8.0 / (9.0 * mu)
}

/// `Φ(μ)` for `0 < μ ≤ 1` (overshoot up to `1e−12` is clamped to 1).
pub fn phi(mu: f64, mode: PhiMode) -> Result<PhiValue> {
    if !(mu > 0.0 && mu <= 1.0 + MU_OVERSHOOT) {
        return Err(Error::domain("mu", mu, "0 < mu <= 1"));
    }
    let mu = mu.min(1.0);
    let (value, branch, fallback) = match mode {
        PhiMode::Exact if mu >= MU_PIECE_BOUNDARY => (phi_piece_1(mu), PhiBranch::ExactPiece1, false),
        PhiMode::Exact if mu >= MU_EXACT_FLOOR => (phi_piece_2(mu), PhiBranch::ExactPiece2, false),
        PhiMode::Exact => (phi_interpolation(mu), PhiBranch::Interpolation, true),
        PhiMode::Interpolation => (phi_interpolation(mu), PhiBranch::Interpolation, false),
        PhiMode::Asymptote => (phi_asymptote(mu), PhiBranch::Asymptote, false),
    };
    Ok(PhiValue {
        value,
        branch,
        fallback,
    })
}

fn check_correlation(r: f64) -> Result<()> {
    if r.abs() < DEGENERATE_CORRELATION {
        Ok(())
    } else {
        Err(Error::DegenerateCorrelation(r.abs()))
    }
}

/// `ħ·Φ(μ)/√(1−r²)`
pub fn effective_hbar(hbar: f64, r: f64, mu: f64, mode: PhiMode) -> Result<f64> {
    Ok(effective_hbar_with_phi(hbar, r, mu, mode)?.0)
}

/// Like [`effective_hbar`] but also returns the `Φ` evaluation it used.
pub fn effective_hbar_with_phi(hbar: f64, r: f64, mu: f64, mode: PhiMode) -> Result<(f64, PhiValue)> {
    check_correlation(r)?;
    let phi = phi(mu, mode)?;
    Ok((hbar * phi.value / (1.0 - r * r).sqrt(), phi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundFlags {
    /// `σqq σpp ≥ ħ²/4`
    pub heisenberg: bool,
    /// `σqq σpp − σqp² ≥ ħ²/4`
    pub schrodinger_robertson: bool,
    /// `σqq σpp ≥ ħ²/(4(1−r²))`
    pub schrodinger_robertson_product: bool,
    /// `σqq σpp ≥ ħ²Φ²(μ)/(4(1−r²))`; strict only for exact `Φ` pieces.
    pub purity: bool,
    /// The purity check used the advisory slack rather than a hard bound.
    pub purity_advisory: bool,
}

impl BoundFlags {
    pub fn all_pass(&self) -> bool {
        self.heisenberg && self.schrodinger_robertson && self.schrodinger_robertson_product && self.purity
    }
}

/// Every bound is stated on the product `σqq σpp` except `sr_lhs`, which is
/// the determinant form. Slacks are `lhs − rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub hbar: f64,
    pub r: f64,
    pub mu: f64,
    pub heisenberg_bound: f64,
    pub sr_bound: f64,
    pub purity_bound: f64,
    pub product: f64,
    pub sr_lhs: f64,
    pub hbar_eff: f64,
    pub phi_value: f64,
    pub phi_mode: PhiBranch,
    pub phi_fallback: bool,
    pub heisenberg_slack: f64,
    pub sr_slack: f64,
    pub purity_slack: f64,
    pub flags: BoundFlags,
}

fn holds(lhs: f64, rhs: f64) -> bool {
    lhs >= rhs * (1.0 - BOUND_TOLERANCE)
}

pub fn evaluate_bounds(m: &SecondMoments, hbar: f64, mode: PhiMode) -> Result<BoundReport> {
    let (hbar_eff, phi) = effective_hbar_with_phi(hbar, m.r, m.mu, mode)?;
    let one_minus_r2 = 1.0 - m.r * m.r;
    let heisenberg_bound = 0.25 * hbar * hbar;
    let sr_bound = heisenberg_bound / one_minus_r2;
    let purity_bound = sr_bound * phi.value * phi.value;
    let product = m.product();
    let sr_lhs = m.determinant();

    let strict = phi.branch.is_exact();
    let purity_pass = if strict {
        holds(product, purity_bound)
    } else {
        product >= purity_bound * (1.0 - ADVISORY_SLACK)
    };

    Ok(BoundReport {
        hbar,
        r: m.r,
        mu: m.mu,
        heisenberg_bound,
        sr_bound,
        purity_bound,
        product,
        sr_lhs,
        hbar_eff,
        phi_value: phi.value,
        phi_mode: phi.branch,
        phi_fallback: phi.fallback,
        heisenberg_slack: product - heisenberg_bound,
        sr_slack: sr_lhs - heisenberg_bound,
        purity_slack: product - purity_bound,
        flags: BoundFlags {
            heisenberg: holds(product, heisenberg_bound),
            schrodinger_robertson: holds(sr_lhs, heisenberg_bound),
            schrodinger_robertson_product: holds(product, sr_bound),
            purity: purity_pass,
            purity_advisory: !strict,
        },
    })
}

/// `steps` equally spaced points from `from` to `to` inclusive. A single
/// step requires `from == to`.
pub fn linear_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if !(from.is_finite() && to.is_finite()) {
        return Err(Error::domain("grid endpoint", if from.is_finite() { to } else { from }, "finite"));
    }
    match steps {
        0 => Err(Error::domain("steps", 0.0, "steps >= 1")),
        1 if from == to => Ok(vec![from]),
        1 => Err(Error::domain("steps", 1.0, "a single step needs equal endpoints")),
        _ if from >= to => Err(Error::domain("from", from, "from < to")),
        _ => {
            let step = (to - from) / (steps - 1) as f64;
            Ok((0..steps)
                .map(|i| if i + 1 == steps { to } else { from + step * i as f64 })
                .collect())
        }
    }
}

/// One row of a `Φ(μ)` table; columns not requested are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiCurveRow {
    pub mu: f64,
    pub exact: Option<PhiValue>,
    pub interpolation: Option<f64>,
    pub asymptote: Option<f64>,
}

impl PhiCurveRow {
    /// Exact mode fell back to interpolation at this `μ`.
    pub fn fallback(&self) -> bool {
        self.exact.is_some_and(|p| p.fallback)
    }
}

pub fn phi_curve(mu_grid: &[f64], modes: &[PhiMode]) -> Result<Vec<PhiCurveRow>> {
    mu_grid
        .iter()
        .map(|&mu| {
            let wants = |m: PhiMode| modes.contains(&m);
            Ok(PhiCurveRow {
                mu,
                exact: if wants(PhiMode::Exact) { Some(phi(mu, PhiMode::Exact)?) } else { None },
                interpolation: if wants(PhiMode::Interpolation) {
                    Some(phi(mu, PhiMode::Interpolation)?.value)
                } else {
                    None
                },
                asymptote: if wants(PhiMode::Asymptote) {
                    Some(phi(mu, PhiMode::Asymptote)?.value)
                } else {
                    None
                },
            })
        })
        .collect()
}
