//! Single-mode quantum states in the two representations used throughout the
//! crate: a Gaussian second-moment description and a truncated Fock-basis
//! density matrix.
//!
//! Construction only checks shapes and units. Physical admissibility
//! (Schrödinger–Robertson physicality, Hermiticity, unit trace, positivity)
//! is reported by [`validate_state`], which never fails.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for Hermiticity, trace, positivity and physicality checks.
pub const STATE_TOLERANCE: f64 = 1e-10;

/// Populations above this on either of the two highest Fock levels make
/// truncated `q̂²`, `p̂²` unreliable.
pub const TRUNCATION_POPULATION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub mean_q: f64,
    pub mean_p: f64,
    pub sigma_qq: f64,
    pub sigma_pp: f64,
    pub sigma_qp: f64,
    pub hbar: f64,
}

impl GaussianState {
    /// Zero-mean state with the given covariance and `ħ = 1`.
    pub fn centered(sigma_qq: f64, sigma_pp: f64, sigma_qp: f64) -> Self {
        GaussianState {
            mean_q: 0.0,
            mean_p: 0.0,
            sigma_qq,
            sigma_pp,
            sigma_qp,
            hbar: 1.0,
        }
    }

    pub fn vacuum(hbar: f64) -> Self {
        GaussianState {
            hbar,
            ..Self::centered(0.5 * hbar, 0.5 * hbar, 0.0)
        }
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    pub fn with_mean(mut self, mean_q: f64, mean_p: f64) -> Self {
        self.mean_q = mean_q;
        self.mean_p = mean_p;
        self
    }

    /// `σqq·σpp − σqp²`
    pub fn covariance_determinant(&self) -> f64 {
        self.sigma_qq * self.sigma_pp - self.sigma_qp * self.sigma_qp
    }
}

/// Density matrix in the number basis `|0⟩ … |dim−1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    entries: DMatrix<Complex64>,
    hbar: f64,
    mass: f64,
    omega: f64,
}

impl FockDensityMatrix {
    /// Wraps a square matrix in natural units (`ħ = m = ω = 1`).
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Malformed(format!(
                "density matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.nrows() < 2 {
            return Err(Error::InvalidDimension(entries.nrows()));
        }
        Ok(FockDensityMatrix {
            entries,
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
        })
    }

    /// Sets `ħ`, `m`, `ω`; all three must be positive and finite.
    pub fn with_units(mut self, hbar: f64, mass: f64, omega: f64) -> Result<Self> {
        for (name, value) in [("hbar", hbar), ("mass", mass), ("omega", omega)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::domain(name, value, "positive and finite"));
            }
        }
        self.hbar = hbar;
        self.mass = mass;
        self.omega = omega;
        Ok(self)
    }

    /// Incoherent mixture `Σₙ wₙ |n⟩⟨n|` padded with empty levels up to `dim`.
    pub fn diagonal(weights: &[f64], dim: usize) -> Result<Self> {
        if dim < weights.len() {
            return Err(Error::Malformed(format!(
                "{} weights do not fit in dimension {dim}",
                weights.len()
            )));
        }
        let mut entries = DMatrix::zeros(dim, dim);
        for (n, &w) in weights.iter().enumerate() {
            entries[(n, n)] = Complex64::new(w, 0.0);
        }
        Self::new(entries)
    }

    /// Projector onto the normalised vector `amplitudes`, padded up to `dim`.
    pub fn pure(amplitudes: &[Complex64], dim: usize) -> Result<Self> {
        if dim < amplitudes.len() {
            return Err(Error::Malformed(format!(
                "{} amplitudes do not fit in dimension {dim}",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Malformed("state vector has zero norm".into()));
        }
        let mut psi = DVector::zeros(dim);
        for (n, &a) in amplitudes.iter().enumerate() {
            psi[n] = a / norm;
        }
        Self::new(&psi * psi.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Same state embedded in a larger Fock space (new levels unpopulated).
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(Error::Malformed(format!(
                "cannot embed dimension {} into {dim}",
                self.dim()
            )));
        }
        let mut entries = DMatrix::zeros(dim, dim);
        entries
            .view_mut((0, 0), (self.dim(), self.dim()))
            .copy_from(&self.entries);
        Ok(FockDensityMatrix {
            entries,
            ..self.clone()
        })
    }

    /// Replaces the matrix while keeping the units.
    pub(crate) fn map_entries(&self, entries: DMatrix<Complex64>) -> Self {
        FockDensityMatrix {
            entries,
            ..self.clone()
        }
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    /// `(q̂, p̂)` truncated to this state's dimension and units.
    pub fn quadratures(&self) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
        quadratures_unchecked(self.dim(), self.hbar, self.mass, self.omega)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuantumState {
    Gaussian(GaussianState),
    Fock(FockDensityMatrix),
}

impl QuantumState {
    pub fn hbar(&self) -> f64 {
        match self {
            QuantumState::Gaussian(g) => g.hbar,
            QuantumState::Fock(f) => f.hbar,
        }
    }
}

impl From<GaussianState> for QuantumState {
    fn from(g: GaussianState) -> Self {
        QuantumState::Gaussian(g)
    }
}

impl From<FockDensityMatrix> for QuantumState {
    fn from(f: FockDensityMatrix) -> Self {
        QuantumState::Fock(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Finite,
    PositiveUnits,
    PositiveVariance,
    Physicality,
    Hermiticity,
    UnitTrace,
    PositiveSemidefinite,
}

impl Invariant {
    pub fn name(self) -> &'static str {
        match self {
            Invariant::Finite => "finite",
            Invariant::PositiveUnits => "positive-units",
            Invariant::PositiveVariance => "positive-variance",
            Invariant::Physicality => "physicality",
            Invariant::Hermiticity => "hermiticity",
            Invariant::UnitTrace => "unit-trace",
            Invariant::PositiveSemidefinite => "positive-semidefinite",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub invariant: Invariant,
    /// How far past the tolerance the measured quantity is (always ≥ 0).
    pub magnitude: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, invariant: Invariant) -> bool {
        self.violations.iter().any(|v| v.invariant == invariant)
    }

    fn push(&mut self, invariant: Invariant, magnitude: f64, detail: String) {
        self.violations.push(Violation {
            invariant,
            magnitude,
            detail,
        });
    }

    /// `Ok(())` when empty, otherwise the report wrapped in an error.
    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidState(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.invariant, v.detail)?;
        }
        Ok(())
    }
}

pub fn validate_state(state: &QuantumState) -> ValidationReport {
    match state {
        QuantumState::Gaussian(g) => validate_gaussian(g),
        QuantumState::Fock(f) => validate_fock(f),
    }
}

fn validate_gaussian(g: &GaussianState) -> ValidationReport {
    let mut report = ValidationReport::default();
    let fields = [g.mean_q, g.mean_p, g.sigma_qq, g.sigma_pp, g.sigma_qp, g.hbar];
    if fields.iter().any(|x| !x.is_finite()) {
        report.push(Invariant::Finite, f64::INFINITY, "non-finite field".into());
        return report;
    }
    if g.hbar <= 0.0 {
        report.push(
            Invariant::PositiveUnits,
            -g.hbar,
            format!("hbar = {} must be positive", g.hbar),
        );
    }
    for (name, value) in [("sigma_qq", g.sigma_qq), ("sigma_pp", g.sigma_pp)] {
        if value <= 0.0 {
            report.push(
                Invariant::PositiveVariance,
                -value,
                format!("{name} = {value} must be positive"),
            );
        }
    }
    let det = g.covariance_determinant();
    let floor = 0.25 * g.hbar * g.hbar;
    if det < floor - STATE_TOLERANCE {
        report.push(
            Invariant::Physicality,
            floor - det,
            format!("det sigma = {det} < hbar^2/4 = {floor}"),
        );
    }
    report
}

fn validate_fock(f: &FockDensityMatrix) -> ValidationReport {
    let mut report = ValidationReport::default();
    let m = &f.entries;
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        report.push(Invariant::Finite, f64::INFINITY, "non-finite entry".into());
        return report;
    }
    let n = m.nrows();
    let mut herm = 0.0_f64;
    for j in 0..n {
        for k in j..n {
            herm = herm.max((m[(j, k)] - m[(k, j)].conj()).norm());
        }
    }
    if herm > STATE_TOLERANCE {
        report.push(
            Invariant::Hermiticity,
            herm,
            format!("max |rho_jk - conj(rho_kj)| = {herm:e}"),
        );
    }
    let trace = m.trace();
    let trace_err = (trace - Complex64::new(1.0, 0.0)).norm();
    if trace_err > STATE_TOLERANCE {
        report.push(
            Invariant::UnitTrace,
            trace_err,
            format!("trace = {} + {}i", trace.re, trace.im),
        );
    }
    let lowest = hermitian_eigenvalues(m).first().copied().unwrap_or(0.0);
    if lowest < -STATE_TOLERANCE {
        report.push(
            Invariant::PositiveSemidefinite,
            -lowest,
            format!("smallest eigenvalue = {lowest:e}"),
        );
    }
    report
}

/// Eigenvalues of `(M + M†)/2`, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Truncated annihilation operator, `a[n−1][n] = √n`.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Position and momentum operators `q̂ = √(ħ/2mω)(a+a†)`,
/// `p̂ = i√(ħmω/2)(a†−a)` truncated to `dim` levels.
///
/// `[q̂, p̂] = iħ` holds exactly on the leading `(dim−1)` block; the last
/// diagonal entry of the commutator is `−iħ(dim−1)`.
pub fn fock_quadrature_operators(
    dim: usize,
    hbar: f64,
    mass: f64,
    omega: f64,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    if dim < 2 {
        return Err(Error::InvalidDimension(dim));
    }
    for (name, value) in [("hbar", hbar), ("mass", mass), ("omega", omega)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::domain(name, value, "positive and finite"));
        }
    }
    Ok(quadratures_unchecked(dim, hbar, mass, omega))
}

fn quadratures_unchecked(
    dim: usize,
    hbar: f64,
    mass: f64,
    omega: f64,
) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let a = annihilation(dim);
    let a_dag = a.adjoint();
    let q_scale = (hbar / (2.0 * mass * omega)).sqrt();
    let p_scale = (hbar * mass * omega / 2.0).sqrt();
    let q = (&a + &a_dag) * Complex64::new(q_scale, 0.0);
    let p = (&a_dag - &a) * Complex64::new(0.0, p_scale);
    (q, p)
}
