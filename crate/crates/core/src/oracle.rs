//! Numerical check of `Φ(μ)` by direct minimisation.
//!
//! For a Fock-diagonal mixture `Σ pₙ|n⟩⟨n|` the variance product is
//! `ħ²(Σ pₙ(n+½))²`, so the extremal problem is a linear objective over the
//! intersection of the probability simplex with the sphere `Σ pₙ² = μ`.
//! `Φ_oracle(μ) = 2√(min product)/ħ`. Results are in units of `ħ²`.
//!
//! [`falsification_sweep`] checks the diagonal ansatz from the other side:
//! it samples dense random density matrices at a fixed purity and reports
//! the worst slack of the purity bound.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::{phi, phi_interpolation, PhiMode, PhiValue, MU_EXACT_FLOOR, MU_PIECE_BOUNDARY};
use crate::error::{Error, Result};
use crate::moments::compute_moments;
use crate::sampling::{conjugated_spectrum, haar_unitary, project_to_purity, simplex_point};
use crate::state::FockDensityMatrix;

/// Simplex grid resolution used by [`Method::GridRefine`] when affordable.
pub const GRID_RESOLUTION: f64 = 1e-3;
/// Cap on grid cells; coarser spacing is used when `levels` is large.
pub const GRID_MAX_CELLS: f64 = 2.0e6;
/// Step size at which the local refinement stops.
pub const REFINE_RESOLUTION: f64 = 1e-8;
/// Hard-region tolerance on the falsification slack.
pub const FALSIFICATION_TOLERANCE: f64 = 1e-8;
pub const MAX_FALSIFICATION_DIM: usize = 8;
pub const MAX_FALSIFICATION_SAMPLES: usize = 1_000_000;

const FEASIBILITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// `p = ((1 ± √(2μ−1))/2)`, valid for `μ ∈ [1/2, 1]`.
    Rank2Analytic,
    /// `pₙ = a − bn` on three levels, valid for `μ ∈ [1/3, 5/9]`.
    Rank3Analytic,
    GridRefine,
    ProjectedGradient,
    /// Best of `samples` random diagonal mixtures projected onto the purity
    /// sphere; an upper bound only.
    RandomDensitySampling { samples: usize, seed: u64 },
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Rank2Analytic => "rank2-analytic",
            Method::Rank3Analytic => "rank3-analytic",
            Method::GridRefine => "grid-refine",
            Method::ProjectedGradient => "projected-gradient",
            Method::RandomDensitySampling { .. } => "random-density-sampling",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizationResult {
    pub mu_target: f64,
    pub achieved_mu: f64,
    /// `min σqq σpp` in units of `ħ²`.
    pub min_product: f64,
    pub optimal_weights: Vec<f64>,
    pub method: Method,
    pub iterations: usize,
}

impl MinimizationResult {
    /// `2√(min_product)`
    pub fn phi(&self) -> f64 {
        2.0 * self.min_product.sqrt()
    }
}

/// `Σ pₙ(n + ½)`
fn mean_energy(p: &[f64]) -> f64 {
    p.iter().enumerate().map(|(n, w)| w * (n as f64 + 0.5)).sum()
}

fn purity_of(p: &[f64]) -> f64 {
    p.iter().map(|w| w * w).sum()
}

fn finish(mu: f64, weights: Vec<f64>, method: Method, iterations: usize) -> MinimizationResult {
    let energy = mean_energy(&weights);
    MinimizationResult {
        mu_target: mu,
        achieved_mu: purity_of(&weights),
        min_product: energy * energy,
        optimal_weights: weights,
        method,
        iterations,
    }
}

/// Iteration budget for the projected-gradient descent.
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Projected-gradient steps before giving up with a non-convergence
    /// error.
    pub max_iterations: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// Minimises `σqq σpp` over Fock-diagonal mixtures on `levels` levels with
/// purity `mu`.
pub fn min_product_fock_mixture(mu: f64, levels: usize, method: Method) -> Result<MinimizationResult> {
    min_product_fock_mixture_with(mu, levels, method, OracleOptions::default())
}

pub fn min_product_fock_mixture_with(
    mu: f64,
    levels: usize,
    method: Method,
    options: OracleOptions,
) -> Result<MinimizationResult> {
    if levels < 2 {
        return Err(Error::InvalidDimension(levels));
    }
    if !(mu > 1.0 / levels as f64 && mu <= 1.0 + FEASIBILITY_TOLERANCE) {
        return Err(Error::Infeasible { mu, levels });
    }
    let mu = mu.min(1.0);
    match method {
        Method::Rank2Analytic => rank2(mu, levels),
        Method::Rank3Analytic => rank3(mu, levels),
        Method::GridRefine => grid_refine(mu, levels),
        Method::ProjectedGradient => projected_gradient(mu, levels, options.max_iterations),
        Method::RandomDensitySampling { samples, seed } => random_sampling(mu, levels, samples, seed),
    }
}

fn rank2(mu: f64, levels: usize) -> Result<MinimizationResult> {
    if mu < 0.5 {
        return Err(Error::PieceDomain {
            method: "rank2-analytic",
            mu,
            reason: "two levels cannot reach purity below 1/2",
        });
    }
    let s = (2.0 * mu - 1.0).sqrt();
    let mut w = vec![0.0; levels];
    w[0] = 0.5 * (1.0 + s);
    w[1] = 0.5 * (1.0 - s);
    Ok(finish(mu, w, Method::Rank2Analytic, 0))
}

fn rank3(mu: f64, levels: usize) -> Result<MinimizationResult> {
    if levels < 3 {
        return Err(Error::PieceDomain {
            method: "rank3-analytic",
            mu,
            reason: "needs at least three levels",
        });
    }
    if mu < 1.0 / 3.0 {
        return Err(Error::PieceDomain {
            method: "rank3-analytic",
            mu,
            reason: "three levels cannot reach purity below 1/3",
        });
    }
    let b = ((mu - 1.0 / 3.0) / 2.0).sqrt();
    let a = 1.0 / 3.0 + b;
    let top = a - 2.0 * b;
    if top < -FEASIBILITY_TOLERANCE {
        return Err(Error::PieceDomain {
            method: "rank3-analytic",
            mu,
            reason: "weight on level 2 would be negative (mu > 5/9)",
        });
    }
    let mut w = vec![0.0; levels];
    w[0] = a;
    w[1] = a - b;
    w[2] = top.max(0.0);
    Ok(finish(mu, w, Method::Rank3Analytic, 0))
}

/// Fills levels 0 and 1 from the higher-level weights so that the sum and
/// purity constraints hold, with `p₀ ≥ p₁ ≥ 0`. Returns the full vector.
fn complete_low_levels(high: &[f64], mu: f64) -> Option<Vec<f64>> {
    if high.iter().any(|&v| v < 0.0) {
        return None;
    }
    let s = 1.0 - high.iter().sum::<f64>();
    let q = mu - purity_of(high);
    let disc = 2.0 * q - s * s;
    if s < 0.0 || disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    let p1 = 0.5 * (s - root);
    if p1 < 0.0 {
        return None;
    }
    let mut w = Vec::with_capacity(high.len() + 2);
    w.push(0.5 * (s + root));
    w.push(p1);
    w.extend_from_slice(high);
    Some(w)
}

fn grid_resolution(free: usize) -> f64 {
    // cells ≈ (1/h)^k / k!
    let factorial: f64 = (1..=free).map(|k| k as f64).product();
    let max_steps = (GRID_MAX_CELLS * factorial).powf(1.0 / free as f64);
    GRID_RESOLUTION.max(1.0 / max_steps.floor())
}

/// Visits every point of the grid `{0, h, 2h, …}^free` with coordinate sum
/// at most 1.
fn for_each_grid_point(free: usize, h: f64, mut visit: impl FnMut(&[f64])) {
    let steps = (1.0 / h).round() as usize;
    let mut idx = vec![0usize; free];
    let mut point = vec![0.0; free];
    loop {
        for (p, &i) in point.iter_mut().zip(&idx) {
            *p = i as f64 * h;
        }
        visit(&point);
        // odometer increment restricted to Σ idx ≤ steps
        let mut k = 0;
        loop {
            if k == free {
                return;
            }
            idx[k] += 1;
            if idx.iter().sum::<usize>() <= steps {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn grid_refine(mu: f64, levels: usize) -> Result<MinimizationResult> {
    let free = levels - 2;
    let mut iterations = 0usize;
    let mut best: Option<(f64, Vec<f64>)> = None;
    let consider = |high: &[f64], best: &mut Option<(f64, Vec<f64>)>| {
        if let Some(w) = complete_low_levels(high, mu) {
            let e = mean_energy(&w);
            if best.as_ref().is_none_or(|(b, _)| e < *b) {
                *best = Some((e, high.to_vec()));
            }
        }
    };

    let mut h = if free == 0 { 0.0 } else { grid_resolution(free) };
    if free == 0 {
        iterations += 1;
        consider(&[], &mut best);
    } else {
        for_each_grid_point(free, h, |pt| {
            iterations += 1;
            consider(pt, &mut best);
        });
    }
    let (mut best_energy, mut high) = best.ok_or(Error::NonConvergence {
        what: "grid-refine (no feasible grid point)",
        iterations,
    })?;

    // compass search on the high-level weights, halving the step on failure
    while free > 0 && h >= REFINE_RESOLUTION {
        let mut improved = false;
        for k in 0..free {
            for sign in [-1.0, 1.0] {
                let mut trial = high.clone();
                trial[k] = (trial[k] + sign * h).max(0.0);
                iterations += 1;
                if let Some(w) = complete_low_levels(&trial, mu) {
                    let e = mean_energy(&w);
                    if e < best_energy {
                        best_energy = e;
                        high = trial;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    let weights = complete_low_levels(&high, mu).expect("refinement keeps feasibility");
    Ok(finish(mu, weights, Method::GridRefine, iterations))
}

/// Maps `x` onto `{Σp = 1, Σp² = μ, p ≥ 0}` by projecting onto the plane and
/// sphere within an active set, dropping the most negative level until the
/// result is nonnegative.
fn project_feasible(x: &[f64], mu: f64, fallback_direction: &[f64]) -> Option<Vec<f64>> {
    let n = x.len();
    let mut active = vec![true; n];
    loop {
        let k = active.iter().filter(|&&a| a).count();
        if (k as f64) * mu < 1.0 - FEASIBILITY_TOLERANCE {
            return None;
        }
        let center = 1.0 / k as f64;
        let radius = (mu - center).max(0.0).sqrt();
        let mean = x.iter().zip(&active).filter(|(_, &a)| a).map(|(v, _)| v).sum::<f64>() / k as f64;
        let mut dev: Vec<f64> = (0..n).map(|i| if active[i] { x[i] - mean } else { 0.0 }).collect();
        let mut norm = dev.iter().map(|d| d * d).sum::<f64>().sqrt();
        if norm < 1e-300 {
            let fb_mean = (0..n).filter(|&i| active[i]).map(|i| fallback_direction[i]).sum::<f64>() / k as f64;
            dev = (0..n)
                .map(|i| if active[i] { fallback_direction[i] - fb_mean } else { 0.0 })
                .collect();
            norm = dev.iter().map(|d| d * d).sum::<f64>().sqrt();
        }
        let scale = if norm > 0.0 { radius / norm } else { 0.0 };
        let y: Vec<f64> = (0..n)
            .map(|i| if active[i] { center + dev[i] * scale } else { 0.0 })
            .collect();
        let (worst, worst_value) = (0..n)
            .filter(|&i| active[i])
            .map(|i| (i, y[i]))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if worst_value >= 0.0 {
            return Some(y);
        }
        active[worst] = false;
    }
}

fn projected_gradient(mu: f64, levels: usize, max_iterations: usize) -> Result<MinimizationResult> {
    const MIN_STEP: f64 = 1e-12;
    const MAX_STEP: f64 = 1e6;

    let gradient: Vec<f64> = (0..levels).map(|n| n as f64 + 0.5).collect();
    let descent: Vec<f64> = gradient.iter().map(|g| -g).collect();
    // start on the constraint set at the energy-maximising side
    let mut p = project_feasible(&gradient, mu, &gradient).ok_or(Error::Infeasible { mu, levels })?;
    let mut energy = mean_energy(&p);
    let mut step = 1.0;
    let mut iterations = 0;
    while step >= MIN_STEP {
        iterations += 1;
        if iterations > max_iterations {
            return Err(Error::NonConvergence {
                what: "projected-gradient",
                iterations: max_iterations,
            });
        }
        let x: Vec<f64> = p.iter().zip(&gradient).map(|(v, g)| v - step * g).collect();
        match project_feasible(&x, mu, &descent) {
            Some(candidate) if mean_energy(&candidate) < energy => {
                energy = mean_energy(&candidate);
                p = candidate;
                step = (2.0 * step).min(MAX_STEP);
            }
            _ => step *= 0.5,
        }
    }
    Ok(finish(mu, p, Method::ProjectedGradient, iterations))
}

fn random_sampling(mu: f64, levels: usize, samples: usize, seed: u64) -> Result<MinimizationResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<Vec<f64>> = None;
    for _ in 0..samples {
        let x = simplex_point(&mut rng, levels);
        if let Some(w) = project_to_purity(&x, mu) {
            if best.as_ref().is_none_or(|b| mean_energy(&w) < mean_energy(b)) {
                best = Some(w);
            }
        }
    }
    let best = best.ok_or(Error::NonConvergence {
        what: "random-density-sampling (no sample reached the target purity)",
        iterations: samples,
    })?;
    Ok(finish(mu, best, Method::RandomDensitySampling { samples, seed }, samples))
}

/// Worst slack of `σqq σpp (1−r²) ≥ ħ²Φ²(μ)/4` over random dense states.
#[derive(Debug, Clone, PartialEq)]
pub struct FalsificationReport {
    pub mu: f64,
    pub dim: usize,
    pub seed: u64,
    pub samples: usize,
    pub accepted: usize,
    /// Spectra whose purity projection failed to converge.
    pub rejected: usize,
    pub min_slack: f64,
    /// Index of the sample attaining `min_slack`.
    pub worst_sample: Option<usize>,
    pub phi: PhiValue,
    /// `μ ≥ 7/18`: the bound is exact and violations are hard failures.
    pub hard_region: bool,
}

impl FalsificationReport {
    pub fn passed(&self) -> bool {
        !self.hard_region || self.min_slack >= -FALSIFICATION_TOLERANCE
    }
}

/// Samples `samples` density matrices of dimension `dim` with purity `mu`
/// (random spectrum rescaled onto the purity sphere, then Haar conjugation).
pub fn falsification_sweep(mu: f64, dim: usize, samples: usize, seed: u64) -> Result<FalsificationReport> {
    if !(2..=MAX_FALSIFICATION_DIM).contains(&dim) {
        return Err(Error::domain("dim", dim as f64, "2 <= dim <= 8"));
    }
    if samples > MAX_FALSIFICATION_SAMPLES {
        return Err(Error::domain("samples", samples as f64, "samples <= 1e6"));
    }
    if !(mu > 1.0 / dim as f64 && mu <= 1.0 + FEASIBILITY_TOLERANCE) {
        return Err(Error::Infeasible { mu, levels: dim });
    }
    let mu = mu.min(1.0);
    let phi = phi(mu, PhiMode::Exact)?;
    let floor = 0.25 * phi.value * phi.value;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = FalsificationReport {
        mu,
        dim,
        seed,
        samples,
        accepted: 0,
        rejected: 0,
        min_slack: f64::INFINITY,
        worst_sample: None,
        phi,
        hard_region: mu >= MU_EXACT_FLOOR,
    };
    for i in 0..samples {
        let x = simplex_point(&mut rng, dim);
        let u = haar_unitary(&mut rng, dim);
        let Some(w) = project_to_purity(&x, mu) else {
            report.rejected += 1;
            continue;
        };
        let rho = conjugated_spectrum(&w, &u);
        let m = compute_moments(&rho.into())?;
        let slack = m.product() * (1.0 - m.r * m.r) - floor;
        report.accepted += 1;
        if slack < report.min_slack {
            report.min_slack = slack;
            report.worst_sample = Some(i);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelScan {
    pub mu: f64,
    /// Smallest `σqq σpp (1−r²)` over the scanned family.
    pub min_determinant: f64,
    pub polar: f64,
    pub azimuth: f64,
    pub points: usize,
}

/// Exhaustive scan of all two-level states `½(1 + b·σ)` with `|b|² = 2μ−1`
/// on a `polar_steps × azimuth_steps` grid of Bloch angles (poles included).
pub fn two_level_scan(mu: f64, polar_steps: usize, azimuth_steps: usize) -> Result<TwoLevelScan> {
    if !(0.5..=1.0).contains(&mu) {
        return Err(Error::domain("mu", mu, "1/2 <= mu <= 1 for two levels"));
    }
    if polar_steps < 2 || azimuth_steps < 1 {
        return Err(Error::domain("steps", polar_steps as f64, "polar >= 2, azimuth >= 1"));
    }
    let radius = (2.0 * mu - 1.0).sqrt();
    let mut best = TwoLevelScan {
        mu,
        min_determinant: f64::INFINITY,
        polar: 0.0,
        azimuth: 0.0,
        points: 0,
    };
    for i in 0..polar_steps {
        let theta = std::f64::consts::PI * i as f64 / (polar_steps - 1) as f64;
        for j in 0..azimuth_steps {
            let varphi = std::f64::consts::TAU * j as f64 / azimuth_steps as f64;
            let (bx, by, bz) = (
                radius * theta.sin() * varphi.cos(),
                radius * theta.sin() * varphi.sin(),
                radius * theta.cos(),
            );
            let mut m = nalgebra::DMatrix::zeros(4, 4);
            m[(0, 0)] = num_complex::Complex64::new(0.5 * (1.0 + bz), 0.0);
            m[(1, 1)] = num_complex::Complex64::new(0.5 * (1.0 - bz), 0.0);
            m[(0, 1)] = num_complex::Complex64::new(0.5 * bx, -0.5 * by);
            m[(1, 0)] = num_complex::Complex64::new(0.5 * bx, 0.5 * by);
            let moments = compute_moments(&FockDensityMatrix::new(m)?.into())?;
            let det = moments.product() * (1.0 - moments.r * moments.r);
            best.points += 1;
            if det < best.min_determinant {
                best.min_determinant = det;
                best.polar = theta;
                best.azimuth = varphi;
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiCertificate {
    pub mu: f64,
    pub phi_oracle: f64,
    pub phi_exact: PhiValue,
    pub phi_app: f64,
    pub rel_err_exact: f64,
    pub rel_err_app: f64,
    pub method: Method,
    pub iterations: usize,
}

/// Rank-2 analytic for `μ ≥ 5/9`, grid-refine elsewhere.
pub fn default_method(mu: f64) -> Method {
    if mu >= MU_PIECE_BOUNDARY {
        Method::Rank2Analytic
    } else {
        Method::GridRefine
    }
}

/// Compares a minimisation result with the closed forms.
pub fn certify(result: &MinimizationResult) -> Result<PhiCertificate> {
    let mu = result.mu_target;
    let phi_oracle = result.phi();
    let phi_exact = phi(mu, PhiMode::Exact)?;
    let phi_app = phi_interpolation(mu.min(1.0));
    Ok(PhiCertificate {
        mu,
        phi_oracle,
        phi_exact,
        phi_app,
        rel_err_exact: (phi_oracle - phi_exact.value) / phi_exact.value,
        rel_err_app: (phi_oracle - phi_app) / phi_app,
        method: result.method,
        iterations: result.iterations,
    })
}

/// `Φ_oracle` against the closed forms on a grid, using [`default_method`].
pub fn phi_curve_certified(mu_grid: &[f64], levels: usize) -> Result<Vec<PhiCertificate>> {
    mu_grid
        .iter()
        .map(|&mu| certify(&min_product_fock_mixture(mu, levels, default_method(mu))?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank2_at_seven_tenths() {
        let r = min_product_fock_mixture(0.7, 2, Method::Rank2Analytic).unwrap();
        assert!((r.min_product - 0.467_544_467_966_324).abs() < 1e-12);
        assert!((r.optimal_weights[0] - 0.816_227_766_016_838).abs() < 1e-12);
        assert!((r.optimal_weights[1] - 0.183_772_233_983_162).abs() < 1e-12);
        assert!((r.phi() - 1.367_544_467_966_324).abs() < 1e-12);
        assert!((r.achieved_mu - 0.7).abs() < 1e-12);
    }

    #[test]
    fn pure_state_is_ground_state() {
        for levels in [2, 3, 5] {
            for method in [Method::Rank2Analytic, Method::GridRefine, Method::ProjectedGradient] {
                let r = min_product_fock_mixture(1.0, levels, method).unwrap();
                assert!((r.min_product - 0.25).abs() < 1e-10, "{method} {levels}: {}", r.min_product);
                assert!((r.optimal_weights[0] - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rank3_at_one_half() {
        let r = min_product_fock_mixture(0.5, 3, Method::Rank3Analytic).unwrap();
        assert!((r.min_product - 0.851_282_525_764_456).abs() < 1e-12);
        let g = min_product_fock_mixture(0.5, 3, Method::GridRefine).unwrap();
        assert!((g.min_product - r.min_product).abs() < 1e-4);
        assert!((g.achieved_mu - 0.5).abs() < 1e-8);
    }

    #[test]
    fn analytic_piece_domains() {
        assert!(matches!(
            min_product_fock_mixture(0.7, 3, Method::Rank3Analytic),
            Err(Error::PieceDomain { .. })
        ));
        assert!(matches!(
            min_product_fock_mixture(0.45, 3, Method::Rank2Analytic),
            Err(Error::PieceDomain { .. })
        ));
        assert!(matches!(
            min_product_fock_mixture(0.52, 2, Method::Rank3Analytic),
            Err(Error::PieceDomain { .. })
        ));
    }

    #[test]
    fn unreachable_purity_is_infeasible() {
        assert!(matches!(
            min_product_fock_mixture(0.5, 2, Method::GridRefine),
            Err(Error::Infeasible { .. })
        ));
        assert!(matches!(
            min_product_fock_mixture(0.2, 3, Method::ProjectedGradient),
            Err(Error::Infeasible { .. })
        ));
        assert!(min_product_fock_mixture(0.9, 1, Method::GridRefine).is_err());
    }

    #[test]
    fn weights_on_simplex() {
        for method in [Method::GridRefine, Method::ProjectedGradient] {
            let r = min_product_fock_mixture(0.45, 4, method).unwrap();
            assert!(r.optimal_weights.iter().all(|&w| w >= 0.0));
            assert!((r.optimal_weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!((r.achieved_mu - 0.45).abs() < 1e-8, "{method}: {}", r.achieved_mu);
        }
    }

    #[test]
    fn grid_and_gradient_agree() {
        for mu in [0.42, 0.5, 0.6, 0.85] {
            let g = min_product_fock_mixture(mu, 3, Method::GridRefine).unwrap();
            let p = min_product_fock_mixture(mu, 3, Method::ProjectedGradient).unwrap();
            assert!((g.min_product - p.min_product).abs() < 1e-4, "mu {mu}");
        }
    }

    #[test]
    fn random_sampling_is_an_upper_bound() {
        let exact = min_product_fock_mixture(0.6, 3, Method::Rank2Analytic).unwrap();
        let sampled = min_product_fock_mixture(
            0.6,
            3,
            Method::RandomDensitySampling {
                samples: 2000,
                seed: 3,
            },
        )
        .unwrap();
        assert!(sampled.min_product >= exact.min_product - 1e-12);
        assert!(sampled.min_product < exact.min_product * 1.05);
    }

    #[test]
    fn certified_curve_examples() {
        let rows = phi_curve_certified(&[1.0, 5.0 / 9.0, 0.45], 3).unwrap();
        assert!((rows[0].phi_oracle - 1.0).abs() < 1e-12);
        assert!((rows[1].phi_oracle - 5.0 / 3.0).abs() < 1e-6);
        assert!((rows[2].phi_oracle - 2.033_908_216_920_704).abs() < 1e-4);
        assert_eq!(rows[2].method, Method::GridRefine);
    }

    #[test]
    fn pure_state_sweep_respects_sr() {
        let report = falsification_sweep(1.0, 4, 500, 11).unwrap();
        assert_eq!(report.accepted, 500);
        assert!(report.passed(), "min slack {}", report.min_slack);
    }

    #[test]
    fn sweep_rejects_bad_arguments() {
        assert!(falsification_sweep(0.5, 9, 10, 0).is_err());
        assert!(falsification_sweep(0.1, 6, 10, 0).is_err());
        assert!(falsification_sweep(0.5, 6, 2_000_000, 0).is_err());
    }

    #[test]
    fn two_level_minimum_is_diagonal() {
        let scan = two_level_scan(0.9, 61, 24).unwrap();
        let analytic = min_product_fock_mixture(0.9, 2, Method::Rank2Analytic).unwrap();
        assert!((scan.min_determinant - analytic.min_product).abs() < 1e-6);
        assert_eq!(scan.polar, 0.0);
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let tight = OracleOptions { max_iterations: 3 };
        let err = min_product_fock_mixture_with(0.45, 4, Method::ProjectedGradient, tight).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { iterations: 3, .. }));
    }
}
