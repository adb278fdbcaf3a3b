//! WKB barrier transparency `D = exp(−(2/ħ_eff)·∫√(2m(V−E))dx)` with the
//! Planck constant replaced by its purity- and correlation-dependent value.

use std::f64::consts::PI;

use crate::bounds::{effective_hbar_with_phi, PhiMode, PhiValue};
use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::quadrature::endpoint_singular_integral;
use crate::thermal::{high_temperature_purity, thermal_purity, ThermalModel};

/// Absolute tolerance on the action integral.
pub const ACTION_TOLERANCE: f64 = 1e-10;
/// Bisection tolerance for turning points on sampled barriers.
pub const TURNING_POINT_TOLERANCE: f64 = 1e-12;
pub const MIN_SAMPLED_POINTS: usize = 8;
/// A forbidden interval must cover at least this many grid nodes.
pub const MIN_FORBIDDEN_NODES: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum BarrierShape {
    /// `V = v0` on `[0, width]`.
    Rectangular { v0: f64, width: f64 },
    /// `V = v0 − ½·curvature·x²`.
    Parabolic { v0: f64, curvature: f64 },
    /// Monotone cubic through `(x, v)`; the potential outside the window is
    /// taken to be classically allowed.
    Sampled(MonotoneCubic),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarrierSpec {
    pub shape: BarrierShape,
    pub mass: f64,
}

fn check_mass(mass: f64) -> Result<()> {
    if mass.is_finite() && mass > 0.0 {
        Ok(())
    } else {
        Err(Error::domain("mass", mass, "finite and > 0"))
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(name, value, "finite and > 0"))
    }
}

impl BarrierSpec {
    pub fn rectangular(v0: f64, width: f64, mass: f64) -> Result<Self> {
        check_positive("v0", v0)?;
        check_positive("width", width)?;
        check_mass(mass)?;
        Ok(BarrierSpec {
            shape: BarrierShape::Rectangular { v0, width },
            mass,
        })
    }

    pub fn parabolic(v0: f64, curvature: f64, mass: f64) -> Result<Self> {
        check_positive("v0", v0)?;
        check_positive("curvature", curvature)?;
        check_mass(mass)?;
        Ok(BarrierSpec {
            shape: BarrierShape::Parabolic { v0, curvature },
            mass,
        })
    }

    pub fn sampled(x: &[f64], v: &[f64], mass: f64) -> Result<Self> {
        check_mass(mass)?;
        if x.len() != v.len() {
            return Err(Error::Malformed(format!(
                "sampled barrier: x has {} points, v has {}",
                x.len(),
                v.len()
            )));
        }
        if x.len() < MIN_SAMPLED_POINTS {
            return Err(Error::Malformed(format!(
                "sampled barrier needs at least {MIN_SAMPLED_POINTS} points, got {}",
                x.len()
            )));
        }
        if let Some(i) = x.iter().chain(v).position(|t| !t.is_finite()) {
            return Err(Error::Malformed(format!("sampled barrier: non-finite value at index {i}")));
        }
        if let Some(i) = x.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Malformed(format!(
                "sampled barrier: x is not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(BarrierSpec {
            shape: BarrierShape::Sampled(MonotoneCubic::new(x, v)),
            mass,
        })
    }

    /// Sampled version of this barrier on `points` equally spaced nodes,
    /// covering the closed-form support.
    pub fn resampled(&self, points: usize) -> Result<Self> {
        let (a, b) = match &self.shape {
            BarrierShape::Rectangular { width, .. } => (0.0, *width),
            BarrierShape::Parabolic { v0, curvature } => {
                let reach = (2.0 * v0 / curvature).sqrt();
                (-reach, reach)
            }
            BarrierShape::Sampled(f) => (f.nodes()[0], *f.nodes().last().expect("nonempty")),
        };
        let step = (b - a) / (points.max(2) - 1) as f64;
        let x: Vec<f64> = (0..points).map(|i| a + step * i as f64).collect();
        let v: Vec<f64> = x.iter().map(|&t| self.potential(t)).collect();
        BarrierSpec::sampled(&x, &v, self.mass)
    }

    pub fn potential(&self, x: f64) -> f64 {
        match &self.shape {
            BarrierShape::Rectangular { v0, width } => {
                if (0.0..=*width).contains(&x) {
                    *v0
                } else {
                    0.0
                }
            }
            BarrierShape::Parabolic { v0, curvature } => v0 - 0.5 * curvature * x * x,
            BarrierShape::Sampled(f) => f.eval(x),
        }
    }

    pub fn max_potential(&self) -> f64 {
        match &self.shape {
            BarrierShape::Rectangular { v0, .. } | BarrierShape::Parabolic { v0, .. } => *v0,
            BarrierShape::Sampled(f) => f.values().iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

/// A connected piece of the classically forbidden region.
#[derive(Debug, Clone, PartialEq)]
pub struct ForbiddenInterval {
    pub left: f64,
    pub right: f64,
    /// Interior grid nodes (sampled barriers only), used as quadrature
    /// breakpoints.
    pub nodes: Vec<f64>,
}

/// Forbidden intervals `{x : V(x) > E}`, left to right.
pub fn forbidden_intervals(barrier: &BarrierSpec, energy: f64) -> Result<Vec<ForbiddenInterval>> {
    if energy >= barrier.max_potential() {
        return Ok(Vec::new());
    }
    match &barrier.shape {
        BarrierShape::Rectangular { width, .. } => Ok(vec![ForbiddenInterval {
            left: 0.0,
            right: *width,
            nodes: Vec::new(),
        }]),
        BarrierShape::Parabolic { v0, curvature } => {
            let reach = (2.0 * (v0 - energy) / curvature).sqrt();
            Ok(vec![ForbiddenInterval {
                left: -reach,
                right: reach,
                nodes: Vec::new(),
            }])
        }
        BarrierShape::Sampled(f) => sampled_intervals(f, energy),
    }
}

fn sampled_intervals(f: &MonotoneCubic, energy: f64) -> Result<Vec<ForbiddenInterval>> {
    let x = f.nodes();
    let v = f.values();
    let n = x.len();
    let mut out = Vec::new();
    let mut k = 0;
    while k < n {
        if v[k] <= energy {
            k += 1;
            continue;
        }
        let first = k;
        while k < n && v[k] > energy {
            k += 1;
        }
        let last = k - 1;
        let covered = last - first + 1;
        if covered < MIN_FORBIDDEN_NODES {
            return Err(Error::Resolution(format!(
                "forbidden region around x = {} spans {covered} grid node(s), need {MIN_FORBIDDEN_NODES}",
                x[first]
            )));
        }
        let left = if first == 0 {
            x[0]
        } else {
            f.crossing_in_cell(first - 1, energy, TURNING_POINT_TOLERANCE)
        };
        let right = if last == n - 1 {
            x[n - 1]
        } else {
            f.crossing_in_cell(last, energy, TURNING_POINT_TOLERANCE)
        };
        out.push(ForbiddenInterval {
            left,
            right,
            nodes: x[first..=last].to_vec(),
        });
    }
    Ok(out)
}

fn check_energy(energy: f64) -> Result<()> {
    check_positive("energy", energy)
}

/// `∫√(2m(V−E))dx` over the forbidden region, by quadrature regardless of
/// shape. Also returns the outermost turning points.
pub fn action_by_quadrature(barrier: &BarrierSpec, energy: f64) -> Result<(f64, Option<(f64, f64)>)> {
    check_energy(energy)?;
    let intervals = forbidden_intervals(barrier, energy)?;
    let two_m = 2.0 * barrier.mass;
    let integrand = |x: f64| (two_m * (barrier.potential(x) - energy)).max(0.0).sqrt();
    let total_width: f64 = intervals.iter().map(|i| i.right - i.left).sum();
    let mut action = 0.0;
    for interval in &intervals {
        let share = ACTION_TOLERANCE * (interval.right - interval.left) / total_width;
        // inside [left, right] the rectangle is constant; keep the
        // integrand off its discontinuous edges
        let result = match barrier.shape {
            BarrierShape::Rectangular { v0, .. } => {
                let height = (two_m * (v0 - energy)).sqrt();
                endpoint_singular_integral(&|_| height, interval.left, interval.right, &[], share)?
            }
            _ => endpoint_singular_integral(&integrand, interval.left, interval.right, &interval.nodes, share)?,
        };
        action += result.value;
    }
    Ok((action, outer_turning_points(&intervals)))
}

fn outer_turning_points(intervals: &[ForbiddenInterval]) -> Option<(f64, f64)> {
    Some((intervals.first()?.left, intervals.last()?.right))
}

/// Action by the closed form where one exists, otherwise by quadrature.
pub fn action_integral(barrier: &BarrierSpec, energy: f64) -> Result<(f64, Option<(f64, f64)>)> {
    check_energy(energy)?;
    match barrier.shape {
        BarrierShape::Rectangular { v0, width } if energy < v0 => {
            Ok(((2.0 * barrier.mass * (v0 - energy)).sqrt() * width, Some((0.0, width))))
        }
        BarrierShape::Parabolic { v0, curvature } if energy < v0 => {
            let reach = (2.0 * (v0 - energy) / curvature).sqrt();
            let action = PI * (v0 - energy) * (barrier.mass / curvature).sqrt();
            Ok((action, Some((-reach, reach))))
        }
        BarrierShape::Rectangular { .. } | BarrierShape::Parabolic { .. } => Ok((0.0, None)),
        BarrierShape::Sampled(_) => action_by_quadrature(barrier, energy),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransparencyResult {
    pub d: f64,
    pub ln_d: f64,
    pub action: f64,
    /// `None` when the forbidden region is empty.
    pub turning_points: Option<(f64, f64)>,
    pub hbar_eff_used: f64,
}

fn from_action(action: f64, turning_points: Option<(f64, f64)>, hbar_eff: f64) -> TransparencyResult {
    let ln_d = -2.0 * action / hbar_eff;
    TransparencyResult {
        d: ln_d.exp(),
        ln_d,
        action,
        turning_points,
        hbar_eff_used: hbar_eff,
    }
}

pub fn transparency(barrier: &BarrierSpec, energy: f64, hbar_eff: f64) -> Result<TransparencyResult> {
    check_positive("hbar_eff", hbar_eff)?;
    let (action, turning_points) = action_integral(barrier, energy)?;
    Ok(from_action(action, turning_points, hbar_eff))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Temperature,
    Purity,
    Time,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Temperature => "T",
            SweepParameter::Purity => "mu",
            SweepParameter::Time => "t",
        }
    }
}

/// One point of a transparency sweep. `invariant_product` is `T·ln D` for
/// temperature sweeps and `μ⁻¹·ln D` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub param: SweepParameter,
    pub param_value: f64,
    pub mu: f64,
    pub r: f64,
    pub phi: PhiValue,
    pub hbar_eff: f64,
    pub action: f64,
    pub ln_d: f64,
    pub d: f64,
    pub invariant_product: f64,
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn sweep_record(
    param: SweepParameter,
    param_value: f64,
    action: f64,
    turning_points: Option<(f64, f64)>,
    hbar: f64,
    r: f64,
    mu: f64,
    mode: PhiMode,
) -> Result<SweepRecord> {
    let (hbar_eff, phi) = effective_hbar_with_phi(hbar, r, mu, mode)?;
    let t = from_action(action, turning_points, hbar_eff);
    let invariant_product = match param {
        SweepParameter::Temperature => param_value * t.ln_d,
        SweepParameter::Purity | SweepParameter::Time => t.ln_d / mu,
    };
    Ok(SweepRecord {
        param,
        param_value,
        mu,
        r,
        phi,
        hbar_eff,
        action,
        ln_d: t.ln_d,
        d: t.d,
        invariant_product,
    })
}

pub fn transparency_vs_purity(
    barrier: &BarrierSpec,
    energy: f64,
    hbar: f64,
    r: f64,
    mu_grid: &[f64],
    mode: PhiMode,
) -> Result<Vec<SweepRecord>> {
    check_positive("hbar", hbar)?;
    let (action, turning_points) = action_integral(barrier, energy)?;
    mu_grid
        .iter()
        .map(|&mu| {
            if !(mu > 0.0 && mu <= 1.0) {
                return Err(Error::domain("mu", mu, "0 < mu <= 1"));
            }
            sweep_record(SweepParameter::Purity, mu, action, turning_points, hbar, r, mu, mode)
        })
        .collect()
}

/// How a temperature becomes a purity in [`transparency_vs_temperature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PurityLaw {
    /// `μ(T) = Z(T/2)/Z²(T)` from the model.
    #[default]
    Exact,
    /// `μ ≈ ħω/(2T)`, the leading high-temperature term.
    HighTemperature,
}

#[allow(clippy::too_many_arguments)]
pub fn transparency_vs_temperature(
    barrier: &BarrierSpec,
    energy: f64,
    hbar: f64,
    model: &ThermalModel,
    t_grid: &[f64],
    r: f64,
    mode: PhiMode,
    law: PurityLaw,
) -> Result<Vec<SweepRecord>> {
    check_positive("hbar", hbar)?;
    let (action, turning_points) = action_integral(barrier, energy)?;
    t_grid
        .iter()
        .map(|&t| {
            check_positive("temperature", t)?;
            let mu = match law {
                PurityLaw::Exact => thermal_purity(model, t)?,
                PurityLaw::HighTemperature => {
                    let mu = high_temperature_purity(model, t);
                    if mu > 1.0 {
                        return Err(Error::domain("temperature", t, "high-temperature purity <= 1"));
                    }
                    mu
                }
            };
            sweep_record(SweepParameter::Temperature, t, action, turning_points, hbar, r, mu, mode)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::phi_piece_2;

    fn rect() -> BarrierSpec {
        BarrierSpec::rectangular(1.0, 1.0, 1.0).unwrap()
    }

    fn parabola() -> BarrierSpec {
        BarrierSpec::parabolic(1.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn rectangular_closed_form() {
        let t = transparency(&rect(), 0.5, 1.0).unwrap();
        assert!((t.action - 1.0).abs() < 1e-15);
        assert!((t.d - 0.135_335_283_236_612_7).abs() < 1e-12);
        assert_eq!(t.turning_points, Some((0.0, 1.0)));
    }

    #[test]
    fn above_barrier_is_transparent() {
        for b in [rect(), parabola()] {
            let t = transparency(&b, 1.5, 1.0).unwrap();
            assert_eq!(t.d, 1.0);
            assert_eq!(t.action, 0.0);
            assert_eq!(t.turning_points, None);
        }
    }

    #[test]
    fn mixed_state_transparency() {
        let t = transparency(&rect(), 0.5, phi_piece_2(0.5)).unwrap();
        assert!((t.ln_d + 1.083_834_923_055_457).abs() < 1e-12);
        assert!((t.d - 0.338_295_696_898_735_3).abs() < 1e-12);
    }

    #[test]
    fn parabolic_closed_form_and_quadrature() {
        let t = transparency(&parabola(), 0.5, 1.0).unwrap();
        assert!((t.action - 1.110_720_734_539_591_6).abs() < 1e-14);
        assert!((t.d - 0.108_452_664_934_473_2).abs() < 1e-12);
        let (quad, tp) = action_by_quadrature(&parabola(), 0.5).unwrap();
        assert!((quad - t.action).abs() < 1e-8, "{quad}");
        let (l, r) = tp.unwrap();
        assert!((r - 0.5_f64.sqrt()).abs() < 1e-15 && (l + r).abs() < 1e-15);
    }

    #[test]
    fn sampled_barriers_match_closed_forms() {
        for b in [rect(), parabola()] {
            let exact = transparency(&b, 0.5, 1.0).unwrap().action;
            let sampled = b.resampled(10_000).unwrap();
            let approx = transparency(&sampled, 0.5, 1.0).unwrap().action;
            assert!((approx - exact).abs() < 1e-6, "{approx} vs {exact}");
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let v: Vec<f64> = x.iter().map(|&t| if t == 5.0 { 2.0 } else { 0.1 }).collect();
        let b = BarrierSpec::sampled(&x, &v, 1.0).unwrap();
        assert!(matches!(transparency(&b, 0.5, 1.0), Err(Error::Resolution(_))));
    }

    #[test]
    fn sampled_validation() {
        assert!(BarrierSpec::sampled(&[0.0, 1.0], &[1.0, 1.0], 1.0).is_err());
        let x = [0.0, 1.0, 2.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert!(BarrierSpec::sampled(&x, &[1.0; 8], 1.0).is_err());
        assert!(BarrierSpec::rectangular(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn bad_inputs() {
        assert!(transparency(&rect(), 0.0, 1.0).is_err());
        assert!(transparency(&rect(), 0.5, 0.0).is_err());
    }

    #[test]
    fn purity_sweep_invariance() {
        let grid = [0.01, 0.005, 0.002];
        let asym = transparency_vs_purity(&rect(), 0.5, 1.0, 0.0, &grid, PhiMode::Asymptote).unwrap();
        let first = asym[0].invariant_product;
        for rec in &asym {
            assert!((rec.invariant_product / first - 1.0).abs() < 1e-12);
        }
        let interp = transparency_vs_purity(&rect(), 0.5, 1.0, 0.0, &grid, PhiMode::Interpolation).unwrap();
        let (lo, hi) = interp
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                (lo.min(r.invariant_product), hi.max(r.invariant_product))
            });
        assert!(hi / lo - 1.0 < 1e-4);
        let bare = transparency_vs_purity(&rect(), 0.5, 1.0, 0.0, &[1.0], PhiMode::Exact).unwrap();
        assert!((bare[0].ln_d + 2.0).abs() < 1e-15);
    }

    #[test]
    fn temperature_sweep_invariance() {
        let model = ThermalModel::oscillator();
        let grid = [50.0, 100.0, 200.0, 500.0];
        let asym = transparency_vs_temperature(
            &rect(),
            0.5,
            1.0,
            &model,
            &grid,
            0.0,
            PhiMode::Asymptote,
            PurityLaw::HighTemperature,
        )
        .unwrap();
        for rec in &asym {
            assert!((rec.invariant_product / asym[0].invariant_product - 1.0).abs() < 1e-10);
        }
        let exact = transparency_vs_temperature(
            &rect(),
            0.5,
            1.0,
            &model,
            &grid,
            0.0,
            PhiMode::Interpolation,
            PurityLaw::Exact,
        )
        .unwrap();
        let frozen = [-1.124_947, -1.124_987, -1.124_997, -1.124_999];
        for (rec, want) in exact.iter().zip(frozen) {
            assert!((rec.invariant_product - want).abs() < 2e-6, "{}", rec.invariant_product);
        }
        let cold = transparency_vs_temperature(
            &rect(),
            0.5,
            1.0,
            &model,
            &[0.05],
            0.0,
            PhiMode::Exact,
            PurityLaw::Exact,
        )
        .unwrap();
        assert!((cold[0].d - (-2.0_f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn lower_purity_tunnels_more() {
        let recs = transparency_vs_purity(&rect(), 0.5, 1.0, 0.0, &[1.0, 0.8, 0.6, 0.5, 0.4], PhiMode::Exact).unwrap();
        for w in recs.windows(2) {
            assert!(w[1].d > w[0].d);
        }
    }
}
