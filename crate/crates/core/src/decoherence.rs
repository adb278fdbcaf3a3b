//! Number-basis dephasing and the transparency it buys along the way.
//!
//! The channel `ρₙₘ → ρₙₘ·exp(−γ·t·(n−m)²)` keeps populations and damps
//! coherences, so purity only goes down. Transparency at each time is a
//! quasi-static estimate built from the instantaneous `(r, μ)`.

use crate::bounds::PhiMode;
use crate::error::{Error, Result};
use crate::moments::{compute_moments, TruncationWarning};
use crate::state::{validate_state, FockDensityMatrix, QuantumState};
use crate::tunneling::{action_integral, sweep_record, BarrierSpec, SweepParameter, SweepRecord};

pub const QUASI_STATIC_LABEL: &str = "quasi-static estimate";

/// One application of the channel for a time `dt`.
pub fn dephase_step(rho: &FockDensityMatrix, gamma: f64, dt: f64) -> Result<FockDensityMatrix> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::domain("gamma", gamma, "finite and >= 0"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::domain("dt", dt, "finite and > 0"));
    }
    validate_state(&QuantumState::Fock(rho.clone())).into_result()?;
    Ok(dephase_unchecked(rho, gamma * dt))
}

fn dephase_unchecked(rho: &FockDensityMatrix, strength: f64) -> FockDensityMatrix {
    let mut entries = rho.entries().clone();
    for n in 0..rho.dim() {
        for m in 0..rho.dim() {
            if n != m {
                let gap = n.abs_diff(m) as f64;
                entries[(n, m)] *= (-strength * gap * gap).exp();
            }
        }
    }
    rho.map_entries(entries)
}

#[derive(Debug, Clone)]
pub struct DephasingTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<FockDensityMatrix>,
    /// Parameter is [`SweepParameter::Time`]; `invariant_product` is `μ⁻¹·ln D`.
    pub records: Vec<SweepRecord>,
    /// `(step, warning)` for every step whose top level is populated.
    pub truncation: Vec<(usize, TruncationWarning)>,
}

/// Evolves `rho0` on `steps` equally spaced times from 0 to `t_max`
/// (both ends included) and evaluates the barrier at each.
#[allow(clippy::too_many_arguments)]
pub fn run_trajectory(
    rho0: &FockDensityMatrix,
    gamma: f64,
    t_max: f64,
    steps: usize,
    barrier: &BarrierSpec,
    energy: f64,
    mode: PhiMode,
) -> Result<DephasingTrajectory> {
    if steps < 2 {
        return Err(Error::domain("steps", steps as f64, ">= 2"));
    }
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::domain("t_max", t_max, "finite and > 0"));
    }
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::domain("gamma", gamma, "finite and >= 0"));
    }
    validate_state(&QuantumState::Fock(rho0.clone())).into_result()?;
    let (action, turning_points) = action_integral(barrier, energy)?;

    let dt = t_max / (steps - 1) as f64;
    let mut trajectory = DephasingTrajectory {
        times: Vec::with_capacity(steps),
        states: Vec::with_capacity(steps),
        records: Vec::with_capacity(steps),
        truncation: Vec::new(),
    };
    for k in 0..steps {
        let t = if k == steps - 1 { t_max } else { dt * k as f64 };
        // each state straight from rho0: the channel composes exactly
        let rho = if k == 0 { rho0.clone() } else { dephase_unchecked(rho0, gamma * t) };
        let m = compute_moments(&QuantumState::Fock(rho.clone()))?;
        if let Some(w) = m.truncation {
            trajectory.truncation.push((k, w));
        }
        trajectory.records.push(sweep_record(
            SweepParameter::Time,
            t,
            action,
            turning_points,
            rho.hbar(),
            m.r,
            m.mu,
            mode,
        )?);
        trajectory.times.push(t);
        trajectory.states.push(rho);
    }
    Ok(trajectory)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::fock_purity;
    use num_complex::Complex64;

    fn plus_state(dim: usize) -> FockDensityMatrix {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        FockDensityMatrix::pure(&[a, a], dim).unwrap()
    }

    #[test]
    fn diagonal_state_is_fixed() {
        let rho = FockDensityMatrix::diagonal(&[0.5, 0.3, 0.2], 3).unwrap();
        let out = dephase_step(&rho, 3.0, 0.7).unwrap();
        assert_eq!(out.entries(), rho.entries());
    }

    #[test]
    fn unit_strength_damping() {
        let out = dephase_step(&plus_state(2), 1.0, 1.0).unwrap();
        assert!((out.entries()[(0, 1)].re - 0.183_939_720_585_721_17).abs() < 1e-15);
        let mu = fock_purity(&out).unwrap();
        assert!((mu - 0.567_667_641_618_306_4).abs() < 1e-14);
    }

    #[test]
    fn full_dephasing_leaves_populations() {
        let out = dephase_step(&plus_state(2), 1.0, 1e3).unwrap();
        assert!(out.entries()[(0, 1)].norm() == 0.0);
        assert!((fock_purity(&out).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn semigroup() {
        let rho = plus_state(4);
        let mut stepped = rho.clone();
        for _ in 0..10 {
            stepped = dephase_step(&stepped, 0.8, 0.05).unwrap();
        }
        let once = dephase_step(&rho, 0.8, 0.5).unwrap();
        assert!((stepped.entries() - once.entries()).norm() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        assert!(dephase_step(&plus_state(2), -1.0, 1.0).is_err());
        assert!(dephase_step(&plus_state(2), 1.0, 0.0).is_err());
    }

    #[test]
    fn trajectory_enhances_transparency() {
        let barrier = BarrierSpec::rectangular(1.0, 1.0, 1.0).unwrap();
        let traj = run_trajectory(&plus_state(4), 1.0, 10.0, 101, &barrier, 0.5, PhiMode::Exact).unwrap();
        let first = traj.records.first().unwrap();
        let last = traj.records.last().unwrap();
        assert!((first.d - (-2.0_f64).exp()).abs() < 1e-12);
        assert!((last.mu - 0.5).abs() < 1e-8);
        assert!((last.d - 0.338_295_696_898_735_3).abs() < 1e-6);
        for w in traj.records.windows(2) {
            assert!(w[1].mu < w[0].mu);
            assert!(w[1].d > w[0].d);
        }
        assert_eq!(traj.times[100], 10.0);
        assert!(traj.truncation.is_empty());
    }

    #[test]
    fn no_decoherence_no_change() {
        let barrier = BarrierSpec::rectangular(1.0, 1.0, 1.0).unwrap();
        let traj = run_trajectory(&plus_state(4), 0.0, 1.0, 5, &barrier, 0.5, PhiMode::Exact).unwrap();
        for rec in &traj.records[1..] {
            assert_eq!(rec.mu, traj.records[0].mu);
            assert_eq!(rec.d, traj.records[0].d);
        }
    }
}
