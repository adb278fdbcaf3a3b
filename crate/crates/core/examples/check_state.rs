//! Validates a few states and prints their bound slacks.

use hbar_eff::bounds::{evaluate_bounds, PhiMode};
use hbar_eff::moments::compute_moments;
use hbar_eff::state::{validate_state, FockDensityMatrix, GaussianState, QuantumState};

fn main() -> hbar_eff::error::Result<()> {
    let states: Vec<(&str, QuantumState)> = vec![
        ("vacuum", GaussianState::vacuum(1.0).into()),
        ("squeezed, correlated", GaussianState::centered(1.0, 0.5, 0.5).into()),
        ("fock mixture 0/1", FockDensityMatrix::diagonal(&[0.5, 0.5], 2)?.into()),
        ("sub-heisenberg", GaussianState::centered(0.2, 0.5, 0.0).into()),
    ];
    for (name, state) in states {
        let report = validate_state(&state);
        if !report.is_valid() {
            let broken: Vec<_> = report.violations.iter().map(|v| v.invariant.name()).collect();
            println!("{name:24} invalid: {}", broken.join(", "));
            continue;
        }
        let m = compute_moments(&state)?;
        let b = evaluate_bounds(&m, state.hbar(), PhiMode::Exact)?;
        println!(
            "{name:24} mu={:.4} r={:+.4} heisenberg={:+.4e} sr={:+.4e} purity={:+.4e}",
            m.mu, m.r, b.heisenberg_slack, b.sr_slack, b.purity_slack
        );
    }
    Ok(())
}
