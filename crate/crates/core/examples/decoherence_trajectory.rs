//! A superposition loses coherence; the barrier becomes more transparent.

use hbar_eff::bounds::PhiMode;
use hbar_eff::decoherence::{run_trajectory, QUASI_STATIC_LABEL};
use hbar_eff::state::FockDensityMatrix;
use hbar_eff::tunneling::BarrierSpec;
use num_complex::Complex64;

fn main() -> hbar_eff::error::Result<()> {
    let a = Complex64::new(0.5f64.sqrt(), 0.0);
    let rho = FockDensityMatrix::pure(&[a, a], 4)?;
    let barrier = BarrierSpec::rectangular(1.0, 1.0, 1.0)?;
    let traj = run_trajectory(&rho, 1.0, 5.0, 11, &barrier, 0.5, PhiMode::Exact)?;
    println!("{QUASI_STATIC_LABEL}");
    for (t, rec) in traj.times.iter().zip(&traj.records) {
        println!("t={t:.1} mu={:.6} hbar_eff={:.6} D={:.6}", rec.mu, rec.hbar_eff, rec.d);
    }
    Ok(())
}
