//! At high temperature ħ_eff grows like T, so T·ln D levels off.

use hbar_eff::bounds::PhiMode;
use hbar_eff::thermal::{log_grid, ThermalModel};
use hbar_eff::tunneling::{transparency_vs_temperature, BarrierSpec, PurityLaw};

fn main() -> hbar_eff::error::Result<()> {
    let barrier = BarrierSpec::rectangular(1.0, 1.0, 1.0)?;
    let model = ThermalModel::oscillator();
    let temps = log_grid(0.5, 500.0, 7)?;
    for law in [PurityLaw::Exact, PurityLaw::HighTemperature] {
        println!("{law:?}");
        let rows = transparency_vs_temperature(&barrier, 0.5, 1.0, &model, &temps, 0.0, PhiMode::Exact, law)?;
        for rec in rows {
            println!(
                "  T={:9.3} mu={:.6} D={:.6e} T*ln(D)={:.6}",
                rec.param_value, rec.mu, rec.d, rec.invariant_product
            );
        }
    }
    Ok(())
}
