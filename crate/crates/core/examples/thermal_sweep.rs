//! Thermal purity and ħ_eff of the oscillator over temperature.

use hbar_eff::bounds::PhiMode;
use hbar_eff::thermal::{thermal_bound_report, thermal_sweep, ThermalModel};

fn main() -> hbar_eff::error::Result<()> {
    let model = ThermalModel::oscillator();
    println!("{:>9} {:>12} {:>10} {:>10} {:>10}", "T", "Z", "mu", "2T*mu", "hbar_eff");
    for rec in thermal_sweep(&model, 0.1, 100.0, 10, 0.0, PhiMode::Exact)? {
        println!(
            "{:9.4} {:12.6e} {:10.6} {:10.6} {:10.6}",
            rec.temperature,
            rec.z,
            rec.mu,
            2.0 * rec.temperature * rec.mu,
            rec.hbar_eff
        );
    }
    let report = thermal_bound_report(&model, 1.0, 0.0, PhiMode::Exact)?;
    println!(
        "T=1: product {:.9} >= bound {:.9}",
        report.actual_product.unwrap(),
        report.purity_bound
    );
    Ok(())
}
