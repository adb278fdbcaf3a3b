//! Barrier transparency as the state becomes more mixed.

use hbar_eff::bounds::PhiMode;
use hbar_eff::tunneling::{transparency_vs_purity, BarrierSpec};

fn main() -> hbar_eff::error::Result<()> {
    let barriers = [
        ("rectangular", BarrierSpec::rectangular(1.0, 1.0, 1.0)?),
        ("parabolic", BarrierSpec::parabolic(1.0, 2.0, 1.0)?),
    ];
    let mu_grid = [1.0, 0.8, 0.6, 0.5, 0.4];
    for (name, barrier) in &barriers {
        println!("{name}");
        for rec in transparency_vs_purity(barrier, 0.5, 1.0, 0.0, &mu_grid, PhiMode::Exact)? {
            println!(
                "  mu={:.2} hbar_eff={:.6} D={:.6e} ln(D)/mu={:.6}",
                rec.mu, rec.hbar_eff, rec.d, rec.invariant_product
            );
        }
    }
    Ok(())
}
