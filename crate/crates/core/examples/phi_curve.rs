//! Φ(μ) in the three modes.

use hbar_eff::bounds::{linear_grid, phi_curve, PhiMode};

fn main() -> hbar_eff::error::Result<()> {
    let grid = linear_grid(0.05, 1.0, 20)?;
    let rows = phi_curve(&grid, &[PhiMode::Exact, PhiMode::Interpolation, PhiMode::Asymptote])?;
    println!("{:>8} {:>10} {:>10} {:>10}", "mu", "exact", "interp", "asymptote");
    for row in rows {
        let exact = row.exact.unwrap();
        let mark = if row.fallback() { "*" } else { "" };
        println!(
            "{:8.4} {:10.6}{mark:1} {:10.6} {:10.6}",
            row.mu,
            exact.value,
            row.interpolation.unwrap(),
            row.asymptote.unwrap()
        );
    }
    println!("* no exact piece below 7/18; interpolation used");
    Ok(())
}
