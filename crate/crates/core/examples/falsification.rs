//! Searches random dense states for a violation of the purity bound.

use hbar_eff::oracle::falsification_sweep;

fn main() -> hbar_eff::error::Result<()> {
    for mu in [0.4, 0.6, 0.9] {
        let r = falsification_sweep(mu, 6, 2000, 7)?;
        println!(
            "mu={mu} accepted={} rejected={} min_slack={:.4e} passed={}",
            r.accepted,
            r.rejected,
            r.min_slack,
            r.passed()
        );
    }
    Ok(())
}
