//! Numerical minimum of σqq σpp at fixed purity, against the closed forms.

use hbar_eff::oracle::{certify, min_product_fock_mixture, Method};

fn main() -> hbar_eff::error::Result<()> {
    for mu in [0.4, 0.5, 0.7, 0.95] {
        for method in [Method::GridRefine, Method::ProjectedGradient] {
            let c = certify(&min_product_fock_mixture(mu, 4, method)?)?;
            println!(
                "mu={mu:<5} {:<18} phi={:.8} exact={:.8} rel_err={:+.2e} iterations={}",
                c.method.name(),
                c.phi_oracle,
                c.phi_exact.value,
                c.rel_err_exact,
                c.iterations
            );
        }
    }
    Ok(())
}
