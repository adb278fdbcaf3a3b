//! A tabulated barrier against its closed form.

use hbar_eff::tunneling::{transparency, BarrierSpec};

fn main() -> hbar_eff::error::Result<()> {
    let exact = BarrierSpec::parabolic(1.0, 2.0, 1.0)?;
    let reference = transparency(&exact, 0.5, 1.0)?;
    for n in [16, 128, 1024, 10_000] {
        let x: Vec<f64> = (0..n).map(|i| -1.5 + 3.0 * i as f64 / (n - 1) as f64).collect();
        let v: Vec<f64> = x.iter().map(|&x| exact.potential(x)).collect();
        let sampled = BarrierSpec::sampled(&x, &v, 1.0)?;
        let t = transparency(&sampled, 0.5, 1.0)?;
        println!(
            "points={n:<6} action={:.10} rel_err={:+.2e}",
            t.action,
            t.action / reference.action - 1.0
        );
    }
    println!("closed form   action={:.10} D={:.9}", reference.action, reference.d);
    Ok(())
}
