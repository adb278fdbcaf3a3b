//! Seeded random density matrices at a prescribed purity.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::state::FockDensityMatrix;

const MAX_PROJECTION_ITERATIONS: usize = 100;
const PURITY_TOLERANCE: f64 = 1e-14;

/// Uniform point on the probability simplex (flat Dirichlet).
pub fn simplex_point<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = x.iter().sum();
    x.iter_mut().for_each(|v| *v /= total);
    x
}

/// Rescales a positive probability vector as `wᵢ ∝ xᵢ^α`, with `α` found by
/// safeguarded Newton iteration on `Σ wᵢ² = mu`. `None` if the target is out
/// of reach or the iteration does not settle within 100 steps.
pub fn project_to_purity(x: &[f64], mu: f64) -> Option<Vec<f64>> {
    let dim = x.len();
    if dim == 0 || x.iter().any(|&v| !(v > 0.0)) {
        return None;
    }
    if mu >= 1.0 - PURITY_TOLERANCE {
        let top = x
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)?;
        let mut w = vec![0.0; dim];
        w[top] = 1.0;
        return Some(w);
    }
    if mu <= 1.0 / dim as f64 {
        return None;
    }

    let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let max_log = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights = |alpha: f64| -> Vec<f64> {
        let mut w: Vec<f64> = logs.iter().map(|l| (alpha * (l - max_log)).exp()).collect();
        let z: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= z);
        w
    };

    // g(α) = Σw² − μ is increasing in α; keep a bracket lo < root < hi.
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;
    let mut alpha = 1.0_f64;
    for _ in 0..MAX_PROJECTION_ITERATIONS {
        let w = weights(alpha);
        let purity: f64 = w.iter().map(|v| v * v).sum();
        let g = purity - mu;
        if g.abs() < PURITY_TOLERANCE {
            return Some(w);
        }
        if g < 0.0 {
            lo = alpha;
        } else {
            hi = alpha;
        }
        let mean_log: f64 = w.iter().zip(&logs).map(|(wi, l)| wi * l).sum();
        let slope: f64 = 2.0 * w.iter().zip(&logs).map(|(wi, l)| wi * wi * (l - mean_log)).sum::<f64>();
        let newton = alpha - g / slope;
        alpha = if slope > 0.0 && newton > lo && newton < hi {
            newton
        } else if hi.is_finite() {
            0.5 * (lo + hi)
        } else {
            2.0 * alpha.max(1.0)
        };
    }
    None
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..dim {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for j in 0..dim {
            q[(j, k)] *= phase;
        }
    }
    q
}

/// `U·diag(w)·U†` as a density matrix.
pub fn conjugated_spectrum(weights: &[f64], unitary: &DMatrix<Complex64>) -> FockDensityMatrix {
    let dim = weights.len();
    let mut scaled = unitary.clone();
    for k in 0..dim {
        for j in 0..dim {
            scaled[(j, k)] *= weights[k];
        }
    }
    let entries = &scaled * unitary.adjoint();
    FockDensityMatrix::new(entries).expect("square matrix of dimension >= 2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn projection_hits_target_purity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for mu in [0.2, 0.45, 0.7, 0.99] {
            let x = simplex_point(&mut rng, 6);
            let w = project_to_purity(&x, mu).expect("reachable");
            let purity: f64 = w.iter().map(|v| v * v).sum();
            assert!((purity - mu).abs() < 1e-13, "mu {mu}: {purity}");
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(w.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn unreachable_purity_rejected() {
        assert!(project_to_purity(&[0.5, 0.5], 0.4).is_none());
        assert!(project_to_purity(&[0.5, 0.5], 0.7).is_none(), "flat spectrum cannot be sharpened");
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = haar_unitary(&mut rng, 5);
        let id = &u * u.adjoint();
        for j in 0..5 {
            for k in 0..5 {
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((id[(j, k)] - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }
}
