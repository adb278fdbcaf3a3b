use hbar_eff::bounds::{evaluate_bounds, moment_matrix_from, phi, PhiMode};
use hbar_eff::decoherence::dephase_step;
use hbar_eff::moments::{compute_moments, fock_purity, SecondMoments};
use hbar_eff::oracle::{min_product_fock_mixture, Method};
use hbar_eff::report::format_number;
use hbar_eff::sampling::{conjugated_spectrum, haar_unitary, simplex_point};
use hbar_eff::state::{validate_state, FockDensityMatrix, GaussianState, QuantumState};
use hbar_eff::thermal::{thermal_purity, ThermalModel};
use hbar_eff::tunneling::{transparency, BarrierSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_density(seed: u64, dim: usize) -> FockDensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = simplex_point(&mut rng, dim);
    let u = haar_unitary(&mut rng, dim);
    conjugated_spectrum(&w, &u)
}

fn thermal_fock(temperature: f64, dim: usize) -> FockDensityMatrix {
    let x = (-1.0 / temperature).exp();
    let mut w: Vec<f64> = (0..dim).map(|n| x.powi(n as i32)).collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= z);
    FockDensityMatrix::diagonal(&w, dim).unwrap()
}

fn covariances() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.01f64..3.0, 0.01f64..3.0, -0.99f64..0.99).prop_map(|(qq, pp, r)| (qq, pp, r * (qq * pp).sqrt()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn thermal_fock_matches_gaussian(t in 0.05f64..2.0) {
        let fock = compute_moments(&thermal_fock(t, 60).into()).unwrap();
        let n = 1.0 / (1.0 / t).exp_m1();
        let s = n + 0.5;
        let gauss = compute_moments(&GaussianState::centered(s, s, 0.0).into()).unwrap();
        prop_assert!((fock.sigma_qq - gauss.sigma_qq).abs() < 1e-9);
        prop_assert!((fock.sigma_pp - gauss.sigma_pp).abs() < 1e-9);
        prop_assert!(fock.sigma_qp.abs() < 1e-12);
        prop_assert!((fock.mu - gauss.mu).abs() < 1e-9);
        let model = ThermalModel::oscillator();
        prop_assert!((fock.mu - thermal_purity(&model, t).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn purity_is_unitarily_invariant(seed in any::<u64>(), dim in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = simplex_point(&mut rng, dim);
        let u = haar_unitary(&mut rng, dim);
        let rho = conjugated_spectrum(&w, &u);
        let expected: f64 = w.iter().map(|v| v * v).sum();
        prop_assert!((fock_purity(&rho).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn determinant_and_product_forms_agree((qq, pp, qp) in covariances(), hbar in 0.2f64..2.0) {
        let det = qq * pp - qp * qp;
        let edge = 0.25 * hbar * hbar;
        prop_assume!((det / edge - 1.0).abs() > 1e-8);
        let m = SecondMoments::from_covariances(0.0, 0.0, qq, pp, qp, 1.0).unwrap();
        let b = evaluate_bounds(&m, hbar, PhiMode::Exact).unwrap();
        prop_assert_eq!(b.flags.schrodinger_robertson, b.flags.schrodinger_robertson_product);
    }

    #[test]
    fn eigenvalue_and_determinant_physicality_agree((qq, pp, qp) in covariances(), hbar in 0.2f64..2.0) {
        let det = qq * pp - qp * qp;
        let edge = 0.25 * hbar * hbar;
        prop_assume!((det / edge - 1.0).abs() > 1e-8);
        let a = moment_matrix_from(qq, pp, qp, hbar);
        prop_assert_eq!(a.is_physical(), det >= edge);
    }

    #[test]
    fn phi_is_nonincreasing(a in 1e-4f64..1.0, b in 1e-4f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        for mode in [PhiMode::Exact, PhiMode::Interpolation, PhiMode::Asymptote] {
            prop_assert!(phi(lo, mode).unwrap().value >= phi(hi, mode).unwrap().value - 1e-12);
        }
    }

    #[test]
    fn gaussian_states_satisfy_purity_bound(mu in 1e-3f64..=1.0) {
        // Gaussian states reach σqq σpp (1−r²) = ħ²/(4μ²)
        for mode in [PhiMode::Exact, PhiMode::Interpolation, PhiMode::Asymptote] {
            prop_assert!(phi(mu, mode).unwrap().value <= 1.0 / mu + 1e-12);
        }
    }

    #[test]
    fn pure_state_bound_reduces_to_sr((qq, pp, qp) in covariances()) {
        let m = SecondMoments::from_covariances(0.0, 0.0, qq, pp, qp, 1.0).unwrap();
        let b = evaluate_bounds(&m, 1.0, PhiMode::Exact).unwrap();
        prop_assert_eq!(b.purity_bound, b.sr_bound);
        prop_assert_eq!(b.flags.purity, b.flags.schrodinger_robertson_product);
    }

    #[test]
    fn more_levels_never_raise_the_minimum(mu in 0.36f64..1.0, levels in 3usize..6) {
        let fewer = min_product_fock_mixture(mu, levels, Method::ProjectedGradient).unwrap();
        let more = min_product_fock_mixture(mu, levels + 1, Method::ProjectedGradient).unwrap();
        prop_assert!(more.min_product <= fewer.min_product + 1e-9);
    }

    #[test]
    fn scaling_law(v0 in 0.5f64..5.0, width in 0.1f64..3.0, frac in 0.05f64..0.95, h1 in 0.1f64..10.0, h2 in 0.1f64..10.0) {
        let b = BarrierSpec::rectangular(v0, width, 1.0).unwrap();
        let e = frac * v0;
        let t1 = transparency(&b, e, h1).unwrap();
        let t2 = transparency(&b, e, h2).unwrap();
        let a = -2.0 * t1.action;
        prop_assert!((t1.ln_d * h1 - a).abs() <= 1e-12 * a.abs());
        prop_assert!((t2.ln_d * h2 - a).abs() <= 1e-12 * a.abs());
    }

    #[test]
    fn parabolic_scaling_law(v0 in 0.5f64..5.0, k in 0.1f64..5.0, frac in 0.05f64..0.95, h in 0.1f64..10.0) {
        let b = BarrierSpec::parabolic(v0, k, 1.0).unwrap();
        let t = transparency(&b, frac * v0, h).unwrap();
        prop_assert!((t.ln_d * h + 2.0 * t.action).abs() <= 1e-12 * t.action);
    }

    #[test]
    fn transparency_monotone(v0 in 0.5f64..5.0, width in 0.1f64..3.0, f1 in 0.05f64..0.95, f2 in 0.05f64..0.95, h in 0.2f64..5.0) {
        let b = BarrierSpec::rectangular(v0, width, 1.0).unwrap();
        let (lo, hi) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
        let d = |b: &BarrierSpec, e: f64, h: f64| transparency(b, e, h).unwrap().d;
        prop_assert!(d(&b, lo * v0, h) <= d(&b, hi * v0, h));
        prop_assert!(d(&b, lo * v0, h) <= d(&b, lo * v0, 2.0 * h));
        let wider = BarrierSpec::rectangular(v0, 1.5 * width, 1.0).unwrap();
        prop_assert!(d(&wider, lo * v0, h) <= d(&b, lo * v0, h));
        let taller = BarrierSpec::rectangular(1.5 * v0, width, 1.0).unwrap();
        prop_assert!(d(&taller, lo * v0, h) <= d(&b, lo * v0, h));
    }

    #[test]
    fn dephasing_semigroup(seed in any::<u64>(), gamma in 0.0f64..3.0, dt in 0.001f64..0.5, n in 1usize..12) {
        let rho = random_density(seed, 4);
        let mut stepped = rho.clone();
        for _ in 0..n {
            stepped = dephase_step(&stepped, gamma, dt).unwrap();
        }
        let once = dephase_step(&rho, gamma, dt * n as f64).unwrap();
        prop_assert!((stepped.entries() - once.entries()).norm() < 1e-12);
    }

    #[test]
    fn dephasing_keeps_states_valid(seed in any::<u64>(), gamma in 0.0f64..3.0, dt in 0.001f64..2.0) {
        let rho = random_density(seed, 5);
        let out = dephase_step(&rho, gamma, dt).unwrap();
        prop_assert!(validate_state(&QuantumState::Fock(out.clone())).is_valid());
        prop_assert!(fock_purity(&out).unwrap() <= fock_purity(&rho).unwrap() + 1e-12);
        for n in 0..5 {
            prop_assert_eq!(out.entries()[(n, n)], rho.entries()[(n, n)]);
        }
    }

    #[test]
    fn convex_mixtures_are_valid(s1 in any::<u64>(), s2 in any::<u64>(), lambda in 0.0f64..=1.0) {
        let a = random_density(s1, 5);
        let b = random_density(s2, 5);
        let mix = a.entries() * num_complex::Complex64::new(lambda, 0.0)
            + b.entries() * num_complex::Complex64::new(1.0 - lambda, 0.0);
        let rho = FockDensityMatrix::new(mix).unwrap();
        prop_assert!(validate_state(&QuantumState::Fock(rho)).is_valid());
    }

    #[test]
    fn thermal_purity_decreases(t1 in 0.05f64..100.0, t2 in 0.05f64..100.0) {
        prop_assume!(t1 != t2);
        let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
        let m = ThermalModel::oscillator();
        prop_assert!(thermal_purity(&m, lo).unwrap() >= thermal_purity(&m, hi).unwrap());
    }

    #[test]
    fn csv_numbers_keep_nine_digits(x in prop::num::f64::NORMAL) {
        let back: f64 = format_number(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-8 * x.abs());
    }
}
