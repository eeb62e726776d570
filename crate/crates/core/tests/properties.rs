//! Invariants of the spectral layer, the semigroup and the velocity law,
//! checked on generated inputs.

use std::f64::consts::TAU;
use std::sync::Arc;

use ipm_core::diagnostics::inequality_ratios;
use ipm_core::heat1d::{heat_propagate, DecayNorm, Profile};
use ipm_core::solver::{compute_velocity, ParamSet, SolverState};
use ipm_core::spectral::{
    random_band_limited, random_band_limited_1d, Exponent, Field1D, Field2D, Grid1D, Grid2D,
};
use proptest::prelude::*;

fn grid2(n1: usize, n2: usize) -> Arc<Grid2D<f64>> {
    Arc::new(Grid2D::new(n1, n2, TAU, 2.0 * TAU).unwrap())
}

fn grid1(n: usize) -> Arc<Grid1D<f64>> {
    Arc::new(Grid1D::new(n, TAU).unwrap())
}

fn sizes() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![8usize, 12, 16, 30, 32])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fft_round_trip((n1, n2, vals) in (sizes(), sizes()).prop_flat_map(|(a, b)| {
        (Just(a), Just(b), prop::collection::vec(-10.0f64..10.0, a * b))
    })) {
        let g = grid2(n1, n2);
        let f = Field2D::from_values(g, vals).unwrap();
        let back = f.transform().unwrap().inverse_transform();
        prop_assert!(back.max_abs_diff(&f) <= 1e-12 * f.max_abs().max(1.0));
    }

    #[test]
    fn real_fields_have_hermitian_spectra((n1, n2, vals) in (sizes(), sizes()).prop_flat_map(|(a, b)| {
        (Just(a), Just(b), prop::collection::vec(-10.0f64..10.0, a * b))
    })) {
        let f = Field2D::from_values(grid2(n1, n2), vals).unwrap();
        let s = f.transform().unwrap();
        prop_assert!(s.hermitian_defect() <= 1e-12 * s.max_modulus().max(1.0));
        // Unitary transform: Plancherel.
        let l2: f64 = f.values().iter().map(|v| v * v).sum::<f64>().sqrt();
        let cell = f.grid().cell_area().sqrt();
        prop_assert!((s.l2_norm() - l2 * cell).abs() <= 1e-10 * l2.max(1.0));
    }

    #[test]
    fn semigroup_law(seed in 0u64..1000, alpha in 0.05f64..2.0, t in 0.0f64..2.0, s in 0.0f64..2.0) {
        let f = random_band_limited_1d(&grid1(64), 20, 1.0, seed);
        let two = heat_propagate(&heat_propagate(&f, alpha, t).unwrap(), alpha, s).unwrap();
        let one = heat_propagate(&f, alpha, t + s).unwrap();
        let scale = f.inverse_transform().max_abs();
        prop_assert!(two.inverse_transform().values().iter().zip(one.inverse_transform().values())
            .all(|(a, b)| (a - b).abs() <= 1e-12 * scale));
    }

    #[test]
    fn homogeneous_norms_decay(seed in 0u64..1000, alpha in 0.05f64..2.0, gamma in 0.0f64..3.0, t in 0.0f64..1.0, dt in 0.0f64..1.0) {
        let f = random_band_limited_1d(&grid1(64), 20, 1.0, seed);
        let a = heat_propagate(&f, alpha, t).unwrap();
        let b = heat_propagate(&f, alpha, t + dt).unwrap();
        prop_assert!(b.homogeneous_norm(gamma) <= a.homogeneous_norm(gamma) * (1.0 + 1e-14));
    }

    #[test]
    fn maximum_principle_and_gradient_contraction(width in 0.3f64..0.9, alpha in 0.1f64..=2.0, t in 0.01f64..3.0) {
        let g = grid1(128);
        let f = Profile::gaussian(width, 1.0).sample(&g).transform().unwrap();
        let rho0 = heat_propagate(&f, alpha, t).unwrap();
        let sup = |s: &ipm_core::spectral::SpecField1D<f64>| {
            s.upsampled(4).unwrap().values().iter().cloned().fold(f64::MIN, f64::max)
        };
        prop_assert!(sup(&rho0) <= sup(&f) + 1e-8);
        let grad = DecayNorm::gradient(Exponent::Infinity);
        prop_assert!(grad.evaluate(&rho0).unwrap() <= grad.evaluate(&f).unwrap() * (1.0 + 1e-8));
    }

    #[test]
    fn velocity_is_divergence_free_and_dominated(seed in 0u64..10_000, gamma in 0.0f64..3.0) {
        let g = grid2(32, 32);
        let rho = random_band_limited(&g, 12, 1.0, seed);
        let (u1, u2) = compute_velocity(&rho);
        let (x1, x2) = (g.axis1().xi(), g.axis2().xi());
        let n2 = g.n2();
        let worst = u1.coeffs().iter().zip(u2.coeffs()).enumerate()
            .map(|(p, (a, b))| (a * x1[p / n2] + b * x2[p % n2]).norm())
            .fold(0.0, f64::max);
        prop_assert!(worst <= 1e-12 * rho.max_modulus());
        let u = u1.homogeneous_norm(gamma).hypot(u2.homogeneous_norm(gamma));
        prop_assert!(u <= rho.homogeneous_norm(gamma) * (1.0 + 1e-12));
        // Real fields stay real.
        prop_assert!(u1.hermitian_defect() <= 1e-12 * rho.max_modulus());
    }

    #[test]
    fn transport_pairing_obeys_holder(seed in 0u64..10_000, alpha in 0.1f64..1.9) {
        let g = grid2(32, 32);
        let g1 = Arc::new(g.axis2_grid().unwrap());
        let params = ParamSet::for_alpha(alpha);
        let state = SolverState::decomposed(
            params,
            random_band_limited_1d(&g1, 8, 0.5, seed + 1),
            random_band_limited(&g, 8, 0.5, seed),
        ).unwrap();
        let r = inequality_ratios(&state).unwrap();
        prop_assert!(r.r2_4.unwrap_or(0.0) <= 1.0 + 1e-10);
    }

    #[test]
    fn one_d_samples_round_trip(vals in prop::sample::select(vec![2usize, 6, 10, 14, 18, 28, 42, 50, 64])
        .prop_flat_map(|n| prop::collection::vec(-5.0f64..5.0, n))) {
        let n = vals.len();
        let f = Field1D::from_values(Arc::new(Grid1D::new(n, 3.0).unwrap()), vals).unwrap();
        let back = f.transform().unwrap().inverse_transform();
        prop_assert!(back.values().iter().zip(f.values()).all(|(a, b)| (a - b).abs() <= 1e-12));
    }
}
