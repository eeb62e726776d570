//! Seeded random band-limited fields.
//!
//! Coefficients are drawn in a fixed wavenumber order that does not depend
//! on the grid size, so the same seed describes the same function at every
//! resolution that can represent it.

use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{SpecField1D, SpecField2D};
use super::grid::{Grid1D, Grid2D};
use crate::scalar::Real;

fn weight(k2: i64, decay: f64) -> f64 {
    (1.0 + k2 as f64).powf(-0.5 * decay)
}

/// Mean-free real field `Σ c_k e^{ik·x}` over `|k1|, |k2| ≤ kmax`, with
/// amplitudes uniform in `[-1, 1]` scaled by `(1 + |k|²)^{-decay/2}`.
///
/// Panics if `kmax` does not fit strictly below the Nyquist index.
pub fn random_band_limited<T: Real>(
    grid: &Arc<Grid2D<T>>,
    kmax: usize,
    decay: f64,
    seed: u64,
) -> SpecField2D<T> {
    assert!(
        2 * kmax < grid.n1() && 2 * kmax < grid.n2(),
        "kmax = {kmax} does not fit the grid"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SpecField2D::zeros(grid.clone());
    let gain = (grid.len() as f64).sqrt();
    let km = kmax as i64;
    for k1 in 0..=km {
        for k2 in -km..=km {
            if k1 == 0 && k2 <= 0 {
                continue;
            }
            let w = weight(k1 * k1 + k2 * k2, decay) * gain;
            let re: f64 = rng.gen_range(-1.0..=1.0);
            let im: f64 = rng.gen_range(-1.0..=1.0);
            let c = Complex::new(T::lit(re * w), T::lit(im * w));
            out.set_mode(k1, k2, c);
            out.set_mode(-k1, -k2, c.conj());
        }
    }
    out
}

/// 1-D analogue of [`random_band_limited`] over `|k| ≤ kmax`.
pub fn random_band_limited_1d<T: Real>(
    grid: &Arc<Grid1D<T>>,
    kmax: usize,
    decay: f64,
    seed: u64,
) -> SpecField1D<T> {
    let n = grid.n();
    assert!(2 * kmax < n, "kmax = {kmax} does not fit the grid");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); n];
    let gain = (n as f64).sqrt();
    for k in 1..=kmax as i64 {
        let w = weight(k * k, decay) * gain;
        let re: f64 = rng.gen_range(-1.0..=1.0);
        let im: f64 = rng.gen_range(-1.0..=1.0);
        let c = Complex::new(T::lit(re * w), T::lit(im * w));
        coeffs[k as usize] = c;
        coeffs[n - k as usize] = c.conj();
    }
    SpecField1D::from_coeffs(grid.clone(), coeffs).expect("length matches grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn same_function_at_two_resolutions() {
        let coarse = Grid2D::<f64>::square(32, TAU).unwrap();
        let fine = Grid2D::<f64>::square(64, TAU).unwrap();
        let a = random_band_limited(&coarse, 6, 1.0, 9).inverse_transform();
        let b = random_band_limited(&fine, 6, 1.0, 9).inverse_transform();
        for i in 0..32 {
            for j in 0..32 {
                assert!((a.get(i, j) - b.get(2 * i, 2 * j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn real_and_mean_free() {
        let g = Grid2D::<f64>::square(16, TAU).unwrap();
        let s = random_band_limited(&g, 5, 0.0, 1);
        assert!(s.hermitian_defect() < 1e-15);
        assert!(s.imaginary_residue() < 1e-13);
        assert_eq!(s.mode(0, 0).norm(), 0.0);
    }
}
