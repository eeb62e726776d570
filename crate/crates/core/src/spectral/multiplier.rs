//! Fourier multipliers: fractional Laplacians, Riesz transforms,
//! anisotropic combinations, derivatives and spectral truncation.

use std::fmt;

use num_complex::Complex;

use super::field::{SpecField1D, SpecField2D};
use super::grid::Grid2D;
use crate::error::{Error, Result};
use crate::scalar::{abs_pow, Real};

/// Coordinate axis of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    #[inline]
    fn pick<T>(self, a: T, b: T) -> T {
        match self {
            Axis::X1 => a,
            Axis::X2 => b,
        }
    }
}

impl TryFrom<u8> for Axis {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            _ => Err(Error::param("axis", format!("{v} is not 1 or 2"))),
        }
    }
}

/// Whether `combined_anisotropic` multiplies or divides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnisoMode {
    Apply,
    Inverse,
}

type Symbol<T> = Box<dyn Fn(T, T) -> Complex<T> + Send + Sync>;

/// A symbol `σ(ξ1, ξ2)` together with the value used at `ξ = 0`.
///
/// Symbols that are odd in one coordinate cannot be made Hermitian on the
/// Nyquist line of that axis; those lines are zeroed so that real fields
/// map to real fields.
pub struct Multiplier<T: Real> {
    symbol: Symbol<T>,
    zero_mode: Complex<T>,
    odd_in: [bool; 2],
}

impl<T: Real> fmt::Debug for Multiplier<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Multiplier")
            .field("zero_mode", &self.zero_mode)
            .field("odd_in", &self.odd_in)
            .finish_non_exhaustive()
    }
}

impl<T: Real> Multiplier<T> {
    pub fn new(symbol: impl Fn(T, T) -> Complex<T> + Send + Sync + 'static) -> Self {
        Self {
            symbol: Box::new(symbol),
            zero_mode: Complex::new(T::zero(), T::zero()),
            odd_in: [false; 2],
        }
    }

    /// Real symbol convenience constructor.
    pub fn real(symbol: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        Self::new(move |a, b| Complex::new(symbol(a, b), T::zero()))
    }

    pub fn with_zero_mode(mut self, value: Complex<T>) -> Self {
        self.zero_mode = value;
        self
    }

    pub fn odd_in(mut self, axis: Axis) -> Self {
        self.odd_in[axis.pick(0, 1)] = true;
        self
    }

    /// Symbol value at `ξ`, honouring the zero-mode policy.
    pub fn eval(&self, xi1: T, xi2: T) -> Complex<T> {
        if xi1 == T::zero() && xi2 == T::zero() {
            self.zero_mode
        } else {
            (self.symbol)(xi1, xi2)
        }
    }

    fn value_at(&self, grid: &Grid2D<T>, i1: usize, i2: usize) -> Complex<T> {
        let nyq1 = self.odd_in[0] && i1 == grid.axis1().nyquist_index();
        let nyq2 = self.odd_in[1] && i2 == grid.axis2().nyquist_index();
        if nyq1 || nyq2 {
            return Complex::new(T::zero(), T::zero());
        }
        let v = self.eval(grid.axis1().xi()[i1], grid.axis2().xi()[i2]);
        debug_assert!(v.re.is_finite() && v.im.is_finite(), "symbol not finite");
        v
    }

    pub fn apply(&self, spec: &SpecField2D<T>) -> SpecField2D<T> {
        let grid = spec.grid().clone();
        spec.map_indexed(|i1, i2, c| c * self.value_at(&grid, i1, i2))
    }

    /// `|ξ|^γ`; `γ < 0` needs a zero-mode policy, default 0.
    pub fn frac_laplacian(gamma: T) -> Result<Self> {
        check_gamma_laplacian(gamma)?;
        let zero = if gamma == T::zero() {
            T::one()
        } else {
            T::zero()
        };
        Ok(Self::real(move |a, b| abs_pow(a.hypot(b), gamma))
            .with_zero_mode(Complex::new(zero, T::zero())))
    }

    /// `|ξ_axis|^γ`.
    pub fn dir_frac_laplacian(axis: Axis, gamma: T) -> Result<Self> {
        if !(gamma >= T::zero()) {
            return Err(out_of_range("gamma", gamma, "[0, inf)"));
        }
        let zero = if gamma == T::zero() {
            T::one()
        } else {
            T::zero()
        };
        Ok(Self::real(move |a, b| abs_pow(axis.pick(a, b), gamma))
            .with_zero_mode(Complex::new(zero, T::zero())))
    }

    /// `i ξ_axis / |ξ|`.
    pub fn riesz(axis: Axis) -> Self {
        Self::new(move |a, b| Complex::new(T::zero(), axis.pick(a, b) / a.hypot(b))).odd_in(axis)
    }

    /// `i ξ_axis`.
    pub fn derivative(axis: Axis) -> Self {
        Self::new(move |a, b| Complex::new(T::zero(), axis.pick(a, b))).odd_in(axis)
    }

    /// `(|ξ1|^β + |ξ2|^β)^{±1}`; the inverse is 0 at `ξ = 0`.
    pub fn combined_anisotropic(beta: T, mode: AnisoMode) -> Result<Self> {
        if !(beta >= T::zero()) {
            return Err(out_of_range("beta", beta, "[0, inf)"));
        }
        let m = match mode {
            AnisoMode::Apply => {
                let zero = if beta == T::zero() {
                    T::lit(2.0)
                } else {
                    T::zero()
                };
                Self::real(move |a, b| abs_pow(a, beta) + abs_pow(b, beta))
                    .with_zero_mode(Complex::new(zero, T::zero()))
            }
            AnisoMode::Inverse => {
                Self::real(move |a, b| T::one() / (abs_pow(a, beta) + abs_pow(b, beta)))
            }
        };
        Ok(m)
    }
}

fn out_of_range<T: Real>(name: &'static str, v: T, range: &'static str) -> Error {
    Error::OutOfRange {
        name,
        value: v.as_f64(),
        range,
    }
}

fn check_gamma_laplacian<T: Real>(gamma: T) -> Result<()> {
    if !(gamma >= -T::one()) {
        return Err(out_of_range("gamma", gamma, "[-1, inf)"));
    }
    Ok(())
}

/// `Λ^γ`, multiplier `|ξ|^γ`.
pub fn frac_laplacian<T: Real>(spec: &SpecField2D<T>, gamma: T) -> Result<SpecField2D<T>> {
    Ok(Multiplier::frac_laplacian(gamma)?.apply(spec))
}

/// `Λ_axis^γ`, multiplier `|ξ_axis|^γ`.
pub fn dir_frac_laplacian<T: Real>(
    spec: &SpecField2D<T>,
    axis: Axis,
    gamma: T,
) -> Result<SpecField2D<T>> {
    Ok(Multiplier::dir_frac_laplacian(axis, gamma)?.apply(spec))
}

/// Riesz transform `R_axis = ∂_axis Λ^{-1}`.
pub fn riesz<T: Real>(spec: &SpecField2D<T>, axis: Axis) -> SpecField2D<T> {
    Multiplier::riesz(axis).apply(spec)
}

pub fn derivative<T: Real>(spec: &SpecField2D<T>, axis: Axis) -> SpecField2D<T> {
    Multiplier::derivative(axis).apply(spec)
}

pub fn combined_anisotropic<T: Real>(
    spec: &SpecField2D<T>,
    beta: T,
    mode: AnisoMode,
) -> Result<SpecField2D<T>> {
    Ok(Multiplier::combined_anisotropic(beta, mode)?.apply(spec))
}

fn check_fraction<T: Real>(fraction: T) -> Result<()> {
    if !(fraction > T::zero() && fraction <= T::one()) {
        return Err(out_of_range("dealias fraction", fraction, "(0, 1]"));
    }
    Ok(())
}

/// Largest retained `|k|` for an `n`-point axis at the given fraction.
pub fn dealias_cutoff<T: Real>(n: usize, fraction: T) -> i64 {
    (fraction * T::from_count(n / 2)).floor().to_i64().unwrap()
}

/// Zeroes every coefficient with `|k_axis| > fraction · n_axis / 2` on either axis.
pub fn dealias<T: Real>(spec: &SpecField2D<T>, fraction: T) -> Result<SpecField2D<T>> {
    let mut out = spec.clone();
    dealias_in_place(&mut out, fraction)?;
    Ok(out)
}

pub fn dealias_in_place<T: Real>(spec: &mut SpecField2D<T>, fraction: T) -> Result<()> {
    check_fraction(fraction)?;
    let grid = spec.grid().clone();
    let c1 = dealias_cutoff(grid.n1(), fraction);
    let c2 = dealias_cutoff(grid.n2(), fraction);
    let k1 = grid.axis1().ints();
    let k2 = grid.axis2().ints();
    let n2 = grid.n2();
    let zero = Complex::new(T::zero(), T::zero());
    for (row, &a) in spec.coeffs_mut().chunks_mut(n2).zip(k1) {
        if a.abs() > c1 {
            row.iter_mut().for_each(|c| *c = zero);
            continue;
        }
        for (c, &b) in row.iter_mut().zip(k2) {
            if b.abs() > c2 {
                *c = zero;
            }
        }
    }
    Ok(())
}

/// 1-D `Λ̃^γ` for `γ ≥ 0`.
pub fn frac_laplacian_1d<T: Real>(spec: &SpecField1D<T>, gamma: T) -> Result<SpecField1D<T>> {
    if !(gamma >= T::zero()) {
        return Err(out_of_range("gamma", gamma, "[0, inf)"));
    }
    Ok(spec.apply(|xi| Complex::new(abs_pow(xi, gamma), T::zero())))
}

/// 1-D derivative `∂_x`, Nyquist zeroed.
pub fn derivative_1d<T: Real>(spec: &SpecField1D<T>) -> SpecField1D<T> {
    let nyq = spec.grid().nyquist_index();
    let mut out = spec.apply(|xi| Complex::new(T::zero(), xi));
    out.coeffs_mut()[nyq] = Complex::new(T::zero(), T::zero());
    out
}

/// 1-D truncation to `|k| ≤ fraction · n / 2`.
pub fn dealias_1d<T: Real>(spec: &SpecField1D<T>, fraction: T) -> Result<SpecField1D<T>> {
    check_fraction(fraction)?;
    let cut = dealias_cutoff(spec.grid().n(), fraction);
    let mut out = spec.clone();
    let ints = spec.grid().ints().to_vec();
    for (c, k) in out.coeffs_mut().iter_mut().zip(ints) {
        if k.abs() > cut {
            *c = Complex::new(T::zero(), T::zero());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::Field2D;
    use crate::spectral::random::random_band_limited;
    use std::f64::consts::TAU;
    use std::sync::Arc;

    fn grid(n: usize) -> Arc<Grid2D<f64>> {
        Grid2D::square(n, TAU).unwrap()
    }

    fn spec_of(g: &Arc<Grid2D<f64>>, f: impl Fn(f64, f64) -> f64) -> SpecField2D<f64> {
        Field2D::from_fn(g.clone(), f).transform().unwrap()
    }

    #[test]
    fn laplacian_power_on_single_mode() {
        let g = grid(32);
        let out = frac_laplacian(&spec_of(&g, |x, _| (3.0 * x).cos()), 1.0)
            .unwrap()
            .inverse_transform();
        let exact = Field2D::from_fn(g, |x, _| 3.0 * (3.0 * x).cos());
        assert!(out.max_abs_diff(&exact) < 1e-12);
    }

    #[test]
    fn laplacian_of_zero_is_zero() {
        let g = grid(16);
        for gamma in [-1.0, -0.5, 0.0, 0.7, 2.0] {
            let z = frac_laplacian(&SpecField2D::zeros(g.clone()), gamma).unwrap();
            assert_eq!(z.max_modulus(), 0.0);
        }
    }

    #[test]
    fn laplacian_rejects_gamma_below_minus_one() {
        let g = grid(8);
        assert!(frac_laplacian(&SpecField2D::zeros(g), -1.5).is_err());
    }

    #[test]
    fn squared_laplacian_matches_direct_dft_sum() {
        // Brute-force oracle: -Δf(x) = Σ_k |k|² c_k e^{ik·x} evaluated directly,
        // with c_k computed by an O(N²) DFT sum.
        let n = 12;
        let g = grid(n);
        let f = random_band_limited(&g, 4, 1.0, 11).inverse_transform();
        let xs = g.axis1().coords();
        let ks: Vec<i64> = (0..n)
            .map(|j| super::super::grid::signed_index(j, n))
            .collect();
        let mut coef = vec![vec![Complex::new(0.0, 0.0); n]; n];
        for (a, &k1) in ks.iter().enumerate() {
            for (b, &k2) in ks.iter().enumerate() {
                let mut acc = Complex::new(0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        let ph = -(k1 as f64 * xs[i] + k2 as f64 * xs[j]);
                        acc += Complex::from_polar(f.get(i, j), ph);
                    }
                }
                coef[a][b] = acc / (n * n) as f64;
            }
        }
        let lap = frac_laplacian(&f.transform().unwrap(), 2.0)
            .unwrap()
            .inverse_transform();
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex::new(0.0, 0.0);
                for (a, &k1) in ks.iter().enumerate() {
                    for (b, &k2) in ks.iter().enumerate() {
                        let w = (k1 * k1 + k2 * k2) as f64;
                        let ph = k1 as f64 * xs[i] + k2 as f64 * xs[j];
                        acc += coef[a][b] * w * Complex::from_polar(1.0, ph);
                    }
                }
                assert!((acc.re - lap.get(i, j)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn directional_power_on_x2_mode() {
        let g = grid(32);
        let s = spec_of(&g, |_, y| (2.0 * y).sin());
        let a = 0.7;
        let out = dir_frac_laplacian(&s, Axis::X2, a)
            .unwrap()
            .inverse_transform();
        let exact = Field2D::from_fn(g.clone(), |_, y| 2f64.powf(a) * (2.0 * y).sin());
        assert!(out.max_abs_diff(&exact) < 1e-12);
        let none = dir_frac_laplacian(&s, Axis::X1, 1.3).unwrap();
        assert!(none.max_modulus() < 1e-12);
    }

    #[test]
    fn riesz_follows_derivative_over_modulus() {
        // R1 = ∂1 Λ^{-1}: ∂1 sin(x1) = cos(x1), and |ξ| = 1.
        let g = grid(32);
        let r = riesz(&spec_of(&g, |x, _| x.sin()), Axis::X1).inverse_transform();
        let exact = Field2D::from_fn(g.clone(), |x, _| x.cos());
        assert!(r.max_abs_diff(&exact) < 1e-12);
        let r2 = riesz(&spec_of(&g, |_, y| (3.0 * y).cos()), Axis::X1);
        assert!(r2.max_modulus() < 1e-12);
    }

    #[test]
    fn anisotropic_factor_and_inverse() {
        let g = grid(16);
        let s = spec_of(&g, |x, y| (x + y).cos());
        let out = combined_anisotropic(&s, 1.0, AnisoMode::Apply).unwrap();
        assert!(out.sub(&s.scaled(2.0)).max_modulus() < 1e-12);

        let f = random_band_limited(&g, 5, 1.0, 3);
        let back = combined_anisotropic(
            &combined_anisotropic(&f, 1.5, AnisoMode::Apply).unwrap(),
            1.5,
            AnisoMode::Inverse,
        )
        .unwrap();
        assert!(back.sub(&f).max_modulus() < 1e-12);

        let ratio = 2f64.sqrt() / 2.0;
        let m = Multiplier::<f64>::combined_anisotropic(1.0, AnisoMode::Inverse).unwrap();
        let lap = Multiplier::<f64>::frac_laplacian(1.0).unwrap();
        assert!(((lap.eval(1.0, 1.0) * m.eval(1.0, 1.0)).re - ratio).abs() < 1e-15);
    }

    #[test]
    fn dealias_cases() {
        let g = grid(48);
        let f = random_band_limited(&g, 23, 0.0, 5);
        assert!(dealias(&f, 1.0).unwrap().sub(&f).max_modulus() == 0.0);

        let mut m = SpecField2D::zeros(g.clone());
        m.set_mode(23, 0, Complex::new(1.0, 0.0));
        m.set_mode(-23, 0, Complex::new(1.0, 0.0));
        assert_eq!(dealias(&m, 2.0 / 3.0).unwrap().max_modulus(), 0.0);
        assert!(dealias(&m, 0.0).is_err());
        assert!(dealias(&m, 1.5).is_err());
    }

    #[test]
    fn dealiased_square_of_sine() {
        let g = grid(32);
        let s = dealias(&spec_of(&g, |x, _| x.sin()), 2.0 / 3.0).unwrap();
        let u = s.inverse_transform();
        let prod = u.zip_map(&u, |a, b| a * b).transform().unwrap();
        let out = dealias(&prod, 2.0 / 3.0).unwrap().inverse_transform();
        let exact = Field2D::from_fn(g, |x, _| 0.5 * (1.0 - (2.0 * x).cos()));
        assert!(out.max_abs_diff(&exact) < 1e-12);
    }
}
