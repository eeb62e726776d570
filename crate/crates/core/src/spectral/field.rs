//! Real-space samples and Fourier coefficients on 1-D and 2-D grids.

use std::sync::Arc;

use num_complex::Complex;

use super::fft::{fft1, fft2, Direction};
use super::grid::{storage_index, Grid1D, Grid2D};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[inline]
fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn check_finite<T: Real>(values: &[T], index_of: impl Fn(usize) -> Vec<usize>) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(p) => Err(Error::NonFinite {
            index: index_of(p),
            value: values[p].as_f64(),
        }),
    }
}

/// Storage targets (index, weight) of one coefficient when zero-padding
/// an `n`-point spectrum to `n * factor` points. The Nyquist coefficient is
/// split evenly between `±n/2` so that real signals stay real.
fn pad_targets<T: Real>(j: usize, n: usize, factor: usize) -> Vec<(usize, T)> {
    let big = n * factor;
    let k = super::grid::signed_index(j, n);
    if factor > 1 && j == n / 2 {
        let half = T::lit(0.5);
        vec![
            (storage_index(k, big), half),
            (storage_index(-k, big), half),
        ]
    } else {
        vec![(storage_index(k, big), T::one())]
    }
}

/// Real samples of a function of `x2` on a 1-D grid.
#[derive(Clone, Debug)]
pub struct Field1D<T: Real> {
    grid: Arc<Grid1D<T>>,
    values: Vec<T>,
}

impl<T: Real> Field1D<T> {
    pub fn zeros(grid: Arc<Grid1D<T>>) -> Self {
        let n = grid.n();
        Self {
            grid,
            values: vec![T::zero(); n],
        }
    }

    pub fn from_values(grid: Arc<Grid1D<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}-point grid",
                values.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid1D<T>>, f: impl Fn(T) -> T) -> Self {
        let values = grid.coords().into_iter().map(f).collect();
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid1D<T>> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn transform(&self) -> Result<SpecField1D<T>> {
        check_finite(&self.values, |p| vec![p])?;
        let mut coeffs: Vec<Complex<T>> = self
            .values
            .iter()
            .map(|&v| Complex::new(v, T::zero()))
            .collect();
        fft1(&self.grid, &mut coeffs, Direction::Forward);
        Ok(SpecField1D {
            grid: Arc::clone(&self.grid),
            coeffs,
        })
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Unitary Fourier coefficients of a 1-D field, in storage order.
#[derive(Clone, Debug)]
pub struct SpecField1D<T: Real> {
    grid: Arc<Grid1D<T>>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpecField1D<T> {
    pub fn zeros(grid: Arc<Grid1D<T>>) -> Self {
        let n = grid.n();
        Self {
            grid,
            coeffs: vec![czero(); n],
        }
    }

    pub fn from_coeffs(grid: Arc<Grid1D<T>>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a {}-point grid",
                coeffs.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid1D<T>> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    /// Coefficient of signed wavenumber `k`.
    pub fn mode(&self, k: i64) -> Complex<T> {
        self.coeffs[storage_index(k, self.grid.n())]
    }

    /// Inverse transform, keeping the real part.
    pub fn inverse_transform(&self) -> Field1D<T> {
        let mut work = self.coeffs.clone();
        fft1(&self.grid, &mut work, Direction::Inverse);
        Field1D {
            grid: Arc::clone(&self.grid),
            values: work.into_iter().map(|c| c.re).collect(),
        }
    }

    /// Multiplies every coefficient by `symbol(ξ)`.
    pub fn apply(&self, symbol: impl Fn(T) -> Complex<T>) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.grid.xi())
            .map(|(&c, &xi)| c * symbol(xi))
            .collect();
        Self {
            grid: Arc::clone(&self.grid),
            coeffs,
        }
    }

    pub fn scaled(&self, a: T) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self.coeffs.iter().map(|&c| c * a).collect(),
        }
    }

    /// Samples on a grid refined `factor` times by zero padding.
    pub fn upsampled(&self, factor: usize) -> Result<Field1D<T>> {
        let n = self.grid.n();
        let big = Arc::new(Grid1D::new(n * factor, self.grid.length())?);
        let mut padded = vec![czero(); n * factor];
        let gain = T::from_count(factor).sqrt();
        for (j, &c) in self.coeffs.iter().enumerate() {
            for (t, w) in pad_targets::<T>(j, n, factor) {
                padded[t] += c * (w * gain);
            }
        }
        SpecField1D::from_coeffs(big, padded).map(|s| s.inverse_transform())
    }
}

/// Real samples on a 2-D grid, row-major with `x1` outer.
#[derive(Clone, Debug)]
pub struct Field2D<T: Real> {
    grid: Arc<Grid2D<T>>,
    values: Vec<T>,
}

impl<T: Real> Field2D<T> {
    pub fn zeros(grid: Arc<Grid2D<T>>) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![T::zero(); n],
        }
    }

    pub fn from_values(grid: Arc<Grid2D<T>>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.n1(),
                grid.n2()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid2D<T>>, f: impl Fn(T, T) -> T) -> Self {
        let x1 = grid.axis1().coords();
        let x2 = grid.axis2().coords();
        let mut values = Vec::with_capacity(grid.len());
        for &a in &x1 {
            for &b in &x2 {
                values.push(f(a, b));
            }
        }
        Self { grid, values }
    }

    /// `f(x2)` repeated along every `x1` slice.
    pub fn broadcast_x2(grid: Arc<Grid2D<T>>, profile: &Field1D<T>) -> Result<Self> {
        if profile.values.len() != grid.n2() {
            return Err(Error::GridMismatch("profile length differs from n2".into()));
        }
        let mut values = Vec::with_capacity(grid.len());
        for _ in 0..grid.n1() {
            values.extend_from_slice(&profile.values);
        }
        Ok(Self { grid, values })
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid2D<T>> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize) -> T {
        self.values[self.grid.index(i1, i2)]
    }

    /// The `x2`-slice at fixed `x1` index.
    pub fn slice_x2(&self, i1: usize) -> &[T] {
        let n2 = self.grid.n2();
        &self.values[i1 * n2..(i1 + 1) * n2]
    }

    pub fn transform(&self) -> Result<SpecField2D<T>> {
        let n2 = self.grid.n2();
        check_finite(&self.values, |p| vec![p / n2, p % n2])?;
        let mut coeffs: Vec<Complex<T>> = self
            .values
            .iter()
            .map(|&v| Complex::new(v, T::zero()))
            .collect();
        fft2(&self.grid, &mut coeffs, Direction::Forward);
        Ok(SpecField2D {
            grid: Arc::clone(&self.grid),
            coeffs,
        })
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        debug_assert!(self.grid.same_shape(&other.grid));
        Self {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Largest pointwise difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }
}

/// Unitary Fourier coefficients of a 2-D field, row-major with `k1` outer.
#[derive(Clone, Debug)]
pub struct SpecField2D<T: Real> {
    grid: Arc<Grid2D<T>>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpecField2D<T> {
    pub fn zeros(grid: Arc<Grid2D<T>>) -> Self {
        let n = grid.len();
        Self {
            grid,
            coeffs: vec![czero(); n],
        }
    }

    pub fn from_coeffs(grid: Arc<Grid2D<T>>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a {}x{} grid",
                coeffs.len(),
                grid.n1(),
                grid.n2()
            )));
        }
        Ok(Self { grid, coeffs })
    }

    /// Spectrum of `f(x2)` broadcast along `x1`: only the `k1 = 0` row is populated.
    pub fn broadcast_x2(grid: Arc<Grid2D<T>>, profile: &SpecField1D<T>) -> Result<Self> {
        if profile.coeffs.len() != grid.n2() {
            return Err(Error::GridMismatch("profile length differs from n2".into()));
        }
        let mut out = Self::zeros(grid);
        let gain = T::from_count(out.grid.n1()).sqrt();
        for (dst, &c) in out.coeffs[..profile.coeffs.len()]
            .iter_mut()
            .zip(&profile.coeffs)
        {
            *dst = c * gain;
        }
        Ok(out)
    }

    #[inline]
    pub fn grid(&self) -> &Arc<Grid2D<T>> {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Coefficient of signed wavenumber `(k1, k2)`.
    pub fn mode(&self, k1: i64, k2: i64) -> Complex<T> {
        let g = &self.grid;
        self.coeffs[g.index(storage_index(k1, g.n1()), storage_index(k2, g.n2()))]
    }

    pub fn set_mode(&mut self, k1: i64, k2: i64, value: Complex<T>) {
        let (n1, n2) = (self.grid.n1(), self.grid.n2());
        let idx = self
            .grid
            .index(storage_index(k1, n1), storage_index(k2, n2));
        self.coeffs[idx] = value;
    }

    /// Inverse transform, keeping the real part.
    pub fn inverse_transform(&self) -> Field2D<T> {
        let work = self.inverse_complex();
        Field2D {
            grid: Arc::clone(&self.grid),
            values: work.into_iter().map(|c| c.re).collect(),
        }
    }

    /// Inverse transform without discarding the imaginary part.
    pub fn inverse_complex(&self) -> Vec<Complex<T>> {
        let mut work = self.coeffs.clone();
        fft2(&self.grid, &mut work, Direction::Inverse);
        work
    }

    /// Inverse transforms of two Hermitian spectra packed into one complex
    /// transform: `ifft(a + i b) = ifft(a) + i ifft(b)` with both parts real.
    pub fn inverse_pair(a: &Self, b: &Self) -> (Field2D<T>, Field2D<T>) {
        debug_assert!(a.grid.same_shape(&b.grid));
        let i = Complex::new(T::zero(), T::one());
        let mut work: Vec<Complex<T>> = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| x + i * y)
            .collect();
        fft2(&a.grid, &mut work, Direction::Inverse);
        let re = work.iter().map(|c| c.re).collect();
        let im = work.iter().map(|c| c.im).collect();
        (
            Field2D {
                grid: Arc::clone(&a.grid),
                values: re,
            },
            Field2D {
                grid: Arc::clone(&a.grid),
                values: im,
            },
        )
    }

    /// Largest imaginary part produced by the inverse transform.
    pub fn imaginary_residue(&self) -> T {
        self.inverse_complex()
            .iter()
            .fold(T::zero(), |m, c| m.max(c.im.abs()))
    }

    /// Largest violation of `c(-k) = conj(c(k))`.
    pub fn hermitian_defect(&self) -> T {
        let g = &self.grid;
        let (n1, n2) = (g.n1(), g.n2());
        let mut worst = T::zero();
        for i1 in 0..n1 {
            let m1 = (n1 - i1) % n1;
            for i2 in 0..n2 {
                let m2 = (n2 - i2) % n2;
                let d = self.coeffs[g.index(m1, m2)] - self.coeffs[g.index(i1, i2)].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Applies `f(i1, i2, c)` to every coefficient.
    pub fn map_indexed(&self, f: impl Fn(usize, usize, Complex<T>) -> Complex<T>) -> Self {
        let n2 = self.grid.n2();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(p, &c)| f(p / n2, p % n2, c))
            .collect();
        Self {
            grid: Arc::clone(&self.grid),
            coeffs,
        }
    }

    pub fn scaled(&self, a: T) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            coeffs: self.coeffs.iter().map(|&c| c * a).collect(),
        }
    }

    /// `self += a * other`.
    pub fn add_scaled(&mut self, other: &Self, a: T) {
        debug_assert!(self.grid.same_shape(&other.grid));
        for (x, &y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * a;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, -T::one());
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, T::one());
        out
    }

    /// Largest coefficient modulus.
    pub fn max_modulus(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }

    /// Samples on a grid refined `factor` times per axis by zero padding.
    pub fn upsampled(&self, factor: usize) -> Result<Field2D<T>> {
        let g = &self.grid;
        let (n1, n2) = (g.n1(), g.n2());
        let big = Arc::new(Grid2D::new(
            n1 * factor,
            n2 * factor,
            g.axis1().length(),
            g.axis2().length(),
        )?);
        let mut padded = vec![czero(); big.len()];
        let gain = T::from_count(factor);
        let t2: Vec<_> = (0..n2).map(|j| pad_targets::<T>(j, n2, factor)).collect();
        for i1 in 0..n1 {
            let t1 = pad_targets::<T>(i1, n1, factor);
            for (i2, targets2) in t2.iter().enumerate() {
                let c = self.coeffs[g.index(i1, i2)];
                if c == czero() {
                    continue;
                }
                for &(a, wa) in &t1 {
                    for &(b, wb) in targets2 {
                        let p = big.index(a, b);
                        padded[p] += c * (wa * wb * gain);
                    }
                }
            }
        }
        SpecField2D::from_coeffs(big, padded).map(|s| s.inverse_transform())
    }

    /// Unitary spectrum of the `x2`-slice average (the `k1 = 0` row), as a 1-D field.
    pub fn x1_mean_row(&self, grid1d: Arc<Grid1D<T>>) -> Result<SpecField1D<T>> {
        let n2 = self.grid.n2();
        let gain = T::one() / T::from_count(self.grid.n1()).sqrt();
        SpecField1D::from_coeffs(
            grid1d,
            self.coeffs[..n2].iter().map(|&c| c * gain).collect(),
        )
    }
}
