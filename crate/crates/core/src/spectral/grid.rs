//! Uniform periodic grids and their wavenumber tables.

use std::fmt;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest prime factor allowed in a grid size.
const MAX_PRIME_FACTOR: usize = 7;

fn is_fft_friendly(mut n: usize) -> bool {
    const { assert!(MAX_PRIME_FACTOR == 7) };
    for p in [2, 3, 5, 7] {
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n == 1
}

/// Signed integer wavenumber for storage index `j` of an `n`-point transform.
///
/// Indices `0..n/2` are non-negative; `n/2..n` map to `-n/2..0`, so the
/// Nyquist index carries `-n/2`.
#[inline]
pub fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// Storage index of signed wavenumber `k` on an `n`-point grid.
#[inline]
pub fn storage_index(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// One periodic axis `[0, L)` sampled at `n` equispaced points.
pub struct Grid1D<T: Real> {
    n: usize,
    length: T,
    dx: T,
    ints: Vec<i64>,
    xi: Vec<T>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> Grid1D<T> {
    pub fn new(n: usize, length: T) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n = {n} must be even and >= 2")));
        }
        if !is_fft_friendly(n) {
            return Err(Error::InvalidGrid(format!(
                "n = {n} has a prime factor larger than {MAX_PRIME_FACTOR}"
            )));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "period {length} must be positive and finite"
            )));
        }
        let scale = T::TAU() / length;
        let ints: Vec<i64> = (0..n).map(|j| signed_index(j, n)).collect();
        let xi = ints
            .iter()
            .map(|&k| T::from_i64(k).unwrap() * scale)
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            length,
            dx: length / T::from_count(n),
            ints,
            xi,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn length(&self) -> T {
        self.length
    }

    #[inline]
    pub fn dx(&self) -> T {
        self.dx
    }

    /// Signed integer wavenumbers in storage order.
    #[inline]
    pub fn ints(&self) -> &[i64] {
        &self.ints
    }

    /// Physical wavenumbers `2πk/L` in storage order.
    #[inline]
    pub fn xi(&self) -> &[T] {
        &self.xi
    }

    #[inline]
    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Sample coordinates `x_j = j·dx`.
    pub fn coords(&self) -> Vec<T> {
        (0..self.n).map(|j| T::from_count(j) * self.dx).collect()
    }

    pub(crate) fn forward_plan(&self) -> &Arc<dyn Fft<T>> {
        &self.forward
    }

    pub(crate) fn inverse_plan(&self) -> &Arc<dyn Fft<T>> {
        &self.inverse
    }

    /// Same sample count and period.
    pub fn same_shape(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl<T: Real> fmt::Debug for Grid1D<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid1D")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

/// Tensor-product periodic grid on `[0, L1) × [0, L2)`.
///
/// Data are stored row-major with `x1` as the outer index.
#[derive(Debug)]
pub struct Grid2D<T: Real> {
    x1: Grid1D<T>,
    x2: Grid1D<T>,
}

impl<T: Real> Grid2D<T> {
    pub fn new(n1: usize, n2: usize, l1: T, l2: T) -> Result<Self> {
        Ok(Self {
            x1: Grid1D::new(n1, l1)?,
            x2: Grid1D::new(n2, l2)?,
        })
    }

    /// `n × n` grid on `[0, L)²`, shared.
    pub fn square(n: usize, length: T) -> Result<Arc<Self>> {
        Self::new(n, n, length, length).map(Arc::new)
    }

    #[inline]
    pub fn axis1(&self) -> &Grid1D<T> {
        &self.x1
    }

    #[inline]
    pub fn axis2(&self) -> &Grid1D<T> {
        &self.x2
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.x1.n
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.x2.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.x1.n * self.x2.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Area of one grid cell.
    #[inline]
    pub fn cell_area(&self) -> T {
        self.x1.dx * self.x2.dx
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.x2.n + i2
    }

    /// `|ξ|` at storage position `(i1, i2)`.
    #[inline]
    pub fn modulus(&self, i1: usize, i2: usize) -> T {
        self.x1.xi[i1].hypot(self.x2.xi[i2])
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.x1.same_shape(&other.x1) && self.x2.same_shape(&other.x2)
    }

    /// 1-D grid matching the `x2` axis, for backgrounds that depend on `x2` only.
    pub fn axis2_grid(&self) -> Result<Grid1D<T>> {
        Grid1D::new(self.x2.n, self.x2.length)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_rough_sizes() {
        assert!(Grid1D::<f64>::new(63, 1.0).is_err());
        assert!(Grid1D::<f64>::new(2 * 11, 1.0).is_err());
        assert!(Grid1D::<f64>::new(64, 0.0).is_err());
        assert!(Grid1D::<f64>::new(64, f64::NAN).is_err());
        assert!(Grid1D::<f64>::new(2 * 3 * 5 * 7, 1.0).is_ok());
    }

    #[test]
    fn wavenumber_table_is_antisymmetric() {
        let g = Grid1D::<f64>::new(48, std::f64::consts::TAU).unwrap();
        let n = g.n();
        for j in 1..n {
            if j == n / 2 {
                assert_eq!(g.ints()[j], -(n as i64) / 2);
                continue;
            }
            assert_eq!(g.ints()[j], -g.ints()[n - j]);
            assert_eq!(g.xi()[j], -g.xi()[n - j]);
        }
        assert_eq!(g.ints()[0], 0);
        assert!((g.dx() - std::f64::consts::TAU / 48.0).abs() < 1e-15);
    }

    #[test]
    fn index_round_trip() {
        for n in [8usize, 10, 64] {
            for j in 0..n {
                assert_eq!(storage_index(signed_index(j, n), n), j);
            }
        }
    }
}
