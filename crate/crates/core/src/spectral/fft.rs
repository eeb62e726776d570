//! Unitary discrete Fourier transforms on the periodic grids.
//!
//! Both directions are scaled by `1/sqrt(N)`, so `Σ|f̂|² = Σ|f|²`.

use num_complex::Complex;
use rayon::prelude::*;

use super::grid::{Grid1D, Grid2D};
use crate::scalar::Real;

/// Below this many points a 2-D transform runs on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

fn plan_for<T: Real>(axis: &Grid1D<T>, dir: Direction) -> &std::sync::Arc<dyn rustfft::Fft<T>> {
    match dir {
        Direction::Forward => axis.forward_plan(),
        Direction::Inverse => axis.inverse_plan(),
    }
}

fn scale<T: Real>(data: &mut [Complex<T>], factor: T) {
    data.iter_mut().for_each(|c| *c *= factor);
}

pub(crate) fn fft1<T: Real>(grid: &Grid1D<T>, data: &mut [Complex<T>], dir: Direction) {
    debug_assert_eq!(data.len(), grid.n());
    plan_for(grid, dir).process(data);
    scale(data, T::one() / T::from_count(grid.n()).sqrt());
}

/// Batched transforms along contiguous runs of `len` samples.
fn batched<T: Real>(axis: &Grid1D<T>, data: &mut [Complex<T>], dir: Direction, parallel: bool) {
    let plan = plan_for(axis, dir);
    let len = axis.n();
    if parallel {
        let rows_per_task = (PARALLEL_THRESHOLD / len).max(1);
        data.par_chunks_mut(len * rows_per_task)
            .for_each(|chunk| plan.process(chunk));
    } else {
        plan.process(data);
    }
}

fn transpose<T: Real>(
    src: &[Complex<T>],
    dst: &mut [Complex<T>],
    rows: usize,
    cols: usize,
    parallel: bool,
) {
    // dst[c * rows + r] = src[r * cols + c]
    let fill = |(c, out): (usize, &mut [Complex<T>])| {
        for (r, o) in out.iter_mut().enumerate() {
            *o = src[r * cols + c];
        }
    };
    if parallel {
        dst.par_chunks_mut(rows).enumerate().for_each(fill);
    } else {
        dst.chunks_mut(rows).enumerate().for_each(fill);
    }
}

pub(crate) fn fft2<T: Real>(grid: &Grid2D<T>, data: &mut [Complex<T>], dir: Direction) {
    debug_assert_eq!(data.len(), grid.len());
    let (n1, n2) = (grid.n1(), grid.n2());
    let parallel = grid.len() >= PARALLEL_THRESHOLD;

    batched(grid.axis2(), data, dir, parallel);

    let mut work = vec![Complex::new(T::zero(), T::zero()); data.len()];
    transpose(data, &mut work, n1, n2, parallel);
    batched(grid.axis1(), &mut work, dir, parallel);
    transpose(&work, data, n2, n1, parallel);

    scale(data, T::one() / T::from_count(grid.len()).sqrt());
}
