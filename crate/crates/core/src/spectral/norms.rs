//! Lebesgue and Sobolev norms on the periodic grids.
//!
//! Homogeneous and Sobolev norms are evaluated from the spectrum by
//! Plancherel; `L^p` norms by the rectangle rule on the samples, which is
//! spectrally accurate for smooth periodic integrands. Sup norms of spectra
//! are taken on a grid refined [`SUP_UPSAMPLING`] times per axis.
//!
//! `‖f‖_{H^s}² = ‖f‖_{L²}² + ‖Λ^s f‖_{L²}²`.

use std::fmt;

use super::field::{Field1D, Field2D, SpecField1D, SpecField2D};
use crate::error::{Error, Result};
use crate::scalar::{abs_pow, Real};

pub const SUP_UPSAMPLING: usize = 4;

/// Lebesgue exponent `p ∈ [1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent<T> {
    Finite(T),
    Infinity,
}

impl<T: Real> Exponent<T> {
    pub fn finite(p: T) -> Result<Self> {
        if !(p >= T::one()) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p.as_f64(),
                range: "[1, inf]",
            });
        }
        if p.is_infinite() {
            return Ok(Exponent::Infinity);
        }
        Ok(Exponent::Finite(p))
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn reciprocal(self) -> T {
        match self {
            Exponent::Finite(p) => T::one() / p,
            Exponent::Infinity => T::zero(),
        }
    }
}

impl<T: Real> fmt::Display for Exponent<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

fn lp_sum<T: Real>(values: &[T], p: T, cell: T) -> T {
    let p64 = p.as_f64();
    let s: f64 = if p64 == 2.0 {
        values.iter().map(|v| v.as_f64().powi(2)).sum()
    } else {
        values.iter().map(|v| v.as_f64().abs().powf(p64)).sum()
    };
    T::lit((s * cell.as_f64()).powf(1.0 / p64))
}

fn grid_max<T: Real>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
}

impl<T: Real> Field1D<T> {
    pub fn l2_norm(&self) -> T {
        lp_sum(self.values(), T::lit(2.0), self.grid().dx())
    }

    pub fn lp_norm(&self, p: T) -> Result<T> {
        self.lebesgue_norm(Exponent::finite(p)?)
    }

    /// `L^p` norm; `p = ∞` is the sample maximum.
    pub fn lebesgue_norm(&self, p: Exponent<T>) -> Result<T> {
        Ok(match p {
            Exponent::Finite(p) => lp_sum(self.values(), p, self.grid().dx()),
            Exponent::Infinity => grid_max(self.values()),
        })
    }
}

impl<T: Real> SpecField1D<T> {
    fn weighted_sum(&self, gamma: T) -> f64 {
        self.coeffs()
            .iter()
            .zip(self.grid().xi())
            .map(|(c, &xi)| {
                if gamma > T::zero() && xi == T::zero() {
                    0.0
                } else {
                    abs_pow(xi, T::lit(2.0) * gamma).as_f64() * c.norm_sqr().as_f64()
                }
            })
            .sum()
    }

    pub fn l2_norm(&self) -> T {
        self.homogeneous_norm(T::zero())
    }

    /// `‖Λ̃^γ f‖_{L²}`.
    pub fn homogeneous_norm(&self, gamma: T) -> T {
        T::lit((self.weighted_sum(gamma) * self.grid().dx().as_f64()).sqrt())
    }

    pub fn sup_norm(&self) -> Result<T> {
        Ok(self.upsampled(SUP_UPSAMPLING)?.max_abs())
    }

    /// `L^p` norm of the synthesised samples; `p = ∞` uses the refined grid.
    pub fn lebesgue_norm(&self, p: Exponent<T>) -> Result<T> {
        match p {
            Exponent::Infinity => self.sup_norm(),
            finite => self.inverse_transform().lebesgue_norm(finite),
        }
    }
}

impl<T: Real> Field2D<T> {
    pub fn l2_norm(&self) -> T {
        lp_sum(self.values(), T::lit(2.0), self.grid().cell_area())
    }

    pub fn lp_norm(&self, p: T) -> Result<T> {
        self.lebesgue_norm(Exponent::finite(p)?)
    }

    pub fn lebesgue_norm(&self, p: Exponent<T>) -> Result<T> {
        Ok(match p {
            Exponent::Finite(p) => lp_sum(self.values(), p, self.grid().cell_area()),
            Exponent::Infinity => grid_max(self.values()),
        })
    }

    /// `‖ ‖f(x1, ·)‖_{L^inner_{x2}} ‖_{L^outer_{x1}}`.
    pub fn mixed_norm(&self, inner: Exponent<T>, outer: Exponent<T>) -> Result<T> {
        let g = self.grid();
        let dx2 = g.axis2().dx();
        let per_slice: Vec<T> = (0..g.n1())
            .map(|i| match inner {
                Exponent::Finite(p) => lp_sum(self.slice_x2(i), p, dx2),
                Exponent::Infinity => grid_max(self.slice_x2(i)),
            })
            .collect();
        Ok(match outer {
            Exponent::Finite(p) => lp_sum(&per_slice, p, g.axis1().dx()),
            Exponent::Infinity => grid_max(&per_slice),
        })
    }
}

impl<T: Real> SpecField2D<T> {
    /// `dA · Σ |ξ|^{2γ} Re(conj(a) b)`, i.e. `⟨Λ^γ a, Λ^γ b⟩`.
    pub fn weighted_inner(&self, other: &Self, gamma: T) -> T {
        let g = self.grid();
        let n2 = g.n2();
        let two_gamma = T::lit(2.0) * gamma;
        let mut acc = 0.0f64;
        for (row, (ra, rb)) in self
            .coeffs()
            .chunks(n2)
            .zip(other.coeffs().chunks(n2))
            .enumerate()
        {
            let xi1 = g.axis1().xi()[row];
            for ((a, b), &xi2) in ra.iter().zip(rb).zip(g.axis2().xi()) {
                let re = (a.conj() * b).re;
                if re == T::zero() {
                    continue;
                }
                let w = if gamma == T::zero() {
                    T::one()
                } else if xi1 == T::zero() && xi2 == T::zero() {
                    T::zero()
                } else {
                    abs_pow(xi1.hypot(xi2), two_gamma)
                };
                acc += (w * re).as_f64();
            }
        }
        T::lit(acc * g.cell_area().as_f64())
    }

    /// `⟨a, b⟩_{L²}` by Plancherel.
    pub fn inner(&self, other: &Self) -> T {
        self.weighted_inner(other, T::zero())
    }

    pub fn l2_norm(&self) -> T {
        self.inner(self).max(T::zero()).sqrt()
    }

    /// `‖Λ^γ f‖_{L²}`.
    pub fn homogeneous_norm(&self, gamma: T) -> T {
        self.weighted_inner(self, gamma).max(T::zero()).sqrt()
    }

    /// `(‖f‖² + ‖Λ^s f‖²)^{1/2}`.
    pub fn sobolev_norm(&self, s: T) -> T {
        let a = self.l2_norm();
        let b = self.homogeneous_norm(s);
        (a * a + b * b).sqrt()
    }

    pub fn sup_norm(&self) -> Result<T> {
        Ok(self.upsampled(SUP_UPSAMPLING)?.max_abs())
    }
}
