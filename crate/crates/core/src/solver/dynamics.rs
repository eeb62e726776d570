//! Velocity law and the dealiased transport term.

use std::sync::Arc;

use num_complex::Complex;

use super::params::ParamSet;
use super::state::SolverState;
use crate::error::{Error, Result};
use crate::scalar::{abs_pow, Real};
use crate::spectral::{dealias_cutoff, Field2D, Grid1D, Grid2D, SpecField1D, SpecField2D};

/// `û1 = ξ1ξ2/|ξ|² ρ̂`, `û2 = −ξ1²/|ξ|² ρ̂`, zero at `ξ = 0`.
///
/// The first symbol is odd in both directions and is dropped on the
/// Nyquist lines so that the velocity stays real.
pub fn compute_velocity<T: Real>(rho1: &SpecField2D<T>) -> (SpecField2D<T>, SpecField2D<T>) {
    let g = rho1.grid().clone();
    let (xi1, xi2) = (g.axis1().xi(), g.axis2().xi());
    let (ny1, ny2) = (g.axis1().nyquist_index(), g.axis2().nyquist_index());
    let u1 = rho1
        .map_indexed(|i1, i2, c| c * velocity_symbols(xi1[i1], xi2[i2], i1 == ny1 || i2 == ny2).0);
    let u2 = rho1.map_indexed(|i1, i2, c| c * velocity_symbols(xi1[i1], xi2[i2], false).1);
    (u1, u2)
}

#[inline]
fn velocity_symbols<T: Real>(a: T, b: T, on_nyquist: bool) -> (T, T) {
    let m2 = a * a + b * b;
    if m2 == T::zero() {
        return (T::zero(), T::zero());
    }
    let s1 = if on_nyquist { T::zero() } else { a * b / m2 };
    (s1, -(a * a) / m2)
}

/// `−D(u·∇ρ1 + u2 ∂2ρ0)` for the given state, with `D` the dealiasing truncation.
pub fn nonlinear_tendency<T: Real>(state: &SolverState<T>) -> Result<SpecField2D<T>> {
    let dynamics = Dynamics::new(state.grid().clone(), state.grid1().clone(), &state.params)?;
    Ok(dynamics.tendency(&state.rho1, &state.rho0, state.t)?.0)
}

/// Transport terms split for energy bookkeeping.
#[derive(Clone, Debug)]
pub struct Products<T: Real> {
    /// `D(u·∇ρ1)`.
    pub transport: SpecField2D<T>,
    /// `D(u2 g0)` with `g0 = D(∂2ρ0)`.
    pub background: SpecField2D<T>,
    /// `max |u|` on the grid.
    pub speed: T,
}

/// Precomputed symbol tables for one grid and parameter set.
#[derive(Clone, Debug)]
pub struct Dynamics<T: Real> {
    grid: Arc<Grid2D<T>>,
    grid1: Arc<Grid1D<T>>,
    alpha: T,
    keep: Vec<bool>,
    keep1: Vec<bool>,
    vel: Vec<(T, T)>,
    deriv: Vec<(T, T)>,
    rate: Vec<T>,
}

impl<T: Real> Dynamics<T> {
    pub fn new(grid: Arc<Grid2D<T>>, grid1: Arc<Grid1D<T>>, params: &ParamSet<T>) -> Result<Self> {
        params.validate()?;
        if !grid.axis2().same_shape(&grid1) {
            return Err(Error::GridMismatch(
                "background grid differs from the x2 axis".into(),
            ));
        }
        let (a1, a2) = (grid.axis1(), grid.axis2());
        let c1 = dealias_cutoff(a1.n(), params.dealias);
        let c2 = dealias_cutoff(a2.n(), params.dealias);
        let (ny1, ny2) = (a1.nyquist_index(), a2.nyquist_index());
        let n = grid.len();
        let mut keep = Vec::with_capacity(n);
        let mut vel = Vec::with_capacity(n);
        let mut deriv = Vec::with_capacity(n);
        let mut rate = Vec::with_capacity(n);
        for i1 in 0..a1.n() {
            for i2 in 0..a2.n() {
                let (x, y) = (a1.xi()[i1], a2.xi()[i2]);
                keep.push(a1.ints()[i1].abs() <= c1 && a2.ints()[i2].abs() <= c2);
                vel.push(velocity_symbols(x, y, i1 == ny1 || i2 == ny2));
                deriv.push((
                    if i1 == ny1 { T::zero() } else { x },
                    if i2 == ny2 { T::zero() } else { y },
                ));
                rate.push(abs_pow(x.hypot(y), params.alpha));
            }
        }
        let keep1 = a2.ints().iter().map(|k| k.abs() <= c2).collect();
        Ok(Self {
            grid,
            grid1,
            alpha: params.alpha,
            keep,
            keep1,
            vel,
            deriv,
            rate,
        })
    }

    pub fn grid(&self) -> &Arc<Grid2D<T>> {
        &self.grid
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// `|ξ|^α` in storage order.
    pub fn rate(&self) -> &[T] {
        &self.rate
    }

    /// Truncation `D` applied to a 2-D spectrum.
    pub fn truncate(&self, spec: &SpecField2D<T>) -> SpecField2D<T> {
        let zero = Complex::new(T::zero(), T::zero());
        let coeffs = spec
            .coeffs()
            .iter()
            .zip(&self.keep)
            .map(|(&c, &k)| if k { c } else { zero })
            .collect();
        SpecField2D::from_coeffs(self.grid.clone(), coeffs).expect("same grid")
    }

    /// `g0 = D(∂2ρ0)`, the background gradient seen by the transport term.
    pub fn background_gradient(&self, rho0: &SpecField1D<T>) -> SpecField1D<T> {
        let a2 = self.grid.axis2();
        let ny = a2.nyquist_index();
        let coeffs = rho0
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if !self.keep1[j] || j == ny {
                    Complex::new(T::zero(), T::zero())
                } else {
                    c * Complex::new(T::zero(), a2.xi()[j])
                }
            })
            .collect();
        SpecField1D::from_coeffs(self.grid1.clone(), coeffs).expect("same grid")
    }

    /// Real-space velocity of the truncated perturbation.
    pub fn velocity(&self, rho1: &SpecField2D<T>) -> (Field2D<T>, Field2D<T>) {
        let (u1, u2) = self.velocity_spectra(rho1);
        SpecField2D::inverse_pair(&u1, &u2)
    }

    fn velocity_spectra(&self, rho1: &SpecField2D<T>) -> (SpecField2D<T>, SpecField2D<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let mut u1 = Vec::with_capacity(self.vel.len());
        let mut u2 = Vec::with_capacity(self.vel.len());
        for ((&c, &k), &(s1, s2)) in rho1.coeffs().iter().zip(&self.keep).zip(&self.vel) {
            if k {
                u1.push(c * s1);
                u2.push(c * s2);
            } else {
                u1.push(zero);
                u2.push(zero);
            }
        }
        let g = self.grid.clone();
        (
            SpecField2D::from_coeffs(g.clone(), u1).expect("same grid"),
            SpecField2D::from_coeffs(g, u2).expect("same grid"),
        )
    }

    /// Truncated gradient spectra `(∂1 Dρ1, ∂2 Dρ1 + extra)` where `extra`
    /// is an optional `x2`-only field broadcast along `x1`.
    fn gradient_spectra(
        &self,
        rho1: &SpecField2D<T>,
        extra: Option<&SpecField1D<T>>,
    ) -> (SpecField2D<T>, SpecField2D<T>) {
        let zero = Complex::new(T::zero(), T::zero());
        let i = Complex::new(T::zero(), T::one());
        let mut d1 = Vec::with_capacity(self.deriv.len());
        let mut d2 = Vec::with_capacity(self.deriv.len());
        for ((&c, &k), &(a, b)) in rho1.coeffs().iter().zip(&self.keep).zip(&self.deriv) {
            if k {
                d1.push(i * c * a);
                d2.push(i * c * b);
            } else {
                d1.push(zero);
                d2.push(zero);
            }
        }
        if let Some(g0) = extra {
            let gain = T::from_count(self.grid.n1()).sqrt();
            for (dst, &c) in d2.iter_mut().zip(g0.coeffs()) {
                *dst += c * gain;
            }
        }
        let g = self.grid.clone();
        (
            SpecField2D::from_coeffs(g.clone(), d1).expect("same grid"),
            SpecField2D::from_coeffs(g, d2).expect("same grid"),
        )
    }

    fn forward_truncated(&self, field: &Field2D<T>, t: T, what: &str) -> Result<SpecField2D<T>> {
        let spec = field.transform().map_err(|e| match e {
            Error::NonFinite { index, value } => Error::BlowUp {
                t: t.as_f64(),
                detail: format!("{what}: non-finite value {value} at {index:?}"),
            },
            other => other,
        })?;
        Ok(self.truncate(&spec))
    }

    /// `−D(u·∇ρ1 + u2 g0)` and the grid maximum of `|u|` at the input state.
    ///
    /// Three FFTs: two packed inverse transforms and one forward transform.
    pub fn tendency(
        &self,
        rho1: &SpecField2D<T>,
        rho0: &SpecField1D<T>,
        t: T,
    ) -> Result<(SpecField2D<T>, T)> {
        let (us1, us2) = self.velocity_spectra(rho1);
        let (u1, u2) = SpecField2D::inverse_pair(&us1, &us2);
        let g0 = self.background_gradient(rho0);
        let (gs1, gs2) = self.gradient_spectra(rho1, Some(&g0));
        let (d1, d2) = SpecField2D::inverse_pair(&gs1, &gs2);
        let speed = max_speed(&u1, &u2);
        let minus_one = -T::one();
        let product = Field2D::from_values(
            self.grid.clone(),
            u1.values()
                .iter()
                .zip(u2.values())
                .zip(d1.values().iter().zip(d2.values()))
                .map(|((&a, &b), (&p, &q))| minus_one * (a * p + b * q))
                .collect(),
        )?;
        let out = self.forward_truncated(&product, t, "transport term")?;
        Ok((out, speed))
    }

    /// `D(u·∇ρ1)` and `D(u2 g0)` separately.
    pub fn products(
        &self,
        rho1: &SpecField2D<T>,
        rho0: &SpecField1D<T>,
        t: T,
    ) -> Result<Products<T>> {
        let (us1, us2) = self.velocity_spectra(rho1);
        let (u1, u2) = SpecField2D::inverse_pair(&us1, &us2);
        let (gs1, gs2) = self.gradient_spectra(rho1, None);
        let (d1, d2) = SpecField2D::inverse_pair(&gs1, &gs2);
        let g0 = self.background_gradient(rho0).inverse_transform();
        let n2 = self.grid.n2();
        let transport = Field2D::from_values(
            self.grid.clone(),
            u1.values()
                .iter()
                .zip(u2.values())
                .zip(d1.values().iter().zip(d2.values()))
                .map(|((&a, &b), (&p, &q))| a * p + b * q)
                .collect(),
        )?;
        let background = Field2D::from_values(
            self.grid.clone(),
            u2.values()
                .iter()
                .enumerate()
                .map(|(p, &b)| b * g0.values()[p % n2])
                .collect(),
        )?;
        Ok(Products {
            transport: self.forward_truncated(&transport, t, "transport term")?,
            background: self.forward_truncated(&background, t, "background coupling")?,
            speed: max_speed(&u1, &u2),
        })
    }
}

fn max_speed<T: Real>(u1: &Field2D<T>, u2: &Field2D<T>) -> T {
    u1.values()
        .iter()
        .zip(u2.values())
        .fold(T::zero(), |m, (&a, &b)| m.max(a.hypot(b)))
}
