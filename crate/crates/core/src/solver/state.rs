use std::sync::Arc;

use super::params::{Evolution, ParamSet};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{Grid1D, Grid2D, SpecField1D, SpecField2D};

/// Snapshot of a run: perturbation spectrum, background spectrum, clock.
///
/// In [`Evolution::Full`] mode `rho1` holds the total density and `rho0`
/// is identically zero.
#[derive(Clone, Debug)]
pub struct SolverState<T: Real> {
    pub t: T,
    pub rho1: SpecField2D<T>,
    pub rho0: SpecField1D<T>,
    pub params: ParamSet<T>,
    pub mode: Evolution,
    pub step: u64,
}

impl<T: Real> SolverState<T> {
    pub fn new(
        params: ParamSet<T>,
        rho1: SpecField2D<T>,
        rho0: SpecField1D<T>,
        mode: Evolution,
    ) -> Result<Self> {
        params.validate()?;
        if !rho1.grid().axis2().same_shape(rho0.grid()) {
            return Err(Error::GridMismatch(
                "background grid differs from the x2 axis".into(),
            ));
        }
        let bad = |c: &num_complex::Complex<T>| !(c.re.is_finite() && c.im.is_finite());
        if let Some(p) = rho1.coeffs().iter().position(bad) {
            let n2 = rho1.grid().n2();
            return Err(Error::NonFinite {
                index: vec![p / n2, p % n2],
                value: rho1.coeffs()[p].norm().as_f64(),
            });
        }
        if let Some(p) = rho0.coeffs().iter().position(bad) {
            return Err(Error::NonFinite {
                index: vec![p],
                value: rho0.coeffs()[p].norm().as_f64(),
            });
        }
        if mode == Evolution::Full && rho0.max_modulus_1d() != T::zero() {
            return Err(Error::param(
                "mode",
                "full evolution carries no separate background",
            ));
        }
        Ok(Self {
            t: T::zero(),
            rho1,
            rho0,
            params,
            mode,
            step: 0,
        })
    }

    /// `ρ1 = g`, `ρ0 = f`.
    pub fn decomposed(
        params: ParamSet<T>,
        profile: SpecField1D<T>,
        perturbation: SpecField2D<T>,
    ) -> Result<Self> {
        Self::new(params, perturbation, profile, Evolution::Decomposed)
    }

    /// `ρ = f ⊗ 1 + g` evolved as a whole.
    pub fn full(
        params: ParamSet<T>,
        profile: SpecField1D<T>,
        perturbation: SpecField2D<T>,
    ) -> Result<Self> {
        let grid = perturbation.grid().clone();
        let total = SpecField2D::broadcast_x2(grid, &profile)?.add(&perturbation);
        let zero = SpecField1D::zeros(profile.grid().clone());
        Self::new(params, total, zero, Evolution::Full)
    }

    pub fn grid(&self) -> &Arc<Grid2D<T>> {
        self.rho1.grid()
    }

    pub fn grid1(&self) -> &Arc<Grid1D<T>> {
        self.rho0.grid()
    }

    /// Spectrum of `ρ = ρ0 ⊗ 1 + ρ1`.
    pub fn total_density(&self) -> SpecField2D<T> {
        match self.mode {
            Evolution::Full => self.rho1.clone(),
            Evolution::Decomposed => SpecField2D::broadcast_x2(self.grid().clone(), &self.rho0)
                .expect("background matches the x2 axis")
                .add(&self.rho1),
        }
    }
}

impl<T: Real> SpecField1D<T> {
    pub(crate) fn max_modulus_1d(&self) -> T {
        self.coeffs().iter().fold(T::zero(), |m, c| m.max(c.norm()))
    }
}
