//! Integrating-factor (Lawson) RK4 with exact linear dissipation.

use num_complex::Complex;

use super::dynamics::Dynamics;
use super::state::SolverState;
use crate::error::{Error, Result};
use crate::heat1d::propagate_unchecked;
use crate::scalar::Real;
use crate::spectral::{SpecField1D, SpecField2D};

/// Step halvings allowed before a step is declared unresolvable.
pub const MAX_HALVINGS: u32 = 20;

/// Outcome of one accepted step.
#[derive(Clone, Debug)]
pub struct StepReport<T: Real> {
    pub state: SolverState<T>,
    pub dt: T,
    pub halvings: u32,
    /// `max |u|` at the start of the step.
    pub speed: T,
}

/// Reusable stepper; caches the integrating factors of the last step size.
#[derive(Debug)]
pub struct Stepper<T: Real> {
    dynamics: Dynamics<T>,
    factors: Option<(T, Vec<T>, Vec<T>)>,
}

impl<T: Real> Stepper<T> {
    pub fn new(state: &SolverState<T>) -> Result<Self> {
        Ok(Self {
            dynamics: Dynamics::new(state.grid().clone(), state.grid1().clone(), &state.params)?,
            factors: None,
        })
    }

    pub fn dynamics(&self) -> &Dynamics<T> {
        &self.dynamics
    }

    fn factors(&mut self, h: T) -> (&[T], &[T]) {
        if self.factors.as_ref().map(|f| f.0) != Some(h) {
            let half = h * T::lit(0.5);
            let rate = self.dynamics.rate();
            let e_half = rate.iter().map(|&r| (-half * r).exp()).collect();
            let e_full = rate.iter().map(|&r| (-h * r).exp()).collect();
            self.factors = Some((h, e_half, e_full));
        }
        let f = self.factors.as_ref().expect("just filled");
        (&f.1, &f.2)
    }

    /// Advances by at most `dt`, halving while `dt > cfl · min(dx) / max|u|`.
    pub fn advance(&mut self, state: &SolverState<T>, dt: T) -> Result<StepReport<T>> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::param("dt", "time step must be positive and finite"));
        }
        let (k1, speed) = self.dynamics.tendency(&state.rho1, &state.rho0, state.t)?;
        let g = state.grid();
        let dx = g.axis1().dx().min(g.axis2().dx());
        let mut h = dt;
        let mut halvings = 0;
        if speed > T::zero() {
            let limit = state.params.cfl * dx / speed;
            while h > limit {
                if halvings == MAX_HALVINGS {
                    return Err(Error::ResolutionExhausted {
                        t: state.t.as_f64(),
                        dt_min: h.as_f64(),
                        halvings,
                    });
                }
                h *= T::lit(0.5);
                halvings += 1;
            }
        }
        let next = self.lawson(state, h, k1)?;
        Ok(StepReport {
            state: next,
            dt: h,
            halvings,
            speed,
        })
    }

    /// One step of signed size `h` with no CFL control (short backward
    /// probes use a negative `h`).
    pub fn step_signed(&mut self, state: &SolverState<T>, h: T) -> Result<SolverState<T>> {
        let (k1, _) = self.dynamics.tendency(&state.rho1, &state.rho0, state.t)?;
        self.lawson(state, h, k1)
    }

    fn lawson(
        &mut self,
        state: &SolverState<T>,
        h: T,
        k1: SpecField2D<T>,
    ) -> Result<SolverState<T>> {
        let alpha = self.dynamics.alpha();
        let half = h * T::lit(0.5);
        let t = state.t;
        let bg_mid = propagate_unchecked(&state.rho0, alpha, half);
        let bg_end = propagate_unchecked(&state.rho0, alpha, h);
        let grid = state.grid().clone();
        let y = state.rho1.coeffs();
        let k1c = k1.coeffs();
        let (e_half, e_full) = {
            let (a, b) = self.factors(h);
            (a.to_vec(), b.to_vec())
        };
        let wrap =
            |v: Vec<Complex<T>>| SpecField2D::from_coeffs(grid.clone(), v).expect("same grid");
        let eval = |dynm: &Dynamics<T>, v: Vec<Complex<T>>, bg: &SpecField1D<T>, ts: T| {
            dynm.tendency(&wrap(v), bg, ts).map(|r| r.0)
        };

        let a: Vec<_> = (0..y.len())
            .map(|p| (y[p] + k1c[p] * half) * e_half[p])
            .collect();
        let k2 = eval(&self.dynamics, a, &bg_mid, t + half)?;
        let k2c = k2.coeffs();
        let b: Vec<_> = (0..y.len())
            .map(|p| y[p] * e_half[p] + k2c[p] * half)
            .collect();
        let k3 = eval(&self.dynamics, b, &bg_mid, t + half)?;
        let k3c = k3.coeffs();
        let c: Vec<_> = (0..y.len())
            .map(|p| y[p] * e_full[p] + k3c[p] * (h * e_half[p]))
            .collect();
        let k4 = eval(&self.dynamics, c, &bg_end, t + h)?;
        let k4c = k4.coeffs();
        let sixth = h / T::lit(6.0);
        let two = T::lit(2.0);
        let out: Vec<_> = (0..y.len())
            .map(|p| {
                y[p] * e_full[p]
                    + (k1c[p] * e_full[p] + (k2c[p] + k3c[p]) * (two * e_half[p]) + k4c[p]) * sixth
            })
            .collect();
        if let Some(p) = out
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::BlowUp {
                t: (t + h).as_f64(),
                detail: format!("non-finite coefficient at storage index {p}"),
            });
        }
        Ok(SolverState {
            t: t + h,
            rho1: wrap(out),
            rho0: bg_end,
            params: state.params.clone(),
            mode: state.mode,
            step: state.step + 1,
        })
    }
}

/// Single CFL-controlled step of at most `dt`.
pub fn advance<T: Real>(state: &SolverState<T>, dt: T) -> Result<SolverState<T>> {
    Stepper::new(state)?.advance(state, dt).map(|r| r.state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::ParamSet;
    use crate::spectral::{random_band_limited, Field1D, Field2D, Grid2D};
    use std::f64::consts::TAU;
    use std::sync::Arc;

    fn state(eps: f64, seed: u64) -> SolverState<f64> {
        let g = Grid2D::square(32, TAU).unwrap();
        let g1 = Arc::new(g.axis2_grid().unwrap());
        let f = Field1D::from_fn(g1, |y| 0.3 * (-(y - 3.0).powi(2)).exp())
            .transform()
            .unwrap();
        let pert = random_band_limited(&g, 3, 0.0, seed);
        let scale = eps / pert.sobolev_norm(1.0);
        SolverState::decomposed(ParamSet::for_alpha(1.5), f, pert.scaled(scale)).unwrap()
    }

    #[test]
    fn pure_dissipation_is_exact() {
        // A layered perturbation generates no velocity: ρ1 decays as e^{−t|ξ|^α}.
        let g = Grid2D::square(16, TAU).unwrap();
        let g1 = Arc::new(g.axis2_grid().unwrap());
        let rho1 = Field2D::from_fn(g.clone(), |_, y| (2.0 * y).cos())
            .transform()
            .unwrap();
        let s = SolverState::decomposed(ParamSet::for_alpha(1.5), SpecField1D::zeros(g1), rho1)
            .unwrap();
        let out = advance(&s, 0.25).unwrap();
        let expect = (-(2f64.powf(1.5)) * 0.25).exp();
        let v = out.rho1.inverse_transform();
        for (i2, &y) in g.axis2().coords().iter().enumerate() {
            assert!((v.get(3, i2) - expect * (2.0 * y).cos()).abs() < 1e-14);
        }
        assert_eq!(out.step, 1);
        assert!((out.t - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fourth_order_in_time() {
        let s0 = state(0.5, 11);
        let run = |dt: f64| {
            let mut st = Stepper::new(&s0).unwrap();
            let mut s = s0.clone();
            let n = (0.4 / dt).round() as usize;
            for _ in 0..n {
                s = st.advance(&s, dt).unwrap().state;
            }
            s.rho1
        };
        let (a, b, c) = (run(0.1), run(0.05), run(0.025));
        let d1 = a.sub(&b).l2_norm();
        let d2 = b.sub(&c).l2_norm();
        let order = (d1 / d2).log2();
        assert!(order > 3.7, "observed order {order}");
    }

    #[test]
    fn signed_step_round_trip() {
        let s0 = state(0.2, 4);
        let mut st = Stepper::new(&s0).unwrap();
        let fwd = st.step_signed(&s0, 1e-3).unwrap();
        let back = st.step_signed(&fwd, -1e-3).unwrap();
        assert!(back.rho1.sub(&s0.rho1).max_modulus() < 1e-10);
        assert!(back.t.abs() < 1e-15);
    }

    #[test]
    fn cfl_halves_the_step() {
        let mut s0 = state(200.0, 5);
        s0.params.cfl = 0.1;
        let mut st = Stepper::new(&s0).unwrap();
        let r = st.advance(&s0, 1.0).unwrap();
        assert!(r.halvings > 0);
        let dx = TAU / 32.0;
        assert!(r.dt <= 0.1 * dx / r.speed);
        assert!(r.dt * 2.0 > 0.1 * dx / r.speed);
    }

    #[test]
    fn resolution_exhausted_after_twenty_halvings() {
        let s0 = state(1e9, 5);
        let e = advance(&s0, 1.0).unwrap_err();
        assert!(
            matches!(e, Error::ResolutionExhausted { halvings: 20, .. }),
            "{e}"
        );
    }
}
