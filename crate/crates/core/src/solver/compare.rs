//! Cross-mode and time-step consistency of runs.

use serde::Serialize;

use super::params::Evolution;
use super::run::{run, RunSetup, Termination, Trajectory};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Full versus decomposed evolution from identical initial data.
#[derive(Clone, Debug, Serialize)]
pub struct ModeComparison<T> {
    pub times: Vec<T>,
    /// `‖ρ_full − (ρ0 ⊗ 1 + ρ1)‖_{H^s}` at each sample.
    pub hs_difference: Vec<T>,
    pub max_hs_difference: T,
}

/// Successive differences of a run repeated at `dt`, `dt/2`, `dt/4`.
#[derive(Clone, Debug, Serialize)]
pub struct SelfConvergence<T> {
    pub dt: T,
    /// `max_t ‖ρ(dt) − ρ(dt/2)‖_{H^s}` and `max_t ‖ρ(dt/2) − ρ(dt/4)‖_{H^s}`.
    pub coarse: T,
    pub fine: T,
    pub ratio: T,
    pub observed_order: T,
}

fn keep<T: Real>(setup: &RunSetup<T>, mode: Evolution) -> RunSetup<T> {
    let mut s = setup.clone();
    s.mode = mode;
    s.options.keep_states = true;
    s.options.energy_probe = None;
    s.options.checkpoint = None;
    s
}

fn completed<T: Real>(t: Trajectory<T>) -> Result<Trajectory<T>> {
    match &t.termination {
        Termination::Completed => Ok(t),
        Termination::BlowUp { t, detail } => Err(Error::BlowUp {
            t: *t,
            detail: detail.clone(),
        }),
        Termination::ResolutionExhausted { t, dt_min } => Err(Error::ResolutionExhausted {
            t: *t,
            dt_min: *dt_min,
            halvings: super::MAX_HALVINGS,
        }),
    }
}

fn max_difference<T: Real>(a: &Trajectory<T>, b: &Trajectory<T>, s: T) -> (Vec<T>, Vec<T>, T) {
    let mut times = Vec::new();
    let mut diffs = Vec::new();
    let mut worst = T::zero();
    for (x, y) in a.snapshots.iter().zip(&b.snapshots) {
        let d = x.density.sub(&y.density).sobolev_norm(s);
        worst = worst.max(d);
        times.push(x.t);
        diffs.push(d);
    }
    (times, diffs, worst)
}

pub fn compare_modes<T: Real>(setup: &RunSetup<T>) -> Result<ModeComparison<T>> {
    let dec = completed(run(&keep(setup, Evolution::Decomposed))?)?;
    let full = completed(run(&keep(setup, Evolution::Full))?)?;
    let (times, hs_difference, max_hs_difference) = max_difference(&dec, &full, setup.params.s);
    Ok(ModeComparison {
        times,
        hs_difference,
        max_hs_difference,
    })
}

/// Richardson self-convergence of the configured mode at `dt`, `dt/2`, `dt/4`.
pub fn self_convergence<T: Real>(setup: &RunSetup<T>, dt: T) -> Result<SelfConvergence<T>> {
    let at = |h: T| {
        let mut s = keep(setup, setup.mode);
        s.params.dt_max = h;
        run(&s).and_then(completed)
    };
    let half = T::lit(0.5);
    let a = at(dt)?;
    let b = at(dt * half)?;
    let c = at(dt * half * half)?;
    let s = setup.params.s;
    let coarse = max_difference(&a, &b, s).2;
    let fine = max_difference(&b, &c, s).2;
    let ratio = coarse / fine;
    Ok(SelfConvergence {
        dt,
        coarse,
        fine,
        ratio,
        observed_order: ratio.log2(),
    })
}
