//! Sampled runs: initial data, the stepping loop, records and checkpoints.

use std::path::PathBuf;
use std::sync::Arc;

use super::integrator::Stepper;
use super::params::{Evolution, ParamSet};
use super::state::SolverState;
use crate::diagnostics::{compute_record, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::heat1d::Profile;
use crate::io::{write_checkpoint, CheckpointFiles};
use crate::scalar::Real;
use crate::spectral::{dealias_cutoff, random_band_limited, Grid2D, SpecField2D};

/// Seeded band-limited perturbation `g`, rescaled to `‖g‖_{H^s} = ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Perturbation {
    pub kmax: usize,
    pub decay: f64,
    pub seed: u64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Self {
            kmax: 4,
            decay: 1.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckpointPlan {
    pub dir: PathBuf,
    /// Write after every `every`-th sample.
    pub every: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions<T> {
    /// Step used for the centred energy-balance residual; `None` skips it.
    pub energy_probe: Option<T>,
    /// Keep the total density at every sample.
    pub keep_states: bool,
    pub checkpoint: Option<CheckpointPlan>,
}

impl<T: Real> Default for RunOptions<T> {
    fn default() -> Self {
        Self {
            energy_probe: Some(T::lit(1e-3)),
            keep_states: false,
            checkpoint: None,
        }
    }
}

/// Everything needed to start a run from scratch.
#[derive(Clone, Debug)]
pub struct RunSetup<T: Real> {
    pub params: ParamSet<T>,
    pub n1: usize,
    pub n2: usize,
    pub l1: T,
    pub l2: T,
    pub profile: Profile<T>,
    pub perturbation: Perturbation,
    pub mode: Evolution,
    pub options: RunOptions<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Termination {
    Completed,
    BlowUp { t: f64, detail: String },
    ResolutionExhausted { t: f64, dt_min: f64 },
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Completed => "completed",
            Termination::BlowUp { .. } => "blow-up",
            Termination::ResolutionExhausted { .. } => "resolution exhausted",
        }
    }

    pub fn is_abort(&self) -> bool {
        !matches!(self, Termination::Completed)
    }

    fn from_error(e: Error) -> Result<Self> {
        match e {
            Error::BlowUp { t, detail } => Ok(Termination::BlowUp { t, detail }),
            Error::NonFinite { index, value } => Ok(Termination::BlowUp {
                t: f64::NAN,
                detail: format!("non-finite value {value} at {index:?}"),
            }),
            Error::ResolutionExhausted { t, dt_min, .. } => {
                Ok(Termination::ResolutionExhausted { t, dt_min })
            }
            other => Err(other),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Snapshot<T: Real> {
    pub t: T,
    /// Spectrum of the total density `ρ0 ⊗ 1 + ρ1`.
    pub density: SpecField2D<T>,
}

#[derive(Clone, Debug)]
pub struct Trajectory<T: Real> {
    pub records: Vec<DiagnosticsRecord<T>>,
    pub snapshots: Vec<Snapshot<T>>,
    pub final_state: SolverState<T>,
    pub termination: Termination,
    pub checkpoints: Vec<CheckpointFiles>,
    pub steps: u64,
    /// Smallest step actually taken (CFL halvings included).
    pub min_dt: Option<T>,
}

/// `ρ1(0) = g`, `ρ0(0) = f` (or `ρ(0) = f ⊗ 1 + g` in full mode).
pub fn initial_state<T: Real>(setup: &RunSetup<T>) -> Result<SolverState<T>> {
    let params = &setup.params;
    params.validate()?;
    setup.profile.validate()?;
    let grid = Arc::new(Grid2D::new(setup.n1, setup.n2, setup.l1, setup.l2)?);
    let grid1 = Arc::new(grid.axis2_grid()?);
    let kmax = setup.perturbation.kmax;
    let cut = dealias_cutoff(setup.n1.min(setup.n2), params.dealias);
    if kmax as i64 > cut {
        return Err(Error::param(
            "kmax",
            format!("perturbation band {kmax} exceeds the dealiasing cutoff {cut}"),
        ));
    }
    let f = setup.profile.sample(&grid1).transform()?;
    let g = if params.epsilon == T::zero() {
        SpecField2D::zeros(grid.clone())
    } else {
        if kmax == 0 {
            return Err(Error::param(
                "kmax",
                "a nonzero perturbation needs kmax >= 1",
            ));
        }
        let p = setup.perturbation;
        let raw = random_band_limited(&grid, kmax, p.decay, p.seed);
        let norm = raw.sobolev_norm(params.s);
        raw.scaled(params.epsilon / norm)
    };
    match setup.mode {
        Evolution::Decomposed => SolverState::decomposed(params.clone(), f, g),
        Evolution::Full => SolverState::full(params.clone(), f, g),
    }
}

/// Runs in the configured mode.
pub fn run<T: Real>(setup: &RunSetup<T>) -> Result<Trajectory<T>> {
    evolve(initial_state(setup)?, &setup.options)
}

/// Runs the total density from the same initial data, whatever the configured mode.
pub fn run_full<T: Real>(setup: &RunSetup<T>) -> Result<Trajectory<T>> {
    let mut full = setup.clone();
    full.mode = Evolution::Full;
    run(&full)
}

/// Advances `state` to `params.t_end`, recording every `sample_dt`.
///
/// Invalid input is an `Err`; blow-up and exhausted resolution end the run
/// early and are reported in [`Trajectory::termination`].
pub fn evolve<T: Real>(state: SolverState<T>, options: &RunOptions<T>) -> Result<Trajectory<T>> {
    let mut stepper = Stepper::new(&state)?;
    let params = state.params.clone();
    let mut out = Trajectory {
        records: Vec::new(),
        snapshots: Vec::new(),
        final_state: state,
        termination: Termination::Completed,
        checkpoints: Vec::new(),
        steps: 0,
        min_dt: None,
    };
    if let Some(stop) = sample(&mut out, &mut stepper, options, 0)? {
        out.termination = stop;
        return Ok(out);
    }
    let t0 = out.final_state.t;
    let eps = T::epsilon() * T::lit(64.0);
    let mut k = 1usize;
    'samples: loop {
        if out.final_state.t >= params.t_end - eps * params.t_end.max(T::one()) {
            break;
        }
        let target = (t0 + T::from_count(k) * params.sample_dt).min(params.t_end);
        let tol = eps * target.abs().max(T::one());
        while out.final_state.t < target - tol {
            let h = params.dt_max.min(target - out.final_state.t);
            match stepper.advance(&out.final_state, h) {
                Ok(rep) => {
                    out.min_dt = Some(out.min_dt.map_or(rep.dt, |m| m.min(rep.dt)));
                    out.steps += 1;
                    out.final_state = rep.state;
                }
                Err(e) => {
                    out.termination = Termination::from_error(e)?;
                    break 'samples;
                }
            }
        }
        out.final_state.t = target;
        if let Some(stop) = sample(&mut out, &mut stepper, options, k)? {
            out.termination = stop;
            break;
        }
        k += 1;
    }
    Ok(out)
}

fn sample<T: Real>(
    out: &mut Trajectory<T>,
    stepper: &mut Stepper<T>,
    options: &RunOptions<T>,
    k: usize,
) -> Result<Option<Termination>> {
    let state = &out.final_state;
    match compute_record(state, stepper, options.energy_probe) {
        Ok(r) => out.records.push(r),
        Err(e) => return Termination::from_error(e).map(Some),
    }
    if options.keep_states {
        out.snapshots.push(Snapshot {
            t: state.t,
            density: state.total_density(),
        });
    }
    if let Some(plan) = &options.checkpoint {
        if plan.every > 0 && k > 0 && k.is_multiple_of(plan.every) {
            let stem = plan.dir.join(format!("checkpoint_{k:06}"));
            out.checkpoints.push(write_checkpoint(state, &stem)?);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn setup(eps: f64) -> RunSetup<f64> {
        let mut params = ParamSet::for_alpha(1.5);
        params.epsilon = eps;
        params.t_end = 0.3;
        params.sample_dt = 0.1;
        params.dt_max = 0.05;
        RunSetup {
            params,
            n1: 32,
            n2: 32,
            l1: TAU,
            l2: TAU,
            profile: Profile::gaussian(0.5, 1.0),
            perturbation: Perturbation::default(),
            mode: Evolution::Decomposed,
            options: RunOptions {
                energy_probe: None,
                keep_states: true,
                checkpoint: None,
            },
        }
    }

    #[test]
    fn initial_perturbation_has_requested_norm() {
        let s = initial_state(&setup(1e-3)).unwrap();
        assert!((s.rho1.sobolev_norm(1.0) - 1e-3).abs() < 1e-15);
        assert!(s.rho1.hermitian_defect() < 1e-18);
        assert!(s.rho1.mode(0, 0).norm() < 1e-18);
    }

    #[test]
    fn samples_land_on_the_cadence() {
        let tr = run(&setup(1e-3)).unwrap();
        assert_eq!(tr.termination, Termination::Completed);
        let ts: Vec<f64> = tr.records.iter().map(|r| r.t).collect();
        assert_eq!(ts.len(), 4);
        for (k, t) in ts.iter().enumerate() {
            assert!((t - 0.1 * k as f64).abs() < 1e-12);
        }
        assert_eq!(tr.steps, 6);
        assert_eq!(tr.snapshots.len(), 4);
    }

    #[test]
    fn zero_epsilon_stays_zero() {
        let tr = run(&setup(0.0)).unwrap();
        assert!(tr.records.iter().all(|r| r.hs == 0.0));
    }

    #[test]
    fn mean_is_conserved() {
        let tr = run(&setup(1e-1)).unwrap();
        assert!(tr.final_state.rho1.mode(0, 0).norm() < 1e-16);
    }

    #[test]
    fn layered_perturbation_stays_layered() {
        // g(x2) only: no velocity, ρ1 follows the 1-D semigroup.
        let mut st = initial_state(&setup(0.0)).unwrap();
        let g1 = st.grid1().clone();
        let bump = crate::spectral::random_band_limited_1d(&g1, 3, 0.0, 5);
        st.rho1 = SpecField2D::broadcast_x2(st.grid().clone(), &bump).unwrap();
        let tr = evolve(
            st,
            &RunOptions {
                energy_probe: None,
                ..Default::default()
            },
        )
        .unwrap();
        let expect = crate::heat1d::heat_propagate(&bump, 1.5, 0.3).unwrap();
        let expect = SpecField2D::broadcast_x2(tr.final_state.grid().clone(), &expect).unwrap();
        assert!(tr.final_state.rho1.sub(&expect).max_modulus() < 1e-13);
    }

    #[test]
    fn oversize_band_is_rejected() {
        let mut s = setup(1e-3);
        s.perturbation.kmax = 12;
        assert!(
            matches!(initial_state(&s), Err(Error::InvalidParameter { ref key, .. }) if key == "kmax")
        );
    }
}
