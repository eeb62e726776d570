//! Time integration of the full and the decomposed equations.

mod compare;
mod dynamics;
mod integrator;
mod params;
mod run;
mod state;

pub use compare::{compare_modes, self_convergence, ModeComparison, SelfConvergence};
pub use dynamics::{compute_velocity, nonlinear_tendency, Dynamics, Products};
pub use integrator::{advance, StepReport, Stepper, MAX_HALVINGS};
pub use params::{Evolution, ParamSet, Regime};
pub use run::{
    evolve, initial_state, run, run_full, CheckpointPlan, Perturbation, RunOptions, RunSetup,
    Snapshot, Termination, Trajectory,
};
pub use state::SolverState;
