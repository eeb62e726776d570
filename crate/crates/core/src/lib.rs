//! Pseudo-spectral simulation of the two-dimensional dissipative
//! incompressible porous media equation
//!
//! ```text
//! ∂t ρ + u·∇ρ = −Λ^α ρ,    u = (−R1 R2 ρ, R1² ρ),
//! ```
//!
//! on a periodic box, split into an `x2`-only background `ρ0` that solves the
//! 1-D fractional heat equation exactly and a perturbation `ρ1` that carries
//! the whole velocity. Alongside the time stepper the crate evaluates the
//! energy balance, the a priori inequalities and the background decay rates
//! that control small-perturbation stability.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! `f64` aliases below are what the command-line driver uses.

// `!(x > 0.0)` is how NaN gets rejected throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod battery;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod heat1d;
pub mod io;
pub mod scalar;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Grid1 = spectral::Grid1D<f64>;
pub type Grid2 = spectral::Grid2D<f64>;
pub type Field1 = spectral::Field1D<f64>;
pub type Field2 = spectral::Field2D<f64>;
pub type Spec1 = spectral::SpecField1D<f64>;
pub type Spec2 = spectral::SpecField2D<f64>;
pub type Params = solver::ParamSet<f64>;
pub type State = solver::SolverState<f64>;
pub type Record = diagnostics::DiagnosticsRecord<f64>;
pub type Scan = heat1d::DecayScan<f64>;

pub type Grid2F32 = spectral::Grid2D<f32>;
pub type Spec2F32 = spectral::SpecField2D<f32>;
pub type StateF32 = solver::SolverState<f32>;
