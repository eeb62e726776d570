//! Background `ρ0(x2, t)`: the 1-D fractional heat semigroup, the profile
//! library for its initial data, and decay-rate scans.

mod decay;
mod profile;
mod semigroup;

pub use decay::{
    decay_scan, geometric_times, log_log_slope, BoundData, BoundEnvelope, BoundSpec, DecayNorm,
    DecayScan, TAIL_TOLERANCE, VALIDITY_DIVISOR,
};
pub use profile::{Profile, ProfileKind, ProfileName};
pub(crate) use semigroup::propagate_unchecked;
pub use semigroup::{background_tendency, heat_propagate};
