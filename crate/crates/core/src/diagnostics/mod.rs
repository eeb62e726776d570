//! Norms, integrals and a priori inequality checks evaluated along a run.

mod envelope;
mod ratios;
mod record;
mod summary;
mod threshold;

pub use envelope::{gronwall_envelope, GronwallReport, DELTA, GRONWALL_FIT_FRACTION};
pub use ratios::{inequality_ratios, InequalityRatios, DEGENERATE};
pub use record::{compute_record, energy_balance, BackgroundNorms, DiagnosticsRecord};
pub use summary::{summarize, RunSummary, R2_4_SLACK};
pub use threshold::{threshold_monitor, ThresholdReport};
