use std::collections::BTreeMap;

use serde::Serialize;

use super::envelope::{gronwall_envelope, GronwallReport, GRONWALL_FIT_FRACTION};
use super::threshold::{threshold_monitor, ThresholdReport};
use crate::scalar::Real;
use crate::solver::{Termination, Trajectory};

/// Slack on the constant-free transport estimate.
pub const R2_4_SLACK: f64 = 1e-10;

/// Condensed outcome of one run.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary<T> {
    pub termination: &'static str,
    pub detail: Option<String>,
    pub t_final: T,
    pub steps: u64,
    pub min_dt: Option<T>,
    pub hs_initial: T,
    pub hs_peak: T,
    pub hs_final: T,
    /// `max_t ‖ρ1‖_{H^s} / ‖ρ1(0)‖_{H^s}`.
    pub growth: Option<T>,
    pub max_energy_residual: Option<T>,
    /// Largest value of each inequality ratio over the run.
    pub ratio_max: BTreeMap<&'static str, Option<T>>,
    pub r2_4_holds: bool,
    pub gronwall: GronwallReport<T>,
    pub threshold: ThresholdReport<T>,
}

impl<T: Real> RunSummary<T> {
    /// Failed a posteriori checks, if any.
    pub fn check_failures(&self) -> Vec<&'static str> {
        let mut out = vec![];
        if !self.r2_4_holds {
            out.push("transport estimate r2_4 exceeds 1");
        }
        if self.gronwall.violated {
            out.push("Gronwall envelope violated");
        }
        out
    }
}

fn opt_max<T: Real>(a: Option<T>, b: Option<T>) -> Option<T> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

pub fn summarize<T: Real>(
    traj: &Trajectory<T>,
    epsilon: T,
    threshold: T,
    epsilon1: T,
) -> RunSummary<T> {
    let recs = &traj.records;
    let state = &traj.final_state;
    let hs_initial = recs.first().map_or(T::zero(), |r| r.hs);
    let hs_peak = recs.iter().fold(T::zero(), |m, r| m.max(r.hs));
    let mut ratio_max = BTreeMap::new();
    for r in recs {
        for (name, v) in r.ratios.entries() {
            let slot = ratio_max.entry(name).or_insert(None);
            *slot = opt_max(*slot, v);
        }
    }
    let r2_4_holds = recs.iter().all(|r| {
        r.ratios
            .r2_4
            .is_none_or(|v| v <= T::one() + T::lit(R2_4_SLACK))
    });
    let detail = match &traj.termination {
        Termination::Completed => None,
        Termination::BlowUp { t, detail } => Some(format!("t = {t}: {detail}")),
        Termination::ResolutionExhausted { t, dt_min } => {
            Some(format!("t = {t}: step fell below {dt_min}"))
        }
    };
    RunSummary {
        termination: traj.termination.as_str(),
        detail,
        t_final: state.t,
        steps: traj.steps,
        min_dt: traj.min_dt,
        hs_initial,
        hs_peak,
        hs_final: recs.last().map_or(T::zero(), |r| r.hs),
        growth: (hs_initial > T::zero()).then(|| hs_peak / hs_initial),
        max_energy_residual: recs.iter().fold(None, |m, r| opt_max(m, r.energy_residual)),
        ratio_max,
        r2_4_holds,
        gronwall: gronwall_envelope(recs, epsilon, T::lit(GRONWALL_FIT_FRACTION)),
        threshold: threshold_monitor(recs, state.params.regime, threshold, epsilon1),
    }
}
