use serde::Serialize;

use super::record::DiagnosticsRecord;
use crate::scalar::Real;
use crate::solver::Regime;

/// Smallness bookkeeping: empirical `t₁`, monotonicity after it, and the
/// margin of `‖Λ^sρ1‖ ≤ ε₁`.
#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport<T> {
    pub threshold: T,
    /// Background smallness per record.
    pub smallness: Vec<T>,
    pub t1: Option<T>,
    /// `‖ρ1‖_{H^s}` non-increasing on every sample at or after `t₁`
    /// (vacuously true when `t₁` is never reached).
    pub monotone_after_t1: bool,
    pub first_increase: Option<T>,
    pub epsilon1: T,
    pub max_lambda_s: T,
    /// `ε₁ − max_t ‖Λ^sρ1‖`.
    pub epsilon1_margin: T,
}

/// Background smallness of one record: `‖∇ρ0‖_{L^{1/α}} + ‖∇Λ̃^sρ0‖_{L^{1/α}}`
/// below the critical dissipation, `‖∇ρ0‖_{L^∞} + ‖∇Λ̃^{s−α/2}ρ0‖_{L^p}` above it.
fn smallness<T: Real>(r: &DiagnosticsRecord<T>, regime: Regime) -> T {
    let b = &r.background;
    match (regime, b.grad_linv, b.grad_frac_s_linv) {
        (Regime::Supercritical, Some(a), Some(c)) => a + c,
        _ => b.grad_sup + b.grad_frac_lp,
    }
}

pub fn threshold_monitor<T: Real>(
    records: &[DiagnosticsRecord<T>],
    regime: Regime,
    threshold: T,
    epsilon1: T,
) -> ThresholdReport<T> {
    let small: Vec<T> = records.iter().map(|r| smallness(r, regime)).collect();
    let start = small.iter().position(|&v| v <= threshold);
    let slack = T::lit(1e-10);
    let first_increase = start.and_then(|k0| {
        (k0 + 1..records.len())
            .find(|&k| records[k].hs > records[k - 1].hs * (T::one() + slack))
            .map(|k| records[k].t)
    });
    let max_ls = records.iter().fold(T::zero(), |m, r| m.max(r.lambda_s));
    ThresholdReport {
        threshold,
        t1: start.map(|k| records[k].t),
        monotone_after_t1: first_increase.is_none(),
        first_increase,
        epsilon1,
        max_lambda_s: max_ls,
        epsilon1_margin: epsilon1 - max_ls,
        smallness: small,
    }
}
