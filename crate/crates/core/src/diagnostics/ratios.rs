use serde::Serialize;

use super::record::DiagnosticsRecord;
use crate::error::Result;
use crate::scalar::Real;
use crate::solver::{SolverState, Stepper};

/// Denominators at or below this are reported as not applicable.
pub const DEGENERATE: f64 = 1e-14;

/// `|LHS| / RHS` for each estimate of the perturbation lemma; `None` when
/// the estimate does not apply to `(α, s)` or its right side vanishes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct InequalityRatios<T> {
    /// `|I₁| / (‖Λ^{α/2}ρ1‖² ‖∇ρ0‖_{L^{1/α}})`, `α < 1`.
    pub r2_3: Option<T>,
    /// `|I₁| / (‖ρ1‖² ‖∇ρ0‖_{L^∞})`, constant-free.
    pub r2_4: Option<T>,
    /// `|I₃| / (‖Λ^sρ1‖ ‖Λ^{s+α/2}ρ1‖²)`, `α ≤ 1`, `s = 2 − α`.
    pub r2_5: Option<T>,
    /// `|I₃| / (‖Λ^sρ1‖ (‖Λ^{α/2}ρ1‖² + ‖Λ^{s+α/2}ρ1‖²))`, `α ≥ 1`, `s ≥ 1`.
    pub r2_6: Option<T>,
    /// `|I₂| / (‖Λ^{s+α/2}ρ1‖² ‖∇ρ0‖_{L^{1/α}} + ‖Λ^{s+α/2}ρ1‖ ‖Λ^{α/2}ρ1‖ ‖∇Λ̃^sρ0‖_{L^{1/α}})`,
    /// `α < 1`, `s = 2 − α`.
    pub r2_7: Option<T>,
    /// `|I₂| / (‖Λ^{s+α/2}ρ1‖ ‖u‖_{H^s} (‖∇ρ0‖_{L^∞} + ‖∇Λ̃^{s−α/2}ρ0‖_{L^p}))`, `s ≥ 1`.
    pub r2_8: Option<T>,
}

impl<T: Real> InequalityRatios<T> {
    /// `(name, value)` pairs in fixed order.
    pub fn entries(&self) -> [(&'static str, Option<T>); 6] {
        [
            ("r2_3", self.r2_3),
            ("r2_4", self.r2_4),
            ("r2_5", self.r2_5),
            ("r2_6", self.r2_6),
            ("r2_7", self.r2_7),
            ("r2_8", self.r2_8),
        ]
    }
}

fn ratio<T: Real>(applies: bool, lhs: T, rhs: Option<T>) -> Option<T> {
    let rhs = rhs?;
    if !applies || !(rhs > T::lit(DEGENERATE)) {
        return None;
    }
    Some(lhs.abs() / rhs)
}

pub(crate) fn ratios_from<T: Real>(
    r: &DiagnosticsRecord<T>,
    alpha: T,
    s: T,
) -> InequalityRatios<T> {
    let one = T::one();
    let tol = T::lit(1e-12);
    let critical_s = (s - (T::lit(2.0) - alpha)).abs() <= tol;
    let b = &r.background;
    let (l2, la, ls, lsa) = (r.l2, r.lambda_half_alpha, r.lambda_s, r.lambda_s_half_alpha);
    InequalityRatios {
        r2_3: ratio(alpha < one, r.i1, b.grad_linv.map(|g| la * la * g)),
        r2_4: ratio(true, r.i1, Some(l2 * l2 * b.grad_sup)),
        r2_5: ratio(alpha <= one && critical_s, r.i3, Some(ls * lsa * lsa)),
        r2_6: ratio(
            alpha >= one && s >= one,
            r.i3,
            Some(ls * (la * la + lsa * lsa)),
        ),
        r2_7: ratio(
            alpha < one && critical_s,
            r.i2,
            b.grad_linv
                .zip(b.grad_frac_s_linv)
                .map(|(g, h)| lsa * lsa * g + lsa * la * h),
        ),
        r2_8: ratio(
            s >= one,
            r.i2,
            Some(lsa * r.u_hs * (b.grad_sup + b.grad_frac_lp)),
        ),
    }
}

/// Ratios for a single state.
pub fn inequality_ratios<T: Real>(state: &SolverState<T>) -> Result<InequalityRatios<T>> {
    let mut stepper = Stepper::new(state)?;
    Ok(super::record::compute_record(state, &mut stepper, None)?.ratios)
}
