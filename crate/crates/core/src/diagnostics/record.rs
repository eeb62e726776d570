use num_complex::Complex;
use serde::Serialize;

use super::ratios::{ratios_from, InequalityRatios};
use crate::error::Result;
use crate::scalar::{abs_pow, Real};
use crate::solver::{compute_velocity, SolverState, Stepper};
use crate::spectral::{Exponent, SpecField1D, SpecField2D};

/// Norms of the truncated background gradient `g0 = D(∂2ρ0)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct BackgroundNorms<T> {
    /// `‖∇ρ0‖_{L^∞}` on the refined grid.
    pub grad_sup: T,
    /// `‖∇ρ0‖_{L^{1/α}}`, only for `α ≤ 1`.
    pub grad_linv: Option<T>,
    /// `‖∇Λ̃^s ρ0‖_{L^{1/α}}`, only for `α ≤ 1`.
    pub grad_frac_s_linv: Option<T>,
    /// `‖∇Λ̃^{s−α/2} ρ0‖_{L^p}`.
    pub grad_frac_lp: T,
}

impl<T: Real> BackgroundNorms<T> {
    pub fn evaluate(g0: &SpecField1D<T>, alpha: T, s: T, p: T) -> Result<Self> {
        let frac = |gamma: T| g0.apply(|xi| Complex::new(abs_pow(xi, gamma), T::zero()));
        let linv = if alpha <= T::one() {
            Some(Exponent::finite(T::one() / alpha)?)
        } else {
            None
        };
        let grad_linv = linv.map(|e| g0.lebesgue_norm(e)).transpose()?;
        let grad_frac_s_linv = linv.map(|e| frac(s).lebesgue_norm(e)).transpose()?;
        Ok(Self {
            grad_sup: g0.sup_norm()?,
            grad_linv,
            grad_frac_s_linv,
            grad_frac_lp: frac(s - alpha / T::lit(2.0)).lebesgue_norm(Exponent::finite(p)?)?,
        })
    }
}

/// Everything monitored at one sample time.
#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticsRecord<T> {
    pub t: T,
    pub step: u64,
    /// `‖ρ1‖_{L²}`.
    pub l2: T,
    /// `‖Λ^{α/2}ρ1‖_{L²}`.
    pub lambda_half_alpha: T,
    /// `‖Λ^s ρ1‖_{L²}`.
    pub lambda_s: T,
    /// `‖Λ^{s+α/2}ρ1‖_{L²}`.
    pub lambda_s_half_alpha: T,
    /// `‖ρ1‖_{H^s}`.
    pub hs: T,
    /// `(‖u1‖²_{H^s} + ‖u2‖²_{H^s})^{1/2}`.
    pub u_hs: T,
    /// `max |u|` on the grid.
    pub u_sup: T,
    pub background: BackgroundNorms<T>,
    /// `⟨ρ1, D(u·∇ρ1)⟩`; zero up to roundoff for divergence-free `u`.
    pub i0: T,
    /// `∫ ρ1 u·∇ρ0`.
    pub i1: T,
    /// `∫ Λ^sρ1 Λ^s(u·∇ρ0)`.
    pub i2: T,
    /// `∫ Λ^sρ1 Λ^s(u·∇ρ1)`.
    pub i3: T,
    pub energy_residual: Option<T>,
    pub ratios: InequalityRatios<T>,
}

/// Evaluates a full record; the energy residual costs two extra steps.
pub fn compute_record<T: Real>(
    state: &SolverState<T>,
    stepper: &mut Stepper<T>,
    energy_probe: Option<T>,
) -> Result<DiagnosticsRecord<T>> {
    let params = &state.params;
    let (alpha, s) = (params.alpha, params.s);
    let half_alpha = alpha / T::lit(2.0);
    let rho1 = &state.rho1;
    let dynamics = stepper.dynamics();
    let products = dynamics.products(rho1, &state.rho0, state.t)?;
    let g0 = dynamics.background_gradient(&state.rho0);
    let (u1, u2) = compute_velocity(rho1);
    let hs_sq = |f: &SpecField2D<T>| {
        let a = f.l2_norm();
        let b = f.homogeneous_norm(s);
        a * a + b * b
    };
    let mut rec = DiagnosticsRecord {
        t: state.t,
        step: state.step,
        l2: rho1.l2_norm(),
        lambda_half_alpha: rho1.homogeneous_norm(half_alpha),
        lambda_s: rho1.homogeneous_norm(s),
        lambda_s_half_alpha: rho1.homogeneous_norm(s + half_alpha),
        hs: rho1.sobolev_norm(s),
        u_hs: (hs_sq(&u1) + hs_sq(&u2)).sqrt(),
        u_sup: products.speed,
        background: BackgroundNorms::evaluate(&g0, alpha, s, params.p)?,
        i0: rho1.inner(&products.transport),
        i1: rho1.inner(&products.background),
        i2: rho1.weighted_inner(&products.background, s),
        i3: rho1.weighted_inner(&products.transport, s),
        energy_residual: None,
        ratios: InequalityRatios::default(),
    };
    rec.ratios = ratios_from(&rec, alpha, s);
    if let Some(h) = energy_probe {
        rec.energy_residual = Some(residual(state, stepper, h, &rec)?);
    }
    Ok(rec)
}

fn energy<T: Real>(rho1: &SpecField2D<T>, s: T) -> T {
    let a = rho1.l2_norm();
    let b = rho1.homogeneous_norm(s);
    (a * a + b * b) / T::lit(2.0)
}

fn residual<T: Real>(
    state: &SolverState<T>,
    stepper: &mut Stepper<T>,
    h: T,
    rec: &DiagnosticsRecord<T>,
) -> Result<T> {
    let s = state.params.s;
    let plus = stepper.step_signed(state, h)?;
    let minus = stepper.step_signed(state, -h)?;
    let dedt = (energy(&plus.rho1, s) - energy(&minus.rho1, s)) / (T::lit(2.0) * h);
    let dissipation = rec.lambda_half_alpha * rec.lambda_half_alpha
        + rec.lambda_s_half_alpha * rec.lambda_s_half_alpha;
    Ok((dedt + dissipation + rec.i0 + rec.i1 + rec.i2 + rec.i3).abs())
}

/// `|d/dt ½‖ρ1‖²_{H^s} + dissipation + I₁ + I₂ + I₃|` with the time
/// derivative taken as a centred difference over `±dt_probe`.
pub fn energy_balance<T: Real>(state: &SolverState<T>, dt_probe: T) -> Result<T> {
    let mut stepper = Stepper::new(state)?;
    let rec = compute_record(state, &mut stepper, Some(dt_probe))?;
    Ok(rec.energy_residual.expect("probe requested"))
}

/// `(Λ^s(u·∇ρ1) − u·∇Λ^sρ1)` paired with `Λ^sρ1`: the commutator form of `I₃`.
#[cfg(test)]
pub(crate) fn commutator_form<T: Real>(
    dynamics: &crate::solver::Dynamics<T>,
    rho1: &SpecField2D<T>,
    s: T,
) -> Result<T> {
    use crate::spectral::frac_laplacian;
    let zero = SpecField1D::zeros(std::sync::Arc::new(dynamics.grid().axis2_grid()?));
    let direct = dynamics.products(rho1, &zero, T::zero())?.transport;
    let ls = frac_laplacian(rho1, s)?;
    let lsd = frac_laplacian(&direct, s)?;
    // u·∇Λ^sρ1 with u built from ρ1 itself.
    let (u1, u2) = dynamics.velocity(rho1);
    let i = Complex::new(T::zero(), T::one());
    let g = ls.grid().clone();
    let d1 = ls.map_indexed(|a, _, c| i * c * g.axis1().xi()[a]);
    let d2 = ls.map_indexed(|_, b, c| i * c * g.axis2().xi()[b]);
    let (d1, d2) = SpecField2D::inverse_pair(&dynamics.truncate(&d1), &dynamics.truncate(&d2));
    let adv: Vec<T> = (0..u1.values().len())
        .map(|p| u1.values()[p] * d1.values()[p] + u2.values()[p] * d2.values()[p])
        .collect();
    let adv = crate::spectral::Field2D::from_values(g, adv)?.transform()?;
    Ok(ls.inner(&lsd.sub(&adv)))
}
