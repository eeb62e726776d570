use serde::Serialize;

use super::record::DiagnosticsRecord;
use crate::scalar::Real;

/// Young's-inequality parameter reported alongside `C_δ`.
pub const DELTA: f64 = 0.25;
/// Leading fraction of the time span over which `C_δ` is fitted.
pub const GRONWALL_FIT_FRACTION: f64 = 0.1;

/// `ε · exp ∫₀ᵗ [‖∇ρ0‖_{L^∞} + C_δ (‖∇ρ0‖_{L^∞} + ‖∇Λ̃^{s−α/2}ρ0‖_{L^p})²]`.
#[derive(Clone, Debug, Serialize)]
pub struct GronwallReport<T> {
    pub delta: f64,
    pub c_delta: T,
    pub fit_until: T,
    pub times: Vec<T>,
    pub measured: Vec<T>,
    /// Running integrals of `‖∇ρ0‖_{L^∞}` and of the squared bracket.
    pub integral_linear: Vec<T>,
    pub integral_quadratic: Vec<T>,
    pub envelope: Vec<T>,
    pub violated: bool,
    pub first_violation: Option<T>,
}

fn cumulative_trapezoid<T: Real>(t: &[T], y: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(t.len());
    let mut acc = T::zero();
    for k in 0..t.len() {
        if k > 0 {
            acc += (t[k] - t[k - 1]) * (y[k] + y[k - 1]) / T::lit(2.0);
        }
        out.push(acc);
    }
    out
}

/// Fits the smallest `C_δ ≥ 0` keeping `‖ρ1‖_{H^s}` under the envelope on the
/// first `fit_fraction` of the run, then checks the whole run against it.
pub fn gronwall_envelope<T: Real>(
    records: &[DiagnosticsRecord<T>],
    epsilon_initial: T,
    fit_fraction: T,
) -> GronwallReport<T> {
    let times: Vec<T> = records.iter().map(|r| r.t).collect();
    let measured: Vec<T> = records.iter().map(|r| r.hs).collect();
    let lin: Vec<T> = records.iter().map(|r| r.background.grad_sup).collect();
    let quad: Vec<T> = records
        .iter()
        .map(|r| {
            let b = r.background.grad_sup + r.background.grad_frac_lp;
            b * b
        })
        .collect();
    let a = cumulative_trapezoid(&times, &lin);
    let b = cumulative_trapezoid(&times, &quad);
    let fit_until = match (times.first(), times.last()) {
        (Some(&t0), Some(&t1)) => t0 + fit_fraction * (t1 - t0),
        _ => T::zero(),
    };
    let mut c = T::zero();
    if epsilon_initial > T::zero() {
        for k in 0..times.len() {
            if times[k] > fit_until {
                break;
            }
            if measured[k] > T::zero() && b[k] > T::zero() {
                let need = ((measured[k] / epsilon_initial).ln() - a[k]) / b[k];
                c = c.max(need);
            }
        }
    }
    let envelope: Vec<T> = (0..times.len())
        .map(|k| epsilon_initial * (a[k] + c * b[k]).exp())
        .collect();
    let slack = T::lit(1e-9);
    let first = (0..times.len()).find(|&k| measured[k] > envelope[k] * (T::one() + slack));
    GronwallReport {
        delta: DELTA,
        c_delta: c,
        fit_until,
        first_violation: first.map(|k| times[k]),
        violated: first.is_some(),
        times,
        measured,
        integral_linear: a,
        integral_quadratic: b,
        envelope,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::{BackgroundNorms, InequalityRatios};

    fn rec(t: f64, hs: f64, grad: f64, frac: f64) -> DiagnosticsRecord<f64> {
        DiagnosticsRecord {
            t,
            step: 0,
            l2: hs,
            lambda_half_alpha: 0.0,
            lambda_s: 0.0,
            lambda_s_half_alpha: 0.0,
            hs,
            u_hs: 0.0,
            u_sup: 0.0,
            background: BackgroundNorms {
                grad_sup: grad,
                grad_linv: None,
                grad_frac_s_linv: None,
                grad_frac_lp: frac,
            },
            i0: 0.0,
            i1: 0.0,
            i2: 0.0,
            i3: 0.0,
            energy_residual: None,
            ratios: InequalityRatios::default(),
        }
    }

    #[test]
    fn zero_background_gives_flat_envelope() {
        let rs: Vec<_> = (0..20)
            .map(|k| rec(k as f64 * 0.1, 1e-3 * (-(k as f64) * 0.1).exp(), 0.0, 0.0))
            .collect();
        let g = gronwall_envelope(&rs, 1e-3, 0.1);
        assert!(g.envelope.iter().all(|&e| e == 1e-3));
        assert!(!g.violated);
        assert_eq!(g.c_delta, 0.0);
    }

    #[test]
    fn zero_data_never_violates() {
        let rs: Vec<_> = (0..10).map(|k| rec(k as f64, 0.0, 1.0, 1.0)).collect();
        assert!(!gronwall_envelope(&rs, 0.0, 0.1).violated);
    }

    #[test]
    fn fitted_constant_binds_in_window() {
        // hs grows like exp(2t) while the linear integral is t: C_δ must supply
        // the extra t with a unit quadratic integrand.
        let rs: Vec<_> = (0..=100)
            .map(|k| {
                let t = k as f64 * 0.01;
                rec(t, (2.0 * t).exp(), 1.0, 0.0)
            })
            .collect();
        let g = gronwall_envelope(&rs, 1.0, 0.1);
        assert!((g.c_delta - 1.0).abs() < 1e-12, "{}", g.c_delta);
        assert!(!g.violated);
        // Faster growth after the window is caught.
        let mut late = rs.clone();
        late[80].hs *= 10.0;
        let g = gronwall_envelope(&late, 1.0, 0.1);
        assert!(g.violated);
        assert_eq!(g.first_violation, Some(0.8));
    }
}
