//! Decay-rate measurement for the background semigroup.
//!
//! Algebraic decay on the line is only visible while the spreading width
//! `t^{1/α}` is small against the period; a scan is conclusive only when its
//! final time satisfies `t^{1/α} ≤ L/10`.

use std::sync::Arc;

use serde::Serialize;

use super::profile::Profile;
use super::semigroup::{check_alpha, heat_propagate};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{derivative_1d, frac_laplacian_1d, Exponent, Grid1D, SpecField1D};

/// Largest admissible tail fraction of a scanned profile.
pub const TAIL_TOLERANCE: f64 = 1e-8;
/// Validity window: `t^{1/α} ≤ L / VALIDITY_DIVISOR`.
pub const VALIDITY_DIVISOR: f64 = 10.0;

/// Quantity whose decay is measured.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecayNorm<T> {
    /// `‖∂^d Λ̃^γ ρ0(t)‖_{L^p}` with `d ∈ {0, 1}`.
    Lp {
        derivative: bool,
        frac: T,
        p: Exponent<T>,
    },
    /// `|mean(ρ0)|`, invariant under the semigroup.
    MeanMagnitude,
}

impl<T: Real> DecayNorm<T> {
    pub fn gradient(p: Exponent<T>) -> Self {
        DecayNorm::Lp {
            derivative: true,
            frac: T::zero(),
            p,
        }
    }

    pub fn value(p: Exponent<T>) -> Self {
        DecayNorm::Lp {
            derivative: false,
            frac: T::zero(),
            p,
        }
    }

    /// Evaluates the norm of `ρ0` given by its spectrum.
    pub fn evaluate(&self, rho0: &SpecField1D<T>) -> Result<T> {
        match *self {
            DecayNorm::MeanMagnitude => {
                let n = T::from_count(rho0.grid().n());
                Ok(rho0.mode(0).norm() / n.sqrt())
            }
            DecayNorm::Lp {
                derivative,
                frac,
                p,
            } => {
                let mut s = if frac == T::zero() {
                    rho0.clone()
                } else {
                    frac_laplacian_1d(rho0, frac)?
                };
                if derivative {
                    s = derivative_1d(&s);
                }
                s.lebesgue_norm(p)
            }
        }
    }

    /// Whole-line self-similar decay exponent of this norm for profiles
    /// with nonzero mass (or zero mass and nonzero first moment when
    /// `mean_free`).
    pub fn self_similar_exponent(&self, alpha: T, mean_free: bool) -> T {
        match *self {
            DecayNorm::MeanMagnitude => T::zero(),
            DecayNorm::Lp {
                derivative,
                frac,
                p,
            } => {
                let d = if derivative { T::one() } else { T::zero() };
                let moment = if mean_free { T::one() } else { T::zero() };
                -(d + frac + moment + T::one() - p.reciprocal()) / alpha
            }
        }
    }
}

/// Which datum the bound is stated in terms of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundData {
    /// `‖f‖_{L^q}`: the derivative counts toward the decay.
    Profile,
    /// `‖∇f‖_{L^q}`: the derivative is absorbed by the datum.
    Gradient,
}

/// `L^q → L^p` smoothing bound `‖·‖ ≲ t^{exponent} ‖datum‖_{L^q}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundSpec<T> {
    pub q: T,
    pub data: BoundData,
}

impl<T: Real> BoundSpec<T> {
    pub fn exponent(&self, alpha: T, norm: &DecayNorm<T>) -> Result<T> {
        if !(self.q >= T::one()) {
            return Err(Error::param("q", "must be at least 1"));
        }
        match *norm {
            DecayNorm::MeanMagnitude => Ok(T::zero()),
            DecayNorm::Lp {
                derivative,
                frac,
                p,
            } => {
                let d = match (self.data, derivative) {
                    (BoundData::Profile, true) => T::one(),
                    (BoundData::Profile, false) => T::zero(),
                    (BoundData::Gradient, true) => T::zero(),
                    (BoundData::Gradient, false) => {
                        return Err(Error::param(
                            "bound_data",
                            "gradient data requires a gradient norm",
                        ))
                    }
                };
                Ok(-(frac + d + T::one() / self.q - p.reciprocal()) / alpha)
            }
        }
    }
}

/// Envelope `C t^{exponent}` with `C` fitted at the first valid time.
#[derive(Clone, Debug, Serialize)]
pub struct BoundEnvelope<T> {
    pub q: T,
    pub data: BoundData,
    pub exponent: T,
    pub constant: T,
    pub values: Vec<T>,
    /// Every valid measured value lies on or below the envelope.
    pub holds: bool,
}

#[derive(Clone, Debug)]
pub struct DecayScan<T: Real> {
    pub alpha: T,
    pub norm: DecayNorm<T>,
    pub times: Vec<T>,
    pub values: Vec<T>,
    /// Per-time validity: `t^{1/α} ≤ L/10`.
    pub valid_mask: Vec<bool>,
    /// Set only when the final time lies in the validity window.
    pub valid: bool,
    /// Index range `[start, end)` used by the slope fit.
    pub fit_window: Option<(usize, usize)>,
    pub slope: Option<T>,
    pub self_similar_exponent: T,
    pub bound: BoundEnvelope<T>,
}

/// `count` geometrically spaced times in `[t0, t1]`.
pub fn geometric_times<T: Real>(t0: T, t1: T, count: usize) -> Vec<T> {
    assert!(count >= 2 && t0 > T::zero() && t1 > t0);
    let ratio = (t1 / t0).ln() / T::from_count(count - 1);
    (0..count)
        .map(|i| t0 * (ratio * T::from_count(i)).exp())
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope<T: Real>(x: &[T], y: &[T]) -> Option<T> {
    if x.len() < 2 || y.iter().any(|v| !(*v > T::zero())) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.as_f64().ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.as_f64().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(T::lit(sxy / sxx))
}

/// Evolves `profile` with `K_α(t)` and records `norm` at each of `times`.
pub fn decay_scan<T: Real>(
    profile: &Profile<T>,
    grid: &Arc<Grid1D<T>>,
    alpha: T,
    norm: DecayNorm<T>,
    times: &[T],
    bound: BoundSpec<T>,
) -> Result<DecayScan<T>> {
    check_alpha(alpha)?;
    profile.validate()?;
    if times.is_empty() || times[0] <= T::zero() || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param(
            "times",
            "must be positive and strictly increasing",
        ));
    }
    let tail = profile.tail_fraction(grid);
    if tail.as_f64() > TAIL_TOLERANCE {
        return Err(Error::param(
            "profile_width",
            format!("tail fraction {tail} beyond L/4 exceeds {TAIL_TOLERANCE}"),
        ));
    }
    let f = profile.sample(grid).transform()?;
    let values = times
        .iter()
        .map(|&t| norm.evaluate(&heat_propagate(&f, alpha, t)?))
        .collect::<Result<Vec<T>>>()?;

    // Relative roundoff slack so `t = (L/10)^α` itself counts as valid.
    let limit = grid.length() / T::lit(VALIDITY_DIVISOR) * (T::one() + T::lit(1e-12));
    let valid_mask: Vec<bool> = times
        .iter()
        .map(|&t| t.powf(T::one() / alpha) <= limit)
        .collect();
    let valid = *valid_mask.last().unwrap();

    let mut scan = DecayScan {
        alpha,
        norm,
        times: times.to_vec(),
        values,
        valid_mask,
        valid,
        fit_window: None,
        slope: None,
        self_similar_exponent: norm.self_similar_exponent(alpha, profile.is_mean_free()),
        bound: BoundEnvelope {
            q: bound.q,
            data: bound.data,
            exponent: T::zero(),
            constant: T::zero(),
            values: vec![],
            holds: false,
        },
    };
    scan.fit_slope();
    scan.bound = scan.envelope(bound)?;
    Ok(scan)
}

impl<T: Real> DecayScan<T> {
    fn valid_indices(&self) -> Vec<usize> {
        (0..self.times.len())
            .filter(|&i| self.valid_mask[i])
            .collect()
    }

    fn fit_slope(&mut self) {
        let idx = self.valid_indices();
        if idx.len() < 4 {
            return;
        }
        let start = idx[idx.len() / 2];
        let end = idx[idx.len() - 1] + 1;
        self.fit_window = Some((start, end));
        self.slope = log_log_slope(&self.times[start..end], &self.values[start..end]);
    }

    /// Envelope for another bound, re-using the measured values.
    pub fn envelope(&self, bound: BoundSpec<T>) -> Result<BoundEnvelope<T>> {
        let exponent = bound.exponent(self.alpha, &self.norm)?;
        let idx = self.valid_indices();
        let Some(&first) = idx.first() else {
            return Ok(BoundEnvelope {
                q: bound.q,
                data: bound.data,
                exponent,
                constant: T::zero(),
                values: vec![T::zero(); self.times.len()],
                holds: false,
            });
        };
        let constant = self.values[first] / self.times[first].powf(exponent);
        let values: Vec<T> = self
            .times
            .iter()
            .map(|&t| constant * t.powf(exponent))
            .collect();
        let slack = T::one() + T::lit(1e-12);
        let holds = idx.iter().all(|&i| self.values[i] <= values[i] * slack);
        Ok(BoundEnvelope {
            q: bound.q,
            data: bound.data,
            exponent,
            constant,
            values,
            holds,
        })
    }

    /// Relative deviation of the fitted slope from `target`.
    pub fn slope_error(&self, target: T) -> Option<T> {
        self.slope.map(|s| ((s - target) / target).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn long_grid() -> Arc<Grid1D<f64>> {
        Arc::new(Grid1D::new(4096, TAU * 100.0).unwrap())
    }

    #[test]
    fn heat_l2_decay_matches_quarter_rate() {
        // α = 2, ∫f ≠ 0: ‖K(t) f‖_{L²} ~ t^{-(1/2)(1 - 1/2)} = t^{-1/4}
        let g = long_grid();
        let norm = DecayNorm::value(Exponent::Finite(2.0));
        let times = geometric_times(10.0, 3000.0, 32);
        let bound = BoundSpec {
            q: 1.0,
            data: BoundData::Profile,
        };
        let scan = decay_scan(&Profile::gaussian(1.0, 1.0), &g, 2.0, norm, &times, bound).unwrap();
        assert!(scan.valid);
        assert!((scan.self_similar_exponent + 0.25).abs() < 1e-15);
        assert!(scan.slope_error(-0.25).unwrap() < 0.02, "{:?}", scan.slope);
    }

    #[test]
    fn mean_is_constant_in_time() {
        let g = long_grid();
        let times = geometric_times(1.0, 100.0, 12);
        let bound = BoundSpec {
            q: 1.0,
            data: BoundData::Profile,
        };
        let scan = decay_scan(
            &Profile::gaussian(2.0, 3.0),
            &g,
            0.8,
            DecayNorm::MeanMagnitude,
            &times,
            bound,
        )
        .unwrap();
        let first = scan.values[0];
        assert!(first > 0.0);
        assert!(scan.values.iter().all(|v| (v - first).abs() < 1e-14));
        assert!(scan.slope.unwrap().abs() < 1e-10);
    }

    #[test]
    fn late_window_is_flagged_non_conclusive() {
        let g = long_grid();
        // (L/10)^α with L = 200π, α = 1: ≈ 62.8; end far beyond it
        let times = geometric_times(1.0, 1.0e4, 16);
        let bound = BoundSpec {
            q: 1.0,
            data: BoundData::Profile,
        };
        let norm = DecayNorm::gradient(Exponent::Infinity);
        let scan = decay_scan(&Profile::gaussian(1.0, 1.0), &g, 1.0, norm, &times, bound).unwrap();
        assert!(!scan.valid);
        assert!(scan.valid_mask[0] && !scan.valid_mask[15]);
    }

    #[test]
    fn bound_exponents() {
        let grad_inv_alpha = DecayNorm::gradient(Exponent::Finite(2.0f64));
        let b = BoundSpec {
            q: 1.0,
            data: BoundData::Gradient,
        };
        // −(1/α)(1/q − α) at α = 1/2, q = 1
        assert!((b.exponent(0.5, &grad_inv_alpha).unwrap() + 1.0).abs() < 1e-15);
        let b2 = BoundSpec {
            q: 1.5,
            data: BoundData::Profile,
        };
        let sup = DecayNorm::<f64>::gradient(Exponent::Infinity);
        let e = b2.exponent(1.5, &sup).unwrap();
        assert!((e + (1.0 + 1.0 / 1.5) / 1.5).abs() < 1e-15);
        assert!(BoundSpec {
            q: 0.5,
            data: BoundData::Profile
        }
        .exponent(1.0, &sup)
        .is_err());
    }

    #[test]
    fn wide_profile_rejected() {
        let g = Arc::new(Grid1D::new(256, 20.0).unwrap());
        let times = geometric_times(1.0, 2.0, 4);
        let bound = BoundSpec {
            q: 1.0,
            data: BoundData::Profile,
        };
        let r = decay_scan(
            &Profile::gaussian(5.0, 1.0),
            &g,
            1.0,
            DecayNorm::MeanMagnitude,
            &times,
            bound,
        );
        assert!(r.is_err());
    }

    #[test]
    fn slope_of_exact_power_law() {
        let x = geometric_times(1.0, 50.0, 10);
        let y: Vec<f64> = x.iter().map(|t: &f64| 3.0 * t.powf(-1.7)).collect();
        assert!((log_log_slope(&x, &y).unwrap() + 1.7).abs() < 1e-12);
    }
}
