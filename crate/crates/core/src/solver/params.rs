use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dissipation regime relative to the transport scaling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `0 < α < 1` with `s = 2 − α`.
    Supercritical,
    /// `1 ≤ α < 2` with `s ≥ 1`.
    Subcritical,
}

impl Regime {
    pub fn for_alpha<T: Real>(alpha: T) -> Self {
        if alpha < T::one() {
            Regime::Supercritical
        } else {
            Regime::Subcritical
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Supercritical => "supercritical",
            Regime::Subcritical => "subcritical",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "supercritical" => Ok(Regime::Supercritical),
            "subcritical" => Ok(Regime::Subcritical),
            other => Err(Error::param("regime", format!("unknown regime `{other}`"))),
        }
    }
}

/// Which unknown is time-stepped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Evolution {
    /// Perturbation `ρ1` stepped, background `ρ0` propagated exactly.
    Decomposed,
    /// Total density `ρ` stepped directly.
    Full,
}

impl Evolution {
    pub fn as_str(self) -> &'static str {
        match self {
            Evolution::Decomposed => "decomposed",
            Evolution::Full => "full",
        }
    }
}

impl FromStr for Evolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "decomposed" => Ok(Evolution::Decomposed),
            "full" => Ok(Evolution::Full),
            other => Err(Error::param("mode", format!("unknown mode `{other}`"))),
        }
    }
}

/// Model and numerics parameters of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamSet<T> {
    pub alpha: T,
    pub s: T,
    pub regime: Regime,
    /// `‖g‖_{H^s}` of the initial perturbation.
    pub epsilon: T,
    pub q: T,
    pub p: T,
    pub cfl: T,
    pub dealias: T,
    pub t_end: T,
    pub sample_dt: T,
    /// Upper bound on the time step; the advective CFL limit may cut it further.
    #[serde(rename = "dt")]
    pub dt_max: T,
}

impl<T: Real> ParamSet<T> {
    /// Defaults for a given `α`: regime from `α`, `s = 2 − α` or `1`,
    /// `q = 1`, `p = 4`, CFL 0.5, 2/3 truncation.
    pub fn for_alpha(alpha: T) -> Self {
        let regime = Regime::for_alpha(alpha);
        let s = match regime {
            Regime::Supercritical => T::lit(2.0) - alpha,
            Regime::Subcritical => T::one(),
        };
        Self {
            alpha,
            s,
            regime,
            epsilon: T::lit(1e-3),
            q: T::one(),
            p: T::lit(4.0),
            cfl: T::lit(0.5),
            dealias: T::lit(2.0 / 3.0),
            t_end: T::one(),
            sample_dt: T::lit(0.1),
            dt_max: T::lit(1e-2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (a, s, q, p) = (self.alpha, self.s, self.q, self.p);
        if !(a > T::zero() && a < T::lit(2.0)) {
            return Err(Error::param("alpha", "alpha out of (0,2)"));
        }
        if !(p >= T::lit(2.0)) || !p.is_finite() {
            return Err(Error::param("p", "p must lie in [2, inf)"));
        }
        if !(q >= T::one()) {
            return Err(Error::param("q", "q must be at least 1"));
        }
        match self.regime {
            Regime::Supercritical => {
                if a >= T::one() {
                    return Err(Error::param(
                        "regime",
                        "supercritical regime requires alpha < 1",
                    ));
                }
                if (s - (T::lit(2.0) - a)).abs() > T::lit(1e-12) {
                    return Err(Error::param(
                        "s",
                        "supercritical regime requires s = 2 - alpha",
                    ));
                }
                if q >= T::one() / a {
                    return Err(Error::param(
                        "q",
                        "supercritical regime requires q in [1, 1/alpha)",
                    ));
                }
            }
            Regime::Subcritical => {
                if a < T::one() {
                    return Err(Error::param(
                        "regime",
                        "subcritical regime requires alpha >= 1",
                    ));
                }
                if !(s >= T::one()) {
                    return Err(Error::param("s", "subcritical regime requires s >= 1"));
                }
                if a > T::one() && q >= T::one() / (a - T::one()) {
                    return Err(Error::param(
                        "q",
                        "subcritical regime requires q in [1, 1/(alpha-1))",
                    ));
                }
                if q > p {
                    return Err(Error::param("q", "subcritical regime requires q <= p"));
                }
            }
        }
        if !(self.epsilon >= T::zero()) || !self.epsilon.is_finite() {
            return Err(Error::param("epsilon", "must be finite and non-negative"));
        }
        if !(self.cfl > T::zero() && self.cfl < T::one()) {
            return Err(Error::param("cfl", "must lie in (0, 1)"));
        }
        if !(self.dealias > T::zero() && self.dealias <= T::one()) {
            return Err(Error::param("dealias", "must lie in (0, 1]"));
        }
        for (key, v) in [
            ("t_end", self.t_end),
            ("sample_dt", self.sample_dt),
            ("dt", self.dt_max),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::param(key, "must be positive and finite"));
            }
        }
        Ok(())
    }
}
