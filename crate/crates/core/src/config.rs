//! Flat `key = value` configuration files.
//!
//! `#` starts a comment, blank lines are ignored, and `sweep.<key> = a, b, c`
//! declares a parameter list for sweeps. Numbers may be written as products
//! with `pi` or `tau`, e.g. `L2 = 2*pi*20`.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::heat1d::{geometric_times, BoundData, BoundSpec, DecayNorm, Profile, ProfileName};
use crate::solver::{Evolution, ParamSet, Perturbation, Regime, RunOptions, RunSetup};
use crate::spectral::Exponent;

const RUN_KEYS: &[&str] = &[
    "alpha",
    "s",
    "regime",
    "epsilon",
    "q",
    "p",
    "n1",
    "n2",
    "L1",
    "L2",
    "cfl",
    "dealias",
    "t_end",
    "sample_dt",
    "dt",
    "profile",
    "profile_width",
    "profile_amplitude",
    "profile_wavenumber",
    "profile_center",
    "seed",
    "kmax",
    "perturbation_decay",
    "mode",
    "output_dir",
    "energy_probe",
    "checkpoint_every",
    "threshold",
    "epsilon1",
    "max_cells",
];

const DECAY_KEYS: &[&str] = &[
    "alpha",
    "n",
    "L",
    "profile",
    "profile_width",
    "profile_amplitude",
    "profile_wavenumber",
    "norm",
    "frac",
    "lp",
    "t_start",
    "t_stop",
    "count",
    "bound_q",
    "bound_data",
    "output_dir",
];

#[derive(Clone, Debug, PartialEq)]
struct Entry {
    line: usize,
    value: String,
}

/// Parsed but uninterpreted configuration.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, Entry>,
    sweeps: Vec<(String, Vec<String>)>,
}

/// Real number, optionally a `*`-product of literals and `pi`/`tau`.
pub fn parse_real(text: &str) -> Option<f64> {
    text.split('*')
        .map(|f| match f.trim() {
            "pi" => Some(std::f64::consts::PI),
            "tau" => Some(std::f64::consts::TAU),
            lit => lit.parse::<f64>().ok(),
        })
        .try_fold(1.0, |acc, v| v.map(|v| acc * v))
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(Error::Parse {
                    line,
                    reason: format!("expected `key = value`, found `{body}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(Error::Parse {
                    line,
                    reason: "empty key".into(),
                });
            }
            if let Some(swept) = key.strip_prefix("sweep.") {
                let items: Vec<String> = value.split(',').map(|v| v.trim().to_string()).collect();
                if items.iter().any(|v| v.is_empty()) {
                    return Err(Error::Parse {
                        line,
                        reason: format!("empty entry in sweep list for `{swept}`"),
                    });
                }
                if out.sweeps.iter().any(|(k, _)| k == swept) {
                    return Err(Error::Parse {
                        line,
                        reason: format!("sweep over `{swept}` declared twice"),
                    });
                }
                out.sweeps.push((swept.to_string(), items));
                continue;
            }
            if out.values.contains_key(key) {
                return Err(Error::Parse {
                    line,
                    reason: format!("duplicate key `{key}`"),
                });
            }
            out.values.insert(
                key.to_string(),
                Entry {
                    line,
                    value: value.to_string(),
                },
            );
        }
        Ok(out)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|e| e.value.as_str())
    }

    /// Sets or replaces a value (command-line overrides, sweep cells).
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let line = self.values.get(key).map_or(0, |e| e.line);
        self.values.insert(
            key.to_string(),
            Entry {
                line,
                value: value.into(),
            },
        );
    }

    pub fn sweep_axes(&self) -> &[(String, Vec<String>)] {
        &self.sweeps
    }

    /// Cartesian product of the sweep lists, first axis slowest.
    pub fn sweep_cells(&self, cap: usize) -> Result<Vec<Vec<(String, String)>>> {
        let total = self.sweeps.iter().map(|(_, v)| v.len()).product::<usize>();
        if total > cap {
            return Err(Error::param(
                "max_cells",
                format!("sweep has {total} cells, cap is {cap}"),
            ));
        }
        let mut cells: Vec<Vec<(String, String)>> = vec![vec![]];
        for (key, values) in &self.sweeps {
            cells = cells
                .into_iter()
                .flat_map(|cell| {
                    values.iter().map(move |v| {
                        let mut c = cell.clone();
                        c.push((key.clone(), v.clone()));
                        c
                    })
                })
                .collect();
        }
        Ok(cells)
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (key, e) in &self.values {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: e.line,
                    reason: format!("unknown key `{key}`"),
                });
            }
        }
        for (key, _) in &self.sweeps {
            if !allowed.contains(&key.as_str()) || key == "output_dir" {
                return Err(Error::param(format!("sweep.{key}"), "not a sweepable key"));
            }
        }
        Ok(())
    }

    fn typed<V: FromStr>(&self, key: &str) -> Result<Option<V>> {
        self.get(key)
            .map(|v| {
                v.parse::<V>()
                    .map_err(|_| Error::param(key, format!("cannot parse `{v}`")))
            })
            .transpose()
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        self.get(key)
            .map(|v| {
                parse_real(v).ok_or_else(|| Error::param(key, format!("`{v}` is not a number")))
            })
            .transpose()
    }

    fn real_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.real(key)?.unwrap_or(default))
    }

    fn profile(&self, default_width: f64) -> Result<Profile<f64>> {
        let name: ProfileName = self.get("profile").unwrap_or("gaussian").parse()?;
        let width = self.real_or("profile_width", default_width)?;
        let wavenumber = self.real_or("profile_wavenumber", 4.0)?;
        let mut profile = Profile::new(
            name.with_width(width, wavenumber),
            self.real_or("profile_amplitude", 1.0)?,
        );
        profile.center = self.real("profile_center")?;
        profile.validate()?;
        Ok(profile)
    }
}

/// Fully interpreted `simulate` / `compare` / `sweep` configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub setup: RunSetup<f64>,
    pub output_dir: Option<PathBuf>,
    pub checkpoint_every: usize,
    /// Background smallness `ε₂` that defines the empirical `t₁`.
    pub threshold: f64,
    /// `ε₁` in `‖Λ^sρ1‖ ≤ ε₁`.
    pub epsilon1: f64,
    pub max_cells: usize,
}

impl RunConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        raw.check_keys(RUN_KEYS)?;
        let alpha = raw.real_or("alpha", 1.5)?;
        let regime = match raw.get("regime") {
            Some(r) => r.parse()?,
            None => Regime::for_alpha(alpha),
        };
        let mut params = ParamSet::for_alpha(alpha);
        params.regime = regime;
        params.s = raw.real("s")?.unwrap_or(match regime {
            Regime::Supercritical => 2.0 - alpha,
            Regime::Subcritical => 1.0,
        });
        params.epsilon = raw.real_or("epsilon", params.epsilon)?;
        params.q = raw.real_or("q", params.q)?;
        params.p = raw.real_or("p", params.p)?;
        params.cfl = raw.real_or("cfl", params.cfl)?;
        params.dealias = raw.real_or("dealias", params.dealias)?;
        params.t_end = raw.real_or("t_end", params.t_end)?;
        params.sample_dt = raw.real_or("sample_dt", params.sample_dt)?;
        params.dt_max = raw.real_or("dt", params.dt_max)?;
        params.validate()?;

        let n1: usize = raw.typed("n1")?.unwrap_or(256);
        let n2: usize = raw.typed("n2")?.unwrap_or(n1);
        let l1 = raw.real_or("L1", std::f64::consts::TAU)?;
        let l2 = raw.real_or("L2", l1)?;
        let energy_probe = match raw.get("energy_probe") {
            Some("none") | Some("off") => None,
            _ => Some(raw.real_or("energy_probe", 1e-3)?),
        };
        if let Some(h) = energy_probe {
            if !(h > 0.0) {
                return Err(Error::param("energy_probe", "must be positive or `none`"));
            }
        }
        let setup = RunSetup {
            params,
            n1,
            n2,
            l1,
            l2,
            profile: raw.profile(0.5)?,
            perturbation: Perturbation {
                kmax: raw.typed("kmax")?.unwrap_or(4),
                decay: raw.real_or("perturbation_decay", 1.0)?,
                seed: raw.typed("seed")?.unwrap_or(0),
            },
            mode: match raw.get("mode") {
                Some(m) => Evolution::from_str(m)?,
                None => Evolution::Decomposed,
            },
            options: RunOptions {
                energy_probe,
                keep_states: false,
                checkpoint: None,
            },
        };
        let cfg = Self {
            setup,
            output_dir: raw.get("output_dir").map(PathBuf::from),
            checkpoint_every: raw.typed("checkpoint_every")?.unwrap_or(0),
            threshold: raw.real_or("threshold", 0.1)?,
            epsilon1: raw.real_or("epsilon1", 1.0)?,
            max_cells: raw.typed("max_cells")?.unwrap_or(64),
        };
        if !(cfg.threshold >= 0.0) {
            return Err(Error::param("threshold", "must be non-negative"));
        }
        if cfg.max_cells == 0 {
            return Err(Error::param("max_cells", "must be at least 1"));
        }
        Ok(cfg)
    }
}

/// Interpreted `decay-scan` configuration.
#[derive(Clone, Debug)]
pub struct DecayScanConfig {
    pub alpha: f64,
    pub n: usize,
    pub length: f64,
    pub profile: Profile<f64>,
    pub norm: DecayNorm<f64>,
    pub times: Vec<f64>,
    pub bounds: Vec<BoundSpec<f64>>,
    pub output_dir: Option<PathBuf>,
}

impl DecayScanConfig {
    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_raw(&RawConfig::parse(text)?)
    }

    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        raw.check_keys(DECAY_KEYS)?;
        let alpha = raw.real_or("alpha", 0.5)?;
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::param("alpha", "alpha out of (0,2]"));
        }
        let n: usize = raw.typed("n")?.unwrap_or(16384);
        let length = raw.real_or("L", std::f64::consts::TAU * 200.0)?;
        let profile = raw.profile(1.0)?;
        let lp = match raw.get("lp") {
            None if alpha < 1.0 => Exponent::finite(1.0 / alpha)?,
            None | Some("inf") => Exponent::Infinity,
            Some("1/alpha") => Exponent::finite(1.0 / alpha)
                .map_err(|_| Error::param("lp", "1/alpha is below 1 for this alpha"))?,
            Some(v) => Exponent::finite(
                parse_real(v)
                    .ok_or_else(|| Error::param("lp", format!("`{v}` is not an exponent")))?,
            )
            .map_err(|_| Error::param("lp", "exponent must be at least 1"))?,
        };
        let frac = raw.real_or("frac", 0.0)?;
        if !(frac >= 0.0) {
            return Err(Error::param("frac", "must be non-negative"));
        }
        let norm = match raw.get("norm").unwrap_or("gradient") {
            "gradient" => DecayNorm::Lp {
                derivative: true,
                frac,
                p: lp,
            },
            "value" => DecayNorm::Lp {
                derivative: false,
                frac,
                p: lp,
            },
            "mean" => DecayNorm::MeanMagnitude,
            other => return Err(Error::param("norm", format!("unknown norm `{other}`"))),
        };
        let t_start = raw.real_or("t_start", (4.0 * profile.width()).powf(alpha))?;
        let t_stop = raw.real_or("t_stop", (length / 10.0).powf(alpha))?;
        let count: usize = raw.typed("count")?.unwrap_or(40);
        if !(t_start > 0.0 && t_stop > t_start) || count < 2 {
            return Err(Error::param(
                "t_start",
                "need 0 < t_start < t_stop and count >= 2",
            ));
        }
        let data = match raw.get("bound_data").unwrap_or("profile") {
            "profile" => BoundData::Profile,
            "gradient" => BoundData::Gradient,
            other => {
                return Err(Error::param(
                    "bound_data",
                    format!("unknown datum `{other}`"),
                ))
            }
        };
        let bounds = raw
            .get("bound_q")
            .unwrap_or("1")
            .split(',')
            .map(|v| {
                let q = parse_real(v.trim())
                    .ok_or_else(|| Error::param("bound_q", format!("`{v}` is not a number")))?;
                let spec = BoundSpec { q, data };
                spec.exponent(alpha, &norm)?;
                Ok(spec)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha,
            n,
            length,
            profile,
            norm,
            times: geometric_times(t_start, t_stop, count),
            bounds,
            output_dir: raw.get("output_dir").map(PathBuf::from),
        })
    }
}
