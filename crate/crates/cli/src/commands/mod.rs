pub mod compare;
pub mod decay;
pub mod opcheck;
pub mod simulate;
pub mod sweep;

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::Result;
use ipm_core::config::RawConfig;

use crate::manifest::RunManifest;

pub const ENV_OUT_DIR: &str = "IPM_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "ipm-out";

/// Flags shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Global {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub quiet: bool,
}

impl Global {
    pub fn say(&self, msg: impl fmt::Display) {
        if !self.quiet {
            println!("{msg}");
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Success,
    /// The run stopped early (blow-up, exhausted resolution).
    Aborted(String),
    /// Everything ran, but a verification check did not hold.
    CheckFailed(String),
    /// Bad input discovered after outputs were already started.
    Invalid(String),
}

impl Outcome {
    pub fn status(&self) -> (&'static str, Option<String>) {
        match self {
            Outcome::Success => ("completed", None),
            Outcome::Aborted(m) => ("aborted", Some(m.clone())),
            Outcome::CheckFailed(m) => ("check-failed", Some(m.clone())),
            Outcome::Invalid(m) => ("invalid", Some(m.clone())),
        }
    }
}

/// Marker for user-input errors that do not originate in the library.
#[derive(Debug)]
pub struct Invalid(pub String);

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

/// True when the error chain is a validation problem rather than a runtime one.
pub fn is_invalid(err: &anyhow::Error) -> bool {
    use ipm_core::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<Invalid>().is_some() {
            return true;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return matches!(
                e,
                E::InvalidGrid(_)
                    | E::OutOfRange { .. }
                    | E::GridMismatch(_)
                    | E::InvalidParameter { .. }
                    | E::Parse { .. }
            );
        }
    }
    false
}

pub fn load_config(path: &Path) -> Result<(String, RawConfig)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Invalid(format!("cannot read config {}: {e}", path.display())))?;
    let raw = RawConfig::parse(&text)?;
    Ok((text, raw))
}

/// `--out`, then the config's `output_dir`, then `$IPM_OUT_DIR`, then `./ipm-out`.
pub fn output_root(global: &Global, from_config: Option<&str>) -> PathBuf {
    if let Some(p) = &global.out {
        return p.clone();
    }
    if let Some(p) = from_config {
        return PathBuf::from(p);
    }
    match std::env::var_os(ENV_OUT_DIR) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(DEFAULT_OUT_DIR),
    }
}

pub fn apply_seed(global: &Global, raw: &mut RawConfig, manifest: &mut RunManifest) {
    if let Some(seed) = global.seed {
        raw.set("seed", seed.to_string());
        manifest.overrides.push(("seed".into(), seed.to_string()));
    }
}

/// Writes the manifest whatever happened, then hands the result back.
pub fn finish(manifest: &mut RunManifest, result: Result<Outcome>) -> Result<Outcome> {
    let (status, detail) = match &result {
        Ok(o) => o.status(),
        Err(e) if is_invalid(e) => ("invalid", Some(format!("{e:#}"))),
        Err(e) => ("error", Some(format!("{e:#}"))),
    };
    let written = manifest.finish(status, detail);
    match (result, written) {
        (Ok(o), Ok(())) => Ok(o),
        (Ok(_), Err(w)) => Err(w),
        (Err(e), _) => Err(e),
    }
}
