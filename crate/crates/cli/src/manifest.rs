use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use ipm_core::io::GridMeta;
use serde::Serialize;

/// Provenance of one invocation; written next to its outputs even when the
/// run aborts.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub version: &'static str,
    pub config_path: Option<PathBuf>,
    /// Verbatim config file.
    pub config_text: Option<String>,
    /// Command-line values that override the config.
    pub overrides: Vec<(String, String)>,
    /// Interpreted parameters, as the solver saw them.
    pub effective: Option<serde_json::Value>,
    pub grid: Option<GridMeta>,
    pub workers: usize,
    pub started_unix: f64,
    pub wall_seconds: f64,
    pub status: String,
    pub detail: Option<String>,
    pub outputs: Vec<String>,
    #[serde(skip)]
    clock: Option<Instant>,
    #[serde(skip)]
    pub out_dir: Option<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &'static str) -> Self {
        let started_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs_f64())
            .unwrap_or(0.0);
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            config_path: None,
            config_text: None,
            overrides: vec![],
            effective: None,
            grid: None,
            workers: rayon::current_num_threads(),
            started_unix,
            wall_seconds: 0.0,
            status: "running".into(),
            detail: None,
            outputs: vec![],
            clock: Some(Instant::now()),
            out_dir: None,
        }
    }

    pub fn effective<S: Serialize>(&mut self, value: &S) {
        self.effective = serde_json::to_value(value).ok();
    }

    /// Records `name` (relative to the output directory) as produced.
    pub fn output(&mut self, name: impl Into<String>) {
        self.outputs.push(name.into());
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.as_deref().unwrap_or(Path::new(".")).join(name)
    }

    pub fn finish(&mut self, status: &str, detail: Option<String>) -> Result<()> {
        self.status = status.to_string();
        self.detail = detail;
        if let Some(c) = self.clock {
            self.wall_seconds = c.elapsed().as_secs_f64();
        }
        let Some(dir) = self.out_dir.clone() else {
            return Ok(());
        };
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}
