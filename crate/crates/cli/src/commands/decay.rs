use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Result;
use ipm_core::config::DecayScanConfig;
use ipm_core::heat1d::{decay_scan, BoundEnvelope};
use ipm_core::io::{decay_scan_to_csv, write_json};
use ipm_core::spectral::Grid1D;
use serde::Serialize;
use serde_json::json;

use super::{finish, load_config, output_root, Global, Outcome};
use crate::manifest::RunManifest;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Configuration file (`key = value` lines)
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Serialize)]
struct DecaySummary<'a> {
    alpha: f64,
    norm: String,
    n: usize,
    length: f64,
    profile: String,
    t_start: f64,
    t_stop: f64,
    /// Last sample satisfies `t^{1/α} ≤ L/10`.
    conclusive: bool,
    fit_window: Option<(f64, f64)>,
    slope: Option<f64>,
    self_similar_exponent: f64,
    slope_error: Option<f64>,
    bounds: &'a [BoundEnvelope<f64>],
}

pub fn run(args: &Args, global: &Global) -> Result<Outcome> {
    let mut manifest = RunManifest::new("decay-scan");
    manifest.config_path = Some(args.config.clone());
    let result = body(args, global, &mut manifest);
    finish(&mut manifest, result)
}

fn body(args: &Args, global: &Global, manifest: &mut RunManifest) -> Result<Outcome> {
    let (text, raw) = load_config(&args.config)?;
    manifest.config_text = Some(text);
    manifest.out_dir = Some(output_root(global, raw.get("output_dir")));
    let cfg = DecayScanConfig::from_raw(&raw)?;
    manifest.effective(&json!({
        "alpha": cfg.alpha,
        "n": cfg.n,
        "L": cfg.length,
        "profile": format!("{:?}", cfg.profile),
        "norm": format!("{:?}", cfg.norm),
        "times": cfg.times,
        "bounds": cfg.bounds.iter().map(|b| json!({"q": b.q, "data": b.data})).collect::<Vec<_>>(),
    }));
    let dir = manifest.path("");
    std::fs::create_dir_all(&dir)?;

    let grid = Arc::new(Grid1D::new(cfg.n, cfg.length)?);
    let scan = decay_scan(
        &cfg.profile,
        &grid,
        cfg.alpha,
        cfg.norm,
        &cfg.times,
        cfg.bounds[0],
    )?;
    let mut envelopes = vec![scan.bound.clone()];
    for b in &cfg.bounds[1..] {
        envelopes.push(scan.envelope(*b)?);
    }
    std::fs::write(dir.join("decay_scan.csv"), decay_scan_to_csv(&scan))?;
    manifest.output("decay_scan.csv");
    let summary = DecaySummary {
        alpha: cfg.alpha,
        norm: format!("{:?}", cfg.norm),
        n: cfg.n,
        length: cfg.length,
        profile: format!("{:?}", cfg.profile),
        t_start: cfg.times[0],
        t_stop: *cfg.times.last().unwrap(),
        conclusive: scan.valid,
        fit_window: scan
            .fit_window
            .map(|(a, b)| (scan.times[a], scan.times[b - 1])),
        slope: scan.slope,
        self_similar_exponent: scan.self_similar_exponent,
        slope_error: scan.slope_error(scan.self_similar_exponent),
        bounds: &envelopes,
    };
    write_json(&dir.join("decay_summary.json"), &summary)?;
    manifest.output("decay_summary.json");

    if !scan.valid {
        eprintln!(
            "warning: t_stop^(1/alpha) exceeds L/10; periodic images contaminate the tail and the scan is not conclusive"
        );
    }
    global.say(format!(
        "slope {:?} vs self-similar {:.6} (relative error {:?})",
        scan.slope, scan.self_similar_exponent, summary.slope_error
    ));
    let mut broken = vec![];
    for e in &envelopes {
        global.say(format!(
            "bound q = {} ({:?} data): t^{:.6}, C = {:.6e}, holds: {}",
            e.q, e.data, e.exponent, e.constant, e.holds
        ));
        if !e.holds {
            broken.push(format!("q = {}", e.q));
        }
    }
    if broken.is_empty() || !scan.valid {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::CheckFailed(format!(
            "decay envelope exceeded for {}",
            broken.join(", ")
        )))
    }
}
