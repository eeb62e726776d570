use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use ipm_core::config::{parse_real, RawConfig, RunConfig};
use ipm_core::diagnostics::RunSummary;
use ipm_core::io::fmt_real;
use rayon::prelude::*;

use super::simulate::execute;
use super::{apply_seed, finish, is_invalid, load_config, output_root, Global, Invalid, Outcome};
use crate::manifest::RunManifest;

const DEFAULT_MAX_CELLS: usize = 64;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Configuration file with one or more `sweep.<key> = a, b, ...` lines
    #[arg(long)]
    pub config: PathBuf,
}

struct CellResult {
    name: String,
    overrides: Vec<(String, String)>,
    status: &'static str,
    detail: Option<String>,
    summary: Option<RunSummary<f64>>,
}

pub fn run(args: &Args, global: &Global, workers: usize) -> Result<Outcome> {
    let mut manifest = RunManifest::new("sweep");
    manifest.config_path = Some(args.config.clone());
    let result = body(args, global, workers, &mut manifest);
    finish(&mut manifest, result)
}

fn max_cells(raw: &RawConfig) -> Result<usize> {
    match raw.get("max_cells") {
        None => Ok(DEFAULT_MAX_CELLS),
        Some(v) => {
            v.parse().ok().filter(|&n: &usize| n > 0).ok_or_else(|| {
                Invalid(format!("max_cells = `{v}` is not a positive integer")).into()
            })
        }
    }
}

fn body(
    args: &Args,
    global: &Global,
    workers: usize,
    manifest: &mut RunManifest,
) -> Result<Outcome> {
    let (text, mut raw) = load_config(&args.config)?;
    manifest.config_text = Some(text);
    let root = output_root(global, raw.get("output_dir"));
    manifest.out_dir = Some(root.clone());
    apply_seed(global, &mut raw, manifest);
    if raw.sweep_axes().is_empty() {
        return Err(Invalid("no `sweep.<key> = ...` lines in the config".into()).into());
    }
    let cells = raw.sweep_cells(max_cells(&raw)?)?;
    let axes: Vec<String> = raw.sweep_axes().iter().map(|(k, _)| k.clone()).collect();
    std::fs::create_dir_all(&root)?;
    global.say(format!("sweep: {} cells on {workers} workers", cells.len()));

    let quiet = Global {
        quiet: true,
        ..global.clone()
    };
    let results: Vec<CellResult> = cells
        .par_iter()
        .enumerate()
        .map(|(i, overrides)| run_cell(i, overrides, &raw, &root, &quiet))
        .collect();

    let mut csv = String::from("cell");
    for a in &axes {
        let _ = write!(csv, ",{a}");
    }
    csv.push_str(",status,t_final,hs_initial,hs_peak,hs_final,growth,max_energy_residual,gronwall_violated,t1,monotone_after_t1\n");
    let na = || "na".to_string();
    for r in &results {
        let _ = write!(csv, "{}", r.name);
        for (_, v) in &r.overrides {
            let cell = parse_real(v).map_or_else(|| v.clone(), fmt_real);
            let _ = write!(csv, ",{cell}");
        }
        let _ = write!(csv, ",{}", r.status);
        match &r.summary {
            Some(s) => {
                let _ = writeln!(
                    csv,
                    ",{},{},{},{},{},{},{},{},{}",
                    fmt_real(s.t_final),
                    fmt_real(s.hs_initial),
                    fmt_real(s.hs_peak),
                    fmt_real(s.hs_final),
                    s.growth.map_or_else(na, fmt_real),
                    s.max_energy_residual.map_or_else(na, fmt_real),
                    s.gronwall.violated,
                    s.threshold.t1.map_or_else(na, fmt_real),
                    s.threshold.monotone_after_t1,
                );
            }
            None => csv.push_str(",na,na,na,na,na,na,na,na,na\n"),
        }
        global.say(format!(
            "{}: {}{}",
            r.name,
            r.status,
            r.detail
                .as_deref()
                .map(|d| format!(" ({d})"))
                .unwrap_or_default()
        ));
        manifest.output(format!("{}/manifest.json", r.name));
    }
    std::fs::write(root.join("sweep.csv"), csv)?;
    manifest.output("sweep.csv");

    let count = |s: &str| results.iter().filter(|r| r.status == s).count();
    let n = results.len();
    let (bad, aborted, checks) = (
        count("invalid") + count("error"),
        count("aborted"),
        count("check-failed"),
    );
    Ok(if aborted > 0 {
        Outcome::Aborted(format!("{aborted} of {n} cells aborted"))
    } else if bad > 0 {
        Outcome::Invalid(format!("{bad} of {n} cells could not run"))
    } else if checks > 0 {
        Outcome::CheckFailed(format!("{checks} of {n} cells failed checks"))
    } else {
        Outcome::Success
    })
}

fn run_cell(
    index: usize,
    overrides: &[(String, String)],
    base: &RawConfig,
    root: &std::path::Path,
    global: &Global,
) -> CellResult {
    let name = format!("cell_{index:03}");
    let mut manifest = RunManifest::new("sweep-cell");
    manifest.out_dir = Some(root.join(&name));
    manifest.overrides = overrides.to_vec();
    let mut raw = base.clone();
    for (k, v) in overrides {
        raw.set(k, v.clone());
    }
    let mut summary = None;
    let result = RunConfig::from_raw(&raw)
        .map_err(anyhow::Error::from)
        .and_then(|cfg| {
            let (o, s) = execute(&cfg, &mut manifest, global)?;
            summary = Some(s);
            Ok(o)
        });
    let (status, detail) = match &result {
        Ok(o) => o.status(),
        Err(e) if is_invalid(e) => ("invalid", Some(format!("{e:#}"))),
        Err(e) => ("error", Some(format!("{e:#}"))),
    };
    if let Err(e) = manifest.finish(status, detail.clone()) {
        eprintln!("{name}: cannot write manifest: {e:#}");
    }
    CellResult {
        name,
        overrides: overrides.to_vec(),
        status,
        detail,
        summary,
    }
}
