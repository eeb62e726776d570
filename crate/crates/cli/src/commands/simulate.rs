use std::path::PathBuf;

use anyhow::{Context, Result};
use ipm_core::config::RunConfig;
use ipm_core::diagnostics::{summarize, RunSummary};
use ipm_core::io::{fmt_real, write_json, write_records_csv, GridMeta};
use ipm_core::solver::{run as run_setup, CheckpointPlan, Evolution};
use serde_json::json;

use super::{apply_seed, finish, load_config, output_root, Global, Outcome};
use crate::manifest::RunManifest;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Configuration file (`key = value` lines)
    #[arg(long)]
    pub config: PathBuf,
    /// Evolve the total density instead of the background/perturbation split
    #[arg(long)]
    pub full: bool,
}

pub fn run(args: &Args, global: &Global) -> Result<Outcome> {
    let mut manifest = RunManifest::new("simulate");
    manifest.config_path = Some(args.config.clone());
    let result = body(args, global, &mut manifest);
    finish(&mut manifest, result)
}

fn body(args: &Args, global: &Global, manifest: &mut RunManifest) -> Result<Outcome> {
    let (text, mut raw) = load_config(&args.config)?;
    manifest.config_text = Some(text);
    manifest.out_dir = Some(output_root(global, raw.get("output_dir")));
    apply_seed(global, &mut raw, manifest);
    if args.full {
        raw.set("mode", "full");
        manifest.overrides.push(("mode".into(), "full".into()));
    }
    let cfg = RunConfig::from_raw(&raw)?;
    Ok(execute(&cfg, manifest, global)?.0)
}

/// Runs `cfg` into `manifest.out_dir`, writing `diagnostics.csv`,
/// `summary.json` and any checkpoints.
pub fn execute(
    cfg: &RunConfig,
    manifest: &mut RunManifest,
    global: &Global,
) -> Result<(Outcome, RunSummary<f64>)> {
    let dir = manifest.path("");
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut setup = cfg.setup.clone();
    if cfg.checkpoint_every > 0 {
        let ck = dir.join("checkpoints");
        std::fs::create_dir_all(&ck)?;
        setup.options.checkpoint = Some(CheckpointPlan {
            dir: ck,
            every: cfg.checkpoint_every,
        });
    }
    manifest.grid = Some(GridMeta {
        n1: setup.n1,
        n2: setup.n2,
        l1: setup.l1,
        l2: setup.l2,
    });
    manifest.effective(&json!({
        "params": setup.params,
        "mode": setup.mode,
        "profile": format!("{:?}", setup.profile),
        "perturbation": {
            "kmax": setup.perturbation.kmax,
            "decay": setup.perturbation.decay,
            "seed": setup.perturbation.seed,
        },
        "energy_probe": setup.options.energy_probe,
        "checkpoint_every": cfg.checkpoint_every,
        "threshold": cfg.threshold,
        "epsilon1": cfg.epsilon1,
    }));
    global.say(format!(
        "{} run: alpha = {}, s = {}, eps = {}, grid {}x{}, t_end = {}",
        setup.mode.as_str(),
        setup.params.alpha,
        setup.params.s,
        setup.params.epsilon,
        setup.n1,
        setup.n2,
        setup.params.t_end,
    ));

    let traj = run_setup(&setup)?;
    write_records_csv(&dir.join("diagnostics.csv"), &traj.records)?;
    manifest.output("diagnostics.csv");
    for c in &traj.checkpoints {
        for p in [&c.data, &c.sidecar] {
            if let Ok(rel) = p.strip_prefix(&dir) {
                manifest.output(rel.display().to_string());
            }
        }
    }
    let summary = summarize(&traj, setup.params.epsilon, cfg.threshold, cfg.epsilon1);
    write_json(&dir.join("summary.json"), &summary)?;
    manifest.output("summary.json");

    global.say(format!(
        "{} at t = {} after {} steps; ‖ρ1‖_Hs {} -> {} (peak {})",
        summary.termination,
        summary.t_final,
        summary.steps,
        fmt_real(summary.hs_initial),
        fmt_real(summary.hs_final),
        fmt_real(summary.hs_peak),
    ));
    if let Some(r) = summary.max_energy_residual {
        global.say(format!("max energy residual {}", fmt_real(r)));
    }
    if setup.mode == Evolution::Decomposed {
        global.say(format!(
            "t1 = {:?}, monotone after t1: {}",
            summary.threshold.t1, summary.threshold.monotone_after_t1
        ));
    }

    let outcome = if traj.termination.is_abort() {
        Outcome::Aborted(
            summary
                .detail
                .clone()
                .unwrap_or_else(|| summary.termination.to_string()),
        )
    } else {
        let failures = summary.check_failures();
        if failures.is_empty() {
            Outcome::Success
        } else {
            Outcome::CheckFailed(failures.join("; "))
        }
    };
    Ok((outcome, summary))
}
