use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use ipm_core::config::RunConfig;
use ipm_core::io::{fmt_real, write_json, GridMeta};
use ipm_core::solver::{compare_modes, self_convergence};
use serde_json::json;

use super::{apply_seed, finish, load_config, output_root, Global, Outcome};
use crate::manifest::RunManifest;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Configuration file (`key = value` lines)
    #[arg(long)]
    pub config: PathBuf,
    /// Also repeat the run at dt, dt/2, dt/4 and report the observed order
    #[arg(long)]
    pub richardson: bool,
    /// Fail (exit 3) when the full/decomposed difference exceeds this
    #[arg(long)]
    pub tolerance: Option<f64>,
}

pub fn run(args: &Args, global: &Global) -> Result<Outcome> {
    let mut manifest = RunManifest::new("compare");
    manifest.config_path = Some(args.config.clone());
    let result = body(args, global, &mut manifest);
    finish(&mut manifest, result)
}

fn body(args: &Args, global: &Global, manifest: &mut RunManifest) -> Result<Outcome> {
    let (text, mut raw) = load_config(&args.config)?;
    manifest.config_text = Some(text);
    manifest.out_dir = Some(output_root(global, raw.get("output_dir")));
    apply_seed(global, &mut raw, manifest);
    let cfg = RunConfig::from_raw(&raw)?;
    let setup = &cfg.setup;
    manifest.grid = Some(GridMeta {
        n1: setup.n1,
        n2: setup.n2,
        l1: setup.l1,
        l2: setup.l2,
    });
    manifest.effective(&json!({ "params": setup.params, "seed": setup.perturbation.seed }));
    let dir = manifest.path("");
    std::fs::create_dir_all(&dir)?;

    let cmp = compare_modes(setup)?;
    let mut csv = String::from("t,hs_difference\n");
    for (t, d) in cmp.times.iter().zip(&cmp.hs_difference) {
        let _ = writeln!(csv, "{},{}", fmt_real(*t), fmt_real(*d));
    }
    std::fs::write(dir.join("compare.csv"), csv)?;
    manifest.output("compare.csv");
    global.say(format!(
        "max_t ‖ρ_full − ρ_split‖_Hs = {}",
        fmt_real(cmp.max_hs_difference)
    ));

    let richardson = if args.richardson {
        let r = self_convergence(setup, setup.params.dt_max)?;
        global.say(format!(
            "self-convergence at dt = {}: {} / {} = {:.3} (order {:.2})",
            r.dt,
            fmt_real(r.coarse),
            fmt_real(r.fine),
            r.ratio,
            r.observed_order
        ));
        Some(r)
    } else {
        None
    };
    write_json(
        &dir.join("compare.json"),
        &json!({
            "max_hs_difference": cmp.max_hs_difference,
            "self_convergence": richardson,
        }),
    )?;
    manifest.output("compare.json");

    match args.tolerance {
        Some(tol) if !(cmp.max_hs_difference <= tol) => Ok(Outcome::CheckFailed(format!(
            "mode difference {} exceeds {tol}",
            cmp.max_hs_difference
        ))),
        _ => Ok(Outcome::Success),
    }
}
