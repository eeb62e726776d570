use anyhow::Result;
use ipm_core::battery::{run_battery, BatteryConfig, Fault};
use ipm_core::io::write_json;

use super::{finish, output_root, Global, Outcome};
use crate::manifest::RunManifest;

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Grid points per direction
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    /// Random fields per identity
    #[arg(long, default_value_t = 100)]
    pub fields: usize,
    /// Deliberately break one operator (self-test of the battery)
    #[arg(long, hide = true)]
    pub inject_fault: Option<Fault>,
    /// Also write `opcheck.json` (under --out / $IPM_OUT_DIR / ./ipm-out)
    #[arg(long)]
    pub report: bool,
}

pub fn run(args: &Args, global: &Global) -> Result<Outcome> {
    let mut manifest = RunManifest::new("opcheck");
    if args.report || global.out.is_some() {
        manifest.out_dir = Some(output_root(global, None));
    }
    let result = body(args, global, &mut manifest);
    finish(&mut manifest, result)
}

fn body(args: &Args, global: &Global, manifest: &mut RunManifest) -> Result<Outcome> {
    let cfg = BatteryConfig {
        n: args.n,
        fields: args.fields,
        seed: global.seed.unwrap_or(0),
        fault: args.inject_fault,
    };
    if let Some(f) = cfg.fault {
        manifest
            .overrides
            .push(("inject_fault".into(), format!("{f:?}")));
    }
    let report = run_battery(&cfg)?;
    for c in &report.checks {
        global.say(c);
    }
    global.say(format!(
        "{} identities, {} fields on {}x{}, {:.2}s",
        report.checks.len(),
        report.fields,
        report.n,
        report.n,
        report.seconds
    ));
    if manifest.out_dir.is_some() {
        std::fs::create_dir_all(manifest.path(""))?;
        write_json(&manifest.path("opcheck.json"), &report)?;
        manifest.output("opcheck.json");
    }
    let failures = report.failures();
    if failures.is_empty() {
        Ok(Outcome::Success)
    } else {
        Ok(Outcome::CheckFailed(format!(
            "identities failed: {}",
            failures.join(", ")
        )))
    }
}
