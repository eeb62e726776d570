use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL: &str = "alpha = 1.5\nn1 = 32\nt_end = 0.3\nsample_dt = 0.1\n";

fn ipm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ipm"))
        .args(args)
        .current_dir(dir)
        .env_remove("IPM_OUT_DIR")
        .output()
        .expect("spawn ipm")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn simulate_writes_outputs_and_manifest() {
    let tmp = TempDir::new().unwrap();
    write(tmp.path(), "run.cfg", SMALL);
    let o = ipm(
        tmp.path(),
        &["simulate", "--config", "run.cfg", "--out", "a", "-q"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty(), "quiet mode prints nothing");
    let out = tmp.path().join("a");
    for f in ["diagnostics.csv", "summary.json", "manifest.json"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let m = manifest(&out);
    assert_eq!(m["status"], "completed");
    assert_eq!(m["grid"]["n1"], 32);
    assert_eq!(m["config_text"], SMALL);
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
    let csv = std::fs::read_to_string(out.join("diagnostics.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn identical_runs_are_byte_identical_and_seed_matters() {
    let tmp = TempDir::new().unwrap();
    write(tmp.path(), "run.cfg", SMALL);
    for (out, seed) in [("a", "5"), ("b", "5"), ("c", "6")] {
        let o = ipm(
            tmp.path(),
            &[
                "simulate", "--config", "run.cfg", "--out", out, "--seed", seed, "-q",
            ],
        );
        assert_eq!(o.status.code(), Some(0));
    }
    let read = |d: &str| std::fs::read(tmp.path().join(d).join("diagnostics.csv")).unwrap();
    assert_eq!(read("a"), read("b"));
    assert_ne!(read("a"), read("c"));
    let m = manifest(&tmp.path().join("c"));
    assert_eq!(m["overrides"][0][1], "6");
}

#[test]
fn validation_errors_exit_one_and_still_leave_a_manifest() {
    let tmp = TempDir::new().unwrap();
    write(tmp.path(), "bad.cfg", "alpha = 2.5\n");
    let o = ipm(
        tmp.path(),
        &["simulate", "--config", "bad.cfg", "--out", "bad"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("alpha out of (0,2)"), "{}", stderr(&o));
    assert_eq!(manifest(&tmp.path().join("bad"))["status"], "invalid");

    write(tmp.path(), "typo.cfg", "alpah = 1.5\n");
    let o = ipm(
        tmp.path(),
        &["simulate", "--config", "typo.cfg", "--out", "typo"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("alpah"));

    write(tmp.path(), "syntax.cfg", "alpha = 1.5\nno equals sign\n");
    let o = ipm(
        tmp.path(),
        &["simulate", "--config", "syntax.cfg", "--out", "syn"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));

    let o = ipm(
        tmp.path(),
        &["simulate", "--config", "missing.cfg", "--out", "m"],
    );
    assert_eq!(o.status.code(), Some(1));
    let o = ipm(tmp.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn runtime_abort_exits_two_with_manifest() {
    let tmp = TempDir::new().unwrap();
    write(tmp.path(), "huge.cfg", &format!("{SMALL}epsilon = 1e9\n"));
    let o = ipm(
        tmp.path(),
        &["simulate", "--config", "huge.cfg", "--out", "huge", "-q"],
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let m = manifest(&tmp.path().join("huge"));
    assert_eq!(m["status"], "aborted");
    // Partial diagnostics are kept.
    assert!(tmp.path().join("huge/diagnostics.csv").exists());
}

#[test]
fn output_directory_precedence() {
    let tmp = TempDir::new().unwrap();
    write(tmp.path(), "run.cfg", SMALL);
    let o = Command::new(env!("CARGO_BIN_EXE_ipm"))
        .args(["-q", "simulate", "--config", "run.cfg"])
        .current_dir(tmp.path())
        .env("IPM_OUT_DIR", "from-env")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(tmp.path().join("from-env/manifest.json").exists());

    write(
        tmp.path(),
        "cfgdir.cfg",
        &format!("{SMALL}output_dir = from-config\n"),
    );
    let o = Command::new(env!("CARGO_BIN_EXE_ipm"))
        .args(["-q", "simulate", "--config", "cfgdir.cfg"])
        .current_dir(tmp.path())
        .env("IPM_OUT_DIR", "from-env-2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(tmp.path().join("from-config/manifest.json").exists());
    assert!(!tmp.path().join("from-env-2").exists());
}

#[test]
fn opcheck_passes_and_detects_injected_faults() {
    let tmp = TempDir::new().unwrap();
    let o = ipm(tmp.path(), &["opcheck", "--n", "32", "--fields", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.matches("PASS").count(), 9, "{text}");

    for (fault, name) in [
        ("slice-symbol", "slice-identity"),
        ("product-symbol", "product-rule"),
        ("velocity-symbol", "divergence-free"),
    ] {
        let o = ipm(
            tmp.path(),
            &[
                "opcheck",
                "--n",
                "32",
                "--fields",
                "4",
                "--inject-fault",
                fault,
                "-q",
            ],
        );
        assert_eq!(o.status.code(), Some(3), "{fault}");
        assert!(stderr(&o).contains(name), "{fault}: {}", stderr(&o));
    }
}

#[test]
fn decay_scan_reports_slopes_and_validity() {
    let tmp = TempDir::new().unwrap();
    write(
        tmp.path(),
        "d.cfg",
        "alpha = 0.5\nn = 4096\nL = 2*pi*50\nbound_q = 1, 1.5\nbound_data = gradient\n",
    );
    let o = ipm(
        tmp.path(),
        &["decay-scan", "--config", "d.cfg", "--out", "d", "-q"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("d/decay_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["conclusive"], true);
    assert_eq!(summary["bounds"].as_array().unwrap().len(), 2);
    let csv = std::fs::read_to_string(tmp.path().join("d/decay_scan.csv")).unwrap();
    assert!(csv.starts_with("t,value,valid,envelope\n"));

    // Scanning past t^{1/α} = L/10 is flagged, not fatal.
    write(
        tmp.path(),
        "late.cfg",
        "alpha = 0.5\nn = 4096\nL = 2*pi*50\nt_stop = 400\n",
    );
    let o = ipm(
        tmp.path(),
        &["decay-scan", "--config", "late.cfg", "--out", "late"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("not conclusive"));
    let summary: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("late/decay_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["conclusive"], false);
}

#[test]
fn sweep_records_failed_cells_and_finishes_the_rest() {
    let tmp = TempDir::new().unwrap();
    write(
        tmp.path(),
        "sw.cfg",
        "n1 = 32\nt_end = 0.2\nsample_dt = 0.1\nsweep.alpha = 0.5, 1.5, 2.5\nsweep.epsilon = 1e-3, 1e-2\n",
    );
    let o = ipm(
        tmp.path(),
        &[
            "sweep",
            "--config",
            "sw.cfg",
            "--out",
            "sw",
            "--workers",
            "2",
            "-q",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    let root = tmp.path().join("sw");
    let csv = std::fs::read_to_string(root.join("sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows.iter().filter(|r| r.contains(",completed,")).count(), 4);
    assert_eq!(rows.iter().filter(|r| r.contains(",invalid,")).count(), 2);
    assert_eq!(manifest(&root.join("cell_004"))["status"], "invalid");
    assert!(root.join("cell_000/diagnostics.csv").exists());
    assert_eq!(manifest(&root)["outputs"].as_array().unwrap().len(), 7);

    write(
        tmp.path(),
        "cap.cfg",
        "n1 = 32\nmax_cells = 3\nsweep.alpha = 0.5, 1.5\nsweep.epsilon = 1e-3, 1e-2\n",
    );
    let o = ipm(
        tmp.path(),
        &["sweep", "--config", "cap.cfg", "--out", "cap"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cap is 3"), "{}", stderr(&o));
}

#[test]
fn sweep_is_deterministic_across_worker_counts() {
    let tmp = TempDir::new().unwrap();
    write(
        tmp.path(),
        "sw.cfg",
        "n1 = 32\nt_end = 0.2\nsample_dt = 0.1\nsweep.alpha = 0.5, 1.5\n",
    );
    for (out, w) in [("one", "1"), ("two", "2")] {
        let o = ipm(
            tmp.path(),
            &[
                "sweep",
                "--config",
                "sw.cfg",
                "--out",
                out,
                "--workers",
                w,
                "-q",
            ],
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let read = |p: &str| std::fs::read(tmp.path().join(p)).unwrap();
    assert_eq!(read("one/sweep.csv"), read("two/sweep.csv"));
    assert_eq!(
        read("one/cell_001/diagnostics.csv"),
        read("two/cell_001/diagnostics.csv")
    );
}

#[test]
fn compare_full_and_decomposed() {
    let tmp = TempDir::new().unwrap();
    write(
        tmp.path(),
        "c.cfg",
        "alpha = 1.5\nn1 = 32\nt_end = 0.4\nsample_dt = 0.2\ndt = 0.05\n",
    );
    let o = ipm(
        tmp.path(),
        &[
            "compare",
            "--config",
            "c.cfg",
            "--out",
            "c",
            "--richardson",
            "--tolerance",
            "1e-8",
            "-q",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("c/compare.json")).unwrap())
            .unwrap();
    assert!(r["max_hs_difference"].as_f64().unwrap() < 1e-12);
    assert!(r["self_convergence"]["ratio"].as_f64().unwrap() > 8.0);
}
