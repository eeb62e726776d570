//! CSV tables, JSON summaries and binary checkpoints.
//!
//! Every float is written with 17 significant digits so that tables
//! round-trip exactly and identical runs produce identical bytes.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::heat1d::DecayScan;
use crate::scalar::Real;
use crate::solver::{Evolution, ParamSet, SolverState};
use crate::spectral::{Grid2D, SpecField1D, SpecField2D};

pub const CHECKPOINT_FORMAT_VERSION: u32 = 1;

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_real<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

fn fmt_opt<T: Real>(x: Option<T>) -> String {
    x.map_or_else(|| "na".to_string(), fmt_real)
}

pub const RECORD_COLUMNS: [&str; 25] = [
    "t",
    "step",
    "rho1_l2",
    "rho1_lambda_half_alpha",
    "rho1_lambda_s",
    "rho1_lambda_s_half_alpha",
    "rho1_hs",
    "u_hs",
    "u_sup",
    "bg_grad_sup",
    "bg_grad_linv",
    "bg_grad_frac_s_linv",
    "bg_grad_frac_lp",
    "i0",
    "i1",
    "i2",
    "i3",
    "energy_residual",
    "r2_3",
    "r2_4",
    "r2_5",
    "r2_6",
    "r2_7",
    "r2_8",
    "hs_ratio_to_initial",
];

/// One header line plus one line per record.
pub fn records_to_csv<T: Real>(records: &[DiagnosticsRecord<T>]) -> String {
    let mut out = RECORD_COLUMNS.join(",");
    out.push('\n');
    let hs0 = records.first().map(|r| r.hs);
    for r in records {
        let b = &r.background;
        let mut cells = vec![
            fmt_real(r.t),
            r.step.to_string(),
            fmt_real(r.l2),
            fmt_real(r.lambda_half_alpha),
            fmt_real(r.lambda_s),
            fmt_real(r.lambda_s_half_alpha),
            fmt_real(r.hs),
            fmt_real(r.u_hs),
            fmt_real(r.u_sup),
            fmt_real(b.grad_sup),
            fmt_opt(b.grad_linv),
            fmt_opt(b.grad_frac_s_linv),
            fmt_real(b.grad_frac_lp),
            fmt_real(r.i0),
            fmt_real(r.i1),
            fmt_real(r.i2),
            fmt_real(r.i3),
            fmt_opt(r.energy_residual),
        ];
        cells.extend(r.ratios.entries().iter().map(|&(_, v)| fmt_opt(v)));
        cells.push(fmt_opt(hs0.filter(|&h| h > T::zero()).map(|h| r.hs / h)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_records_csv<T: Real>(path: &Path, records: &[DiagnosticsRecord<T>]) -> Result<()> {
    fs::write(path, records_to_csv(records))?;
    Ok(())
}

/// `t,value,valid,envelope` for a decay scan.
pub fn decay_scan_to_csv<T: Real>(scan: &DecayScan<T>) -> String {
    let mut out = String::from("t,value,valid,envelope\n");
    for k in 0..scan.times.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_real(scan.times[k]),
            fmt_real(scan.values[k]),
            scan.valid_mask[k] as u8,
            fmt_real(scan.bound.values[k]),
        ));
    }
    out
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub n1: usize,
    pub n2: usize,
    pub l1: f64,
    pub l2: f64,
}

/// JSON sidecar describing a checkpoint's binary payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub format_version: u32,
    pub t: f64,
    pub step: u64,
    pub mode: Evolution,
    pub grid: GridMeta,
    pub params: ParamSet<f64>,
    pub data_file: String,
    pub layout: String,
    pub byte_len: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckpointFiles {
    pub data: PathBuf,
    pub sidecar: PathBuf,
}

const LAYOUT: &str = "little-endian f64 (re, im) pairs: rho1 spectrum n1*n2 row-major (k1 outer), then rho0 spectrum n2";

fn params_f64<T: Real>(p: &ParamSet<T>) -> ParamSet<f64> {
    ParamSet {
        alpha: p.alpha.as_f64(),
        s: p.s.as_f64(),
        regime: p.regime,
        epsilon: p.epsilon.as_f64(),
        q: p.q.as_f64(),
        p: p.p.as_f64(),
        cfl: p.cfl.as_f64(),
        dealias: p.dealias.as_f64(),
        t_end: p.t_end.as_f64(),
        sample_dt: p.sample_dt.as_f64(),
        dt_max: p.dt_max.as_f64(),
    }
}

fn params_from_f64<T: Real>(p: &ParamSet<f64>) -> ParamSet<T> {
    ParamSet {
        alpha: T::lit(p.alpha),
        s: T::lit(p.s),
        regime: p.regime,
        epsilon: T::lit(p.epsilon),
        q: T::lit(p.q),
        p: T::lit(p.p),
        cfl: T::lit(p.cfl),
        dealias: T::lit(p.dealias),
        t_end: T::lit(p.t_end),
        sample_dt: T::lit(p.sample_dt),
        dt_max: T::lit(p.dt_max),
    }
}

/// Writes `<stem>.bin` and `<stem>.json`.
pub fn write_checkpoint<T: Real>(state: &SolverState<T>, stem: &Path) -> Result<CheckpointFiles> {
    let data = stem.with_extension("bin");
    let sidecar = stem.with_extension("json");
    let coeffs = state.rho1.coeffs().iter().chain(state.rho0.coeffs());
    let mut bytes =
        Vec::with_capacity(16 * (state.rho1.coeffs().len() + state.rho0.coeffs().len()));
    for c in coeffs {
        bytes.extend_from_slice(&c.re.as_f64().to_le_bytes());
        bytes.extend_from_slice(&c.im.as_f64().to_le_bytes());
    }
    if let Some(dir) = stem.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(&data, &bytes)?;
    let g = state.grid();
    let meta = CheckpointMeta {
        format_version: CHECKPOINT_FORMAT_VERSION,
        t: state.t.as_f64(),
        step: state.step,
        mode: state.mode,
        grid: GridMeta {
            n1: g.n1(),
            n2: g.n2(),
            l1: g.axis1().length().as_f64(),
            l2: g.axis2().length().as_f64(),
        },
        params: params_f64(&state.params),
        data_file: data
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        layout: LAYOUT.to_string(),
        byte_len: bytes.len() as u64,
    };
    write_json(&sidecar, &meta)?;
    Ok(CheckpointFiles { data, sidecar })
}

/// Restores a state from its JSON sidecar (the payload is looked up next to it).
pub fn read_checkpoint<T: Real>(sidecar: &Path) -> Result<SolverState<T>> {
    let meta: CheckpointMeta = serde_json::from_str(&fs::read_to_string(sidecar)?)?;
    if meta.format_version != CHECKPOINT_FORMAT_VERSION {
        return Err(Error::Checkpoint(format!(
            "unsupported format version {}",
            meta.format_version
        )));
    }
    let data = sidecar.with_file_name(&meta.data_file);
    let bytes = fs::read(&data)?;
    let GridMeta { n1, n2, l1, l2 } = meta.grid;
    let expect = 16 * (n1 * n2 + n2);
    if bytes.len() != expect || meta.byte_len as usize != expect {
        return Err(Error::Checkpoint(format!(
            "payload holds {} bytes, expected {expect}",
            bytes.len()
        )));
    }
    let mut values = bytes.chunks_exact(8).map(|b| {
        let mut a = [0u8; 8];
        a.copy_from_slice(b);
        T::lit(f64::from_le_bytes(a))
    });
    let mut take = |n: usize| -> Vec<Complex<T>> {
        (0..n)
            .map(|_| {
                let re = values.next().expect("length checked");
                let im = values.next().expect("length checked");
                Complex::new(re, im)
            })
            .collect()
    };
    let grid = Arc::new(Grid2D::new(n1, n2, T::lit(l1), T::lit(l2))?);
    let grid1 = Arc::new(grid.axis2_grid()?);
    let rho1 = SpecField2D::from_coeffs(grid, take(n1 * n2))?;
    let rho0 = SpecField1D::from_coeffs(grid1, take(n2))?;
    let mut state = SolverState::new(params_from_f64(&meta.params), rho1, rho0, meta.mode)?;
    state.t = T::lit(meta.t);
    state.step = meta.step;
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat1d::Profile;
    use crate::solver::{initial_state, Perturbation, RunOptions, RunSetup};

    fn setup() -> RunSetup<f64> {
        let mut params = ParamSet::for_alpha(1.5);
        params.t_end = 0.2;
        RunSetup {
            params,
            n1: 16,
            n2: 16,
            l1: 6.0,
            l2: 7.0,
            profile: Profile::gaussian(0.5, 1.0),
            perturbation: Perturbation::default(),
            mode: Evolution::Decomposed,
            options: RunOptions::default(),
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_real(0.1f64), "1.0000000000000001e-1");
        assert_eq!(fmt_real(1.0f64 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn checkpoint_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = initial_state(&setup()).unwrap();
        s.t = 0.125;
        s.step = 9;
        let files = write_checkpoint(&s, &dir.path().join("c")).unwrap();
        assert!(files.data.exists() && files.sidecar.exists());
        let back: SolverState<f64> = read_checkpoint(&files.sidecar).unwrap();
        assert_eq!(back.t, 0.125);
        assert_eq!(back.step, 9);
        assert_eq!(back.params, s.params);
        assert_eq!(back.rho1.coeffs(), s.rho1.coeffs());
        assert_eq!(back.rho0.coeffs(), s.rho0.coeffs());
        assert_eq!(back.grid().axis2().length(), 7.0);
    }

    #[test]
    fn truncated_payload_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let s = initial_state(&setup()).unwrap();
        let files = write_checkpoint(&s, &dir.path().join("c")).unwrap();
        let bytes = fs::read(&files.data).unwrap();
        fs::write(&files.data, &bytes[..bytes.len() - 8]).unwrap();
        assert!(matches!(
            read_checkpoint::<f64>(&files.sidecar),
            Err(Error::Checkpoint(_))
        ));
    }

    #[test]
    fn csv_marks_missing_values() {
        let mut stepper = crate::solver::Stepper::new(&initial_state(&setup()).unwrap()).unwrap();
        let s = initial_state(&setup()).unwrap();
        let r = crate::diagnostics::compute_record(&s, &mut stepper, None).unwrap();
        let csv = records_to_csv(&[r]);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split(',').count(), RECORD_COLUMNS.len());
        assert!(lines[1].contains(",na,"));
    }
}
