//! Operator-identity battery on seeded random band-limited fields.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::compute_velocity;
use crate::spectral::{
    derivative, dir_frac_laplacian, frac_laplacian, frac_laplacian_1d, random_band_limited,
    random_band_limited_1d, riesz, Axis, Field2D, Grid2D, SpecField1D, SpecField2D,
};

/// Exponents swept by the battery.
pub const S_VALUES: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

/// Deliberate corruption used to prove that a check can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Perturbs the directional symbol `|ξ2|^s` by one part in a million.
    SliceSymbol,
    /// Perturbs the directional symbol `|ξ1|^s` used by the product rule.
    ProductSymbol,
    /// Perturbs the velocity symbol `ξ1ξ2/|ξ|²`.
    VelocitySymbol,
}

impl FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slice-symbol" => Ok(Fault::SliceSymbol),
            "product-symbol" => Ok(Fault::ProductSymbol),
            "velocity-symbol" => Ok(Fault::VelocitySymbol),
            other => Err(Error::param(
                "inject-fault",
                format!("unknown fault `{other}`"),
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatteryConfig {
    pub n: usize,
    pub fields: usize,
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        Self {
            n: 256,
            fields: 100,
            seed: 0,
            fault: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// Largest observed error (or, for bounds, largest violation).
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<26} {}  worst {:.3e}  tol {:.1e}",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.worst,
            self.tolerance
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryReport {
    pub n: usize,
    pub fields: usize,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
    pub seconds: f64,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect()
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    worst: f64,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            tolerance,
            worst: 0.0,
        }
    }

    fn observe(&mut self, err: f64) {
        // NaN must fail, so compare by negation.
        if !(err <= self.worst) {
            self.worst = err;
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            worst: self.worst,
            tolerance: self.tolerance,
            passed: self.worst <= self.tolerance,
        }
    }
}

const WIGGLE: f64 = 1e-6;

fn slice_identity(f: &SpecField2D<f64>, s: f64, fault: bool) -> Result<f64> {
    let grid = f.grid().clone();
    let direct = if fault {
        dir_frac_laplacian(f, Axis::X2, s)?.scaled(1.0 + WIGGLE)
    } else {
        dir_frac_laplacian(f, Axis::X2, s)?
    };
    // Per-slice oracle: real samples of each x1-row, 1-D transform, 1-D Λ̃^s.
    let g1 = Arc::new(grid.axis2_grid()?);
    let real = f.inverse_transform();
    let mut rows = Vec::with_capacity(grid.len());
    for i1 in 0..grid.n1() {
        let row = crate::spectral::Field1D::from_values(g1.clone(), real.slice_x2(i1).to_vec())?;
        let out = frac_laplacian_1d(&row.transform()?, s)?.inverse_transform();
        rows.extend_from_slice(out.values());
    }
    let oracle = Field2D::from_values(grid, rows)?;
    let got = direct.inverse_transform();
    Ok(got.max_abs_diff(&oracle) / oracle.max_abs().max(f64::MIN_POSITIVE))
}

fn product_rule(f: &SpecField2D<f64>, g: &SpecField1D<f64>, s: f64, fault: bool) -> Result<f64> {
    let grid = f.grid().clone();
    let gx = g.inverse_transform();
    let fx = f.inverse_transform();
    let n2 = grid.n2();
    let h: Vec<f64> = fx
        .values()
        .iter()
        .enumerate()
        .map(|(p, &v)| v * gx.values()[p % n2])
        .collect();
    let h = Field2D::from_values(grid.clone(), h)?.transform()?;
    let mut lhs = dir_frac_laplacian(&h, Axis::X1, s)?;
    if fault {
        lhs = lhs.scaled(1.0 + WIGGLE);
    }
    let lf = dir_frac_laplacian(f, Axis::X1, s)?.inverse_transform();
    let rhs: Vec<f64> = lf
        .values()
        .iter()
        .enumerate()
        .map(|(p, &v)| v * gx.values()[p % n2])
        .collect();
    let rhs = Field2D::from_values(grid, rhs)?;
    let lhs = lhs.inverse_transform();
    Ok(lhs.max_abs_diff(&rhs) / rhs.max_abs().max(f64::MIN_POSITIVE))
}

/// Worst violation of `1/2 ≤ |ξ|^s / (|ξ1|^s + |ξ2|^s) ≤ 2^{s/2}` over the table.
fn anisotropic_table_violation(grid: &Grid2D<f64>, s: f64) -> f64 {
    let (lo, hi) = (0.5, 2f64.powf(s / 2.0));
    let mut worst = 0.0f64;
    for &a in grid.axis1().xi() {
        for &b in grid.axis2().xi() {
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let r = a.hypot(b).powf(s) / (a.abs().powf(s) + b.abs().powf(s));
            worst = worst.max(lo - r).max(r - hi);
        }
    }
    worst.max(0.0)
}

/// Runs every identity on `fields` random fields; returns per-check outcomes.
pub fn run_battery(cfg: &BatteryConfig) -> Result<BatteryReport> {
    let start = Instant::now();
    let n = cfg.n;
    if cfg.fields == 0 {
        return Err(Error::param("fields", "need at least one field"));
    }
    let grid = Grid2D::square(n, std::f64::consts::TAU)?;
    let g1 = Arc::new(grid.axis2_grid()?);
    let band = (n / 4).saturating_sub(1).max(1);
    let half_band = (n / 8).max(1);

    let mut slice = Tally::new("slice-identity", 1e-11);
    let mut product = Tally::new("product-rule", 1e-11);
    let mut table = Tally::new("anisotropic-bounds", 0.0);
    let mut equiv = Tally::new("norm-equivalence", 1e-12);
    let mut divergence = Tally::new("divergence-free", 1e-12);
    let mut domination = Tally::new("velocity-domination", 1e-12);
    let mut plancherel = Tally::new("plancherel", 1e-12);
    let mut riesz_bound = Tally::new("riesz-contraction", 1e-12);
    let mut hermitian = Tally::new("hermitian-symmetry", 1e-12);

    for &s in &S_VALUES {
        table.observe(anisotropic_table_violation(&grid, s));
    }
    for k in 0..cfg.fields {
        let seed = cfg.seed.wrapping_mul(1_000_003).wrapping_add(k as u64);
        let s = S_VALUES[k % S_VALUES.len()];
        let f = random_band_limited(&grid, band, 0.0, seed);
        slice.observe(slice_identity(
            &f,
            s,
            cfg.fault == Some(Fault::SliceSymbol),
        )?);

        // Band-limited factors whose product is still resolved.
        let fb = random_band_limited(&grid, half_band, 0.0, seed ^ 0x5eed);
        let gb = random_band_limited_1d(&g1, half_band, 0.0, seed ^ 0xbeef);
        product.observe(product_rule(
            &fb,
            &gb,
            s,
            cfg.fault == Some(Fault::ProductSymbol),
        )?);

        let full = f.homogeneous_norm(s);
        let split = dir_frac_laplacian(&f, Axis::X1, s)?.l2_norm()
            + dir_frac_laplacian(&f, Axis::X2, s)?.l2_norm();
        let r = full / split;
        equiv.observe((0.5 - r).max(r - 2f64.powf(s / 2.0)).max(0.0));

        let (mut u1, u2) = compute_velocity(&f);
        if cfg.fault == Some(Fault::VelocitySymbol) {
            u1 = u1.scaled(1.0 + WIGGLE);
        }
        let div = derivative(&u1, Axis::X1).add(&derivative(&u2, Axis::X2));
        let grad_scale = derivative(&f, Axis::X1)
            .max_modulus()
            .max(f64::MIN_POSITIVE);
        divergence.observe(div.max_modulus() / grad_scale);
        for gamma in [0.0, 0.25, s, s + 0.25] {
            let u =
                (u1.homogeneous_norm(gamma).powi(2) + u2.homogeneous_norm(gamma).powi(2)).sqrt();
            let rho = f.homogeneous_norm(gamma);
            domination.observe(((u - rho) / rho).max(0.0));
        }

        let real = f.inverse_transform();
        plancherel.observe((real.l2_norm() - f.l2_norm()).abs() / f.l2_norm());
        let rf = riesz(&f, Axis::X1).l2_norm();
        riesz_bound.observe(((rf - f.l2_norm()) / f.l2_norm()).max(0.0));
        let lap = frac_laplacian(&f, s)?;
        hermitian.observe(lap.imaginary_residue() / lap.inverse_transform().max_abs());
    }

    Ok(BatteryReport {
        n,
        fields: cfg.fields,
        seed: cfg.seed,
        checks: vec![
            slice.finish(),
            product.finish(),
            table.finish(),
            equiv.finish(),
            divergence.finish(),
            domination.finish(),
            plancherel.finish(),
            riesz_bound.finish(),
            hermitian.finish(),
        ],
        seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(fault: Option<Fault>) -> BatteryReport {
        run_battery(&BatteryConfig {
            n: 32,
            fields: 8,
            seed: 3,
            fault,
        })
        .unwrap()
    }

    #[test]
    fn clean_battery_passes() {
        let r = small(None);
        for c in &r.checks {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn injected_faults_fail_the_named_identity() {
        assert_eq!(
            small(Some(Fault::SliceSymbol)).failures(),
            vec!["slice-identity"]
        );
        assert_eq!(
            small(Some(Fault::ProductSymbol)).failures(),
            vec!["product-rule"]
        );
        let v = small(Some(Fault::VelocitySymbol)).failures();
        assert!(v.contains(&"divergence-free"), "{v:?}");
    }
}
