//! Invariant suite behind `wavespin check`.

use serde::Serialize;
use wavespin::density::{
    current_density, current_from_bilinear, gordon_terms, sample_field, spin_z_expectation, DEFAULT_EPSILON_RHO,
};
use wavespin::interaction::energy_shift;
use wavespin::potential::curl_check;
use wavespin::quadrature::average_over_well;
use wavespin::spinor::{dirac_residual, evaluate_spinor, DiracMatrices};
use wavespin::topology::{divergence_audit, find_vortices};
use wavespin::{
    DerivedStateParams, GridSpec, PhysicalConstants, Point, QuadratureSpec, Quantity, Spin, StateIndex,
    VectorPotentialSpec, WellGeometry,
};

use crate::error::CliResult;

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    fn at_most(name: &'static str, measured: f64, tolerance: f64) -> Self {
        CheckResult {
            name,
            measured,
            tolerance,
            pass: measured <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub state: StateIndex,
    pub well: WellGeometry,
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

/// Low-discrepancy points strictly inside the well (R2 sequence).
fn interior_points(geom: &WellGeometry, n: usize) -> Vec<Point> {
    let g = 1.324_717_957_244_746_f64;
    let (a1, a2) = (1.0 / g, 1.0 / (g * g));
    (1..=n)
        .map(|i| {
            let u = (0.5 + a1 * i as f64).fract();
            let v = (0.5 + a2 * i as f64).fract();
            Point::new((2.0 * u - 1.0) * 0.999 * geom.lx, (2.0 * v - 1.0) * 0.999 * geom.ly)
        })
        .collect()
}

/// Runs every invariant for one state. `params` may be deliberately altered
/// (the sabotage hook); the reference values always come from `state`.
pub fn run_checks(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    quad: &QuadratureSpec,
    consts: &PhysicalConstants,
) -> CliResult<CheckReport> {
    let mut checks = Vec::new();
    let gamma = (1.0 + params.eta * params.eta).sqrt();
    let scale = 2.0 * params.eta / gamma;
    let split = [0.0];

    let ratio = params.energy / params.rest_energy;
    checks.push(CheckResult::at_most(
        "energy_relation",
        (ratio * ratio - 1.0 - params.eta * params.eta).abs() / (ratio * ratio),
        1e-12,
    ));

    let norm = average_over_well(
        |p| evaluate_spinor(params, state, geom, p, 0.0).map(|v| v.norm_sqr()).unwrap_or(f64::NAN),
        geom,
        quad,
        &split,
        &split,
    )?;
    checks.push(CheckResult::at_most("normalization", (norm - 1.0).abs(), 1e-10));

    let h = geom.lx.min(geom.ly) / 2048.0;
    let res = dirac_residual(params, state, geom, &GridSpec::new(33, 33, false)?, h)?;
    checks.push(CheckResult::at_most("dirac_residual", res.max_rel, 1e-6));

    let mut bilinear: f64 = 0.0;
    let mut gordon: f64 = 0.0;
    for p in interior_points(geom, 1000) {
        let j = current_density(params, state, geom, p)?;
        let b = current_from_bilinear(&evaluate_spinor(params, state, geom, p, 0.0)?);
        let g = gordon_terms(params, state, geom, p)?.current();
        for k in 0..2 {
            bilinear = bilinear.max((j[k] - b[k]).abs() / scale);
            gordon = gordon.max((j[k] - g[k]).abs() / scale);
        }
    }
    checks.push(CheckResult::at_most("bilinear_current", bilinear, 1e-12));
    checks.push(CheckResult::at_most("gordon_decomposition", gordon, 1e-12));

    let div = divergence_audit(params, state, geom, &GridSpec::new(65, 65, true)?)?;
    checks.push(CheckResult::at_most(
        "divergence_free",
        div * geom.lx.min(geom.ly) / scale,
        1e-14,
    ));

    let v = sample_field(
        params,
        state,
        geom,
        &GridSpec::new(129, 129, true)?,
        Quantity::Velocity { epsilon_rho: DEFAULT_EPSILON_RHO },
    )?;
    checks.push(CheckResult::at_most("speed_bound", v.max_magnitude(), 1.0));

    let m = DiracMatrices::new();
    let sz = average_over_well(
        |p| evaluate_spinor(params, state, geom, p, 0.0).map(|v| v.bilinear(&m.sigma_big_z).re).unwrap_or(f64::NAN),
        geom,
        quad,
        &split,
        &split,
    )?;
    let rho = average_over_well(
        |p| evaluate_spinor(params, state, geom, p, 0.0).map(|v| v.norm_sqr()).unwrap_or(f64::NAN),
        geom,
        quad,
        &split,
        &split,
    )?;
    let closed = spin_z_expectation(params, state, geom)?;
    checks.push(CheckResult::at_most(
        "spin_z_expectation",
        (sz / rho - state.spin.sign() / gamma).abs().max((closed - state.spin.sign() / gamma).abs()),
        1e-12,
    ));

    let uniform = VectorPotentialSpec::uniform(1.0);
    let up = energy_shift(params, state.with_spin(Spin::Up), geom, &uniform, quad, consts)?;
    let down = energy_shift(params, state.with_spin(Spin::Down), geom, &uniform, quad, consts)?;
    checks.push(CheckResult::at_most(
        "uniform_shift",
        (up.shift_mu_b_units * gamma - 1.0).abs(),
        1e-10,
    ));
    checks.push(CheckResult::at_most(
        "spin_antisymmetry",
        (up.shift_mu_b_units + down.shift_mu_b_units).abs() / up.shift_mu_b_units.abs(),
        1e-12,
    ));

    let curl = curl_check(&uniform, geom, &GridSpec::new(21, 21, true)?)?;
    checks.push(CheckResult::at_most("curl_is_field", curl, 1e-10));

    let grid = GridSpec::new(16 * state.nx as usize, 16 * state.ny as usize, true)?;
    let vort = find_vortices(params, state, geom, &grid)?;
    let expected = (state.nx * state.ny) as f64;
    checks.push(CheckResult::at_most("vortex_count", (vort.count as f64 - expected).abs(), 0.0));
    let want = state.spin.sign() as i32;
    let off = vort.windings().iter().filter(|&&w| w != want).count();
    checks.push(CheckResult::at_most("co_rotation", off as f64, 0.0));

    Ok(CheckReport {
        state,
        well: *geom,
        checks,
    })
}

/// Plain-text rendering, one line per check.
pub fn render(report: &CheckReport) -> String {
    let mut s = format!(
        "state ({},{}) {} in {:e} x {:e} m well\n",
        report.state.nx, report.state.ny, report.state.spin, report.well.lx, report.well.ly
    );
    for c in &report.checks {
        s.push_str(&format!(
            "{} {:<22} measured {:.3e} tolerance {:.1e}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.measured,
            c.tolerance
        ));
    }
    s
}
