//! First-order energy shifts from the current–vector-potential coupling.
//!
//! With j = ec·ĵ and the well average ⟨·⟩, the shift is
//! ℰ⁽¹⁾ = ec⟨ĵ·A⟩, and in units of μ_B·B = (eħ/2m)·B
//!
//! ```text
//! ℰ⁽¹⁾/(μ_B B) = (2/λ̄)·⟨ĵ·A⟩/B,   λ̄ = ħ/(m_e c).
//! ```
//!
//! The shift is evaluated with the unperturbed, field-free eigenstate.

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::PhysicalConstants;
use crate::density::current_unchecked;
use crate::error::{Error, Result};
use crate::geometry::{DerivedStateParams, GridSpec, Spin, StateIndex, WellGeometry};
use crate::potential::{vector_potential, PotentialVariant, VectorPotentialSpec};
use crate::quadrature::{average_over_well, QuadratureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InteractionResult {
    /// ℰ⁽¹⁾/(μ_B·B).
    pub shift_mu_b_units: f64,
    /// ℰ⁽¹⁾ in eV at the potential's field strength.
    pub shift_ev: f64,
    pub state: StateIndex,
    pub potential: VectorPotentialSpec,
    pub quad: QuadratureSpec,
    /// |shift(order) − shift(2·order)| in μ_B·B units.
    pub est_error: f64,
}

/// Split lines for the quadrature: the well midlines plus any patch edges
/// that fall inside the well.
fn split_lines(geom: &WellGeometry, potential: &VectorPotentialSpec, quad: &QuadratureSpec) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0];
    let mut ys = vec![0.0];
    if let (true, Some([x0, x1, y0, y1])) = (quad.split_at_patch_edges, potential.support()) {
        xs.extend([x0, x1].into_iter().filter(|x| x.abs() < geom.lx));
        ys.extend([y0, y1].into_iter().filter(|y| y.abs() < geom.ly));
    }
    (xs, ys)
}

fn shift_at_order(
    params: &DerivedStateParams,
    spin: Spin,
    geom: &WellGeometry,
    unit: &VectorPotentialSpec,
    quad: &QuadratureSpec,
) -> Result<f64> {
    let (sx, sy) = split_lines(geom, unit, quad);
    let avg = average_over_well(
        |p| {
            let j = current_unchecked(params, spin, geom, p);
            let a = vector_potential(unit, p);
            j[0] * a[0] + j[1] * a[1]
        },
        geom,
        quad,
        &sx,
        &sy,
    )?;
    Ok(2.0 * avg / params.lambda_reduced)
}

/// ℰ⁽¹⁾ for one state in one vector potential.
pub fn energy_shift(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    potential: &VectorPotentialSpec,
    quad: &QuadratureSpec,
    consts: &PhysicalConstants,
) -> Result<InteractionResult> {
    state.validate()?;
    geom.validate()?;
    potential.validate()?;
    quad.validate()?;
    if potential.variant == PotentialVariant::Patch && !quad.split_at_patch_edges {
        return Err(Error::validation(
            "quad",
            "patch potentials are discontinuous; quadrature must split at patch edges",
        ));
    }
    if potential.b_field == 0.0 {
        return Ok(InteractionResult {
            shift_mu_b_units: 0.0,
            shift_ev: 0.0,
            state,
            potential: *potential,
            quad: *quad,
            est_error: 0.0,
        });
    }
    let unit = potential.with_field(1.0);
    let coarse = shift_at_order(params, state.spin, geom, &unit, quad)?;
    let fine = shift_at_order(params, state.spin, geom, &unit, &quad.refined())?;
    Ok(InteractionResult {
        shift_mu_b_units: coarse,
        shift_ev: coarse * consts.mu_b_ev() * potential.b_field,
        state,
        potential: *potential,
        quad: *quad,
        est_error: (fine - coarse).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeemanResult {
    pub shift_up: InteractionResult,
    pub shift_down: InteractionResult,
    /// (ℰ⁽¹⁾_up − ℰ⁽¹⁾_down)/(μ_B·B).
    pub delta_mu_b_units: f64,
    pub delta_ev: f64,
}

/// Up/down splitting in the uniform potential of strength `b_field`.
pub fn zeeman_splitting(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    b_field: f64,
    quad: &QuadratureSpec,
    consts: &PhysicalConstants,
) -> Result<ZeemanResult> {
    let pot = VectorPotentialSpec::uniform(b_field);
    let up = energy_shift(params, state.with_spin(Spin::Up), geom, &pot, quad, consts)?;
    let down = energy_shift(params, state.with_spin(Spin::Down), geom, &pot, quad, consts)?;
    Ok(ZeemanResult {
        shift_up: up,
        shift_down: down,
        delta_mu_b_units: up.shift_mu_b_units - down.shift_mu_b_units,
        delta_ev: up.shift_ev - down.shift_ev,
    })
}

/// Patch-center scan over [−Lx/2, Lx/2]×[−Ly/2, Ly/2].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub grid: GridSpec,
    /// Patch center x-offsets, m.
    pub a_values: Vec<f64>,
    /// Patch center y-offsets, m.
    pub b_values: Vec<f64>,
    /// Row-major shifts in μ_B·B units: `shifts[j * a_values.len() + i]` is
    /// the patch centered at (a_values[i], b_values[j]).
    pub shifts: Vec<f64>,
    /// Largest refinement difference over the scan.
    pub max_est_error: f64,
}

impl ScanResult {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.shifts[j * self.a_values.len() + i]
    }
}

/// Shifts for a patch potential translated over the scan grid.
///
/// `template` supplies the field strength and patch half-widths. A patch
/// that would leave the well is rejected unless `clip` is set, in which case
/// only its intersection with the well contributes (j vanishes outside).
#[allow(clippy::too_many_arguments)]
pub fn scan_patch(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    template: &VectorPotentialSpec,
    scan_grid: &GridSpec,
    quad: &QuadratureSpec,
    clip: bool,
    consts: &PhysicalConstants,
) -> Result<ScanResult> {
    scan_grid.validate()?;
    geom.validate()?;
    let a_values = scan_grid.axis(0.5 * geom.lx, scan_grid.samples_x);
    let b_values = scan_grid.axis(0.5 * geom.ly, scan_grid.samples_y);
    let centers: Vec<(f64, f64)> = b_values
        .iter()
        .flat_map(|&b| a_values.iter().map(move |&a| (a, b)))
        .collect();
    let specs: Vec<VectorPotentialSpec> = centers
        .iter()
        .map(|&(a, b)| VectorPotentialSpec {
            variant: PotentialVariant::Patch,
            center_a: a,
            center_b: b,
            ..*template
        })
        .collect();
    for s in &specs {
        s.validate()?;
        if !clip && !s.fits_in(geom) {
            return Err(Error::validation(
                "patch_center",
                format!(
                    "patch centered at ({:e}, {:e}) m extends outside the well; pass clip to integrate the intersection",
                    s.center_a, s.center_b
                ),
            ));
        }
    }
    let results: Vec<Result<InteractionResult>> = specs
        .par_iter()
        .map(|s| energy_shift(params, state, geom, s, quad, consts))
        .collect();
    let mut shifts = Vec::with_capacity(results.len());
    let mut max_est_error: f64 = 0.0;
    for r in results {
        let r = r?;
        shifts.push(r.shift_mu_b_units);
        max_est_error = max_est_error.max(r.est_error);
    }
    Ok(ScanResult {
        grid: *scan_grid,
        a_values,
        b_values,
        shifts,
        max_est_error,
    })
}
