//! Charge, current and momentum densities of the well eigenstates.
//!
//! All outputs are dimensionless: ρ/e, j/(ec), and momentum density in units
//! of ℰ/c. The normalization makes the well-averaged ρ/e equal to one.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::geometry::{grid_points, DerivedStateParams, GridSpec, Point, Spin, StateIndex, WellGeometry};
use crate::spinor::{gradient_unchecked, spinor_unchecked, DiracMatrices, Phases, SpinorValue};

/// Default density threshold below which the spin velocity is undefined.
pub const DEFAULT_EPSILON_RHO: f64 = 1e-9;

/// ρ/e from the closed-form charge density. Identical for both spins.
pub fn charge_density(params: &DerivedStateParams, state: StateIndex, geom: &WellGeometry, p: Point) -> Result<f64> {
    state.validate()?;
    geom.require_closed(p)?;
    Ok(charge_unchecked(params, geom, p))
}

pub(crate) fn charge_unchecked(params: &DerivedStateParams, geom: &WellGeometry, p: Point) -> f64 {
    let t = Phases::at(params, geom, p);
    let (a, b) = params.lower_ratios();
    let upper = t.sx * t.sy;
    let lx = a * t.cx * t.sy;
    let ly = b * t.sx * t.cy;
    params.n_squared * (upper * upper + lx * lx + ly * ly)
}

/// (jx, jy)/(ec) from the closed-form current density.
pub fn current_density(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    p: Point,
) -> Result<[f64; 2]> {
    geom.require_closed(p)?;
    Ok(current_unchecked(params, state.spin, geom, p))
}

pub(crate) fn current_unchecked(params: &DerivedStateParams, spin: Spin, geom: &WellGeometry, p: Point) -> [f64; 2] {
    let t = Phases::at(params, geom, p);
    let g = params.gamma();
    let s = spin.sign();
    let jx = s * (2.0 * params.eta_y / g) * (t.sx * t.sx) * (2.0 * t.sy * t.cy);
    let jy = -s * (2.0 * params.eta_x / g) * (t.sy * t.sy) * (2.0 * t.sx * t.cx);
    [jx, jy]
}

/// Closed-form Jacobian of j/(ec): `[[∂x jx, ∂y jx], [∂x jy, ∂y jy]]`, 1/m.
pub fn current_gradient(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    p: Point,
) -> Result<[[f64; 2]; 2]> {
    geom.require_closed(p)?;
    let t = Phases::at(params, geom, p);
    let g = params.gamma();
    let s = state.spin.sign();
    let cx = s * 2.0 * params.eta_y / g;
    let cy = s * 2.0 * params.eta_x / g;
    let sin2x = 2.0 * t.sx * t.cx;
    let sin2y = 2.0 * t.sy * t.cy;
    let cos2x = t.cx * t.cx - t.sx * t.sx;
    let cos2y = t.cy * t.cy - t.sy * t.sy;
    Ok([
        [cx * params.kx * sin2x * sin2y, cx * 2.0 * params.ky * t.sx * t.sx * cos2y],
        [-cy * 2.0 * params.kx * t.sy * t.sy * cos2x, -cy * params.ky * sin2y * sin2x],
    ])
}

/// (Ψ†αxΨ, Ψ†αyΨ), i.e. j/(ec) straight from the defining bilinear.
pub fn current_from_bilinear(psi: &SpinorValue) -> [f64; 2] {
    let m = DiracMatrices::new();
    let jx = psi.bilinear(&m.alpha_x);
    let jy = psi.bilinear(&m.alpha_y);
    let scale = psi.norm_sqr().max(f64::MIN_POSITIVE);
    debug_assert!(jx.im.abs() <= 1e-15 * scale && jy.im.abs() <= 1e-15 * scale);
    [jx.re, jy.re]
}

/// The two parts of the Gordon-decomposed current, each already multiplied
/// by ec²/ℰ and divided by ec, so `curl_term + translation_term` is j/(ec).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GordonTerms {
    /// From ∇×(Ψ†(ħ/2)ΣΨ).
    pub curl_term: [f64; 2],
    /// From (iħ/2)[(∇Ψ†)Ψ − Ψ†(∇Ψ)].
    pub translation_term: [f64; 2],
}

impl GordonTerms {
    pub fn current(&self) -> [f64; 2] {
        [
            self.curl_term[0] + self.translation_term[0],
            self.curl_term[1] + self.translation_term[1],
        ]
    }

    /// Momentum density in units of ℰ/c: the spin term enters with half
    /// the weight it has in the current.
    pub fn momentum(&self) -> [f64; 2] {
        [
            0.5 * self.curl_term[0] + self.translation_term[0],
            0.5 * self.curl_term[1] + self.translation_term[1],
        ]
    }
}

pub fn gordon_terms(params: &DerivedStateParams, state: StateIndex, geom: &WellGeometry, p: Point) -> Result<GordonTerms> {
    geom.require_open(p)?;
    let psi = spinor_unchecked(params, state.spin, geom, p, 0.0);
    let grad = gradient_unchecked(params, state.spin, geom, p);
    let ell = params.current_length();

    // s_z = Ψ†Σ_zΨ; only its in-plane gradient enters the planar curl.
    let sign = [1.0, -1.0, 1.0, -1.0];
    let dsz = |d: &SpinorValue| -> f64 {
        (0..4).map(|i| 2.0 * sign[i] * (psi.psi[i].conj() * d.psi[i]).re).sum()
    };
    let dsz_dx = dsz(&grad.dx);
    let dsz_dy = dsz(&grad.dy);
    // (∇×(ħ/2 s_z ẑ)) = (ħ/2)(∂y s_z, −∂x s_z)
    let curl_term = [0.5 * ell * dsz_dy, -0.5 * ell * dsz_dx];

    // i[(∇Ψ†)Ψ − Ψ†∇Ψ] = 2 Im(Ψ†∇Ψ)
    let im_dot = |d: &SpinorValue| -> f64 {
        psi.psi
            .iter()
            .zip(d.psi.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .im
    };
    let translation_term = [ell * im_dot(&grad.dx), ell * im_dot(&grad.dy)];
    Ok(GordonTerms {
        curl_term,
        translation_term,
    })
}

/// Momentum density in units of ℰ/c.
pub fn momentum_density(params: &DerivedStateParams, state: StateIndex, geom: &WellGeometry, p: Point) -> Result<[f64; 2]> {
    Ok(gordon_terms(params, state, geom, p)?.momentum())
}

/// Ratio of the spin term's weight in j to its weight in G; 2 for the Dirac
/// field. `None` where the spin term vanishes.
pub fn spin_term_ratio(params: &DerivedStateParams, state: StateIndex, geom: &WellGeometry, p: Point) -> Result<Option<f64>> {
    let t = gordon_terms(params, state, geom, p)?;
    let g = t.momentum();
    let spin_in_g = [g[0] - t.translation_term[0], g[1] - t.translation_term[1]];
    let num = t.curl_term[0].hypot(t.curl_term[1]);
    let den = spin_in_g[0].hypot(spin_in_g[1]);
    Ok(if den > 0.0 { Some(num / den) } else { None })
}

/// Local velocity j/ρ in units of c, or `None` where ρ/e < `epsilon_rho`.
pub fn spin_velocity(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    p: Point,
    epsilon_rho: f64,
) -> Result<Option<[f64; 2]>> {
    geom.require_closed(p)?;
    Ok(velocity_unchecked(params, state.spin, geom, p, epsilon_rho))
}

fn velocity_unchecked(params: &DerivedStateParams, spin: Spin, geom: &WellGeometry, p: Point, epsilon_rho: f64) -> Option<[f64; 2]> {
    let rho = charge_unchecked(params, geom, p);
    if !(rho >= epsilon_rho) {
        return None;
    }
    let j = current_unchecked(params, spin, geom, p);
    Some([j[0] / rho, j[1] / rho])
}

/// Well-averaged Ψ†Σ_zΨ over well-averaged ρ/e, in units of ħ/2.
///
/// Every trigonometric square averages to 1/2 over the well, so the averages
/// are N²(1 ∓ a² ∓ b²)/4 with a, b the lower-component ratios.
pub fn spin_z_expectation(params: &DerivedStateParams, state: StateIndex, geom: &WellGeometry) -> Result<f64> {
    state.validate()?;
    geom.validate()?;
    let (a, b) = params.lower_ratios();
    let lower = a * a + b * b;
    let sz = 0.25 * params.n_squared * (1.0 - lower);
    let rho = 0.25 * params.n_squared * (1.0 + lower);
    Ok(state.spin.sign() * sz / rho)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Scalar,
    Vector2,
}

/// Which density to sample onto a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Charge,
    Current,
    Momentum,
    Velocity { epsilon_rho: f64 },
}

impl Quantity {
    pub fn label(&self) -> &'static str {
        match self {
            Quantity::Charge => "charge",
            Quantity::Current => "current",
            Quantity::Momentum => "momentum",
            Quantity::Velocity { .. } => "velocity",
        }
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            Quantity::Charge => FieldKind::Scalar,
            _ => FieldKind::Vector2,
        }
    }
}

/// A scalar or 2-vector field sampled on a [`GridSpec`], row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub geom: WellGeometry,
    pub kind: FieldKind,
    pub values: Vec<f64>,
    /// Per-point flag for samples where the quantity is undefined (velocity
    /// at nodes). Empty when every sample is defined; undefined samples hold 0.
    pub undefined: Vec<bool>,
    pub label: String,
}

impl FieldGrid {
    pub fn components(&self) -> usize {
        match self.kind {
            FieldKind::Scalar => 1,
            FieldKind::Vector2 => 2,
        }
    }

    pub fn points(&self) -> Vec<Point> {
        grid_points(&self.geom, &self.spec).expect("validated on construction")
    }

    pub fn value(&self, index: usize) -> &[f64] {
        let c = self.components();
        &self.values[index * c..(index + 1) * c]
    }

    pub fn is_defined(&self, index: usize) -> bool {
        self.undefined.is_empty() || !self.undefined[index]
    }

    /// Largest magnitude over defined samples.
    pub fn max_magnitude(&self) -> f64 {
        (0..self.spec.len())
            .filter(|&i| self.is_defined(i))
            .map(|i| self.value(i).iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }
}

/// Samples `quantity` on the grid. Interior-only quantities (momentum) are
/// set to zero on the walls, where Ψ vanishes identically.
pub fn sample_field(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    spec: &GridSpec,
    quantity: Quantity,
) -> Result<FieldGrid> {
    state.validate()?;
    let points = grid_points(geom, spec)?;
    let spin = state.spin;
    let samples: Vec<Option<[f64; 2]>> = points
        .par_iter()
        .map(|&p| match quantity {
            Quantity::Charge => Some([charge_unchecked(params, geom, p), 0.0]),
            Quantity::Current => Some(current_unchecked(params, spin, geom, p)),
            Quantity::Momentum => Some(if geom.contains_strictly(p) {
                gordon_terms(params, state, geom, p).map(|t| t.momentum()).unwrap_or([0.0, 0.0])
            } else {
                [0.0, 0.0]
            }),
            Quantity::Velocity { epsilon_rho } => velocity_unchecked(params, spin, geom, p, epsilon_rho),
        })
        .collect();
    let kind = quantity.kind();
    let mut values = Vec::with_capacity(samples.len() * 2);
    let mut undefined = vec![false; samples.len()];
    for (i, s) in samples.iter().enumerate() {
        let v = s.unwrap_or_else(|| {
            undefined[i] = true;
            [0.0, 0.0]
        });
        match kind {
            FieldKind::Scalar => values.push(v[0]),
            FieldKind::Vector2 => values.extend_from_slice(&v),
        }
    }
    if !undefined.iter().any(|&u| u) {
        undefined.clear();
    }
    Ok(FieldGrid {
        spec: *spec,
        geom: *geom,
        kind,
        values,
        undefined,
        label: quantity.label().to_string(),
    })
}
