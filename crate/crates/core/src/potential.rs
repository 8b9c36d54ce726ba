//! Vector potentials for a uniform field along z: the symmetric gauge over
//! the whole plane, and a patch version confined to a rectangle.
//!
//! The patch potential drops to zero at its edges, so it is discontinuous
//! there and carries an unphysical surface current. Quadrature over it must
//! be split along the patch edges.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{grid_points, GridSpec, Point, WellGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PotentialVariant {
    Uniform,
    Patch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VectorPotentialSpec {
    pub variant: PotentialVariant,
    /// Field strength B, T.
    pub b_field: f64,
    /// Patch center (a, b), m. Ignored for `Uniform`.
    pub center_a: f64,
    pub center_b: f64,
    /// Patch half-widths, m. Ignored for `Uniform`.
    pub half_w_x: f64,
    pub half_w_y: f64,
}

impl VectorPotentialSpec {
    pub fn uniform(b_field: f64) -> Self {
        VectorPotentialSpec {
            variant: PotentialVariant::Uniform,
            b_field,
            center_a: 0.0,
            center_b: 0.0,
            half_w_x: 0.0,
            half_w_y: 0.0,
        }
    }

    /// Quarter-well patch (half-widths Lx/2, Ly/2) centered at (a, b).
    pub fn quarter_patch(b_field: f64, geom: &WellGeometry, a: f64, b: f64) -> Self {
        Self::patch(b_field, a, b, 0.5 * geom.lx, 0.5 * geom.ly)
    }

    pub fn patch(b_field: f64, a: f64, b: f64, half_w_x: f64, half_w_y: f64) -> Self {
        VectorPotentialSpec {
            variant: PotentialVariant::Patch,
            b_field,
            center_a: a,
            center_b: b,
            half_w_x,
            half_w_y,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.b_field.is_finite() {
            return Err(Error::validation("b_field", format!("must be finite, got {}", self.b_field)));
        }
        if self.variant == PotentialVariant::Patch {
            if !(self.center_a.is_finite() && self.center_b.is_finite()) {
                return Err(Error::validation("patch_center", "center must be finite"));
            }
            if !(self.half_w_x > 0.0 && self.half_w_y > 0.0 && self.half_w_x.is_finite() && self.half_w_y.is_finite()) {
                return Err(Error::validation(
                    "patch_half",
                    format!("half-widths must be positive, got ({}, {})", self.half_w_x, self.half_w_y),
                ));
            }
        }
        Ok(())
    }

    /// Same geometry, field strength replaced.
    pub fn with_field(&self, b_field: f64) -> Self {
        VectorPotentialSpec { b_field, ..*self }
    }

    /// Patch support as (x_lo, x_hi, y_lo, y_hi); `None` for `Uniform`.
    pub fn support(&self) -> Option<[f64; 4]> {
        match self.variant {
            PotentialVariant::Uniform => None,
            PotentialVariant::Patch => Some([
                self.center_a - self.half_w_x,
                self.center_a + self.half_w_x,
                self.center_b - self.half_w_y,
                self.center_b + self.half_w_y,
            ]),
        }
    }

    /// Closed support, edges included.
    pub fn in_support(&self, p: Point) -> bool {
        match self.support() {
            None => true,
            Some([x0, x1, y0, y1]) => p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1,
        }
    }

    /// True when the patch support lies within the closed well.
    pub fn fits_in(&self, geom: &WellGeometry) -> bool {
        match self.support() {
            None => true,
            Some([x0, x1, y0, y1]) => x0 >= -geom.lx && x1 <= geom.lx && y0 >= -geom.ly && y1 <= geom.ly,
        }
    }
}

/// (Ax, Ay) at `p`, T·m.
pub fn vector_potential(spec: &VectorPotentialSpec, p: Point) -> [f64; 2] {
    let h = 0.5 * spec.b_field;
    match spec.variant {
        PotentialVariant::Uniform => [-h * p.y, h * p.x],
        PotentialVariant::Patch => {
            if spec.in_support(p) {
                [-h * (p.y - spec.center_b), h * (p.x - spec.center_a)]
            } else {
                [0.0, 0.0]
            }
        }
    }
}

/// Maximum |(∇×A)_z − B| over sample points whose central-difference stencil
/// stays inside the support, T.
///
/// Samples come from `region_samples` laid over the patch support (or over
/// `geom` for the uniform variant).
pub fn curl_check(spec: &VectorPotentialSpec, geom: &WellGeometry, region_samples: &GridSpec) -> Result<f64> {
    spec.validate()?;
    let region = match spec.support() {
        None => *geom,
        Some(_) => WellGeometry::new(spec.half_w_x, spec.half_w_y)?,
    };
    let (ox, oy) = match spec.variant {
        PotentialVariant::Uniform => (0.0, 0.0),
        PotentialVariant::Patch => (spec.center_a, spec.center_b),
    };
    let h = 1e-3 * region.lx.min(region.ly);
    let mut worst: f64 = 0.0;
    for q in grid_points(&region, region_samples)? {
        if region.wall_distance(q) < h {
            continue;
        }
        let p = Point::new(q.x + ox, q.y + oy);
        let dax_dy = (vector_potential(spec, Point::new(p.x, p.y + h))[0]
            - vector_potential(spec, Point::new(p.x, p.y - h))[0])
            / (2.0 * h);
        let day_dx = (vector_potential(spec, Point::new(p.x + h, p.y))[1]
            - vector_potential(spec, Point::new(p.x - h, p.y))[1])
            / (2.0 * h);
        worst = worst.max((day_dx - dax_dy - spec.b_field).abs());
    }
    Ok(worst)
}
