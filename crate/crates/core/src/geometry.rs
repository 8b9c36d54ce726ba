//! Well geometry, state labels and the per-state scalars every other module
//! builds on.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};

/// A point in the plane of the well, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Rectangular infinite well occupying (−Lx, Lx)×(−Ly, Ly).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellGeometry {
    /// Half-width along x, m.
    pub lx: f64,
    /// Half-width along y, m.
    pub ly: f64,
}

impl WellGeometry {
    pub fn new(lx: f64, ly: f64) -> Result<Self> {
        let g = WellGeometry { lx, ly };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lx.is_finite() && self.lx > 0.0) {
            return Err(Error::validation("lx", format!("half-width must be positive, got {}", self.lx)));
        }
        if !(self.ly.is_finite() && self.ly > 0.0) {
            return Err(Error::validation("ly", format!("half-width must be positive, got {}", self.ly)));
        }
        Ok(())
    }

    pub fn area(&self) -> f64 {
        4.0 * self.lx * self.ly
    }

    /// Closed rectangle, walls included.
    pub fn contains(&self, p: Point) -> bool {
        p.x.abs() <= self.lx && p.y.abs() <= self.ly
    }

    /// Open rectangle, walls excluded.
    pub fn contains_strictly(&self, p: Point) -> bool {
        p.x.abs() < self.lx && p.y.abs() < self.ly
    }

    /// Distance from `p` to the nearest wall; negative outside.
    pub fn wall_distance(&self, p: Point) -> f64 {
        (self.lx - p.x.abs()).min(self.ly - p.y.abs())
    }

    pub(crate) fn require_closed(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::domain(p, "the closed well"))
        }
    }

    pub(crate) fn require_open(&self, p: Point) -> Result<()> {
        if self.contains_strictly(p) {
            Ok(())
        } else {
            Err(Error::domain(p, "the open well interior"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// +1 for up, −1 for down. Currents, circulations and energy shifts of
    /// the down state are the up values times this sign.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spin::Up => f.write_str("up"),
            Spin::Down => f.write_str("down"),
        }
    }
}

/// Quantum numbers of a well eigenstate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateIndex {
    pub nx: u32,
    pub ny: u32,
    pub spin: Spin,
}

impl StateIndex {
    pub fn new(nx: u32, ny: u32, spin: Spin) -> Result<Self> {
        let s = StateIndex { nx, ny, spin };
        s.validate()?;
        Ok(s)
    }

    pub fn up(nx: u32, ny: u32) -> Result<Self> {
        Self::new(nx, ny, Spin::Up)
    }

    pub fn down(nx: u32, ny: u32) -> Result<Self> {
        Self::new(nx, ny, Spin::Down)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 1 {
            return Err(Error::validation("nx", format!("quantum number must be >= 1, got {}", self.nx)));
        }
        if self.ny < 1 {
            return Err(Error::validation("ny", format!("quantum number must be >= 1, got {}", self.ny)));
        }
        Ok(())
    }

    pub fn with_spin(self, spin: Spin) -> Self {
        StateIndex { spin, ..self }
    }
}

/// Scalars shared by every evaluation of one eigenstate.
///
/// Fields are public so that callers (and negative-control tests) can feed a
/// deliberately altered parameter set into downstream operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedStateParams {
    /// Wave vector along x, 1/m.
    pub kx: f64,
    /// Wave vector along y, 1/m.
    pub ky: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub eta: f64,
    /// Eigen energy including rest mass, J.
    pub energy: f64,
    /// Square of the spinor normalization under the spatial-average convention.
    pub n_squared: f64,
    /// Longitudinal momentum; always zero for the planar states handled here.
    pub p_z: f64,
    /// Reduced Compton wavelength ħ/(m_e c) used to build the η factors, m.
    pub lambda_reduced: f64,
    /// Rest energy m_e c², J.
    pub rest_energy: f64,
    /// Reduced Planck constant, J·s (sets the time phase).
    pub hbar: f64,
}

impl DerivedStateParams {
    /// √(1+η²) = ℰ/(m_e c²).
    pub fn gamma(&self) -> f64 {
        (1.0 + self.eta * self.eta).sqrt()
    }

    /// Amplitudes of the two lower-component terms relative to the upper
    /// component: (η_x, η_y)/(1+√(1+η²)).
    pub fn lower_ratios(&self) -> (f64, f64) {
        let d = 1.0 + self.gamma();
        (self.eta_x / d, self.eta_y / d)
    }

    pub fn normalization(&self) -> f64 {
        self.n_squared.sqrt()
    }

    /// ℰ − m_e c², J, evaluated without cancellation.
    pub fn kinetic_energy(&self) -> f64 {
        let e2 = self.eta * self.eta;
        self.rest_energy * e2 / (1.0 + self.gamma())
    }

    /// ħc/ℰ, the length that converts gradients into current units, m.
    pub fn current_length(&self) -> f64 {
        self.lambda_reduced * self.rest_energy / self.energy
    }

    /// Peak scale 2η/√(1+η²) of the dimensionless current j/(ec).
    pub fn current_scale(&self) -> f64 {
        2.0 * self.eta / self.gamma()
    }
}

/// Normalization N² = 2(1+√(1+η²))/√(1+η²), fixing the well-averaged
/// charge density to e.
pub fn normalization_squared(eta: f64) -> f64 {
    let g = (1.0 + eta * eta).sqrt();
    2.0 * (1.0 + g) / g
}

pub fn derive_params(
    state: StateIndex,
    geom: WellGeometry,
    consts: &PhysicalConstants,
) -> Result<DerivedStateParams> {
    state.validate()?;
    geom.validate()?;
    let kx = std::f64::consts::PI * f64::from(state.nx) / (2.0 * geom.lx);
    let ky = std::f64::consts::PI * f64::from(state.ny) / (2.0 * geom.ly);
    let lambda_reduced = consts.hbar / (consts.m_e * consts.c);
    let eta_x = lambda_reduced * kx;
    let eta_y = lambda_reduced * ky;
    let eta = eta_x.hypot(eta_y);
    let rest_energy = consts.rest_energy();
    Ok(DerivedStateParams {
        kx,
        ky,
        eta_x,
        eta_y,
        eta,
        energy: rest_energy * (1.0 + eta * eta).sqrt(),
        n_squared: normalization_squared(eta),
        p_z: 0.0,
        lambda_reduced,
        rest_energy,
        hbar: consts.hbar,
    })
}

/// Uniform sampling of the well rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub samples_x: usize,
    pub samples_y: usize,
    /// Walls included (endpoints at ±L) when set; cell centers otherwise.
    pub includes_boundary: bool,
}

impl GridSpec {
    pub fn new(samples_x: usize, samples_y: usize, includes_boundary: bool) -> Result<Self> {
        let g = GridSpec {
            samples_x,
            samples_y,
            includes_boundary,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples_x < 2 {
            return Err(Error::validation("samples_x", format!("need at least 2 samples, got {}", self.samples_x)));
        }
        if self.samples_y < 2 {
            return Err(Error::validation("samples_y", format!("need at least 2 samples, got {}", self.samples_y)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples_x * self.samples_y
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sample coordinates along one axis of half-width `half`.
    pub fn axis(&self, half: f64, samples: usize) -> Vec<f64> {
        (0..samples)
            .map(|i| {
                if self.includes_boundary {
                    if i + 1 == samples {
                        half
                    } else {
                        -half + 2.0 * half * i as f64 / (samples - 1) as f64
                    }
                } else {
                    -half + 2.0 * half * (i as f64 + 0.5) / samples as f64
                }
            })
            .collect()
    }

    pub fn xs(&self, geom: &WellGeometry) -> Vec<f64> {
        self.axis(geom.lx, self.samples_x)
    }

    pub fn ys(&self, geom: &WellGeometry) -> Vec<f64> {
        self.axis(geom.ly, self.samples_y)
    }
}

/// Row-major sample points: x varies fastest, rows ascend in y.
pub fn grid_points(geom: &WellGeometry, spec: &GridSpec) -> Result<Vec<Point>> {
    geom.validate()?;
    spec.validate()?;
    let xs = spec.xs(geom);
    let ys = spec.ys(geom);
    Ok(ys
        .iter()
        .flat_map(|&y| xs.iter().map(move |&x| Point::new(x, y)))
        .collect())
}
