//! Exact four-spinor eigenstates of the well and a finite-difference check
//! of the Dirac eigenvalue equation.
//!
//! The spin-up state has upper two-spinor μ_A = S·(1, 0)ᵀ with
//! S = sin X sin Y, X = kx(x+Lx), Y = ky(y+Ly). The lower two-spinor follows
//! from the second coupled equation,
//!
//! ```text
//! (ℰ + mc²) μ_B = −iħc (σx ∂x + σy ∂y) μ_A
//! ```
//!
//! and ħc·k/(ℰ+mc²) = η/(1+√(1+η²)). Writing a = η_x/(1+√(1+η²)) and
//! b = η_y/(1+√(1+η²)):
//!
//! * up:   σx(1,0)ᵀ = (0,1)ᵀ, σy(1,0)ᵀ = (0,i)ᵀ, so
//!   μ_B = (0, −i a cos X sin Y + b sin X cos Y)ᵀ.
//! * down: μ_A = S·(0,1)ᵀ, σx(0,1)ᵀ = (1,0)ᵀ, σy(0,1)ᵀ = (−i,0)ᵀ, so
//!   μ_B = (−i a cos X sin Y − b sin X cos Y, 0)ᵀ.
//!
//! Both states share ℰ and N. The overall phase makes the nonzero upper
//! component real and positive at the first antinode when t = 0.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{grid_points, DerivedStateParams, GridSpec, Point, Spin, StateIndex, WellGeometry};

pub type Mat2 = [[Complex64; 2]; 2];
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Values of Ψ's four components at one point and time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorValue {
    pub psi: [Complex64; 4],
}

impl SpinorValue {
    pub fn new(psi1: Complex64, psi2: Complex64, psi3: Complex64, psi4: Complex64) -> Self {
        SpinorValue {
            psi: [psi1, psi2, psi3, psi4],
        }
    }

    pub fn from_pair(pair: &TwoSpinorPair) -> Self {
        Self::new(pair.mu_a[0], pair.mu_a[1], pair.mu_b[0], pair.mu_b[1])
    }

    pub fn psi1(&self) -> Complex64 {
        self.psi[0]
    }
    pub fn psi2(&self) -> Complex64 {
        self.psi[1]
    }
    pub fn psi3(&self) -> Complex64 {
        self.psi[2]
    }
    pub fn psi4(&self) -> Complex64 {
        self.psi[3]
    }

    /// Ψ†Ψ.
    pub fn norm_sqr(&self) -> f64 {
        self.psi.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        SpinorValue {
            psi: self.psi.map(|c| c * k),
        }
    }

    /// Ψ†MΨ.
    pub fn bilinear(&self, m: &Mat4) -> Complex64 {
        let mv = apply4(m, &self.psi);
        self.psi
            .iter()
            .zip(mv.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.psi.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

/// Upper (μ_A) and lower (μ_B) two-spinors, normalization included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSpinorPair {
    pub mu_a: [Complex64; 2],
    pub mu_b: [Complex64; 2],
}

/// First partial derivatives of the spinor, 1/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinorGradient {
    pub dx: SpinorValue,
    pub dy: SpinorValue,
}

/// Dirac-representation matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracMatrices {
    pub alpha_x: Mat4,
    pub alpha_y: Mat4,
    pub alpha_z: Mat4,
    pub gamma0: Mat4,
    /// Σ_z = diag(1, −1, 1, −1).
    pub sigma_big_z: Mat4,
    pub pauli_x: Mat2,
    pub pauli_y: Mat2,
    pub pauli_z: Mat2,
}

fn off_diagonal(s: &Mat2) -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c + 2] = s[r][c];
            m[r + 2][c] = s[r][c];
        }
    }
    m
}

impl DiracMatrices {
    pub fn new() -> Self {
        let pauli_x = [[ZERO, ONE], [ONE, ZERO]];
        let pauli_y = [[ZERO, -I], [I, ZERO]];
        let pauli_z = [[ONE, ZERO], [ZERO, -ONE]];
        let mut gamma0 = [[ZERO; 4]; 4];
        let mut sigma_big_z = [[ZERO; 4]; 4];
        for (i, (g, s)) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)].into_iter().enumerate() {
            gamma0[i][i] = Complex64::new(g, 0.0);
            sigma_big_z[i][i] = Complex64::new(s, 0.0);
        }
        DiracMatrices {
            alpha_x: off_diagonal(&pauli_x),
            alpha_y: off_diagonal(&pauli_y),
            alpha_z: off_diagonal(&pauli_z),
            gamma0,
            sigma_big_z,
            pauli_x,
            pauli_y,
            pauli_z,
        }
    }
}

impl Default for DiracMatrices {
    fn default() -> Self {
        Self::new()
    }
}

pub fn apply4(m: &Mat4, v: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [ZERO; 4];
    for (r, row) in m.iter().enumerate() {
        out[r] = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
    }
    out
}

pub fn apply2(m: &Mat2, v: &[Complex64; 2]) -> [Complex64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

pub fn mat_mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    out
}

/// sin and cos of X = kx(x+Lx) and Y = ky(y+Ly).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Phases {
    pub sx: f64,
    pub cx: f64,
    pub sy: f64,
    pub cy: f64,
}

impl Phases {
    pub fn at(params: &DerivedStateParams, geom: &WellGeometry, p: Point) -> Self {
        let (sx, cx) = (params.kx * (p.x + geom.lx)).sin_cos();
        let (sy, cy) = (params.ky * (p.y + geom.ly)).sin_cos();
        Phases { sx, cx, sy, cy }
    }
}

/// Spatial part of the two-spinors at `p` (t = 0), closed form.
pub fn two_spinor_pair(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    p: Point,
) -> Result<TwoSpinorPair> {
    geom.require_closed(p)?;
    Ok(pair_unchecked(params, state.spin, geom, p))
}

pub(crate) fn pair_unchecked(params: &DerivedStateParams, spin: Spin, geom: &WellGeometry, p: Point) -> TwoSpinorPair {
    let n = params.normalization();
    let (a, b) = params.lower_ratios();
    let t = Phases::at(params, geom, p);
    let upper = Complex64::new(n * t.sx * t.sy, 0.0);
    match spin {
        Spin::Up => TwoSpinorPair {
            mu_a: [upper, ZERO],
            mu_b: [ZERO, Complex64::new(n * b * t.sx * t.cy, -n * a * t.cx * t.sy)],
        },
        Spin::Down => TwoSpinorPair {
            mu_a: [ZERO, upper],
            mu_b: [Complex64::new(-n * b * t.sx * t.cy, -n * a * t.cx * t.sy), ZERO],
        },
    }
}

fn phase_factor(params: &DerivedStateParams, t: f64) -> Complex64 {
    if t == 0.0 {
        ONE
    } else {
        Complex64::from_polar(1.0, -params.energy * t / params.hbar)
    }
}

/// Ψ(p, t).
pub fn evaluate_spinor(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    p: Point,
    t: f64,
) -> Result<SpinorValue> {
    geom.require_closed(p)?;
    Ok(spinor_unchecked(params, state.spin, geom, p, t))
}

pub(crate) fn spinor_unchecked(params: &DerivedStateParams, spin: Spin, geom: &WellGeometry, p: Point, t: f64) -> SpinorValue {
    let s = SpinorValue::from_pair(&pair_unchecked(params, spin, geom, p));
    if t == 0.0 {
        s
    } else {
        s.scale(phase_factor(params, t))
    }
}

/// Closed-form ∂x Ψ and ∂y Ψ at t = 0.
pub fn spinor_gradient(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    p: Point,
) -> Result<SpinorGradient> {
    geom.require_closed(p)?;
    Ok(gradient_unchecked(params, state.spin, geom, p))
}

pub(crate) fn gradient_unchecked(params: &DerivedStateParams, spin: Spin, geom: &WellGeometry, p: Point) -> SpinorGradient {
    let n = params.normalization();
    let (a, b) = params.lower_ratios();
    let (kx, ky) = (params.kx, params.ky);
    let t = Phases::at(params, geom, p);
    let up_dx = Complex64::new(n * kx * t.cx * t.sy, 0.0);
    let up_dy = Complex64::new(n * ky * t.sx * t.cy, 0.0);
    match spin {
        Spin::Up => {
            // ψ4 = N(b sX cY − i a cX sY)
            let l_dx = Complex64::new(n * kx * b * t.cx * t.cy, n * kx * a * t.sx * t.sy);
            let l_dy = Complex64::new(-n * ky * b * t.sx * t.sy, -n * ky * a * t.cx * t.cy);
            SpinorGradient {
                dx: SpinorValue::new(up_dx, ZERO, ZERO, l_dx),
                dy: SpinorValue::new(up_dy, ZERO, ZERO, l_dy),
            }
        }
        Spin::Down => {
            // ψ3 = N(−b sX cY − i a cX sY)
            let l_dx = Complex64::new(-n * kx * b * t.cx * t.cy, n * kx * a * t.sx * t.sy);
            let l_dy = Complex64::new(n * ky * b * t.sx * t.sy, -n * ky * a * t.cx * t.cy);
            SpinorGradient {
                dx: SpinorValue::new(ZERO, up_dx, l_dx, ZERO),
                dy: SpinorValue::new(ZERO, up_dy, l_dy, ZERO),
            }
        }
    }
}

/// Largest pointwise relative residual of the Dirac eigenvalue equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_rel: f64,
    pub at: Point,
    /// Number of grid points that were far enough from the walls to test.
    pub points: usize,
}

/// Evaluates ‖(cα·(−iħ∇) + γ⁰mc²)Ψ − ℰΨ‖ / (ℰ‖Ψ‖) with fourth-order central
/// differences of step `fd_step`.
///
/// Grid points closer than 4·`fd_step` to a wall are skipped. Near nodes,
/// where ‖Ψ‖ itself vanishes, the denominator is floored at 1e-6·N so that
/// rounding noise in a zero field is not reported as a relative error.
pub fn dirac_residual(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    spec: &GridSpec,
    fd_step: f64,
) -> Result<ResidualReport> {
    let limit = geom.lx.min(geom.ly) / 256.0;
    if !(fd_step > 0.0 && fd_step <= limit) {
        return Err(Error::Config(format!(
            "fd_step {fd_step:e} m must lie in (0, {limit:e}] m"
        )));
    }
    let points: Vec<Point> = grid_points(geom, spec)?
        .into_iter()
        .filter(|p| geom.wall_distance(*p) >= 4.0 * fd_step)
        .collect();
    if points.is_empty() {
        return Err(Error::Config(format!(
            "no grid point lies at least {:e} m from the walls",
            4.0 * fd_step
        )));
    }
    let m = DiracMatrices::new();
    let floor = 1e-6 * params.normalization();
    let residuals: Vec<f64> = points
        .par_iter()
        .map(|&p| point_residual(params, state.spin, geom, &m, p, fd_step, floor))
        .collect();
    let (idx, max_rel) = residuals
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, r)| if r > best.1 { (i, r) } else { best });
    Ok(ResidualReport {
        max_rel,
        at: points[idx],
        points: points.len(),
    })
}

fn fd4(f: impl Fn(f64) -> SpinorValue, h: f64) -> [Complex64; 4] {
    let (p2, p1, m1, m2) = (f(2.0 * h), f(h), f(-h), f(-2.0 * h));
    let mut out = [ZERO; 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (-p2.psi[i] + 8.0 * p1.psi[i] - 8.0 * m1.psi[i] + m2.psi[i]) / (12.0 * h);
    }
    out
}

fn point_residual(
    params: &DerivedStateParams,
    spin: Spin,
    geom: &WellGeometry,
    m: &DiracMatrices,
    p: Point,
    h: f64,
    floor: f64,
) -> f64 {
    let psi = spinor_unchecked(params, spin, geom, p, 0.0);
    let dx = fd4(|d| spinor_unchecked(params, spin, geom, Point::new(p.x + d, p.y), 0.0), h);
    let dy = fd4(|d| spinor_unchecked(params, spin, geom, Point::new(p.x, p.y + d), 0.0), h);
    // Everything in units of m_e c²: HΨ/mc² = −iλ̄(αx∂x + αy∂y)Ψ + γ⁰Ψ.
    let ax = apply4(&m.alpha_x, &dx);
    let ay = apply4(&m.alpha_y, &dy);
    let g0 = apply4(&m.gamma0, &psi.psi);
    let eps = params.energy / params.rest_energy;
    let lam = params.lambda_reduced;
    let mut r2 = 0.0;
    for i in 0..4 {
        let h_psi = -I * lam * (ax[i] + ay[i]) + g0[i];
        r2 += (h_psi - eps * psi.psi[i]).norm_sqr();
    }
    r2.sqrt() / (eps * psi.norm().max(floor))
}
