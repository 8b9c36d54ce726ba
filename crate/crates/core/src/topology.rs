//! Vortex structure of the current field: stagnation points, their winding,
//! loop circulations, the edge current and a divergence audit.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::density::{current_gradient, current_unchecked};
use crate::error::{Error, Result};
use crate::geometry::{grid_points, DerivedStateParams, GridSpec, Point, Spin, StateIndex, WellGeometry};

/// Vertices of the loop used to classify a stagnation point.
const WINDING_VERTICES: usize = 16;
/// A classification loop whose weakest sample falls below this fraction of
/// its strongest is treated as touching a zero line.
const DEGENERATE_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Vortex {
    pub center: Point,
    /// +1 counterclockwise, −1 clockwise.
    pub winding: i32,
    /// ∮ j·dl/(ec) around a small counterclockwise circle, m.
    pub circulation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VortexReport {
    /// Sorted by center y, then x.
    pub vortices: Vec<Vortex>,
    pub count: usize,
    /// Sign-change cells that did not refine to a vortex: saddles, points on
    /// zero lines, or zeros next to the walls.
    pub discarded: usize,
}

impl VortexReport {
    pub fn windings(&self) -> Vec<i32> {
        self.vortices.iter().map(|v| v.winding).collect()
    }
}

fn current(params: &DerivedStateParams, spin: Spin, geom: &WellGeometry, x: f64, y: f64) -> [f64; 2] {
    current_unchecked(params, spin, geom, Point::new(x, y))
}

fn positive(v: f64) -> bool {
    v >= 0.0
}

/// Root of `f` on [lo, hi] given a sign change between the ends.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut flo = positive(f(lo));
    if flo == positive(f(hi)) {
        return None;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = positive(f(mid));
        if fm == flo {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Poincaré index of j around a 16-gon, or `None` when the loop touches a
/// zero of the field.
fn loop_index(params: &DerivedStateParams, spin: Spin, geom: &WellGeometry, c: Point, r: f64) -> Option<i32> {
    let samples: Vec<[f64; 2]> = (0..WINDING_VERTICES)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / WINDING_VERTICES as f64;
            current(params, spin, geom, c.x + r * t.cos(), c.y + r * t.sin())
        })
        .collect();
    let mags: Vec<f64> = samples.iter().map(|j| j[0].hypot(j[1])).collect();
    let max = mags.iter().copied().fold(0.0, f64::max);
    let min = mags.iter().copied().fold(f64::INFINITY, f64::min);
    if !(max > 0.0) || min < DEGENERATE_RATIO * max {
        return None;
    }
    let angles: Vec<f64> = samples.iter().map(|j| j[1].atan2(j[0])).collect();
    let mut total = 0.0;
    for k in 0..WINDING_VERTICES {
        let mut d = angles[(k + 1) % WINDING_VERTICES] - angles[k];
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        total += d;
    }
    Some((total / (2.0 * PI)).round() as i32)
}

fn circulation_unchecked(params: &DerivedStateParams, spin: Spin, geom: &WellGeometry, c: Point, r: f64, n: usize) -> f64 {
    let dt = 2.0 * PI / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        let (s, co) = (dt * k as f64).sin_cos();
        let j = current(params, spin, geom, c.x + r * co, c.y + r * s);
        sum += -j[0] * s + j[1] * co;
    }
    sum * r * dt
}

/// Locates the isolated current vortices of a state.
///
/// Cells whose midlines show a sign change in jx (along y) and jy (along x)
/// are refined by alternating bisection. A refined point counts as a vortex
/// when its Jacobian is nondegenerate and the field rotates once around it
/// (index +1); its winding is the sense of that rotation, +1
/// counterclockwise. Crossings of zero lines (where j vanishes along whole
/// node lines) have a vanishing Jacobian and are discarded.
pub fn find_vortices(params: &DerivedStateParams, state: StateIndex, geom: &WellGeometry, grid: &GridSpec) -> Result<VortexReport> {
    state.validate()?;
    geom.validate()?;
    grid.validate()?;
    if grid.samples_x < 16 * state.nx as usize {
        return Err(Error::validation(
            "samples_x",
            format!("need at least {} samples for nx = {}, got {}", 16 * state.nx, state.nx, grid.samples_x),
        ));
    }
    if grid.samples_y < 16 * state.ny as usize {
        return Err(Error::validation(
            "samples_y",
            format!("need at least {} samples for ny = {}, got {}", 16 * state.ny, state.ny, grid.samples_y),
        ));
    }
    let spin = state.spin;
    let xs = grid.xs(geom);
    let ys = grid.ys(geom);
    let hx = xs[1] - xs[0];
    let hy = ys[1] - ys[0];
    let h = hx.min(hy);
    let cells: Vec<(usize, usize)> = (0..ys.len() - 1)
        .flat_map(|j| (0..xs.len() - 1).map(move |i| (i, j)))
        .collect();

    let candidates: Vec<Option<Point>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let (x0, x1, y0, y1) = (xs[i], xs[i + 1], ys[j], ys[j + 1]);
            let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
            let jx_flip = positive(current(params, spin, geom, xm, y0)[0]) != positive(current(params, spin, geom, xm, y1)[0]);
            let jy_flip = positive(current(params, spin, geom, x0, ym)[1]) != positive(current(params, spin, geom, x1, ym)[1]);
            if !(jx_flip && jy_flip) {
                return None;
            }
            let (mut x, mut y) = (xm, ym);
            for _ in 0..64 {
                let nx = bisect(|t| current(params, spin, geom, t, y)[1], x0, x1).unwrap_or(x);
                let ny = bisect(|t| current(params, spin, geom, nx, t)[0], y0, y1).unwrap_or(y);
                let moved = (nx - x).abs().max((ny - y).abs());
                x = nx;
                y = ny;
                if moved < 1e-12 {
                    break;
                }
            }
            Some(Point::new(x, y))
        })
        .collect();

    let radius = 0.25 * h;
    let jac_scale = params.current_scale() * params.kx.max(params.ky);
    let mut vortices: Vec<Vortex> = Vec::new();
    let mut discarded = 0;
    for c in candidates.into_iter().flatten() {
        if geom.wall_distance(c) < h || vortices.iter().any(|v| v.center.distance(&c) < 1e-3 * h) {
            discarded += 1;
            continue;
        }
        let jac = current_gradient(params, state, geom, c)?;
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < DEGENERATE_RATIO * jac_scale * jac_scale {
            discarded += 1;
            continue;
        }
        match loop_index(params, spin, geom, c, radius) {
            Some(1) => {
                let circ = circulation_unchecked(params, spin, geom, c, radius, 64);
                if circ == 0.0 {
                    discarded += 1;
                    continue;
                }
                vortices.push(Vortex {
                    center: c,
                    winding: if circ > 0.0 { 1 } else { -1 },
                    circulation: circ,
                });
            }
            _ => discarded += 1,
        }
    }
    vortices.sort_by(|a, b| a.center.y.total_cmp(&b.center.y).then(a.center.x.total_cmp(&b.center.x)));
    Ok(VortexReport {
        count: vortices.len(),
        vortices,
        discarded,
    })
}

/// ∮ j·dl/(ec) around a counterclockwise circle, trapezoidal rule, m.
pub fn circulation(
    params: &DerivedStateParams,
    state: StateIndex,
    geom: &WellGeometry,
    loop_center: Point,
    loop_radius: f64,
    n_segments: usize,
) -> Result<f64> {
    if n_segments < 64 {
        return Err(Error::validation("n_segments", format!("need at least 64 segments, got {n_segments}")));
    }
    if !(loop_radius > 0.0 && loop_radius.is_finite()) {
        return Err(Error::validation("loop_radius", format!("must be positive, got {loop_radius}")));
    }
    if geom.wall_distance(loop_center) <= loop_radius {
        return Err(Error::validation("loop_radius", "loop leaves the well"));
    }
    Ok(circulation_unchecked(params, state.spin, geom, loop_center, loop_radius, n_segments))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeSample {
    /// Arclength from the start corner, m.
    pub s: f64,
    pub point: Point,
    /// Component of j/(ec) along the counterclockwise loop direction.
    pub tangential: f64,
}

/// Wall-parallel current on the rectangle inset by `inset` from the walls,
/// counterclockwise from (−Lx+inset, −Ly+inset).
pub fn edge_profile(params: &DerivedStateParams, state: StateIndex, geom: &WellGeometry, inset: f64, n_samples: usize) -> Result<Vec<EdgeSample>> {
    geom.validate()?;
    let limit = 0.25 * geom.lx.min(geom.ly);
    if !(inset > 0.0 && inset < limit) {
        return Err(Error::validation("inset", format!("must lie in (0, {limit:e}) m, got {inset:e}")));
    }
    if n_samples < 4 {
        return Err(Error::validation("n_samples", format!("need at least 4 samples, got {n_samples}")));
    }
    let w = 2.0 * (geom.lx - inset);
    let hgt = 2.0 * (geom.ly - inset);
    let perimeter = 2.0 * (w + hgt);
    let (x0, y0) = (-geom.lx + inset, -geom.ly + inset);
    Ok((0..n_samples)
        .map(|i| {
            let s = perimeter * i as f64 / n_samples as f64;
            let (p, dir) = if s < w {
                (Point::new(x0 + s, y0), [1.0, 0.0])
            } else if s < w + hgt {
                (Point::new(x0 + w, y0 + (s - w)), [0.0, 1.0])
            } else if s < 2.0 * w + hgt {
                (Point::new(x0 + w - (s - w - hgt), y0 + hgt), [-1.0, 0.0])
            } else {
                (Point::new(x0, y0 + hgt - (s - 2.0 * w - hgt)), [0.0, -1.0])
            };
            let j = current_unchecked(params, state.spin, geom, p);
            EdgeSample {
                s,
                point: p,
                tangential: j[0] * dir[0] + j[1] * dir[1],
            }
        })
        .collect())
}

/// Sign changes along a sampled profile, ignoring samples whose magnitude is
/// below `rel_floor` times the profile maximum.
pub fn sign_changes(values: &[f64], rel_floor: f64) -> usize {
    let max = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let signs: Vec<bool> = values
        .iter()
        .filter(|v| v.abs() > rel_floor * max)
        .map(|v| *v > 0.0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
        + usize::from(signs.len() > 1 && signs[0] != signs[signs.len() - 1])
}

/// Maximum |∂x jx + ∂y jy| of j/(ec) over interior grid points, 1/m.
pub fn divergence_audit(params: &DerivedStateParams, state: StateIndex, geom: &WellGeometry, grid: &GridSpec) -> Result<f64> {
    divergence_audit_by(geom, grid, |p| current_gradient(params, state, geom, p))
}

/// Divergence audit over any Jacobian source `[[∂x jx, ∂y jx], [∂x jy, ∂y jy]]`.
pub fn divergence_audit_by<F>(geom: &WellGeometry, grid: &GridSpec, jacobian: F) -> Result<f64>
where
    F: Fn(Point) -> Result<[[f64; 2]; 2]> + Sync,
{
    let points: Vec<Point> = grid_points(geom, grid)?
        .into_iter()
        .filter(|p| geom.contains_strictly(*p))
        .collect();
    let divs: Vec<Result<f64>> = points
        .par_iter()
        .map(|&p| jacobian(p).map(|d| (d[0][0] + d[1][1]).abs()))
        .collect();
    let mut worst: f64 = 0.0;
    for d in divs {
        worst = worst.max(d?);
    }
    Ok(worst)
}
