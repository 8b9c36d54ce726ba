#![allow(dead_code)]

use wavespin::{derive_params, DerivedStateParams, PhysicalConstants, Spin, StateIndex, WellGeometry};

pub const NM: f64 = 1e-9;

pub fn well(lx_nm: f64, ly_nm: f64) -> WellGeometry {
    WellGeometry::new(lx_nm * NM, ly_nm * NM).unwrap()
}

pub fn state(nx: u32, ny: u32, spin: Spin) -> (DerivedStateParams, StateIndex) {
    state_in(nx, ny, spin, &well(10.0, 10.0))
}

pub fn state_in(nx: u32, ny: u32, spin: Spin, geom: &WellGeometry) -> (DerivedStateParams, StateIndex) {
    let s = StateIndex::new(nx, ny, spin).unwrap();
    (derive_params(s, *geom, &PhysicalConstants::codata2018()).unwrap(), s)
}

/// Closed-form well average of ĵ·A/B for a patch potential, in μ_B·B units.
///
/// Uses the antiderivatives of sin²(k(x+L)) and (x−c)·sin(2k(x+L)) on the
/// intersection of the patch with the well. Independent of the library's
/// quadrature and current evaluation.
pub fn patch_shift_oracle(
    p: &DerivedStateParams,
    spin: Spin,
    geom: &WellGeometry,
    center: (f64, f64),
    half: (f64, f64),
) -> f64 {
    let (a, b) = center;
    let x0 = (a - half.0).max(-geom.lx);
    let x1 = (a + half.0).min(geom.lx);
    let y0 = (b - half.1).max(-geom.ly);
    let y1 = (b + half.1).min(geom.ly);
    if x0 >= x1 || y0 >= y1 {
        return 0.0;
    }
    let g = (1.0 + p.eta * p.eta).sqrt();
    let cx = spin.sign() * 2.0 * p.eta_y / g;
    let cy = spin.sign() * 2.0 * p.eta_x / g;
    let sin2 = |k: f64, l: f64, lo: f64, hi: f64| {
        let f = |x: f64| x / 2.0 - (2.0 * k * (x + l)).sin() / (4.0 * k);
        f(hi) - f(lo)
    };
    let lin = |k: f64, l: f64, c: f64, lo: f64, hi: f64| {
        let f = |x: f64| {
            let th = 2.0 * k * (x + l);
            -(x - c) * th.cos() / (2.0 * k) + th.sin() / (4.0 * k * k)
        };
        f(hi) - f(lo)
    };
    // ĵ·A/B = ½[−(y−b)·jx + (x−a)·jy], jx = cx sin²X sin2Y, jy = −cy sin²Y sin2X
    let term_x = -cx * sin2(p.kx, geom.lx, x0, x1) * lin(p.ky, geom.ly, b, y0, y1);
    let term_y = -cy * sin2(p.ky, geom.ly, y0, y1) * lin(p.kx, geom.lx, a, x0, x1);
    let avg = 0.5 * (term_x + term_y) / geom.area();
    2.0 * avg / p.lambda_reduced
}
