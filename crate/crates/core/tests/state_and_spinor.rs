mod common;

use common::*;
use proptest::prelude::*;
use wavespin::geometry::normalization_squared;
use wavespin::spinor::{dirac_residual, evaluate_spinor};
use wavespin::{derive_params, grid_points, GridSpec, PhysicalConstants, Point, Spin, StateIndex, WellGeometry};

proptest! {
    #[test]
    fn energy_exceeds_rest_mass_and_matches_eta(
        nx in 1u32..60, ny in 1u32..60,
        lx in 1e-10f64..1e-6, ly in 1e-10f64..1e-6,
    ) {
        let k = PhysicalConstants::codata2018();
        let g = WellGeometry::new(lx, ly).unwrap();
        let p = derive_params(StateIndex::up(nx, ny).unwrap(), g, &k).unwrap();
        let ratio = p.energy / k.rest_energy();
        prop_assert!(ratio > 1.0 || p.kinetic_energy() > 0.0);
        prop_assert!(p.kinetic_energy() > 0.0);
        // (ℰ/mc²)² − 1 = η², relative to (ℰ/mc²)²
        prop_assert!((ratio * ratio - 1.0 - p.eta * p.eta).abs() <= 1e-12 * ratio * ratio);
        prop_assert!((p.kx - std::f64::consts::PI * f64::from(nx) / (2.0 * lx)).abs() <= 1e-15 * p.kx);
        prop_assert!((p.eta - p.eta_x.hypot(p.eta_y)).abs() <= 1e-15 * p.eta);
    }

    #[test]
    fn doubling_the_well_halves_eta(
        nx in 1u32..40, ny in 1u32..40,
        lx in 1e-9f64..1e-7, ly in 1e-9f64..1e-7,
    ) {
        let k = PhysicalConstants::codata2018();
        let s = StateIndex::up(nx, ny).unwrap();
        let p1 = derive_params(s, WellGeometry::new(lx, ly).unwrap(), &k).unwrap();
        let p2 = derive_params(s, WellGeometry::new(2.0 * lx, 2.0 * ly).unwrap(), &k).unwrap();
        prop_assert!((p1.eta_x - 2.0 * p2.eta_x).abs() <= 1e-12 * p1.eta_x);
        prop_assert!((p1.eta_y - 2.0 * p2.eta_y).abs() <= 1e-12 * p1.eta_y);
    }

    #[test]
    fn normalization_tends_to_four(eta in 0.0f64..1e-6) {
        prop_assert!((normalization_squared(eta) - 4.0).abs() <= eta * eta + 4.0 * f64::EPSILON);
    }

    #[test]
    fn spinor_is_finite_and_phase_only_in_time(
        fx in -1.0f64..=1.0, fy in -1.0f64..=1.0, t in 0.0f64..1e-9,
        nx in 1u32..6, ny in 1u32..6,
    ) {
        let g = well(10.0, 10.0);
        let (p, s) = state(nx, ny, Spin::Up);
        let q = Point::new(fx * g.lx, fy * g.ly);
        let v0 = evaluate_spinor(&p, s, &g, q, 0.0).unwrap();
        let vt = evaluate_spinor(&p, s, &g, q, t).unwrap();
        prop_assert!(vt.is_finite());
        prop_assert!((vt.norm() - v0.norm()).abs() <= 1e-14 * p.normalization());
    }
}

#[test]
fn eta_follows_non_reduced_compton_wavelength() {
    let k = PhysicalConstants::codata2018();
    for (nx, ny, lx, ly) in [(2u32, 2u32, 10.0, 10.0), (3, 1, 50.0, 20.0), (5, 4, 7.0, 13.0)] {
        let g = well(lx, ly);
        let (p, _) = state_in(nx, ny, Spin::Up, &g);
        let oracle = (f64::from(nx) * k.lambda_compton / (4.0 * g.lx)).hypot(f64::from(ny) * k.lambda_compton / (4.0 * g.ly));
        assert!((p.eta - oracle).abs() / oracle < 1e-12);
    }
}

#[test]
fn up_and_down_share_the_density() {
    let g = well(10.0, 10.0);
    for (nx, ny) in [(1, 1), (2, 2), (3, 2)] {
        let (p, up) = state(nx, ny, Spin::Up);
        let down = up.with_spin(Spin::Down);
        for q in grid_points(&g, &GridSpec::new(65, 65, true).unwrap()).unwrap() {
            let a = evaluate_spinor(&p, up, &g, q, 0.0).unwrap().norm_sqr();
            let b = evaluate_spinor(&p, down, &g, q, 0.0).unwrap().norm_sqr();
            assert!((a - b).abs() <= 1e-14 * a.max(b), "{q:?} {a} {b}");
        }
    }
}

#[test]
fn spin_down_has_empty_slots() {
    let g = well(10.0, 10.0);
    let (p, down) = state(3, 2, Spin::Down);
    let (_, up) = state(3, 2, Spin::Up);
    for q in grid_points(&g, &GridSpec::new(17, 17, false).unwrap()).unwrap() {
        let d = evaluate_spinor(&p, down, &g, q, 0.0).unwrap();
        assert_eq!(d.psi1().norm(), 0.0);
        assert_eq!(d.psi4().norm(), 0.0);
        let u = evaluate_spinor(&p, up, &g, q, 0.0).unwrap();
        assert_eq!(u.psi2().norm(), 0.0);
        assert_eq!(u.psi3().norm(), 0.0);
    }
}

#[test]
fn phase_at_one_femtosecond_and_picosecond() {
    let g = well(10.0, 10.0);
    let (p, s) = state(2, 2, Spin::Up);
    let q = Point::new(-5.0 * NM, -5.0 * NM);
    let v0 = evaluate_spinor(&p, s, &g, q, 0.0).unwrap();
    assert!(v0.psi1().im == 0.0 && v0.psi1().re > 0.0);
    for t in [1e-15, 1e-12] {
        let vt = evaluate_spinor(&p, s, &g, q, t).unwrap();
        assert!((vt.norm() - v0.norm()).abs() < 1e-14 * v0.norm());
        let phase = (vt.psi1() / v0.psi1()).arg();
        let want = (-p.energy * t / p.hbar).rem_euclid(2.0 * std::f64::consts::PI);
        let got = phase.rem_euclid(2.0 * std::f64::consts::PI);
        let diff = (got - want).abs();
        assert!(diff.min(2.0 * std::f64::consts::PI - diff) < 1e-6);
    }
}

#[test]
fn dirac_residual_examples() {
    let g = well(10.0, 10.0);
    let grid = GridSpec::new(33, 33, false).unwrap();
    let h = g.lx / 2048.0;

    let (p, s) = state(1, 1, Spin::Up);
    let r = dirac_residual(&p, s, &g, &grid, h).unwrap();
    assert!(r.max_rel < 1e-8, "{r:?}");
    assert_eq!(r.points, 33 * 33);

    for spin in [Spin::Up, Spin::Down] {
        let (p, s) = state(5, 3, spin);
        let r = dirac_residual(&p, s, &g, &grid, h).unwrap();
        assert!(r.max_rel < 1e-6, "{r:?}");
    }

    let mut bad = p;
    bad.energy *= 1.01;
    let r = dirac_residual(&bad, s, &g, &grid, h).unwrap();
    assert!((r.max_rel - 0.01 / 1.01).abs() < 1e-6, "{r:?}");
}
