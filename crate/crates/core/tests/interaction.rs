mod common;

use common::*;
use wavespin::interaction::{energy_shift, scan_patch, zeeman_splitting};
use wavespin::{GridSpec, PhysicalConstants, QuadratureSpec, Spin, VectorPotentialSpec};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn uniform_shift_is_inverse_gamma() {
    let k = PhysicalConstants::codata2018();
    let q = QuadratureSpec::default();
    for g in [well(10.0, 10.0), well(50.0, 20.0)] {
        for (nx, ny) in [(1, 1), (2, 2), (3, 2), (4, 4)] {
            let (p, s) = state_in(nx, ny, Spin::Up, &g);
            let r = energy_shift(&p, s, &g, &VectorPotentialSpec::uniform(1.0), &q, &k).unwrap();
            let want = 1.0 / p.gamma();
            assert!(rel(r.shift_mu_b_units, want) < 1e-10, "({nx},{ny}) {}", r.shift_mu_b_units);
            let oracle = patch_shift_oracle(&p, Spin::Up, &g, (0.0, 0.0), (g.lx, g.ly));
            assert!(rel(oracle, want) < 1e-12);
            assert!(r.est_error <= 1e-12 * want);
        }
    }
}

#[test]
fn quarter_patches_at_corners_and_center() {
    let k = PhysicalConstants::codata2018();
    let q = QuadratureSpec::default();
    let g = well(10.0, 10.0);
    let (p, s) = state(2, 2, Spin::Up);
    let want = 0.25 / p.gamma();
    let mut sum = 0.0;
    for (a, b) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
        let (a, b) = (0.5 * a * g.lx, 0.5 * b * g.ly);
        let pot = VectorPotentialSpec::quarter_patch(1.0, &g, a, b);
        let r = energy_shift(&p, s, &g, &pot, &q, &k).unwrap();
        assert!(rel(r.shift_mu_b_units, want) < 1e-9, "({a},{b}) {}", r.shift_mu_b_units);
        let oracle = patch_shift_oracle(&p, Spin::Up, &g, (a, b), (0.5 * g.lx, 0.5 * g.ly));
        assert!(rel(r.shift_mu_b_units, oracle) < 1e-10);
        assert!(r.est_error <= 1e-9 * want);
        sum += r.shift_mu_b_units;
    }
    let uniform = energy_shift(&p, s, &g, &VectorPotentialSpec::uniform(1.0), &q, &k).unwrap();
    assert!(rel(sum, uniform.shift_mu_b_units) < 1e-9);

    // The centered patch sees the counter-flow between the four vortices:
    // it picks up minus one quarter, not zero.
    let center = energy_shift(&p, s, &g, &VectorPotentialSpec::quarter_patch(1.0, &g, 0.0, 0.0), &q, &k).unwrap();
    assert!(rel(center.shift_mu_b_units, -want) < 1e-9, "{}", center.shift_mu_b_units);
    let oracle = patch_shift_oracle(&p, Spin::Up, &g, (0.0, 0.0), (0.5 * g.lx, 0.5 * g.ly));
    assert!(rel(center.shift_mu_b_units, oracle) < 1e-10);
}

#[test]
fn off_grid_patches_match_oracle() {
    let k = PhysicalConstants::codata2018();
    let q = QuadratureSpec::default();
    for g in [well(10.0, 10.0), well(50.0, 20.0)] {
        for (nx, ny) in [(1, 1), (3, 2), (4, 4)] {
            let (p, s) = state_in(nx, ny, Spin::Up, &g);
            for (fa, fb, fw, fh) in [(0.13, -0.41, 0.3, 0.2), (-0.5, 0.25, 0.5, 0.5), (0.0, 0.0, 0.77, 0.61)] {
                let (a, b, w, h) = (fa * g.lx, fb * g.ly, fw * g.lx, fh * g.ly);
                let pot = VectorPotentialSpec::patch(1.0, a, b, w, h);
                let r = energy_shift(&p, s, &g, &pot, &q, &k).unwrap();
                let oracle = patch_shift_oracle(&p, Spin::Up, &g, (a, b), (w, h));
                assert!((r.shift_mu_b_units - oracle).abs() < 1e-10 / p.gamma(), "{} {oracle}", r.shift_mu_b_units);
            }
        }
    }
}

#[test]
fn quadrature_converges() {
    let k = PhysicalConstants::codata2018();
    let g = well(50.0, 20.0);
    let (p, s) = state_in(3, 2, Spin::Up, &g);
    let q32 = QuadratureSpec::gauss_legendre(32).unwrap();
    let q64 = QuadratureSpec::gauss_legendre(64).unwrap();
    let uni = VectorPotentialSpec::uniform(1.0);
    let u1 = energy_shift(&p, s, &g, &uni, &q32, &k).unwrap().shift_mu_b_units;
    let u2 = energy_shift(&p, s, &g, &uni, &q64, &k).unwrap().shift_mu_b_units;
    assert!(rel(u1, u2) < 1e-12);
    let patch = VectorPotentialSpec::patch(1.0, 0.1 * g.lx, -0.2 * g.ly, 0.4 * g.lx, 0.3 * g.ly);
    let p1 = energy_shift(&p, s, &g, &patch, &q32, &k).unwrap().shift_mu_b_units;
    let p2 = energy_shift(&p, s, &g, &patch, &q64, &k).unwrap().shift_mu_b_units;
    assert!(rel(p1, p2) < 1e-9);

    let simpson = QuadratureSpec::simpson(256).unwrap();
    let s1 = energy_shift(&p, s, &g, &uni, &simpson, &k).unwrap().shift_mu_b_units;
    assert!(rel(s1, u2) < 1e-8);
}

#[test]
fn spin_antisymmetry_for_all_potentials() {
    let k = PhysicalConstants::codata2018();
    let q = QuadratureSpec::default();
    let g = well(10.0, 10.0);
    for (nx, ny) in [(1, 1), (2, 2), (3, 2)] {
        let (p, up) = state(nx, ny, Spin::Up);
        let down = up.with_spin(Spin::Down);
        for pot in [
            VectorPotentialSpec::uniform(2.0),
            VectorPotentialSpec::quarter_patch(2.0, &g, -0.5 * g.lx, 0.5 * g.ly),
            VectorPotentialSpec::patch(2.0, 0.1 * g.lx, 0.2 * g.ly, 0.3 * g.lx, 0.4 * g.ly),
        ] {
            let a = energy_shift(&p, up, &g, &pot, &q, &k).unwrap();
            let b = energy_shift(&p, down, &g, &pot, &q, &k).unwrap();
            assert!((a.shift_mu_b_units + b.shift_mu_b_units).abs() <= 1e-12 * a.shift_mu_b_units.abs());
        }
    }
}

#[test]
fn zeeman_splitting_example() {
    let k = PhysicalConstants::codata2018();
    let g = well(10.0, 10.0);
    let (p, s) = state(2, 2, Spin::Up);
    let z = zeeman_splitting(&p, s, &g, 1.0, &QuadratureSpec::default(), &k).unwrap();
    assert!(rel(z.delta_mu_b_units, 2.0 / p.gamma()) < 1e-10);
    let oracle_ev = 2.0 * k.mu_b_ev() / p.gamma();
    assert!(rel(z.delta_ev, oracle_ev) < 1e-10);
    assert!((z.delta_ev - 1.1576763e-4).abs() < 1e-11);
    let deficit = 1.0 - z.delta_mu_b_units / 2.0;
    assert!((deficit - 1.47175e-8).abs() < 1e-11);

    // a macroscopic well: η ≈ 0 and the splitting is the free-electron 2μ_B·B
    let big = well(1e9, 1e9);
    let (p, s) = state_in(1, 1, Spin::Up, &big);
    let z = zeeman_splitting(&p, s, &big, 1.0, &QuadratureSpec::default(), &k).unwrap();
    assert!((z.delta_mu_b_units - 2.0).abs() < 1e-12);
}

#[test]
fn scan_reproduces_corners_and_center() {
    let k = PhysicalConstants::codata2018();
    let g = well(10.0, 10.0);
    let (p, s) = state(2, 2, Spin::Up);
    let template = VectorPotentialSpec::quarter_patch(1.0, &g, 0.0, 0.0);
    let scan = scan_patch(&p, s, &g, &template, &GridSpec::new(3, 3, true).unwrap(), &QuadratureSpec::default(), false, &k).unwrap();
    let want = 0.25 / p.gamma();
    for (i, j) in [(0, 0), (2, 0), (0, 2), (2, 2)] {
        assert!(rel(scan.at(i, j), want) < 1e-9);
    }
    assert!(rel(scan.at(1, 1), -want) < 1e-9);
    assert_eq!(scan.a_values, vec![-0.5 * g.lx, 0.0, 0.5 * g.lx]);
}

#[test]
fn scan_map_point_symmetry() {
    let k = PhysicalConstants::codata2018();
    let g = well(10.0, 10.0);
    let (p, s) = state(2, 2, Spin::Up);
    let template = VectorPotentialSpec::quarter_patch(1.0, &g, 0.0, 0.0);
    let n = 9;
    let scan = scan_patch(&p, s, &g, &template, &GridSpec::new(n, n, true).unwrap(), &QuadratureSpec::default(), false, &k).unwrap();
    for j in 0..n {
        for i in 0..n {
            assert!((scan.at(i, j) - scan.at(n - 1 - i, n - 1 - j)).abs() < 1e-10, "({i},{j})");
            let oracle = patch_shift_oracle(&p, Spin::Up, &g, (scan.a_values[i], scan.b_values[j]), (0.5 * g.lx, 0.5 * g.ly));
            assert!((scan.at(i, j) - oracle).abs() < 1e-10);
        }
    }
    assert!(scan.max_est_error < 1e-9);
}

#[test]
fn ground_state_center_patch() {
    // The (1,1) current circulates once around the whole well, so a
    // centered quarter-area patch picks up a nonzero share.
    let k = PhysicalConstants::codata2018();
    let g = well(10.0, 10.0);
    let (p, s) = state(1, 1, Spin::Up);
    let pot = VectorPotentialSpec::quarter_patch(1.0, &g, 0.0, 0.0);
    let r = energy_shift(&p, s, &g, &pot, &QuadratureSpec::default(), &k).unwrap();
    let oracle = patch_shift_oracle(&p, Spin::Up, &g, (0.0, 0.0), (0.5 * g.lx, 0.5 * g.ly));
    assert!(rel(r.shift_mu_b_units, oracle) < 1e-10);
    assert!(r.est_error < 1e-9 * oracle);
    // closed form: (π + 2)/(2π²) of the uniform shift
    let pi = std::f64::consts::PI;
    assert!(rel(oracle * p.gamma(), (pi + 2.0) / (2.0 * pi * pi)) < 1e-12, "{oracle}");
}

#[test]
fn clipped_scan_matches_intersection_oracle() {
    let k = PhysicalConstants::codata2018();
    let g = well(10.0, 10.0);
    let (p, s) = state(3, 2, Spin::Up);
    let template = VectorPotentialSpec::patch(1.0, 0.0, 0.0, 0.8 * g.lx, 0.7 * g.ly);
    let scan = scan_patch(&p, s, &g, &template, &GridSpec::new(5, 5, true).unwrap(), &QuadratureSpec::default(), true, &k).unwrap();
    for j in 0..5 {
        for i in 0..5 {
            let oracle = patch_shift_oracle(&p, Spin::Up, &g, (scan.a_values[i], scan.b_values[j]), (0.8 * g.lx, 0.7 * g.ly));
            assert!((scan.at(i, j) - oracle).abs() < 1e-10);
        }
    }
}
