mod common;

use advdiff::schemes::{
    bernoulli, cn_assemble_linear, cn_imex_step, cn_step, peclet_cfl_bound, right_wall_flux, robin_wall_flux,
    sg_cfl_max_dt, sg_interface_flux, sg_interpolate, sg_step, thomas_solve, FaceFlux, SchemeCoefficients,
    SpatialOperator, TridiagonalSystem,
};
use advdiff::{AmbientSignal, MaterialModel, RobinBoundary, Side, TimeControls};
use approx::assert_relative_eq;
use common::*;
use proptest::prelude::*;

/// Shooting oracle for the left wall: pick `J`, start from the Robin
/// condition, integrate to `h` and solve the (affine) miss for `u(h) = u_h`.
fn shoot_left(u_h: f64, bi: f64, amb: f64, g: f64, advective: bool, a: f64, nu: f64, h: f64) -> f64 {
    let beta = if advective { bi + a } else { bi };
    let s = bi * amb + g;
    let end = |j: f64| {
        // J = a u0 - nu u'(0) = a u0 - (beta u0 - s)
        let u0 = (j - s) / (a - beta);
        *rk4_profile(u0, j, a, nu, h, 4000).last().unwrap()
    };
    let (j0, j1) = (0.0, 1.0);
    let (e0, e1) = (end(j0), end(j1));
    j0 + (u_h - e0) * (j1 - j0) / (e1 - e0)
}

/// Right wall: total flux `J` leaves through `x = 1`; integrate backwards.
fn shoot_right(u_h: f64, bi: f64, amb: f64, advective: bool, a: f64, nu: f64, h: f64) -> f64 {
    let end = |j: f64| {
        // plain: -nu u'(1) = Bi (u - amb), so J = (a + Bi) u1 - Bi amb; advective: J = Bi (u1 - amb)
        let u1 = if advective { j / bi + amb } else { (j + bi * amb) / (a + bi) };
        *rk4_profile(u1, j, a, nu, -h, 4000).last().unwrap()
    };
    let (e0, e1) = (end(0.0), end(1.0));
    (u_h - e0) / (e1 - e0)
}

#[test]
fn wall_flux_matches_shooting_oracle() {
    let (bi, a, nu, dx, u1, ul) = (2.5, 1.0, 1.0, 0.1, 1.0, 1.0);
    for advective in [false, true] {
        let got = robin_wall_flux(u1, bi, ul, 0.0, advective, a, nu, dx / 2.0).unwrap();
        let want = shoot_left(u1, bi, ul, 0.0, advective, a, nu, dx / 2.0);
        assert_relative_eq!(got, want, max_relative = 1e-10);
    }
    for &(a, nu, g, h) in &[(-3.0, 0.4, 0.2, 0.05), (40.0, 0.7, 0.0, 0.1), (0.0, 2.0, -0.1, 0.02), (1e-9, 1.0, 0.0, 0.1)] {
        for advective in [false, true] {
            let got = robin_wall_flux(0.8, 1.7, 1.3, g, advective, a, nu, h).unwrap();
            let want = shoot_left(0.8, 1.7, 1.3, g, advective, a, nu, h);
            assert_relative_eq!(got, want, max_relative = 1e-8, epsilon = 1e-12);
            let got = right_wall_flux(0.8, 1.7, 1.3, advective, a, nu, h).unwrap();
            let want = shoot_right(0.8, 1.7, 1.3, advective, a, nu, h);
            assert_relative_eq!(got, want, max_relative = 1e-8, epsilon = 1e-12);
        }
    }
}

#[test]
fn wall_flux_at_the_wall_node() {
    // h = 0: J = Pe u + Bi (u_amb - u) + g
    let j = robin_wall_flux(0.9, 2.0, 1.4, 0.3, false, 5.0, 1.0, 0.0).unwrap();
    assert_relative_eq!(j, 5.0 * 0.9 + 2.0 * (1.4 - 0.9) + 0.3, max_relative = 1e-15);
    let j = robin_wall_flux(0.9, 2.0, 1.4, 0.3, true, 5.0, 1.0, 0.0).unwrap();
    assert_relative_eq!(j, 2.0 * (1.4 - 0.9) + 0.3, max_relative = 1e-15);
}

#[test]
fn interface_flux_and_profile_match_ode() {
    for &(a, nu, dx, uj, uj1) in &[(1.0, 1.0, 0.1, 1.0, 1.3), (-7.0, 0.3, 0.05, 0.4, 2.0), (30.0, 0.5, 0.2, 1.1, 0.2)] {
        // Dirichlet shooting: u(0) = uj, solve for J with u(dx) = uj1
        let steps = 8000;
        let end = |j: f64| *rk4_profile(uj, j, a, nu, dx, steps).last().unwrap();
        let (e0, e1) = (end(0.0), end(1.0));
        let j = (uj1 - e0) / (e1 - e0);
        let got = sg_interface_flux(uj, uj1, a, nu, dx).unwrap();
        assert_relative_eq!(got, j, max_relative = 1e-9, epsilon = 1e-12);
        let profile = rk4_profile(uj, j, a, nu, dx, steps);
        for k in [steps / 4, steps / 2, 3 * steps / 4] {
            let s = dx * k as f64 / steps as f64;
            assert_relative_eq!(sg_interpolate(s, dx, uj, uj1, a, nu), profile[k], max_relative = 1e-8);
        }
    }
}

#[test]
fn interface_flux_limits() {
    let (u0, u1, dx) = (0.7, 1.9, 0.01);
    // vanishing diffusion gives the upstream value
    let f = sg_interface_flux(u0, u1, 3.0, 1e-9, dx).unwrap();
    assert_relative_eq!(f, 3.0 * u0, max_relative = 1e-6);
    let f = sg_interface_flux(u0, u1, -3.0, 1e-9, dx).unwrap();
    assert_relative_eq!(f, -3.0 * u1, max_relative = 1e-6);
    // vanishing advection gives the central difference
    let f = sg_interface_flux(u0, u1, 1e-12, 0.8, dx).unwrap();
    assert_relative_eq!(f, -0.8 * (u1 - u0) / dx, max_relative = 1e-9);
    assert!(sg_interface_flux(u0, u1, 1.0, 0.0, dx).is_err());
}

#[test]
fn bernoulli_matches_definition() {
    for z in [-700.0, -40.0, -3.0, -1e-3, 1e-7, 0.5, 12.0, 300.0] {
        assert_relative_eq!(bernoulli(z), bern(z), max_relative = 1e-12);
        assert_relative_eq!(bernoulli(-z) - bernoulli(z), z, max_relative = 1e-12, epsilon = 1e-12);
    }
    assert_eq!(bernoulli(0.0), 1.0);
}

#[test]
fn sg_step_matches_dense_update() {
    for advective in [false, true] {
        let spec = small_problem(5, bumpy_material(), 2.0, (3.0, 1.5), advective);
        let u = vec![0.9, 1.4, 1.1, 1.7, 0.6];
        let (t, dt) = (0.37, 2e-3);
        let got = sg_step(&u, &spec, t, dt).unwrap();
        let (m, s) = dense_semidiscrete(&spec, &u, t, true);
        let mu = matvec(&m, &u);
        let want: Vec<f64> = (0..5).map(|j| u[j] + dt * (mu[j] + s[j])).collect();
        for (g, w) in got.iter().zip(&want) {
            assert_relative_eq!(g, w, max_relative = 1e-14);
        }
    }
}

#[test]
fn cn_step_matches_dense_solve() {
    for advective in [false, true] {
        let mut spec = small_problem(9, MaterialModel::constant(2.0, 0.7).unwrap(), 3.0, (2.5, 1.0), advective);
        spec.peclet = advdiff::PecletModel::piecewise(&[0.0, 0.4, 1.0], &[3.0, -1.5]).unwrap();
        let u: Vec<f64> = (0..9).map(|j| 1.0 + 0.3 * (j as f64).sin()).collect();
        let (t, dt) = (0.3, 0.2);
        let got = cn_step(&u, &spec, t, dt).unwrap();
        let (m0, s0) = dense_semidiscrete(&spec, &u, t, false);
        let (m1, s1) = dense_semidiscrete(&spec, &u, t + dt, false);
        let h = dt / 2.0;
        let lhs: Vec<Vec<f64>> = (0..9).map(|i| (0..9).map(|k| (i == k) as u8 as f64 - h * m1[i][k]).collect()).collect();
        let m0u = matvec(&m0, &u);
        let rhs: Vec<f64> = (0..9).map(|i| u[i] + h * (m0u[i] + s0[i] + s1[i])).collect();
        let want = dense_solve(lhs, rhs);
        assert!(max_abs_diff(&got, &want) < 1e-13, "{got:?} vs {want:?}");
    }
}

#[test]
fn cn_interior_rows_have_upwind_form() {
    let (c, d, pe) = (2.0, 0.7, 3.0);
    let spec = small_problem(11, MaterialModel::constant(c, d).unwrap(), pe, (1.0, 1.0), false);
    let dt = 0.05;
    let sys = cn_assemble_linear(&spec.initial_row(), &spec, 0.0, dt).unwrap();
    let k = SchemeCoefficients::new(pe / c, d / c, spec.grid.dx(), dt);
    for j in 1..10 {
        assert_relative_eq!(sys.sub[j], -(k.gamma * k.b_plus + k.lambda), max_relative = 1e-13);
        assert_relative_eq!(sys.main[j], 1.0 + 2.0 * k.lambda + k.gamma * (k.b_plus - k.b_minus), max_relative = 1e-13);
        assert_relative_eq!(sys.sup[j], -(k.lambda - k.gamma * k.b_minus), max_relative = 1e-13, epsilon = 1e-15);
    }
    assert!(sys.is_diagonally_dominant());
}

#[test]
fn imex_equals_cn_for_constant_coefficients() {
    let spec = small_problem(21, MaterialModel::constant(5.0, 1.3).unwrap(), 4.0, (2.0, 0.5), false);
    let u: Vec<f64> = (0..21).map(|j| 1.0 + 0.01 * j as f64).collect();
    let a = cn_step(&u, &spec, 0.2, 0.1).unwrap();
    let b = cn_imex_step(&u, &spec, 0.2, 0.1).unwrap();
    // t + dt - t differs from dt by rounding
    assert!(max_abs_diff(&a, &b) < 1e-14);
    assert!(cn_step(&u, &small_problem(21, bumpy_material(), 4.0, (2.0, 0.5), false), 0.0, 0.1).is_err());
}

#[test]
fn matching_uniform_state_is_stationary() {
    for material in [MaterialModel::constant(3.0, 1.0).unwrap(), bumpy_material()] {
        let mut spec = small_problem(31, material, 6.0, (2.0, 3.0), false);
        spec.boundary_left = RobinBoundary::new(Side::Left, 2.0, AmbientSignal::constant(1.0));
        spec.boundary_right = RobinBoundary::new(Side::Right, 3.0, AmbientSignal::constant(1.0));
        let u = spec.initial_row();
        let dt = 0.5 * sg_cfl_max_dt(&spec, &u, 0.0).unwrap();
        assert!(max_abs_diff(&sg_step(&u, &spec, 0.0, dt).unwrap(), &u) < 1e-14);
        assert!(max_abs_diff(&cn_imex_step(&u, &spec, 0.0, 0.3).unwrap(), &u) < 1e-14);
        if spec.is_linear() {
            assert!(max_abs_diff(&cn_step(&u, &spec, 0.0, 0.3).unwrap(), &u) < 1e-14);
        }
    }
}

fn closed_box(material: MaterialModel<f64>) -> advdiff::Problem {
    let mut spec = small_problem(41, material, 5.0, (0.0, 0.0), true);
    spec.boundary_left.liquid_flux = 0.0;
    spec
}

fn bump(n: usize) -> Vec<f64> {
    (0..n).map(|j| 1.0 + 0.5 * (-((j as f64 - 12.0) / 4.0).powi(2)).exp()).collect()
}

#[test]
fn closed_box_conserves_mass_per_step() {
    for material in [MaterialModel::constant(3.0, 1.0).unwrap(), bumpy_material()] {
        let spec = closed_box(material);
        let u = bump(41);
        let op = SpatialOperator::build(&spec, FaceFlux::Fitted, &u, 0.0, 0.0).unwrap();
        let dt = 0.9 * op.positivity_bound();
        let next = sg_step(&u, &spec, 0.0, dt).unwrap();
        let change: f64 = (0..41).map(|j| op.capacity[j] * (next[j] - u[j])).sum();
        assert!(change.abs() < 1e-14, "{change}");
        let next = cn_imex_step(&u, &spec, 0.0, 0.05).unwrap();
        let op = SpatialOperator::build(&spec, FaceFlux::Upwind, &u, 0.0, 0.0).unwrap();
        let change: f64 = (0..41).map(|j| op.capacity[j] * (next[j] - u[j])).sum();
        assert!(change.abs() < 1e-13, "{change}");
    }
}

#[test]
fn open_walls_balance_boundary_fluxes() {
    let spec = small_problem(41, bumpy_material(), 5.0, (2.0, 1.0), false);
    let u = bump(41);
    let op = SpatialOperator::build(&spec, FaceFlux::Fitted, &u, 0.4, 0.4).unwrap();
    let dt = 0.5 * op.positivity_bound();
    let next = sg_step(&u, &spec, 0.4, dt).unwrap();
    let f = op.fluxes(&u);
    let change: f64 = (0..41).map(|j| op.capacity[j] * (next[j] - u[j])).sum();
    assert_relative_eq!(change, dt * (f[0] - f[41]), max_relative = 1e-10, epsilon = 1e-15);
}

#[test]
fn cfl_bound_matches_closed_form() {
    // interior nodes carry the closed-form bound; walls may be tighter
    let (c, d, pe) = (47.0, 1.0, 20.0);
    let spec = small_problem(201, MaterialModel::constant(c, d).unwrap(), pe, (2.5, 1.0), false);
    let op = SpatialOperator::build(&spec, FaceFlux::Fitted, &spec.initial_row(), 0.0, 0.0).unwrap();
    let dx = spec.grid.dx();
    let closed = peclet_cfl_bound(pe, d, c, dx);
    let j = 100;
    let interior = op.capacity[j] / (op.left[j + 1] - op.right[j]);
    assert_relative_eq!(interior, closed, max_relative = 1e-12);
    assert!(op.positivity_bound() <= closed * (1.0 + 1e-12));
    assert_relative_eq!(peclet_cfl_bound(0.0, d, c, dx), c * dx * dx / (2.0 * d), max_relative = 1e-15);
}

#[test]
fn sg_step_within_bound_is_a_convex_combination() {
    let spec = small_problem(41, bumpy_material(), 8.0, (2.0, 1.0), false);
    let u = bump(41);
    let op = SpatialOperator::build(&spec, FaceFlux::Fitted, &u, 0.0, 0.0).unwrap();
    let st = op.explicit_stencil(op.positivity_bound());
    // apply to unit vectors with zero sources: all weights must be non-negative
    for k in 0..41 {
        let mut e = vec![0.0; 41];
        e[k] = 1.0;
        let mut out = vec![0.0; 41];
        st.apply(&e, 0.0, 0.0, &mut out);
        assert!(out.iter().all(|&w| w >= -1e-15), "column {k}: {out:?}");
    }
}

#[test]
fn cn_is_bounded_at_large_steps() {
    let case = advdiff::cases::build_linear_case::<f64>();
    let (lo, hi) = (0.2, 1.8);
    for dt in [0.1, 1.0] {
        let mut spec = case.spec.clone().with_time(TimeControls::fixed(dt, 120.0));
        spec.grid = advdiff::Grid1D::new(401).unwrap();
        let run = advdiff::driver::solve(&spec, advdiff::Scheme::Cn, &[]).unwrap();
        assert!(run.is_completed());
        let margin = 0.1 * (hi - lo);
        for row in &run.field.rows {
            assert!(row.iter().all(|&v| v >= lo - margin && v <= hi + margin), "dt = {dt}");
        }
    }
}

fn dominant_system(n: usize, vals: &[f64]) -> TridiagonalSystem<f64> {
    let mut sys = TridiagonalSystem::zeros(n);
    for i in 0..n {
        let v = &vals[4 * i..4 * i + 4];
        sys.sub[i] = if i > 0 { v[0] } else { 0.0 };
        sys.sup[i] = if i + 1 < n { v[1] } else { 0.0 };
        let sign = if v[2] < 0.0 { -1.0 } else { 1.0 };
        sys.main[i] = sign * (sys.sub[i].abs() + sys.sup[i].abs() + 0.1 + v[2].abs());
        sys.rhs[i] = v[3] * 10.0;
    }
    sys
}

#[test]
fn thomas_matches_dense_elimination_at_size_100() {
    let vals: Vec<f64> = (0..400).map(|i| (i as f64 * 0.7314).sin() * 3.0).collect();
    let sys = dominant_system(100, &vals);
    let x = thomas_solve(&sys).unwrap();
    let dense: Vec<Vec<f64>> = (0..100)
        .map(|i| {
            (0..100)
                .map(|k| match k as isize - i as isize {
                    -1 => sys.sub[i],
                    0 => sys.main[i],
                    1 => sys.sup[i],
                    _ => 0.0,
                })
                .collect()
        })
        .collect();
    let y = dense_solve(dense, sys.rhs.clone());
    assert!(max_abs_diff(&x, &y) < 1e-11);
    let r = sys.matvec(&x);
    assert!(max_abs_diff(&r, &sys.rhs) < 1e-11);
}

#[test]
fn thomas_rejects_zero_pivot() {
    let mut sys = TridiagonalSystem::zeros(3);
    sys.main = vec![0.0, 1.0, 1.0];
    sys.rhs = vec![1.0; 3];
    assert!(thomas_solve(&sys).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn thomas_residual_is_small(n in 2usize..100, vals in prop::collection::vec(-5.0f64..5.0, 400)) {
        let sys = dominant_system(n, &vals);
        let x = thomas_solve(&sys).unwrap();
        let r = sys.matvec(&x);
        let scale = sys.rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!(max_abs_diff(&r, &sys.rhs) <= 1e-11 * scale);
    }

    #[test]
    fn interface_flux_is_antisymmetric(u0 in 0.0f64..3.0, u1 in 0.0f64..3.0, a in -50.0f64..50.0, nu in 0.01f64..10.0) {
        // mirroring space swaps the nodes and flips both advection and flux
        let f = sg_interface_flux(u0, u1, a, nu, 0.01).unwrap();
        let g = sg_interface_flux(u1, u0, -a, nu, 0.01).unwrap();
        prop_assert!((f + g).abs() <= 1e-10 * (1.0 + f.abs()));
    }

    #[test]
    fn equal_nodes_carry_pure_advection(u in 0.0f64..3.0, a in -50.0f64..50.0, nu in 0.01f64..10.0) {
        let f = sg_interface_flux(u, u, a, nu, 0.02).unwrap();
        prop_assert!((f - a * u).abs() <= 1e-10 * (1.0 + (a * u).abs()));
    }

    #[test]
    fn interpolated_profile_stays_between_nodes(s in 0.0f64..1.0, u0 in 0.0f64..3.0, u1 in 0.0f64..3.0, a in -500.0f64..500.0) {
        let v = sg_interpolate(s * 0.1, 0.1, u0, u1, a, 0.3);
        prop_assert!(v >= u0.min(u1) - 1e-12 && v <= u0.max(u1) + 1e-12);
    }

    #[test]
    fn wall_flux_is_finite_for_any_drift(a in -1e3f64..1e3, bi in 0.0f64..100.0, h in 0.0f64..0.5) {
        let j = robin_wall_flux(1.2, bi, 0.8, 0.1, false, a, 0.5, h).unwrap();
        prop_assert!(j.is_finite());
    }
}
