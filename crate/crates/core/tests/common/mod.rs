#![allow(dead_code)]

use advdiff::{
    AmbientSignal, CoefficientLaw, Grid1D, InitialState, MaterialModel, PecletModel, ProblemSpec, RobinBoundary, Side,
    TimeControls,
};

/// Small problem with sinusoidal ambients on both walls.
pub fn small_problem(nodes: usize, material: MaterialModel<f64>, pe: f64, bi: (f64, f64), advective: bool) -> ProblemSpec<f64> {
    ProblemSpec {
        grid: Grid1D::new(nodes).unwrap(),
        time: TimeControls::fixed(1e-3, 1.0),
        material,
        peclet: PecletModel::Constant(pe),
        boundary_left: RobinBoundary::new(Side::Left, bi.0, AmbientSignal::sinusoids(1.0, &[(0.4, 3.0)]))
            .with_liquid_flux(0.05)
            .with_advective(advective),
        boundary_right: RobinBoundary::new(Side::Right, bi.1, AmbientSignal::sinusoids(1.2, &[(0.3, 5.0)]))
            .with_advective(advective),
        initial: InitialState { u: 1.0, humidity: 0.4 },
    }
}

/// Mildly nonlinear laws, positive on [0, 3].
pub fn bumpy_material() -> MaterialModel<f64> {
    MaterialModel::new(
        CoefficientLaw::new(3.0, 0.5, 2.0, 4.0, 1.2),
        CoefficientLaw::new(0.8, 0.2, 0.6, 3.0, 1.0),
    )
    .unwrap()
}

/// `z / (e^z - 1)` straight from the definition, series near zero.
pub fn bern(z: f64) -> f64 {
    if z.abs() < 1e-6 {
        1.0 - z / 2.0 + z * z / 12.0
    } else {
        z / z.exp_m1()
    }
}

/// Gaussian elimination with partial pivoting on a dense copy.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, p);
        b.swap(col, p);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

pub fn matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// Semi-discrete system `du/dt = M u + s` written out densely from the face
/// flux definitions, with coefficients frozen at `u` and time `t`.
pub fn dense_semidiscrete(spec: &ProblemSpec<f64>, u: &[f64], t: f64, fitted: bool) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = spec.grid.len();
    let dx = 1.0 / (n - 1) as f64;
    let pe = spec.peclet.value_at(t);
    let c: Vec<f64> = u.iter().map(|&v| spec.material.storage(v)).collect();
    let d: Vec<f64> = u.iter().map(|&v| spec.material.diffusion(v)).collect();
    // flux row k: coefficients on all nodes plus a constant
    let mut flux = vec![(vec![0.0; n], 0.0); n + 1];
    for k in 1..n {
        let df = 0.5 * (d[k - 1] + d[k]);
        let (wl, wr) = if fitted {
            let th = pe * dx / df;
            (df / dx * bern(-th), -df / dx * bern(th))
        } else {
            let (bp, bm) = if pe > 0.0 { (1.0, 0.0) } else if pe < 0.0 { (0.0, 1.0) } else { (0.5, 0.5) };
            (pe * bp + df / dx, pe * bm - df / dx)
        };
        flux[k].0[k - 1] = wl;
        flux[k].0[k] = wr;
    }
    let bl = &spec.boundary_left;
    let br = &spec.boundary_right;
    // J_0 = Pe u_0 + Bi (u_L - u_0) + g, J_N = Pe u_N + Bi (u_N - u_R); advective walls drop Pe u
    let adv_l = if bl.advective { 0.0 } else { pe };
    let adv_r = if br.advective { 0.0 } else { pe };
    flux[0].0[0] = adv_l - bl.biot;
    flux[0].1 = bl.biot * bl.ambient.eval(t) + bl.liquid_flux;
    flux[n].0[n - 1] = adv_r + br.biot;
    flux[n].1 = -br.biot * br.ambient.eval(t);
    let mut m = vec![vec![0.0; n]; n];
    let mut s = vec![0.0; n];
    for j in 0..n {
        let vol = if j == 0 || j == n - 1 { dx / 2.0 } else { dx };
        let cap = c[j] * vol;
        for i in 0..n {
            m[j][i] = (flux[j].0[i] - flux[j + 1].0[i]) / cap;
        }
        s[j] = (flux[j].1 - flux[j + 1].1) / cap;
    }
    (m, s)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// Classical RK4 for `u' = (a u - J) / nu`, returning the state at every step.
pub fn rk4_profile(u0: f64, j: f64, a: f64, nu: f64, length: f64, steps: usize) -> Vec<f64> {
    let f = |u: f64| (a * u - j) / nu;
    let h = length / steps as f64;
    let mut out = vec![u0];
    let mut u = u0;
    for _ in 0..steps {
        let k1 = f(u);
        let k2 = f(u + h / 2.0 * k1);
        let k3 = f(u + h / 2.0 * k2);
        let k4 = f(u + h * k3);
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push(u);
    }
    out
}
