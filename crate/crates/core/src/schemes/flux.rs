use serde::{Deserialize, Serialize};

use super::bernoulli;
use crate::error::{invalid, Error, Result};
use crate::model::{RobinBoundary, Side};
use crate::scalar::Real;

/// Flux value `J = a u - nu u_x` at face `index`.
///
/// Faces are numbered `0..=N`: face `0` is the left wall, face `N` the right
/// wall, and face `k` for `0 < k < N` separates nodes `k - 1` and `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceFlux<T> {
    pub index: usize,
    pub value: T,
}

/// Per-face scheme constants for advection `a`, diffusivity `nu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeCoefficients<T> {
    /// `nu dt / (2 dx^2)`
    pub lambda: T,
    /// `a dt / (2 dx)`
    pub gamma: T,
    /// `(1 + sign a) / 2`
    pub b_plus: T,
    /// `(1 - sign a) / 2`
    pub b_minus: T,
    /// `a dx / nu`
    pub theta: T,
}

impl<T: Real> SchemeCoefficients<T> {
    pub fn new(a: T, nu: T, dx: T, dt: T) -> Self {
        let two = T::lit(2.0);
        let (b_plus, b_minus) = upwind_weights(a);
        Self { lambda: nu * dt / (two * dx * dx), gamma: a * dt / (two * dx), b_plus, b_minus, theta: a * dx / nu }
    }
}

/// `(b+, b-)`; both are `1/2` at `a = 0`.
#[inline]
pub fn upwind_weights<T: Real>(a: T) -> (T, T) {
    let half = T::lit(0.5);
    if a > T::zero() {
        (T::one(), T::zero())
    } else if a < T::zero() {
        (T::zero(), T::one())
    } else {
        (half, half)
    }
}

/// Scharfetter-Gummel flux between `u_j` (left) and `u_j1` (right).
pub fn sg_interface_flux<T: Real>(u_j: T, u_j1: T, a: T, nu: T, dx: T) -> Result<T> {
    if !(nu > T::zero()) {
        return Err(invalid("nu", format!("diffusion must be positive, got {nu}")));
    }
    if !(dx > T::zero()) {
        return Err(invalid("dx", format!("spacing must be positive, got {dx}")));
    }
    let (bm, bp) = bernoulli::bernoulli_pair(a * dx / nu);
    Ok(nu / dx * (bm * u_j - bp * u_j1))
}

/// Exact constant-flux profile between two nodes, evaluated at offset `s`
/// from the left node (`0 <= s <= dx`).
///
/// Written as `u_j + (u_j1 - u_j) w(s)` with `w = expm1(a s/nu) / expm1(a dx/nu)`,
/// rescaled for large positive exponents; `a = 0` gives linear interpolation.
pub fn sg_interpolate<T: Real>(s: T, dx: T, u_j: T, u_j1: T, a: T, nu: T) -> T {
    let p = a * dx / nu;
    let q = a * s / nu;
    let w = if p.abs() < T::lit(1e-12) {
        s / dx
    } else if p > T::lit(1.0) {
        // e^{q-p} (1 - e^{-q}) / (1 - e^{-p}), bounded for any p > 0
        (q - p).exp() * (-(-q).exp_m1()) / (-(-p).exp_m1())
    } else {
        q.exp_m1() / p.exp_m1()
    };
    u_j + (u_j1 - u_j) * w
}

/// Coefficients `(beta, s)` of the left-wall condition `nu u'(0) = beta u(0) - s`.
///
/// Plain walls have `beta = Bi`; with the advective variant the drift term is
/// folded into the wall balance and `beta = Bi + a`. In both cases
/// `s = Bi u_amb + g`. The right wall reuses this with `a -> -a`.
fn wall_coefficients<T: Real>(biot: T, ambient: T, g: T, a: T, advective: bool) -> (T, T) {
    let beta = if advective { biot + a } else { biot };
    (beta, biot * ambient + g)
}

/// Flux through the left wall when the field is known at distance `h` inside.
///
/// Solves `a u - nu u' = J` on `[0, h]` with the Robin condition at `x = 0`:
///
/// `J = -[(beta - a) u_h - s e^z] / [1 + (beta h / nu) / B(z)]`, `z = a h / nu`,
///
/// which is the closed form `a[(beta - a) u_h - s e^z] / [beta - a - beta e^z]`
/// divided through by `-a`, so `a -> 0` needs no special branch. With `h = 0`
/// this is the Robin flux imposed directly at a wall node.
#[allow(clippy::too_many_arguments)]
pub fn robin_wall_flux<T: Real>(u_h: T, biot: T, ambient: T, g: T, advective: bool, a: T, nu: T, h: T) -> Result<T> {
    let (beta, s) = wall_coefficients(biot, ambient, g, a, advective);
    let singular = || Error::SingularBoundary {
        biot: biot.as_f64(),
        advection: a.as_f64(),
        distance: h.as_f64(),
        diffusion: nu.as_f64(),
    };
    if h == T::zero() {
        return Ok(s - (beta - a) * u_h);
    }
    let z = a * h / nu;
    let r = beta * h / nu;
    let (num, den) = if z > T::zero() {
        let em = (-z).exp();
        ((beta - a) * u_h * em - s, em + r / bernoulli(-z))
    } else {
        ((beta - a) * u_h - s * z.exp(), T::one() + r / bernoulli(z))
    };
    if den == T::zero() || !den.is_finite() {
        return Err(singular());
    }
    let j = -num / den;
    if !j.is_finite() {
        return Err(singular());
    }
    Ok(j)
}

/// Left-wall flux for a boundary record at time `t`, with `u_1` half a cell inside.
pub fn sg_boundary_flux_left<T: Real>(u_1: T, boundary: &RobinBoundary<T>, t: T, a: T, nu: T, dx: T) -> Result<T> {
    debug_assert_eq!(boundary.side, Side::Left);
    let amb = boundary.ambient.eval(t);
    robin_wall_flux(u_1, boundary.biot, amb, boundary.liquid_flux, boundary.advective, a, nu, dx / T::lit(2.0))
}

/// Right-wall flux (positive = leaving through `x = 1`), mirror of the left one.
pub fn sg_boundary_flux_right<T: Real>(u_n: T, boundary: &RobinBoundary<T>, t: T, a: T, nu: T, dx: T) -> Result<T> {
    debug_assert_eq!(boundary.side, Side::Right);
    let amb = boundary.ambient.eval(t);
    right_wall_flux(u_n, boundary.biot, amb, boundary.advective, a, nu, dx / T::lit(2.0))
}

/// Mirror image of [`robin_wall_flux`] for the wall at `x = 1`.
pub fn right_wall_flux<T: Real>(u_h: T, biot: T, ambient: T, advective: bool, a: T, nu: T, h: T) -> Result<T> {
    robin_wall_flux(u_h, biot, ambient, T::zero(), advective, -a, nu, h).map(|j| -j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AmbientSignal;
    use approx::assert_relative_eq;

    #[test]
    fn listed_interface_fluxes() {
        assert_relative_eq!(sg_interface_flux(1.0, 2.0, 0.0, 1.0, 0.1).unwrap(), -10.0, max_relative = 1e-14);
        assert_relative_eq!(sg_interface_flux(0.7, 0.7, 3.0, 1.3, 0.2).unwrap(), 3.0 * 0.7, max_relative = 1e-13);
        let b_m1 = 1.0 / (1.0 - (-1.0_f64).exp());
        assert_relative_eq!(sg_interface_flux(1.0, 0.0, 2.0, 1.0, 0.5).unwrap(), 2.0 * b_m1, max_relative = 1e-14);
        assert_relative_eq!(2.0 * b_m1, 3.163_953_413_738_653, max_relative = 1e-14);
        assert!(sg_interface_flux(1.0, 2.0, 0.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn coefficients_and_weights() {
        let c = SchemeCoefficients::new(-2.0, 1.0, 0.1, 0.01);
        assert_eq!((c.b_plus, c.b_minus), (0.0, 1.0));
        assert_relative_eq!(c.lambda, 0.5);
        assert_relative_eq!(c.gamma, -0.1);
        assert_relative_eq!(c.theta, -0.2);
        for a in [-1.0, 0.0, 1.0] {
            let (p, m) = upwind_weights(a);
            assert_eq!(p + m, 1.0);
        }
    }

    #[test]
    fn wall_flux_matches_closed_form() {
        // a [(Bi - a) u - s e^z] / [Bi - a - Bi e^z] with z = a h / nu
        let (bi, a, nu, h, u, ul, g) = (2.5, 1.0, 1.0, 0.05, 1.3, 0.8, 0.2);
        let e = (a * h / nu as f64).exp();
        let s = bi * ul + g;
        let closed = a * ((bi - a) * u - s * e) / (bi - a - bi * e);
        let j = robin_wall_flux(u, bi, ul, g, false, a, nu, h).unwrap();
        assert_relative_eq!(j, closed, max_relative = 1e-13);
        assert_eq!(robin_wall_flux(0.0, bi, 0.0, 0.0, false, a, nu, h).unwrap(), 0.0);
    }

    #[test]
    fn wall_flux_small_advection_is_diffusive_robin() {
        let (bi, nu, h, u, ul) = (2.5_f64, 1.0, 0.05, 1.0, 1.4);
        let diffusive = bi * (ul - u) / (1.0 + bi * h / nu);
        let j = robin_wall_flux(u, bi, ul, 0.0, false, 1e-10, nu, h).unwrap();
        assert!((j - diffusive).abs() < 1e-8);
    }

    #[test]
    fn zero_biot_wall() {
        // Bi = 0: denominator is -a and the wall carries the advective flux a u.
        let (a, nu, h, u) = (1.5, 0.7, 0.1, 2.0_f64);
        let j = robin_wall_flux(u, 0.0, 1.0, 0.0, false, a, nu, h).unwrap();
        assert_relative_eq!(j, a * u, max_relative = 1e-13);
    }

    #[test]
    fn extreme_advection_is_finite() {
        for a in [-1e4_f64, 1e4] {
            let j = robin_wall_flux(1.0, 2.0, 1.5, 0.0, false, a, 1e-3, 0.5).unwrap();
            assert!(j.is_finite());
        }
    }

    #[test]
    fn removable_point_and_degenerate_input() {
        // a = 0 exactly is the removable point of the closed form.
        let j = robin_wall_flux(1.0, 2.0, 1.5, 0.1, true, 0.0, 1.0, 0.1).unwrap();
        assert_relative_eq!(j, (2.0 * 1.5 + 0.1 - 2.0) / (1.0 + 0.2), max_relative = 1e-14);
        assert!(matches!(
            robin_wall_flux(1.0, 2.0, 1.5, 0.0, false, 1.0, 0.0, 0.1),
            Err(Error::SingularBoundary { .. })
        ));
    }

    proptest::proptest! {
        #[test]
        fn wall_flux_finite_for_nonnegative_biot(
            bi in 0.0_f64..1e3, a in -50.0_f64..50.0, h in 1e-4_f64..1.0, adv in proptest::bool::ANY,
        ) {
            let j = robin_wall_flux(1.2, bi, 0.8, 0.0, adv, a, 1.0, h).unwrap();
            proptest::prop_assert!(j.is_finite());
        }
    }

    #[test]
    fn right_wall_is_mirror() {
        let left = RobinBoundary::new(Side::Left, 1.7, AmbientSignal::constant(1.3));
        let right = RobinBoundary::new(Side::Right, 1.7, AmbientSignal::constant(1.3));
        let (a, nu, dx) = (0.8, 1.1, 0.1);
        let jl = sg_boundary_flux_left(0.9, &left, 0.0, -a, nu, dx).unwrap();
        let jr = sg_boundary_flux_right(0.9, &right, 0.0, a, nu, dx).unwrap();
        assert_relative_eq!(jr, -jl, max_relative = 1e-14);
    }

    #[test]
    fn interpolation_endpoints_and_limits() {
        for a in [-40.0, -1.0, 0.0, 1e-14, 1.0, 40.0, 1e5] {
            assert_relative_eq!(sg_interpolate(0.0, 0.1, 1.0, 2.0, a, 1.0), 1.0, max_relative = 1e-14);
            assert_relative_eq!(sg_interpolate(0.1, 0.1, 1.0, 2.0, a, 1.0), 2.0, max_relative = 1e-14);
        }
        assert_relative_eq!(sg_interpolate(0.05, 0.1, 1.0, 2.0, 0.0, 1.0), 1.5);
    }
}
