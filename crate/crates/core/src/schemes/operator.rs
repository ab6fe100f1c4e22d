use super::bernoulli::bernoulli_pair;
use super::flux::upwind_weights;
use super::tridiag::TridiagonalSystem;
use crate::error::{Error, Result};
use crate::model::ProblemSpec;
use crate::scalar::Real;

/// How interior face fluxes are discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceFlux {
    /// Scharfetter-Gummel (exponential fitting).
    Fitted,
    /// First-order upwind advection plus central diffusion.
    Upwind,
}

/// Finite-volume operator with coefficients frozen at some state and time.
///
/// Every face flux is affine in its two neighbours,
/// `F_k = left[k] u[k-1] + right[k] u[k] + source[k]`, with `left[0] = 0`,
/// `right[N] = 0`, and sources only on the two wall faces. Node `j` lies
/// between faces `j` and `j + 1` and evolves by
/// `capacity[j] du_j/dt = F_j - F_{j+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialOperator<T> {
    pub left: Vec<T>,
    pub right: Vec<T>,
    pub source_left: T,
    pub source_right: T,
    pub capacity: Vec<T>,
}

/// Nodal `c(u_j)` and `d(u_j)`, rejecting non-positive values.
fn nodal_laws<T: Real>(spec: &ProblemSpec<T>, u: &[T]) -> Result<(Vec<T>, Vec<T>)> {
    let mut c = Vec::with_capacity(u.len());
    let mut d = Vec::with_capacity(u.len());
    for &v in u {
        let cs = spec.material.storage(v);
        let ds = spec.material.diffusion(v);
        if !(cs > T::zero()) {
            return Err(Error::NonPositiveCoefficient { law: "storage", u: v.as_f64(), value: cs.as_f64() });
        }
        if !(ds > T::zero()) {
            return Err(Error::NonPositiveCoefficient { law: "diffusion", u: v.as_f64(), value: ds.as_f64() });
        }
        c.push(cs);
        d.push(ds);
    }
    Ok((c, d))
}

impl<T: Real> SpatialOperator<T> {
    /// Coefficients from state `u` and the Péclet number at `t_coeff`; wall
    /// sources from the ambient signals at `t_source`.
    pub fn build(spec: &ProblemSpec<T>, kind: FaceFlux, u: &[T], t_coeff: T, t_source: T) -> Result<Self> {
        let mut op = Self::with_peclet(spec, kind, u, spec.peclet.value_at(t_coeff))?;
        op.set_sources(spec, t_source);
        Ok(op)
    }

    /// Operator closing a step that ends at `t`: Péclet number and wall
    /// sources are the left limits at `t`.
    pub fn build_closing(spec: &ProblemSpec<T>, kind: FaceFlux, u: &[T], t: T) -> Result<Self> {
        let mut op = Self::with_peclet(spec, kind, u, spec.peclet.value_before(t))?;
        op.set_sources_before(spec, t);
        Ok(op)
    }

    /// Coefficients from state `u` with Péclet number `pe`; sources left at zero.
    pub fn with_peclet(spec: &ProblemSpec<T>, kind: FaceFlux, u: &[T], pe: T) -> Result<Self> {
        let n = spec.grid.len();
        if u.len() != n {
            return Err(Error::ShapeMismatch { left: format!("{} nodes", n), right: format!("state of {}", u.len()) });
        }
        let dx = spec.grid.dx();
        let (c, d) = nodal_laws(spec, u)?;
        let half = T::lit(0.5);
        let mut left = vec![T::zero(); n + 1];
        let mut right = vec![T::zero(); n + 1];
        let (bp, bm) = upwind_weights(pe);
        for k in 1..n {
            let df = half * (d[k - 1] + d[k]);
            let g = df / dx;
            match kind {
                FaceFlux::Fitted => {
                    let (b_neg, b_pos) = bernoulli_pair(pe * dx / df);
                    left[k] = g * b_neg;
                    right[k] = -g * b_pos;
                }
                FaceFlux::Upwind => {
                    left[k] = pe * bp + g;
                    right[k] = pe * bm - g;
                }
            }
        }
        // Robin walls imposed at the wall nodes: F_0 = s_L - (beta_L - Pe) u_0,
        // F_N = (beta_R + Pe) u_{N-1} - Bi_R u_R with beta_R = Bi_R (- Pe if advective).
        let bl = &spec.boundary_left;
        let br = &spec.boundary_right;
        right[0] = if bl.advective { -bl.biot } else { pe - bl.biot };
        left[n] = if br.advective { br.biot } else { br.biot + pe };
        let capacity = (0..n).map(|j| c[j] * spec.grid.control_volume(j)).collect();
        Ok(Self { left, right, source_left: T::zero(), source_right: T::zero(), capacity })
    }

    /// Re-evaluates the wall sources at time `t`; interior coefficients stay frozen.
    pub fn set_sources(&mut self, spec: &ProblemSpec<T>, t: T) {
        let bl = &spec.boundary_left;
        let br = &spec.boundary_right;
        self.source_left = bl.biot * bl.ambient.eval(t) + bl.liquid_flux;
        self.source_right = -br.biot * br.ambient.eval(t);
    }

    /// As [`set_sources`](Self::set_sources) with the left limits at `t`.
    pub fn set_sources_before(&mut self, spec: &ProblemSpec<T>, t: T) {
        let bl = &spec.boundary_left;
        let br = &spec.boundary_right;
        self.source_left = bl.biot * bl.ambient.eval_before(t) + bl.liquid_flux;
        self.source_right = -br.biot * br.ambient.eval_before(t);
    }

    pub fn len(&self) -> usize {
        self.capacity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.capacity.is_empty()
    }

    /// All `N + 1` face fluxes.
    pub fn fluxes(&self, u: &[T]) -> Vec<T> {
        let n = self.len();
        let mut f = Vec::with_capacity(n + 1);
        f.push(self.right[0] * u[0] + self.source_left);
        for k in 1..n {
            f.push(self.left[k] * u[k - 1] + self.right[k] * u[k]);
        }
        f.push(self.left[n] * u[n - 1] + self.source_right);
        f
    }

    /// `F_j - F_{j+1}` per node (net inflow, not divided by capacity).
    pub fn divergence(&self, u: &[T]) -> Vec<T> {
        let f = self.fluxes(u);
        f.windows(2).map(|w| w[0] - w[1]).collect()
    }

    /// Largest `dt` keeping the forward-Euler update a convex combination.
    ///
    /// For uniform interior coefficients this is `dx c tanh(Pe dx / 2d) / Pe`.
    pub fn positivity_bound(&self) -> T {
        let n = self.len();
        let mut bound = T::infinity();
        for j in 0..n {
            let outflow = self.left[j + 1] - self.right[j];
            if outflow > T::zero() {
                bound = bound.min(self.capacity[j] / outflow);
            }
        }
        bound
    }

    /// Forward-Euler stencil for a fixed step `dt`.
    pub fn explicit_stencil(&self, dt: T) -> ExplicitStencil<T> {
        let n = self.len();
        let mut sub = vec![T::zero(); n];
        let mut diag = vec![T::zero(); n];
        let mut sup = vec![T::zero(); n];
        for j in 0..n {
            let w = dt / self.capacity[j];
            sub[j] = w * self.left[j];
            diag[j] = T::one() + w * (self.right[j] - self.left[j + 1]);
            sup[j] = -w * self.right[j + 1];
        }
        ExplicitStencil::new(sub, diag, sup, dt / self.capacity[0], dt / self.capacity[n - 1])
    }

    /// One forward-Euler step with this operator.
    pub fn explicit_step(&self, u: &[T], dt: T) -> Vec<T> {
        let mut out = vec![T::zero(); u.len()];
        self.explicit_stencil(dt).apply(u, self.source_left, self.source_right, &mut out);
        out
    }
}

/// Precomputed forward-Euler weights; wall sources are passed per step.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitStencil<T> {
    sub: Vec<T>,
    diag: Vec<T>,
    sup: Vec<T>,
    src_first: T,
    src_last: T,
    /// Interior weights when they are the same at every interior node.
    uniform: Option<(T, T, T)>,
}

impl<T: Real> ExplicitStencil<T> {
    fn new(sub: Vec<T>, diag: Vec<T>, sup: Vec<T>, src_first: T, src_last: T) -> Self {
        let n = diag.len();
        let first = (sub[1], diag[1], sup[1]);
        let uniform = (1..n - 1).all(|j| (sub[j], diag[j], sup[j]) == first).then_some(first);
        Self { sub, diag, sup, src_first, src_last, uniform }
    }

    #[inline]
    pub fn apply(&self, u: &[T], source_left: T, source_right: T, out: &mut [T]) {
        let n = u.len();
        assert!(n >= 3 && out.len() == n && self.diag.len() == n);
        out[0] = self.diag[0] * u[0] + self.sup[0] * u[1] + self.src_first * source_left;
        out[n - 1] = self.sub[n - 1] * u[n - 2] + self.diag[n - 1] * u[n - 1] - self.src_last * source_right;
        let (west, centre, east) = (&u[..n - 2], &u[1..n - 1], &u[2..]);
        let inner = &mut out[1..n - 1];
        match self.uniform {
            Some((a, b, c)) => {
                for (((o, &w), &m), &e) in inner.iter_mut().zip(west).zip(centre).zip(east) {
                    *o = a * w + b * m + c * e;
                }
            }
            None => {
                let coeffs = self.sub[1..n - 1].iter().zip(&self.diag[1..n - 1]).zip(&self.sup[1..n - 1]);
                for ((((o, &w), &m), &e), ((&a, &b), &c)) in inner.iter_mut().zip(west).zip(centre).zip(east).zip(coeffs) {
                    *o = a * w + b * m + c * e;
                }
            }
        }
    }
}

/// Trapezoidal system `cap (u' - u)/dt = [D_old(u) + D_new(u')] / 2`, rows
/// scaled by `1 / cap`.
///
/// `old` supplies the explicit half (with its own sources), `new` the
/// implicit matrix, its sources and the capacity.
pub fn assemble_trapezoid<T: Real>(old: &SpatialOperator<T>, new: &SpatialOperator<T>, u: &[T], dt: T) -> TridiagonalSystem<T> {
    let n = new.len();
    let h = dt / T::lit(2.0);
    let div_old = old.divergence(u);
    let mut sys = TridiagonalSystem::zeros(n);
    for j in 0..n {
        let w = h / new.capacity[j];
        sys.sub[j] = -w * new.left[j];
        sys.main[j] = T::one() - w * (new.right[j] - new.left[j + 1]);
        sys.sup[j] = w * new.right[j + 1];
        sys.rhs[j] = u[j] + w * div_old[j];
    }
    sys.rhs[0] += w_of(h, new, 0) * new.source_left;
    sys.rhs[n - 1] -= w_of(h, new, n - 1) * new.source_right;
    sys
}

#[inline]
fn w_of<T: Real>(h: T, op: &SpatialOperator<T>, j: usize) -> T {
    h / op.capacity[j]
}

/// Backward-Euler system `cap (u' - u)/dt = D(u')`, rows scaled by `1 / cap`.
pub fn assemble_backward_euler<T: Real>(op: &SpatialOperator<T>, u: &[T], dt: T) -> TridiagonalSystem<T> {
    let n = op.len();
    let mut sys = TridiagonalSystem::zeros(n);
    for j in 0..n {
        let w = dt / op.capacity[j];
        sys.sub[j] = -w * op.left[j];
        sys.main[j] = T::one() - w * (op.right[j] - op.left[j + 1]);
        sys.sup[j] = w * op.right[j + 1];
        sys.rhs[j] = u[j];
    }
    sys.rhs[0] += w_of(dt, op, 0) * op.source_left;
    sys.rhs[n - 1] -= w_of(dt, op, n - 1) * op.source_right;
    sys
}
