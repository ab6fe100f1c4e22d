use crate::error::{invalid, Result};
use crate::model::ProblemSpec;
use crate::scalar::Real;
use crate::schemes::{
    assemble_trapezoid, cn_imex_step, sg_trapezoid_step, thomas_solve, ExplicitStencil, FaceFlux, Scheme,
    SpatialOperator,
};

/// Time integrators the marching loop can drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Scheme(Scheme),
    /// Second-order fitted-flux integrator used for reference solutions.
    Trapezoid,
}

impl Integrator {
    pub fn face_flux(self) -> FaceFlux {
        match self {
            Integrator::Scheme(s) => s.face_flux(),
            Integrator::Trapezoid => FaceFlux::Fitted,
        }
    }
}

/// Operators for constant material, keyed by Péclet value.
struct OperatorCache<T> {
    kind: FaceFlux,
    ops: Vec<(T, SpatialOperator<T>, T)>,
}

impl<T: Real> OperatorCache<T> {
    fn entry(&mut self, spec: &ProblemSpec<T>, u: &[T], pe: T) -> Result<usize> {
        Ok(match self.ops.iter().position(|(p, _, _)| *p == pe) {
            Some(p) => p,
            None => {
                let op = SpatialOperator::with_peclet(spec, self.kind, u, pe)?;
                let bound = op.positivity_bound();
                self.ops.push((pe, op, bound));
                self.ops.len() - 1
            }
        })
    }

    fn get(&mut self, spec: &ProblemSpec<T>, u: &[T], pe: T) -> Result<&mut SpatialOperator<T>> {
        let i = self.entry(spec, u, pe)?;
        Ok(&mut self.ops[i].1)
    }

    fn bound(&mut self, spec: &ProblemSpec<T>, u: &[T], t: T) -> Result<T> {
        let i = self.entry(spec, u, spec.peclet.value_at(t))?;
        Ok(self.ops[i].2)
    }
}

/// Per-run stepping state: caches operators when the material is constant.
pub(crate) struct Stepper<'a, T> {
    spec: &'a ProblemSpec<T>,
    integrator: Integrator,
    linear: bool,
    cache: OperatorCache<T>,
    stencil: Option<(T, T, ExplicitStencil<T>)>,
    current: Option<SpatialOperator<T>>,
}

impl<'a, T: Real> Stepper<'a, T> {
    pub fn new(spec: &'a ProblemSpec<T>, integrator: Integrator) -> Result<Self> {
        let linear = spec.is_linear();
        if integrator == Integrator::Scheme(Scheme::Cn) && !linear {
            return Err(invalid("scheme", "classical `cn` needs constant coefficients; use `cn_imex`"));
        }
        Ok(Self {
            spec,
            integrator,
            linear,
            cache: OperatorCache { kind: integrator.face_flux(), ops: Vec::new() },
            stencil: None,
            current: None,
        })
    }

    /// Explicit stability bound at `(u, t)`; also primes the operator used by
    /// the next explicit step. Infinite for implicit integrators.
    pub fn prepare(&mut self, u: &[T], t: T) -> Result<T> {
        if self.integrator != Integrator::Scheme(Scheme::Sg) {
            return Ok(T::infinity());
        }
        if self.linear {
            self.cache.bound(self.spec, u, t)
        } else {
            let op = SpatialOperator::build(self.spec, FaceFlux::Fitted, u, t, t)?;
            let b = op.positivity_bound();
            self.current = Some(op);
            Ok(b)
        }
    }

    /// Advances `u` from `t` by `h` into `out`. Explicit steps must follow a
    /// `prepare` at the same `(u, t)`.
    pub fn advance(&mut self, u: &[T], t: T, h: T, out: &mut Vec<T>) -> Result<()> {
        let spec = self.spec;
        match self.integrator {
            Integrator::Scheme(Scheme::Sg) => {
                if self.linear {
                    let pe = spec.peclet.value_at(t);
                    let op = self.cache.get(spec, u, pe)?;
                    op.set_sources(spec, t);
                    let (sl, sr) = (op.source_left, op.source_right);
                    let fresh = !matches!(&self.stencil, Some((p, hh, _)) if *p == pe && *hh == h);
                    if fresh {
                        self.stencil = Some((pe, h, op.explicit_stencil(h)));
                    }
                    let (_, _, st) = self.stencil.as_ref().expect("stencil primed");
                    out.resize(u.len(), T::zero());
                    st.apply(u, sl, sr, out);
                } else {
                    let op = match self.current.take() {
                        Some(op) => op,
                        None => SpatialOperator::build(spec, FaceFlux::Fitted, u, t, t)?,
                    };
                    *out = op.explicit_step(u, h);
                }
            }
            Integrator::Scheme(Scheme::CnImex) => *out = cn_imex_step(u, spec, t, h)?,
            Integrator::Scheme(Scheme::Cn) | Integrator::Trapezoid if self.linear => {
                let t1 = t + h;
                let mut old = self.cache.get(spec, u, spec.peclet.value_at(t))?.clone();
                old.set_sources(spec, t);
                let mut new = self.cache.get(spec, u, spec.peclet.value_before(t1))?.clone();
                new.set_sources_before(spec, t1);
                *out = thomas_solve(&assemble_trapezoid(&old, &new, u, h))?;
            }
            Integrator::Trapezoid => *out = sg_trapezoid_step(u, spec, t, h)?,
            Integrator::Scheme(Scheme::Cn) => unreachable!("rejected in Stepper::new"),
        }
        Ok(())
    }
}
