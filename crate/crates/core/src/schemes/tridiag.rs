use crate::error::{Error, Result};
use crate::scalar::Real;

/// `sub[i] x[i-1] + main[i] x[i] + sup[i] x[i+1] = rhs[i]`.
///
/// `sub[0]` and `sup[n-1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem<T> {
    pub sub: Vec<T>,
    pub main: Vec<T>,
    pub sup: Vec<T>,
    pub rhs: Vec<T>,
}

impl<T: Real> TridiagonalSystem<T> {
    pub fn zeros(n: usize) -> Self {
        Self { sub: vec![T::zero(); n], main: vec![T::zero(); n], sup: vec![T::zero(); n], rhs: vec![T::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.main.len()
    }

    pub fn is_empty(&self) -> bool {
        self.main.is_empty()
    }

    /// Row-wise `|main| >= |sub| + |sup|`.
    pub fn is_diagonally_dominant(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let off = if i > 0 { self.sub[i].abs() } else { T::zero() }
                + if i + 1 < n { self.sup[i].abs() } else { T::zero() };
            self.main[i].abs() >= off * (T::one() - T::epsilon() * T::lit(8.0))
        })
    }

    /// `A x` for the stored matrix.
    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.main[i] * x[i];
                if i > 0 {
                    v += self.sub[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.sup[i] * x[i + 1];
                }
                v
            })
            .collect()
    }
}

/// Thomas algorithm; fails on a zero (or non-finite) pivot.
pub fn thomas_solve<T: Real>(system: &TridiagonalSystem<T>) -> Result<Vec<T>> {
    let mut scratch = Vec::new();
    let mut x = vec![T::zero(); system.len()];
    thomas_into(&system.sub, &system.main, &system.sup, &system.rhs, &mut scratch, &mut x)?;
    Ok(x)
}

/// Allocation-free Thomas solve into `x`, using `scratch` for the modified
/// super-diagonal.
pub(crate) fn thomas_into<T: Real>(
    sub: &[T],
    main: &[T],
    sup: &[T],
    rhs: &[T],
    scratch: &mut Vec<T>,
    x: &mut [T],
) -> Result<()> {
    let n = main.len();
    if n == 0 {
        return Ok(());
    }
    scratch.clear();
    scratch.resize(n, T::zero());
    let pivot_ok = |p: T| p != T::zero() && p.is_finite();
    let mut p = main[0];
    if !pivot_ok(p) {
        return Err(Error::SingularSystem { row: 0 });
    }
    scratch[0] = sup[0] / p;
    x[0] = rhs[0] / p;
    for i in 1..n {
        p = main[i] - sub[i] * scratch[i - 1];
        if !pivot_ok(p) {
            return Err(Error::SingularSystem { row: i });
        }
        scratch[i] = if i + 1 < n { sup[i] / p } else { T::zero() };
        x[i] = (rhs[i] - sub[i] * x[i - 1]) / p;
    }
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= scratch[i] * next;
    }
    Ok(())
}
