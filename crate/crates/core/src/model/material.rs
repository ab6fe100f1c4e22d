use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// `p0 + p1 u + amplitude * exp(-rate (u - center)^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientLaw<T> {
    pub p0: T,
    #[serde(default)]
    pub p1: T,
    #[serde(default)]
    pub amplitude: T,
    #[serde(default)]
    pub rate: T,
    #[serde(default)]
    pub center: T,
}

impl<T: Real> CoefficientLaw<T> {
    pub fn constant(value: T) -> Self {
        Self { p0: value, p1: T::zero(), amplitude: T::zero(), rate: T::zero(), center: T::zero() }
    }

    pub fn new(p0: T, p1: T, amplitude: T, rate: T, center: T) -> Self {
        Self { p0, p1, amplitude, rate, center }
    }

    #[inline]
    pub fn eval(&self, u: T) -> T {
        let mut v = self.p0 + self.p1 * u;
        if self.amplitude != T::zero() {
            let s = u - self.center;
            v += self.amplitude * (-self.rate * s * s).exp();
        }
        v
    }

    pub fn is_constant(&self) -> bool {
        self.p1 == T::zero() && (self.amplitude == T::zero() || self.rate == T::zero())
    }

    /// The same law multiplied by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            p0: self.p0 * factor,
            p1: self.p1 * factor,
            amplitude: self.amplitude * factor,
            ..*self
        }
    }
}

/// Storage `c*(u)` and diffusion `d*(u)` laws plus the range of `u` on which
/// both are guaranteed positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MaterialRepr<T>", into = "MaterialRepr<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct MaterialModel<T> {
    storage: CoefficientLaw<T>,
    diffusion: CoefficientLaw<T>,
    range: (T, T),
}

#[derive(Serialize, Deserialize)]
struct MaterialRepr<T> {
    storage: CoefficientLaw<T>,
    diffusion: CoefficientLaw<T>,
    #[serde(default)]
    admissible_range: Option<(T, T)>,
}

impl<T: Real> TryFrom<MaterialRepr<T>> for MaterialModel<T> {
    type Error = Error;
    fn try_from(r: MaterialRepr<T>) -> Result<Self> {
        match r.admissible_range {
            Some((lo, hi)) => MaterialModel::with_range(r.storage, r.diffusion, lo, hi),
            None => MaterialModel::new(r.storage, r.diffusion),
        }
    }
}

impl<T: Real> From<MaterialModel<T>> for MaterialRepr<T> {
    fn from(m: MaterialModel<T>) -> Self {
        MaterialRepr { storage: m.storage, diffusion: m.diffusion, admissible_range: Some(m.range) }
    }
}

pub const DEFAULT_RANGE: (f64, f64) = (0.0, 3.0);
const SCAN_POINTS: usize = 1000;

impl<T: Real> MaterialModel<T> {
    /// Model on the default admissible range `[0, 3]`.
    pub fn new(storage: CoefficientLaw<T>, diffusion: CoefficientLaw<T>) -> Result<Self> {
        Self::with_range(storage, diffusion, T::lit(DEFAULT_RANGE.0), T::lit(DEFAULT_RANGE.1))
    }

    pub fn with_range(
        storage: CoefficientLaw<T>,
        diffusion: CoefficientLaw<T>,
        lo: T,
        hi: T,
    ) -> Result<Self> {
        if !(lo < hi) {
            return Err(invalid("material.admissible_range", format!("[{lo}, {hi}] is empty")));
        }
        for (name, law) in [("storage", &storage), ("diffusion", &diffusion)] {
            for i in 0..SCAN_POINTS {
                let u = lo + (hi - lo) * T::count(i) / T::count(SCAN_POINTS - 1);
                let v = law.eval(u);
                if !(v > T::zero()) || !v.is_finite() {
                    return Err(Error::NonPositiveCoefficient { law: name, u: u.as_f64(), value: v.as_f64() });
                }
            }
        }
        Ok(Self { storage, diffusion, range: (lo, hi) })
    }

    pub fn constant(c: T, d: T) -> Result<Self> {
        Self::new(CoefficientLaw::constant(c), CoefficientLaw::constant(d))
    }

    #[inline]
    pub fn storage(&self, u: T) -> T {
        self.storage.eval(u)
    }

    #[inline]
    pub fn diffusion(&self, u: T) -> T {
        self.diffusion.eval(u)
    }

    pub fn storage_law(&self) -> &CoefficientLaw<T> {
        &self.storage
    }

    pub fn diffusion_law(&self) -> &CoefficientLaw<T> {
        &self.diffusion
    }

    pub fn range(&self) -> (T, T) {
        self.range
    }

    pub fn in_range(&self, u: T) -> bool {
        u >= self.range.0 && u <= self.range.1
    }

    pub fn is_constant(&self) -> bool {
        self.storage.is_constant() && self.diffusion.is_constant()
    }

    /// Diffusion law multiplied by `factor` (used for sensitivity runs).
    pub fn with_scaled_diffusion(&self, factor: T) -> Result<Self> {
        Self::with_range(self.storage, self.diffusion.scaled(factor), self.range.0, self.range.1)
    }
}

/// Largest interval `[lo, hi']` with `hi' <= hi` on which both laws stay positive,
/// found on a 10^3 point scan.
pub fn positive_range<T: Real>(storage: &CoefficientLaw<T>, diffusion: &CoefficientLaw<T>, lo: T, hi: T) -> Option<(T, T)> {
    let mut last_ok = None;
    for i in 0..SCAN_POINTS {
        let u = lo + (hi - lo) * T::count(i) / T::count(SCAN_POINTS - 1);
        if storage.eval(u) > T::zero() && diffusion.eval(u) > T::zero() {
            last_ok = Some(u);
        } else {
            break;
        }
    }
    last_ok.filter(|&u| u > lo).map(|u| (lo, u))
}
