use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sinusoid<T> {
    pub amplitude: T,
    pub period: T,
    #[serde(default)]
    pub phase: T,
}

/// Ambient value `u_amb(t)` seen by a wall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum AmbientSignal<T> {
    /// `offset + sum amplitude * sin(2 pi t / period + phase)`
    Sinusoids {
        offset: T,
        #[serde(default)]
        terms: Vec<Sinusoid<T>>,
    },
    /// Piecewise constant: `values[i]` holds on `[starts[i], starts[i+1])`.
    Steps { starts: Vec<T>, values: Vec<T> },
}

impl<T: Real> AmbientSignal<T> {
    pub fn constant(value: T) -> Self {
        AmbientSignal::Sinusoids { offset: value, terms: Vec::new() }
    }

    pub fn sinusoids(offset: T, terms: &[(T, T)]) -> Self {
        AmbientSignal::Sinusoids {
            offset,
            terms: terms.iter().map(|&(amplitude, period)| Sinusoid { amplitude, period, phase: T::zero() }).collect(),
        }
    }

    pub fn eval(&self, t: T) -> T {
        match self {
            AmbientSignal::Sinusoids { offset, terms } => {
                let two_pi = T::lit(std::f64::consts::TAU);
                terms.iter().fold(*offset, |acc, s| acc + s.amplitude * (two_pi * t / s.period + s.phase).sin())
            }
            AmbientSignal::Steps { starts, values } => {
                let idx = starts.iter().rposition(|&s| s <= t).unwrap_or(0);
                values[idx]
            }
        }
    }

    /// Left limit `u_amb(t-)`; differs from [`eval`](Self::eval) only at step starts.
    ///
    /// Implicit halves use it at the end of a step, so a jump landing on a
    /// step boundary acts from the next step on.
    pub fn eval_before(&self, t: T) -> T {
        match self {
            AmbientSignal::Steps { starts, values } => {
                let idx = starts.iter().rposition(|&s| s < t).unwrap_or(0);
                values[idx]
            }
            _ => self.eval(t),
        }
    }

    pub fn is_time_constant(&self) -> bool {
        match self {
            AmbientSignal::Sinusoids { terms, .. } => terms.iter().all(|s| s.amplitude == T::zero()),
            AmbientSignal::Steps { values, .. } => values.windows(2).all(|w| w[0] == w[1]),
        }
    }

    /// Upper bound on `|u_amb|` over all time.
    pub fn envelope(&self) -> T {
        match self {
            AmbientSignal::Sinusoids { offset, terms } => {
                terms.iter().fold(offset.abs(), |acc, s| acc + s.amplitude.abs())
            }
            AmbientSignal::Steps { values, .. } => values.iter().fold(T::zero(), |acc, v| acc.max(v.abs())),
        }
    }

    /// Signal with values multiplied by `value_scale` and time stretched by `1 / time_scale`.
    pub fn rescaled(&self, value_scale: T, time_scale: T) -> Self {
        match self {
            AmbientSignal::Sinusoids { offset, terms } => AmbientSignal::Sinusoids {
                offset: *offset * value_scale,
                terms: terms
                    .iter()
                    .map(|s| Sinusoid { amplitude: s.amplitude * value_scale, period: s.period / time_scale, phase: s.phase })
                    .collect(),
            },
            AmbientSignal::Steps { starts, values } => AmbientSignal::Steps {
                starts: starts.iter().map(|&s| s / time_scale).collect(),
                values: values.iter().map(|&v| v * value_scale).collect(),
            },
        }
    }

    fn validate(&self, horizon: T) -> Result<()> {
        match self {
            AmbientSignal::Sinusoids { offset, terms } => {
                if !offset.is_finite() {
                    return Err(invalid("boundary.ambient.offset", "must be finite"));
                }
                for s in terms {
                    if !(s.period > T::zero()) || !s.amplitude.is_finite() || !s.phase.is_finite() {
                        return Err(invalid("boundary.ambient.terms", "periods must be positive, values finite"));
                    }
                }
            }
            AmbientSignal::Steps { starts, values } => {
                if starts.is_empty() || starts.len() != values.len() {
                    return Err(invalid("boundary.ambient.steps", "starts and values must be non-empty and equally long"));
                }
                if starts[0] > T::zero() {
                    return Err(invalid("boundary.ambient.steps", "first step must start at t = 0"));
                }
                if !starts.windows(2).all(|w| w[1] > w[0]) {
                    return Err(invalid("boundary.ambient.steps", "step starts must be strictly increasing"));
                }
            }
        }
        let scan = 4096;
        for i in 0..=scan {
            let t = horizon * T::count(i) / T::count(scan);
            let v = self.eval(t);
            if !(v > T::zero()) {
                return Err(invalid("boundary.ambient", format!("signal must stay positive, got {v} at t = {t}")));
            }
        }
        Ok(())
    }
}

/// Robin wall: `d u_x = Bi (u - u_amb) - g` on the left, `-d u_x = Bi (u - u_amb)`
/// on the right. With `advective` set the advective flux `Pé u` joins the wall
/// balance, i.e. the total flux through the wall equals the surface exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobinBoundary<T> {
    pub side: Side,
    pub biot: T,
    pub ambient: AmbientSignal<T>,
    #[serde(default)]
    pub liquid_flux: T,
    #[serde(default)]
    pub advective: bool,
}

impl<T: Real> RobinBoundary<T> {
    pub fn new(side: Side, biot: T, ambient: AmbientSignal<T>) -> Self {
        Self { side, biot, ambient, liquid_flux: T::zero(), advective: false }
    }

    pub fn with_liquid_flux(mut self, g: T) -> Self {
        self.liquid_flux = g;
        self
    }

    pub fn with_advective(mut self, on: bool) -> Self {
        self.advective = on;
        self
    }

    pub fn validate(&self, horizon: T) -> Result<()> {
        if !(self.biot >= T::zero()) || !self.biot.is_finite() {
            return Err(invalid("boundary.biot", format!("must be finite and >= 0, got {}", self.biot)));
        }
        if !self.liquid_flux.is_finite() {
            return Err(invalid("boundary.liquid_flux", "must be finite"));
        }
        if self.side == Side::Right && self.liquid_flux != T::zero() {
            return Err(invalid("boundary.liquid_flux", "liquid flux is only supported on the left wall"));
        }
        self.ambient.validate(horizon)
    }
}

/// Evaluates the ambient value of `boundary` at `t`.
pub fn eval_boundary_signal<T: Real>(boundary: &RobinBoundary<T>, t: T) -> T {
    boundary.ambient.eval(t)
}
