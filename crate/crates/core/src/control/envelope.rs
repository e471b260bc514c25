use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack allowed on the amplitude bound and the time domain.
const SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    Constant,
    PiecewiseConstant,
    RaisedCosine,
    Sampled,
}

/// Amplitude profile `a(t)` on `[0, duration]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvelopeShape {
    Constant {
        amplitude: f64,
    },
    /// Equal-length pieces spanning the duration.
    PiecewiseConstant {
        amplitudes: Vec<f64>,
    },
    /// `a(t) = amplitude · (1 − cos(2πt/duration)) / 2`, peaking at mid-segment.
    RaisedCosine {
        amplitude: f64,
    },
    /// Uniformly spaced samples from `t = 0` to `t = duration`, linearly interpolated.
    Sampled {
        samples: Vec<f64>,
    },
}

#[derive(Serialize, Deserialize)]
struct EnvelopeRepr {
    #[serde(flatten)]
    shape: EnvelopeShape,
    duration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<f64>,
}

/// A bounded envelope: `max |a(t)| ≤ bound` always holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnvelopeRepr", into = "EnvelopeRepr")]
pub struct Envelope {
    shape: EnvelopeShape,
    duration: f64,
    bound: f64,
}

impl TryFrom<EnvelopeRepr> for Envelope {
    type Error = Error;

    fn try_from(r: EnvelopeRepr) -> Result<Self> {
        let env = Envelope::new(r.shape, r.duration)?;
        match r.bound {
            Some(b) => env.with_bound(b),
            None => Ok(env),
        }
    }
}

impl From<Envelope> for EnvelopeRepr {
    fn from(e: Envelope) -> Self {
        EnvelopeRepr {
            shape: e.shape,
            duration: e.duration,
            bound: Some(e.bound),
        }
    }
}

impl Envelope {
    /// Validates the shape and uses its peak magnitude as the declared bound.
    pub fn new(shape: EnvelopeShape, duration: f64) -> Result<Self> {
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidEnvelope(format!(
                "duration must be positive and finite, got {duration}"
            )));
        }
        let values: &[f64] = match &shape {
            EnvelopeShape::Constant { amplitude } | EnvelopeShape::RaisedCosine { amplitude } => {
                std::slice::from_ref(amplitude)
            }
            EnvelopeShape::PiecewiseConstant { amplitudes } => {
                if amplitudes.is_empty() {
                    return Err(Error::InvalidEnvelope(
                        "piecewise envelope needs at least one piece".into(),
                    ));
                }
                amplitudes
            }
            EnvelopeShape::Sampled { samples } => {
                if samples.len() < 2 {
                    return Err(Error::InvalidEnvelope(
                        "sampled envelope needs at least two samples".into(),
                    ));
                }
                samples
            }
        };
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidEnvelope("amplitudes must be finite".into()));
        }
        let bound = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        Ok(Self { shape, duration, bound })
    }

    pub fn constant(amplitude: f64, duration: f64) -> Result<Self> {
        Self::new(EnvelopeShape::Constant { amplitude }, duration)
    }

    pub fn raised_cosine(peak: f64, duration: f64) -> Result<Self> {
        Self::new(EnvelopeShape::RaisedCosine { amplitude: peak }, duration)
    }

    pub fn piecewise(amplitudes: Vec<f64>, duration: f64) -> Result<Self> {
        Self::new(EnvelopeShape::PiecewiseConstant { amplitudes }, duration)
    }

    pub fn sampled(samples: Vec<f64>, duration: f64) -> Result<Self> {
        Self::new(EnvelopeShape::Sampled { samples }, duration)
    }

    /// Declares a bound; fails if the profile exceeds it.
    pub fn with_bound(mut self, bound: f64) -> Result<Self> {
        if !(bound.is_finite() && bound >= 0.0) {
            return Err(Error::InvalidEnvelope(format!(
                "bound must be non-negative, got {bound}"
            )));
        }
        if self.bound > bound * (1.0 + SLACK) {
            return Err(Error::InvalidEnvelope(format!(
                "peak amplitude {} exceeds declared bound {bound}",
                self.bound
            )));
        }
        self.bound = bound;
        Ok(self)
    }

    pub fn shape(&self) -> &EnvelopeShape {
        &self.shape
    }

    pub fn kind(&self) -> EnvelopeKind {
        match self.shape {
            EnvelopeShape::Constant { .. } => EnvelopeKind::Constant,
            EnvelopeShape::PiecewiseConstant { .. } => EnvelopeKind::PiecewiseConstant,
            EnvelopeShape::RaisedCosine { .. } => EnvelopeKind::RaisedCosine,
            EnvelopeShape::Sampled { .. } => EnvelopeKind::Sampled,
        }
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn max_amplitude(&self) -> f64 {
        match &self.shape {
            EnvelopeShape::Constant { amplitude } | EnvelopeShape::RaisedCosine { amplitude } => amplitude.abs(),
            EnvelopeShape::PiecewiseConstant { amplitudes: v } | EnvelopeShape::Sampled { samples: v } => {
                v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
            }
        }
    }

    /// Same profile with every amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let shape = match &self.shape {
            EnvelopeShape::Constant { amplitude } => EnvelopeShape::Constant {
                amplitude: amplitude * factor,
            },
            EnvelopeShape::RaisedCosine { amplitude } => EnvelopeShape::RaisedCosine {
                amplitude: amplitude * factor,
            },
            EnvelopeShape::PiecewiseConstant { amplitudes } => EnvelopeShape::PiecewiseConstant {
                amplitudes: amplitudes.iter().map(|a| a * factor).collect(),
            },
            EnvelopeShape::Sampled { samples } => EnvelopeShape::Sampled {
                samples: samples.iter().map(|a| a * factor).collect(),
            },
        };
        Self {
            shape,
            duration: self.duration,
            bound: self.bound * factor.abs(),
        }
    }

    /// Same profile stretched to `duration`, amplitudes unchanged.
    pub fn with_duration(&self, duration: f64) -> Result<Self> {
        let mut out = Self::new(self.shape.clone(), duration)?;
        out.bound = self.bound;
        Ok(out)
    }

    /// `a(t)`, clamped to the domain.
    pub fn amplitude(&self, t: f64) -> f64 {
        let d = self.duration;
        let t = t.clamp(0.0, d);
        match &self.shape {
            EnvelopeShape::Constant { amplitude } => *amplitude,
            EnvelopeShape::RaisedCosine { amplitude } => amplitude * 0.5 * (1.0 - (2.0 * PI * t / d).cos()),
            EnvelopeShape::PiecewiseConstant { amplitudes } => {
                let k = amplitudes.len();
                let idx = ((t / d) * k as f64).floor() as usize;
                amplitudes[idx.min(k - 1)]
            }
            EnvelopeShape::Sampled { samples } => {
                let intervals = samples.len() - 1;
                let x = t / d * intervals as f64;
                let idx = (x.floor() as usize).min(intervals - 1);
                let frac = x - idx as f64;
                samples[idx] * (1.0 - frac) + samples[idx + 1] * frac
            }
        }
    }

    /// `A(t) = ∫_0^t a(u) du` with `t` clamped to the domain.
    pub(crate) fn angle_clamped(&self, t: f64) -> f64 {
        let d = self.duration;
        let t = t.clamp(0.0, d);
        match &self.shape {
            EnvelopeShape::Constant { amplitude } => amplitude * t,
            EnvelopeShape::RaisedCosine { amplitude } => {
                amplitude * 0.5 * (t - d / (2.0 * PI) * (2.0 * PI * t / d).sin())
            }
            EnvelopeShape::PiecewiseConstant { amplitudes } => {
                let k = amplitudes.len();
                let width = d / k as f64;
                let mut acc = 0.0;
                for (i, a) in amplitudes.iter().enumerate() {
                    let start = i as f64 * width;
                    if t <= start {
                        break;
                    }
                    acc += a * (t - start).min(width);
                }
                acc
            }
            EnvelopeShape::Sampled { samples } => {
                let intervals = samples.len() - 1;
                let h = d / intervals as f64;
                let mut acc = 0.0;
                for i in 0..intervals {
                    let start = i as f64 * h;
                    if t <= start {
                        break;
                    }
                    let span = (t - start).min(h);
                    let end_value = samples[i] + (samples[i + 1] - samples[i]) * span / h;
                    acc += 0.5 * (samples[i] + end_value) * span;
                }
                acc
            }
        }
    }

    /// Cumulative angle `A(t)`; `t` must lie in `[0, duration]`.
    pub fn cumulative_angle(&self, t: f64) -> Result<f64> {
        let slack = SLACK * self.duration;
        if !(t >= -slack && t <= self.duration + slack) {
            return Err(Error::TimeOutOfRange {
                t,
                duration: self.duration,
            });
        }
        Ok(self.angle_clamped(t))
    }

    /// `A(duration)`.
    pub fn total_angle(&self) -> f64 {
        self.angle_clamped(self.duration)
    }
}
