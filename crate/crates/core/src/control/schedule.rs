use serde::{Deserialize, Serialize};

use crate::control::Envelope;
use crate::error::{Error, Result};
use crate::lie_algebra::GeneratorBasis;

/// A control Hamiltonian `a(t) Σ_l c_l λ_l` with fixed direction `c` over one envelope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlSegment {
    pub direction: Vec<f64>,
    pub envelope: Envelope,
}

impl ControlSegment {
    pub fn new(direction: Vec<f64>, envelope: Envelope) -> Result<Self> {
        if direction.is_empty() || direction.iter().all(|c| *c == 0.0) {
            return Err(Error::ZeroDirection);
        }
        if direction.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSchedule("direction entries must be finite".into()));
        }
        Ok(Self { direction, envelope })
    }

    /// Zero-amplitude segment of the given duration.
    pub fn idle(adjoint_dim: usize, duration: f64) -> Result<Self> {
        let mut direction = vec![0.0; adjoint_dim];
        direction[0] = 1.0;
        Self::new(direction, Envelope::constant(0.0, duration)?)
    }

    pub fn duration(&self) -> f64 {
        self.envelope.duration()
    }
}

/// Ordered control segments making up one cycle of length `T_c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr")]
pub struct ControlSchedule {
    segments: Vec<ControlSegment>,
}

#[derive(Deserialize)]
struct ScheduleRepr {
    segments: Vec<ControlSegment>,
}

impl TryFrom<ScheduleRepr> for ControlSchedule {
    type Error = Error;

    fn try_from(r: ScheduleRepr) -> Result<Self> {
        ControlSchedule::new(r.segments)
    }
}

impl ControlSchedule {
    pub fn new(segments: Vec<ControlSegment>) -> Result<Self> {
        let Some(first) = segments.first() else {
            return Err(Error::InvalidSchedule("schedule has no segments (T_c = 0)".into()));
        };
        let dim = first.direction.len();
        for (i, seg) in segments.iter().enumerate() {
            if seg.direction.len() != dim {
                return Err(Error::InvalidSchedule(format!(
                    "segment {i} has direction length {} but segment 0 has {dim}",
                    seg.direction.len()
                )));
            }
            if seg.direction.iter().all(|c| *c == 0.0) {
                return Err(Error::ZeroDirection);
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[ControlSegment] {
        &self.segments
    }

    pub fn adjoint_dim(&self) -> usize {
        self.segments[0].direction.len()
    }

    /// `T_c = Σ durations`.
    pub fn cycle_time(&self) -> f64 {
        self.segments.iter().map(ControlSegment::duration).sum()
    }

    pub fn max_amplitude(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| s.envelope.max_amplitude())
            .fold(0.0, f64::max)
    }

    /// Same schedule with every envelope amplitude multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            segments: self
                .segments
                .iter()
                .map(|s| ControlSegment {
                    direction: s.direction.clone(),
                    envelope: s.envelope.scaled(factor),
                })
                .collect(),
        }
    }

    /// Concatenation of `self` followed by `other`.
    pub fn then(&self, other: &ControlSchedule) -> Result<Self> {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().cloned());
        Self::new(segments)
    }

    pub fn check_basis(&self, basis: &GeneratorBasis) -> Result<()> {
        if self.adjoint_dim() != basis.adjoint_dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.adjoint_dim(),
                found: self.adjoint_dim(),
            });
        }
        Ok(())
    }

    /// Segment index and local time for a global time in `[0, T_c]`.
    pub(crate) fn locate(&self, t: f64) -> (usize, f64) {
        let mut start = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let end = start + seg.duration();
            if t < end || i + 1 == self.segments.len() {
                return (i, (t - start).clamp(0.0, seg.duration()));
            }
            start = end;
        }
        unreachable!("schedule has at least one segment")
    }
}

/// Time grid over one cycle with `steps` equal sub-steps per segment; segment
/// boundaries are grid points and are not duplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub times: Vec<f64>,
    /// Grid index at which each segment starts, followed by the final index.
    pub segment_bounds: Vec<usize>,
}

/// Minimum number of sub-steps per segment.
pub const MIN_STEPS: usize = 16;
pub const DEFAULT_STEPS: usize = 256;

impl TimeGrid {
    pub fn new(schedule: &ControlSchedule, steps: usize) -> Result<Self> {
        if steps < MIN_STEPS {
            return Err(Error::InvalidInput(format!(
                "steps per segment must be at least {MIN_STEPS}, got {steps}"
            )));
        }
        let mut times = Vec::with_capacity(schedule.segments().len() * steps + 1);
        let mut segment_bounds = Vec::with_capacity(schedule.segments().len() + 1);
        times.push(0.0);
        let mut start = 0.0;
        for seg in schedule.segments() {
            segment_bounds.push(times.len() - 1);
            let d = seg.duration();
            for j in 1..=steps {
                times.push(start + d * j as f64 / steps as f64);
            }
            start += d;
        }
        segment_bounds.push(times.len() - 1);
        Ok(Self { times, segment_bounds })
    }

    /// Sub-steps of one segment: `(grid index of step end, local start, local end)`.
    pub(crate) fn segment_steps(&self, segment: usize) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let lo = self.segment_bounds[segment];
        let hi = self.segment_bounds[segment + 1];
        let origin = self.times[lo];
        (lo + 1..=hi).map(move |k| (k, self.times[k - 1] - origin, self.times[k] - origin))
    }
}
