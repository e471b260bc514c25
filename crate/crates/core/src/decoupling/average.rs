use serde::Serialize;

use crate::control::{cyclicity_deviation, trajectory, ControlSchedule, Trajectory, CYCLIC_TOL, DEFAULT_STEPS};
use crate::error::{Error, Result};
use crate::error_model::ErrorVector;
use crate::lie_algebra::GeneratorBasis;
use crate::linalg::RVector;

/// Default decoupling tolerance, relative to `|s(0)|`.
pub const DEFAULT_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    #[default]
    Trapezoid,
    /// Composite Simpson per segment; needs an even number of steps per segment.
    Simpson,
}

/// `s' = (1/T_c) ∫ s(u) du` with the trapezoid rule on the trajectory grid.
pub fn average_error_vector(traj: &Trajectory) -> Result<RVector> {
    average_error_vector_with(traj, Quadrature::Trapezoid)
}

pub fn average_error_vector_with(traj: &Trajectory, quadrature: Quadrature) -> Result<RVector> {
    if traj.vectors.len() < 2 || traj.times.len() != traj.vectors.len() {
        return Err(Error::EmptyTrajectory);
    }
    let dim = traj.vectors[0].len();
    let total = traj.times.last().unwrap() - traj.times[0];
    if total <= 0.0 {
        return Err(Error::EmptyTrajectory);
    }
    let mut acc = RVector::zeros(dim);
    for w in traj.segment_bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let steps = hi - lo;
        match quadrature {
            Quadrature::Simpson if steps % 2 == 0 => {
                let h = (traj.times[hi] - traj.times[lo]) / steps as f64;
                for k in lo..=hi {
                    let weight = if k == lo || k == hi {
                        1.0
                    } else if (k - lo) % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    acc.axpy(weight * h / 3.0, &traj.vectors[k], 1.0);
                }
            }
            Quadrature::Simpson => {
                return Err(Error::InvalidInput(format!(
                    "Simpson quadrature needs an even number of steps per segment, got {steps}"
                )));
            }
            Quadrature::Trapezoid => {
                for k in lo..hi {
                    let h = traj.times[k + 1] - traj.times[k];
                    acc.axpy(0.5 * h, &traj.vectors[k], 1.0);
                    acc.axpy(0.5 * h, &traj.vectors[k + 1], 1.0);
                }
            }
        }
    }
    Ok(acc / total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Relative to `|s(0)|` of each vector.
    pub tolerance: f64,
    pub steps_per_segment: usize,
    pub quadrature: Quadrature,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            steps_per_segment: DEFAULT_STEPS,
            quadrature: Quadrature::Trapezoid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageEntry {
    pub gamma: String,
    pub average: Vec<f64>,
    pub norm: f64,
    pub initial_norm: f64,
    /// Absolute threshold `tolerance · |s(0)|` the norm is compared against.
    pub threshold: f64,
    pub decoupled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageReport {
    pub entries: Vec<AverageEntry>,
    pub tolerance: f64,
    pub decoupled: bool,
    pub cyclic: bool,
    pub cyclicity_deviation: f64,
    pub cycle_time: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AverageReport {
    pub fn entry(&self, gamma: &str) -> Option<&AverageEntry> {
        self.entries.iter().find(|e| e.gamma == gamma)
    }

    /// Largest `|s'| / |s(0)|` over the entries.
    pub fn worst_relative(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| {
                if e.initial_norm > 0.0 {
                    e.norm / e.initial_norm
                } else {
                    e.norm
                }
            })
            .fold(0.0, f64::max)
    }
}

fn entry_for(gamma: &str, average: RVector, initial_norm: f64, tolerance: f64) -> AverageEntry {
    let norm = average.norm();
    let threshold = tolerance * initial_norm;
    AverageEntry {
        gamma: gamma.to_string(),
        average: average.iter().copied().collect(),
        norm,
        initial_norm,
        threshold,
        decoupled: norm <= threshold,
    }
}

/// Averages every vector over the schedule and applies the verdict.
/// A schedule that is not cyclic still gets a report, annotated as such.
pub fn check_decoupling(
    vectors: &[ErrorVector],
    schedule: &ControlSchedule,
    basis: &GeneratorBasis,
    options: &CheckOptions,
) -> Result<AverageReport> {
    if !(options.tolerance.is_finite() && options.tolerance >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be non-negative, got {}",
            options.tolerance
        )));
    }
    let deviation = cyclicity_deviation(schedule, basis)?;
    let cyclic = deviation <= CYCLIC_TOL;
    let mut entries = Vec::with_capacity(vectors.len());
    for v in vectors {
        let traj = trajectory(v, schedule, basis, options.steps_per_segment)?;
        let avg = average_error_vector_with(&traj, options.quadrature)?;
        entries.push(entry_for(&v.gamma, avg, v.norm(), options.tolerance));
    }
    let mut notes = Vec::new();
    if !cyclic {
        notes.push(format!(
            "non-cyclic: U_c(T_c) differs from a phase times identity by {deviation:.3e}; the average Hamiltonian analysis does not apply"
        ));
    }
    Ok(AverageReport {
        decoupled: entries.iter().all(|e| e.decoupled),
        entries,
        tolerance: options.tolerance,
        cyclic,
        cyclicity_deviation: deviation,
        cycle_time: schedule.cycle_time(),
        notes,
    })
}
