use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bath::{evolve_joint_final, JointModel};
use crate::control::ControlSchedule;
use crate::error::{Error, Result};
use crate::lie_algebra::GeneratorBasis;
use crate::linalg::{c, CMatrix, JsonEntry};

/// Stroboscopic coherence run: `n_cycles` periods of length `period` sampled at the
/// period boundaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceRequest {
    pub n_cycles: usize,
    /// Sampling period when no schedule is given; with a schedule the cycle time is used.
    #[serde(default)]
    pub period: Option<f64>,
    pub dt: f64,
    /// System amplitudes; defaults to `(|1⟩ + |2⟩)/√2`.
    #[serde(default)]
    pub system_state: Option<Vec<JsonEntry>>,
    /// Bath amplitudes; defaults to the first bath basis state.
    #[serde(default)]
    pub bath_state: Option<Vec<JsonEntry>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Controlled and free curves sampled at the same times.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceComparison {
    pub times: Vec<f64>,
    pub control: Vec<f64>,
    pub free: Vec<f64>,
}

impl CoherenceComparison {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cycle,t,coherence_control,coherence_free\n");
        for (k, t) in self.times.iter().enumerate() {
            out.push_str(&format!(
                "{k},{},{},{}\n",
                crate::scenario::format_value(*t),
                crate::scenario::format_value(self.control[k]),
                crate::scenario::format_value(self.free[k])
            ));
        }
        out
    }
}

fn normalized(
    entries: Option<&[JsonEntry]>,
    dim: usize,
    default: impl Fn(usize) -> Complex64,
) -> Result<Vec<Complex64>> {
    let v: Vec<Complex64> = match entries {
        None => (0..dim).map(default).collect(),
        Some(e) => {
            if e.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: e.len(),
                });
            }
            e.iter()
                .map(|x| match *x {
                    JsonEntry::Real(re) => c(re, 0.0),
                    JsonEntry::Complex([re, im]) => c(re, im),
                })
                .collect()
        }
    };
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::InvalidInput(
            "initial state must have non-zero finite norm".into(),
        ));
    }
    Ok(v.into_iter().map(|z| z / norm).collect())
}

fn initial_state(joint: &JointModel, request: &CoherenceRequest) -> Result<Vec<Complex64>> {
    let n = joint.system_dim();
    let d = joint.bath_dim();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let sys = normalized(request.system_state.as_deref(), n, |i| {
        c(if i < 2 { r } else { 0.0 }, 0.0)
    })?;
    let bath = normalized(request.bath_state.as_deref(), d, |i| {
        c(if i == 0 { 1.0 } else { 0.0 }, 0.0)
    })?;
    Ok(sys.iter().flat_map(|a| bath.iter().map(move |b| a * b)).collect())
}

/// `2 |ρ_S[0, 1]|` for a joint pure state.
fn coherence(psi: &[Complex64], d: usize) -> f64 {
    let rho01: Complex64 = (0..d).map(|b| psi[b] * psi[d + b].conj()).sum();
    (2.0 * rho01.norm()).min(1.0)
}

fn apply(u: &CMatrix, psi: &[Complex64]) -> Vec<Complex64> {
    (0..u.nrows())
        .map(|i| (0..u.ncols()).map(|j| u[(i, j)] * psi[j]).sum())
        .collect()
}

/// Coherence of the system at multiples of the cycle, `U(T)^k |ψ0⟩`.
pub fn coherence_curve(
    joint: &JointModel,
    schedule: Option<&ControlSchedule>,
    basis: &GeneratorBasis,
    request: &CoherenceRequest,
) -> Result<CoherenceCurve> {
    if joint.system_dim() < 2 {
        return Err(Error::InvalidInput("coherence needs at least two system levels".into()));
    }
    let period = match (schedule, request.period) {
        (Some(s), _) => s.cycle_time(),
        (None, Some(p)) if p.is_finite() && p > 0.0 => p,
        (None, _) => {
            return Err(Error::InvalidInput(
                "free evolution needs a positive sampling period".into(),
            ))
        }
    };
    let u = evolve_joint_final(joint, schedule, basis, period, request.dt)?;
    let mut psi = initial_state(joint, request)?;
    let d = joint.bath_dim();
    let mut times = vec![0.0];
    let mut values = vec![coherence(&psi, d)];
    for k in 1..=request.n_cycles {
        psi = apply(&u, &psi);
        times.push(period * k as f64);
        values.push(coherence(&psi, d));
    }
    Ok(CoherenceCurve { times, values })
}

/// Controlled curve and the free curve sampled at the same stroboscopic times.
pub fn coherence_comparison(
    joint: &JointModel,
    schedule: &ControlSchedule,
    basis: &GeneratorBasis,
    request: &CoherenceRequest,
) -> Result<CoherenceComparison> {
    let control = coherence_curve(joint, Some(schedule), basis, request)?;
    let free_request = CoherenceRequest {
        period: Some(schedule.cycle_time()),
        ..request.clone()
    };
    let free = coherence_curve(joint, None, basis, &free_request)?;
    Ok(CoherenceComparison {
        times: control.times,
        control: control.values,
        free: free.values,
    })
}
