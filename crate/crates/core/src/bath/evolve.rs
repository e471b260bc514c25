use crate::bath::JointModel;
use crate::control::{control_unitary_at, ControlSchedule};
use crate::error::{Error, Result};
use crate::lie_algebra::GeneratorBasis;
use crate::linalg::{c, hermitian_norm, identity, CMatrix, HermitianExp};

/// Largest admissible `dt · ‖H‖`.
pub const MAX_STEP_PRODUCT: f64 = 0.1;

/// Joint propagators `U(t_k)` on the evolution grid.
#[derive(Debug, Clone)]
pub struct JointEvolution {
    pub times: Vec<f64>,
    pub unitaries: Vec<CMatrix>,
}

impl JointEvolution {
    pub fn final_unitary(&self) -> &CMatrix {
        self.unitaries.last().expect("evolution has at least one point")
    }
}

/// One step `[t0, t1]` of constant direction; `delta_angle` is `A(t1) − A(t0)` within the segment.
struct Step {
    t1: f64,
    segment: Option<usize>,
    delta_angle: f64,
}

/// Steps covering `[0, t_final]`, aligned to segment boundaries of the periodic schedule.
fn build_steps(schedule: Option<&ControlSchedule>, t_final: f64, dt: f64) -> Vec<Step> {
    let mut steps = Vec::new();
    let Some(schedule) = schedule else {
        let count = (t_final / dt).ceil().max(1.0) as usize;
        for k in 1..=count {
            steps.push(Step {
                t1: t_final * k as f64 / count as f64,
                segment: None,
                delta_angle: 0.0,
            });
        }
        return steps;
    };
    let period = schedule.cycle_time();
    let mut cycle_start = 0.0;
    let mut cycle = 0usize;
    'outer: loop {
        let mut seg_start = cycle_start;
        for (i, seg) in schedule.segments().iter().enumerate() {
            let seg_end = cycle_start + schedule.segments()[..=i].iter().map(|s| s.duration()).sum::<f64>();
            let stop = seg_end.min(t_final);
            let span = stop - seg_start;
            if span > 1e-15 * period {
                let count = (span / dt).ceil().max(1.0) as usize;
                let h = span / count as f64;
                for k in 1..=count {
                    let l0 = (k - 1) as f64 * h;
                    let l1 = if k == count { span } else { k as f64 * h };
                    steps.push(Step {
                        t1: if k == count { stop } else { seg_start + l1 },
                        segment: Some(i),
                        delta_angle: seg.envelope.angle_clamped(l1) - seg.envelope.angle_clamped(l0),
                    });
                }
            }
            if seg_end >= t_final - 1e-15 * period {
                break 'outer;
            }
            seg_start = seg_end;
        }
        cycle += 1;
        cycle_start = period * cycle as f64;
    }
    steps
}

fn control_operators(joint: &JointModel, schedule: &ControlSchedule, basis: &GeneratorBasis) -> Result<Vec<CMatrix>> {
    schedule.check_basis(basis)?;
    if basis.system_dim() != joint.system_dim() {
        return Err(Error::DimensionMismatch {
            expected: joint.system_dim(),
            found: basis.system_dim(),
        });
    }
    schedule
        .segments()
        .iter()
        .map(|s| Ok(joint.on_system(&basis.combination(&s.direction)?)))
        .collect()
}

/// Propagates `H0 + a(t) (c·λ) ⊗ 1` from 0 to `t_final`, applying the schedule periodically.
///
/// Each step uses the exponential of `H0 + ā (c·λ)`, where `ā = ΔA / δt` is the step-averaged
/// amplitude (second order, like the midpoint rule).
pub fn evolve_joint(
    joint: &JointModel,
    schedule: Option<&ControlSchedule>,
    basis: &GeneratorBasis,
    t_final: f64,
    dt: f64,
) -> Result<JointEvolution> {
    evolve(joint, schedule, basis, t_final, dt, true)
}

/// As [`evolve_joint`] but keeps only `U(t_final)`.
pub fn evolve_joint_final(
    joint: &JointModel,
    schedule: Option<&ControlSchedule>,
    basis: &GeneratorBasis,
    t_final: f64,
    dt: f64,
) -> Result<CMatrix> {
    let mut ev = evolve(joint, schedule, basis, t_final, dt, false)?;
    Ok(ev.unitaries.pop().expect("final unitary is recorded"))
}

fn evolve(
    joint: &JointModel,
    schedule: Option<&ControlSchedule>,
    basis: &GeneratorBasis,
    t_final: f64,
    dt: f64,
    record: bool,
) -> Result<JointEvolution> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::InvalidInput(format!("t_final must be positive, got {t_final}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidInput(format!("dt must be positive, got {dt}")));
    }
    let controls = match schedule {
        Some(s) => control_operators(joint, s, basis)?,
        None => Vec::new(),
    };
    let mut bound = hermitian_norm(&joint.h0);
    if let Some(s) = schedule {
        let control_norm = controls.iter().map(hermitian_norm).fold(0.0, f64::max);
        bound += s.max_amplitude() * control_norm;
    }
    let product = dt * bound;
    if product > MAX_STEP_PRODUCT * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { product });
    }

    let steps = build_steps(schedule, t_final, dt);
    let n = joint.dim();
    let mut u = identity(n);
    let mut times = vec![0.0];
    let mut unitaries = if record { vec![u.clone()] } else { Vec::new() };
    let mut t0 = 0.0;
    let free = HermitianExp::new(&joint.h0);
    for step in &steps {
        let h = step.t1 - t0;
        let propagator = match step.segment {
            Some(i) if step.delta_angle != 0.0 => {
                let total = &joint.h0 + &controls[i] * c(step.delta_angle / h, 0.0);
                HermitianExp::new(&total).propagator(h)
            }
            _ => free.propagator(h),
        };
        u = propagator * u;
        if record {
            times.push(step.t1);
            unitaries.push(u.clone());
        }
        t0 = step.t1;
    }
    if !record {
        times.push(t0);
        unitaries.push(u);
    }
    Ok(JointEvolution { times, unitaries })
}

/// `Ĥ0(t) = (U_c(t) ⊗ 1)† H0 (U_c(t) ⊗ 1)`.
pub fn interaction_picture_hamiltonian(
    joint: &JointModel,
    schedule: &ControlSchedule,
    basis: &GeneratorBasis,
    t: f64,
) -> Result<CMatrix> {
    let period = schedule.cycle_time();
    if !(0.0..=period * (1.0 + 1e-12)).contains(&t) {
        return Err(Error::TimeOutOfRange { t, duration: period });
    }
    control_operators(joint, schedule, basis)?;
    let uc = joint.on_system(&control_unitary_at(schedule, basis, t)?);
    Ok(uc.adjoint() * &joint.h0 * uc)
}
