use crate::control::{ControlSchedule, TimeGrid};
use crate::error::Result;
use crate::lie_algebra::GeneratorBasis;
use crate::linalg::{identity, phase_distance, CMatrix, HermitianExp};

/// `U_c(T_c)` must match a phase times identity to this Frobenius distance.
pub const CYCLIC_TOL: f64 = 1e-8;

/// Control unitaries `U_c(t_k)` sampled on a [`TimeGrid`].
#[derive(Debug, Clone)]
pub struct ControlPropagation {
    pub times: Vec<f64>,
    pub unitaries: Vec<CMatrix>,
    pub segment_bounds: Vec<usize>,
    /// Phase-removed distance of `U_c(T_c)` from the identity.
    pub cyclicity_deviation: f64,
    pub cyclic: bool,
}

impl ControlPropagation {
    pub fn final_unitary(&self) -> &CMatrix {
        self.unitaries.last().expect("grid has at least two points")
    }
}

/// Per-segment exponential data: `c·λ` diagonalized once.
pub(crate) fn segment_exponentials(schedule: &ControlSchedule, basis: &GeneratorBasis) -> Result<Vec<HermitianExp>> {
    schedule.check_basis(basis)?;
    schedule
        .segments()
        .iter()
        .map(|seg| Ok(HermitianExp::new(&basis.combination(&seg.direction)?)))
        .collect()
}

/// Time-ordered `U_c(t) = T exp(−i ∫ H_c)`.
///
/// The direction is fixed inside a segment, so the step propagator
/// `exp(−i ΔA c·λ)` with `ΔA = A(t_{k+1}) − A(t_k)` is exact for every envelope.
pub fn propagate_unitary(
    schedule: &ControlSchedule,
    basis: &GeneratorBasis,
    steps_per_segment: usize,
) -> Result<ControlPropagation> {
    let grid = TimeGrid::new(schedule, steps_per_segment)?;
    let exps = segment_exponentials(schedule, basis)?;
    let n = basis.system_dim();
    let mut unitaries = Vec::with_capacity(grid.times.len());
    unitaries.push(identity(n));
    for (i, seg) in schedule.segments().iter().enumerate() {
        for (_, t0, t1) in grid.segment_steps(i) {
            let delta = seg.envelope.angle_clamped(t1) - seg.envelope.angle_clamped(t0);
            let next = exps[i].propagator(delta) * unitaries.last().unwrap();
            unitaries.push(next);
        }
    }
    let cyclicity_deviation = phase_distance(unitaries.last().unwrap(), &identity(n));
    Ok(ControlPropagation {
        times: grid.times,
        unitaries,
        segment_bounds: grid.segment_bounds,
        cyclicity_deviation,
        cyclic: cyclicity_deviation <= CYCLIC_TOL,
    })
}

/// `U_c(t)` for a single `t ∈ [0, T_c]`, built segment by segment.
pub fn control_unitary_at(schedule: &ControlSchedule, basis: &GeneratorBasis, t: f64) -> Result<CMatrix> {
    let exps = segment_exponentials(schedule, basis)?;
    let (index, local) = schedule.locate(t.clamp(0.0, schedule.cycle_time()));
    let mut u = identity(basis.system_dim());
    for (i, seg) in schedule.segments().iter().enumerate().take(index) {
        u = exps[i].propagator(seg.envelope.total_angle()) * u;
    }
    let last = &schedule.segments()[index];
    Ok(exps[index].propagator(last.envelope.angle_clamped(local)) * u)
}

/// Phase-removed distance of `U_c(T_c)` from the identity.
pub fn cyclicity_deviation(schedule: &ControlSchedule, basis: &GeneratorBasis) -> Result<f64> {
    let u = control_unitary_at(schedule, basis, schedule.cycle_time())?;
    Ok(phase_distance(&u, &identity(basis.system_dim())))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::control::{ControlSegment, Envelope};
    use crate::lie_algebra::BasisKind;
    use crate::linalg::{max_abs, unitarity_error};

    fn pauli() -> GeneratorBasis {
        GeneratorBasis::new(BasisKind::Pauli)
    }

    #[test]
    fn constant_y_pulse_for_pi_is_minus_identity() {
        let seg = ControlSegment::new(vec![0.0, 1.0, 0.0], Envelope::constant(1.0, PI).unwrap()).unwrap();
        let s = ControlSchedule::new(vec![seg]).unwrap();
        let p = propagate_unitary(&s, &pauli(), 64).unwrap();
        assert!(max_abs(&(p.final_unitary() + identity(2))) < 1e-12);
        assert!(p.cyclic);
        for u in &p.unitaries {
            assert!(unitarity_error(u) < 1e-10);
        }
    }

    #[test]
    fn half_turn_is_not_cyclic() {
        let seg = ControlSegment::new(vec![1.0, 0.0, 0.0], Envelope::constant(1.0, PI / 4.0).unwrap()).unwrap();
        let s = ControlSchedule::new(vec![seg]).unwrap();
        let p = propagate_unitary(&s, &pauli(), 16).unwrap();
        assert!(!p.cyclic);
        assert!(p.cyclicity_deviation > 0.5);
    }

    #[test]
    fn pointwise_unitary_matches_grid() {
        let a = ControlSegment::new(vec![1.0, 0.0, 0.0], Envelope::raised_cosine(1.3, 0.8).unwrap()).unwrap();
        let b = ControlSegment::new(vec![0.0, 0.6, 0.8], Envelope::constant(0.7, 0.5).unwrap()).unwrap();
        let s = ControlSchedule::new(vec![a, b]).unwrap();
        let p = propagate_unitary(&s, &pauli(), 32).unwrap();
        for k in [5, 32, 40, 64] {
            let u = control_unitary_at(&s, &pauli(), p.times[k]).unwrap();
            assert!(max_abs(&(u - &p.unitaries[k])) < 1e-12);
        }
    }

    #[test]
    fn basis_mismatch_is_rejected() {
        let seg = ControlSegment::new(vec![1.0, 0.0, 0.0], Envelope::constant(1.0, 1.0).unwrap()).unwrap();
        let s = ControlSchedule::new(vec![seg]).unwrap();
        assert!(propagate_unitary(&s, &GeneratorBasis::new(BasisKind::GellMann), 16).is_err());
    }
}
