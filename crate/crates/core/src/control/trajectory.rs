use crate::control::{ControlSchedule, TimeGrid};
use crate::error::{Error, Result};
use crate::error_model::ErrorVector;
use crate::lie_algebra::{structure_constants, AdjointGenerator, GeneratorBasis};
use crate::linalg::{expm_real, RMatrix, RVector};

/// Integration scheme for `ds/dt = a(t) F s`, with `F` taken along the toggled control direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stepper {
    /// Closed-form rotation `exp(A(t) F)` per grid point; norm preserving.
    #[default]
    Rotation,
    /// Classical fourth-order Runge-Kutta, kept as a cross-check.
    Rk4,
}

/// Error vector `s(t)` in the toggling frame over one control cycle.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub gamma: String,
    pub times: Vec<f64>,
    pub vectors: Vec<RVector>,
    pub segment_bounds: Vec<usize>,
}

impl Trajectory {
    pub fn initial(&self) -> &RVector {
        &self.vectors[0]
    }

    pub fn endpoint(&self) -> &RVector {
        self.vectors.last().expect("trajectory has at least two points")
    }

    /// Largest `| |s(t)| − |s(0)| |` along the trajectory.
    pub fn norm_drift(&self) -> f64 {
        let n0 = self.initial().norm();
        self.vectors.iter().map(|v| (v.norm() - n0).abs()).fold(0.0, f64::max)
    }
}

pub fn trajectory(
    vec: &ErrorVector,
    schedule: &ControlSchedule,
    basis: &GeneratorBasis,
    steps_per_segment: usize,
) -> Result<Trajectory> {
    trajectory_with(vec, schedule, basis, steps_per_segment, Stepper::Rotation)
}

pub fn trajectory_with(
    vec: &ErrorVector,
    schedule: &ControlSchedule,
    basis: &GeneratorBasis,
    steps_per_segment: usize,
    stepper: Stepper,
) -> Result<Trajectory> {
    if vec.basis != basis.kind() {
        return Err(Error::BasisMismatch {
            expected: basis.kind(),
            found: vec.basis,
        });
    }
    schedule.check_basis(basis)?;
    let grid = TimeGrid::new(schedule, steps_per_segment)?;
    let f = structure_constants(basis);
    let s0 = vec.as_vector();
    let dim = s0.len();
    // s(t) = R[U_c(t)]ᵀ s(0) and R[U_c] composes as Q_k = Q_{k-1} exp(A_k F_k): a later
    // segment acts on s(0) before the earlier ones, i.e. along the toggled direction.
    let mut q = RMatrix::identity(dim, dim);
    let mut vectors = Vec::with_capacity(grid.times.len());
    vectors.push(s0.clone());
    for (i, seg) in schedule.segments().iter().enumerate() {
        let gen = AdjointGenerator::from_structure(&f, &seg.direction)?;
        let fm = gen.matrix();
        let env = &seg.envelope;
        let toggled = &q * fm * q.transpose();
        for (_, t0, t1) in grid.segment_steps(i) {
            let next = match stepper {
                Stepper::Rotation => &q * (expm_real(fm, env.angle_clamped(t1)) * &s0),
                Stepper::Rk4 => rk4_step(&toggled, vectors.last().unwrap(), t0, t1, |t| env.amplitude(t)),
            };
            vectors.push(next);
        }
        q *= expm_real(fm, env.total_angle());
    }
    Ok(Trajectory {
        gamma: vec.gamma.clone(),
        times: grid.times,
        vectors,
        segment_bounds: grid.segment_bounds,
    })
}

fn rk4_step(f: &RMatrix, s: &RVector, t0: f64, t1: f64, a: impl Fn(f64) -> f64) -> RVector {
    let h = t1 - t0;
    let tm = 0.5 * (t0 + t1);
    let k1 = f * s * a(t0);
    let k2 = f * (s + &k1 * (0.5 * h)) * a(tm);
    let k3 = f * (s + &k2 * (0.5 * h)) * a(tm);
    let k4 = f * (s + &k3 * h) * a(t1);
    s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::control::{propagate_unitary, ControlSegment, Envelope};
    use crate::lie_algebra::{adjoint_rotation, BasisKind};

    fn y_pulse(d: f64) -> ControlSchedule {
        let seg = ControlSegment::new(vec![0.0, 1.0, 0.0], Envelope::constant(1.0, d).unwrap()).unwrap();
        ControlSchedule::new(vec![seg]).unwrap()
    }

    #[test]
    fn zero_amplitude_leaves_vector_fixed() {
        let basis = GeneratorBasis::new(BasisKind::Pauli);
        let s = ControlSchedule::new(vec![ControlSegment::idle(3, 2.0).unwrap()]).unwrap();
        let v = ErrorVector::new("z", vec![0.3, -0.2, 0.9], BasisKind::Pauli).unwrap();
        let tr = trajectory(&v, &s, &basis, 16).unwrap();
        for x in &tr.vectors {
            assert!((x - v.as_vector()).norm() < 1e-15);
        }
    }

    #[test]
    fn y_pulse_rotates_z_in_xz_plane_at_speed_two() {
        let basis = GeneratorBasis::new(BasisKind::Pauli);
        let v = ErrorVector::unit("z", BasisKind::Pauli, 3, 1.0).unwrap();
        let tr = trajectory(&v, &y_pulse(PI / 2.0), &basis, 64).unwrap();
        for (t, x) in tr.times.iter().zip(&tr.vectors) {
            assert!(x[1].abs() < 1e-14);
            assert!((x[2] - (2.0 * t).cos()).abs() < 1e-12);
            assert!((x[0].abs() - (2.0 * t).sin().abs()).abs() < 1e-12);
        }
        assert!((tr.endpoint() + v.as_vector()).norm() < 1e-12);
    }

    #[test]
    fn endpoint_matches_adjoint_rotation_for_su3() {
        let basis = GeneratorBasis::new(BasisKind::GellMann);
        let segs = vec![
            ControlSegment::new(
                vec![0.2, 0.0, 1.0, 0.0, 0.0, 0.4, 0.0, 0.1],
                Envelope::raised_cosine(1.1, 1.3).unwrap(),
            )
            .unwrap(),
            ControlSegment::new(
                vec![0.0, 1.0, 0.0, 0.0, 0.7, 0.0, 0.0, 0.0],
                Envelope::piecewise(vec![0.5, -0.3, 0.9], 0.9).unwrap(),
            )
            .unwrap(),
        ];
        let s = ControlSchedule::new(segs).unwrap();
        let v = ErrorVector::new(
            "g",
            vec![0.1, 0.5, -0.3, 0.2, 0.0, 0.7, -0.4, 0.25],
            BasisKind::GellMann,
        )
        .unwrap();
        let tr = trajectory(&v, &s, &basis, 32).unwrap();
        let prop = propagate_unitary(&s, &basis, 32).unwrap();
        let r = adjoint_rotation(&basis, prop.final_unitary()).unwrap();
        let expected = r.transpose() * v.as_vector();
        assert!((tr.endpoint() - expected).norm() < 1e-8);
        assert!(tr.norm_drift() < 1e-8);
    }

    #[test]
    fn rk4_agrees_with_rotation() {
        let basis = GeneratorBasis::new(BasisKind::Pauli);
        let v = ErrorVector::unit("z", BasisKind::Pauli, 3, 1.0).unwrap();
        let seg = ControlSegment::new(vec![0.0, 1.0, 0.0], Envelope::raised_cosine(2.0, PI / 2.0).unwrap()).unwrap();
        let s = ControlSchedule::new(vec![seg]).unwrap();
        let a = trajectory_with(&v, &s, &basis, 256, Stepper::Rotation).unwrap();
        let b = trajectory_with(&v, &s, &basis, 256, Stepper::Rk4).unwrap();
        assert!((a.endpoint() - b.endpoint()).norm() < 1e-8);
    }

    #[test]
    fn basis_mismatch_is_rejected() {
        let basis = GeneratorBasis::new(BasisKind::Pauli);
        let v = ErrorVector::unit("z", BasisKind::GellMann, 3, 1.0).unwrap();
        assert!(matches!(
            trajectory(&v, &y_pulse(1.0), &basis, 16),
            Err(Error::BasisMismatch { .. })
        ));
    }
}
