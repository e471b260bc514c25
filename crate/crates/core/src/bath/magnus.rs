use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::bath::JointModel;
use crate::control::{propagate_unitary, ControlSchedule};
use crate::error::{Error, Result};
use crate::lie_algebra::GeneratorBasis;
use crate::linalg::{c, commutator, identity, kron, partial_trace_first, trace_product, CMatrix, I};

/// Direction of the inner integral in `H̄¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// `∫_0^T dv ∫_0^v du`.
    #[default]
    Forward,
    /// `∫_0^T dv ∫_v^T du`; negates `H̄¹`.
    Reverse,
}

#[derive(Debug, Clone)]
pub struct MagnusTerms {
    pub h0_bar: CMatrix,
    pub h1_bar: CMatrix,
    pub cycle_time: f64,
}

impl MagnusTerms {
    /// `exp(−i (H̄⁰ + H̄¹) T_c)`.
    pub fn propagator(&self) -> CMatrix {
        crate::linalg::expm_hermitian(&(&self.h0_bar + &self.h1_bar), self.cycle_time)
    }
}

/// First two average-Hamiltonian terms over one cycle:
/// `H̄⁰ = (1/T) ∫ Ĥ0` and `H̄¹ = −(i / 2T) ∫ dv ∫_0^v du [Ĥ0(v), Ĥ0(u)]`.
///
/// The factor `1/2` is the second Magnus coefficient; without it
/// `exp(−i(H̄⁰ + H̄¹)T)` is only first-order accurate.
pub fn magnus_terms(
    joint: &JointModel,
    schedule: &ControlSchedule,
    basis: &GeneratorBasis,
    quadrature_steps: usize,
) -> Result<MagnusTerms> {
    magnus_terms_oriented(joint, schedule, basis, quadrature_steps, Orientation::Forward)
}

pub fn magnus_terms_oriented(
    joint: &JointModel,
    schedule: &ControlSchedule,
    basis: &GeneratorBasis,
    quadrature_steps: usize,
    orientation: Orientation,
) -> Result<MagnusTerms> {
    if basis.system_dim() != joint.system_dim() {
        return Err(Error::DimensionMismatch {
            expected: joint.system_dim(),
            found: basis.system_dim(),
        });
    }
    let prop = propagate_unitary(schedule, basis, quadrature_steps)?;
    if !prop.cyclic {
        return Err(Error::NonCyclic {
            deviation: prop.cyclicity_deviation,
        });
    }
    let toggled: Vec<CMatrix> = prop
        .unitaries
        .iter()
        .map(|u| {
            let uc = joint.on_system(u);
            uc.adjoint() * &joint.h0 * uc
        })
        .collect();
    let t = &prop.times;
    let period = schedule.cycle_time();
    let dim = joint.dim();

    // Cumulative trapezoid C(t_k) = ∫_0^{t_k} Ĥ0.
    let mut cumulative = Vec::with_capacity(t.len());
    cumulative.push(CMatrix::zeros(dim, dim));
    for k in 1..t.len() {
        let h = t[k] - t[k - 1];
        let next = &cumulative[k - 1] + (&toggled[k - 1] + &toggled[k]) * c(0.5 * h, 0.0);
        cumulative.push(next);
    }
    let total = cumulative.last().unwrap().clone();

    let mut nested = CMatrix::zeros(dim, dim);
    let mut previous: Option<CMatrix> = None;
    for k in 0..t.len() {
        let inner = match orientation {
            Orientation::Forward => cumulative[k].clone(),
            Orientation::Reverse => &total - &cumulative[k],
        };
        let value = commutator(&toggled[k], &inner);
        if let Some(prev) = previous {
            let h = t[k] - t[k - 1];
            nested += (prev + &value) * c(0.5 * h, 0.0);
        }
        previous = Some(value);
    }

    let h0_bar = hermitize(&total * c(1.0 / period, 0.0));
    let h1_bar = hermitize(nested * (-I / (2.0 * period)));
    Ok(MagnusTerms {
        h0_bar,
        h1_bar,
        cycle_time: period,
    })
}

fn hermitize(m: CMatrix) -> CMatrix {
    (&m + m.adjoint()) * c(0.5, 0.0)
}

/// Decomposition of a joint operator `X` as
/// `Σ_i x_i λ_i ⊗ 1 + Σ_b Σ_i y_{b,i} λ_i ⊗ B_b + 1 ⊗ (…)`.
///
/// Bath operators are keyed by label; couplings sharing a label combine.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSector {
    /// Traceless system part multiplying the bath identity.
    pub system: Vec<f64>,
    pub couplings: BTreeMap<String, Vec<f64>>,
}

/// Projects `x` onto the span of `{1_B} ∪ {B_b}` used by the model's couplings.
pub fn coupling_sector(joint: &JointModel, basis: &GeneratorBasis, x: &CMatrix) -> Result<CouplingSector> {
    let n = joint.system_dim();
    let d = joint.bath_dim();
    if basis.system_dim() != n || x.nrows() != n * d {
        return Err(Error::DimensionMismatch {
            expected: n * d,
            found: x.nrows(),
        });
    }
    let mut labels: Vec<String> = joint
        .decomposed
        .couplings
        .iter()
        .map(|c| c.bath_label.clone())
        .collect();
    labels.sort();
    labels.dedup();
    let mut ops = vec![identity(d)];
    for l in &labels {
        ops.push(joint.bath.operator(l)?.clone());
    }
    let k = ops.len();
    let gram = DMatrix::from_fn(k, k, |a, b| trace_product(&ops[a], &ops[b]).re);
    let lu = gram.clone().lu();
    let scale = gram.diagonal().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let det = lu.determinant();
    if det.abs() <= 1e-10 * scale.powi(k as i32) {
        return Err(Error::DependentBathOperators);
    }

    let m = basis.normalization();
    let mut system = Vec::with_capacity(basis.adjoint_dim());
    let mut couplings: BTreeMap<String, Vec<f64>> = labels.iter().map(|l| (l.clone(), Vec::new())).collect();
    for g in basis.generators() {
        // K = Tr_S[(λ_i ⊗ 1) X] / M, a bath operator.
        let weighted = kron(g, &identity(d)) * x;
        let bath_op = partial_trace_first(&weighted, n, d) * c(1.0 / m, 0.0);
        let rhs = nalgebra::DVector::from_fn(k, |a, _| trace_product(&ops[a], &bath_op).re);
        let coeff = lu.solve(&rhs).ok_or(Error::DependentBathOperators)?;
        system.push(coeff[0]);
        for (j, l) in labels.iter().enumerate() {
            couplings.get_mut(l).unwrap().push(coeff[j + 1]);
        }
    }
    Ok(CouplingSector { system, couplings })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::bath::{assemble_joint, evolve_joint_final, BathModel};
    use crate::control::{design_half_cycle_profile, ControlSegment, EnvelopeKind};
    use crate::decoupling::{average_error_vector, check_decoupling, CheckOptions};
    use crate::error_model::{decompose, to_error_vector, CouplingTerm};
    use crate::lie_algebra::BasisKind;
    use crate::linalg::{max_abs, pauli_x, pauli_y, pauli_z};

    fn pauli() -> GeneratorBasis {
        GeneratorBasis::new(BasisKind::Pauli)
    }

    fn model() -> JointModel {
        let bath = BathModel::new(
            pauli_z() * c(0.3, 0.0),
            BTreeMap::from([("bx".to_string(), pauli_x()), ("by".to_string(), pauli_y())]),
        )
        .unwrap();
        let terms = [
            CouplingTerm::new("z", pauli_z(), "bx").unwrap(),
            CouplingTerm::new("x", pauli_x() * c(0.4, 0.0), "by").unwrap(),
        ];
        assemble_joint(&decompose(&(pauli_z() * c(0.2, 0.0)), &terms).unwrap(), &bath).unwrap()
    }

    fn example_a(kind: EnvelopeKind) -> ControlSchedule {
        let (a, b) = design_half_cycle_profile(PI, 1.0, kind, 2.0, None).unwrap();
        let dir = vec![0.0, 1.0, 0.0];
        ControlSchedule::new(vec![
            ControlSegment::new(dir.clone(), a).unwrap(),
            ControlSegment::new(dir, b).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn trivial_control_gives_h0_and_no_correction() {
        let joint = model();
        let idle = ControlSchedule::new(vec![ControlSegment::idle(3, 1.0).unwrap()]).unwrap();
        let m = magnus_terms(&joint, &idle, &pauli(), 32).unwrap();
        assert!(max_abs(&(&m.h0_bar - &joint.h0)) < 1e-10);
        assert!(max_abs(&m.h1_bar) < 1e-10);
    }

    #[test]
    fn reversed_orientation_negates_second_term() {
        let joint = model();
        let s = example_a(EnvelopeKind::RaisedCosine);
        let f = magnus_terms_oriented(&joint, &s, &pauli(), 64, Orientation::Forward).unwrap();
        let r = magnus_terms_oriented(&joint, &s, &pauli(), 64, Orientation::Reverse).unwrap();
        assert!(max_abs(&(&f.h1_bar + &r.h1_bar)) < 1e-10);
        assert!(max_abs(&(&f.h1_bar - f.h1_bar.adjoint())) < 1e-10);
    }

    #[test]
    fn coupling_sector_matches_average_error_vectors() {
        let joint = model();
        let basis = pauli();
        let s = example_a(EnvelopeKind::Constant);
        let m = magnus_terms(&joint, &s, &basis, 256).unwrap();
        let sector = coupling_sector(&joint, &basis, &m.h0_bar).unwrap();
        for term in &joint.decomposed.couplings {
            let v = to_error_vector(term, &basis).unwrap();
            let traj = crate::control::trajectory(&v, &s, &basis, 256).unwrap();
            let avg = average_error_vector(&traj).unwrap();
            let got = &sector.couplings[&term.bath_label];
            for (a, b) in got.iter().zip(avg.iter()) {
                assert!((a - b).abs() < 1e-8, "{got:?} vs {avg:?}");
            }
        }
    }

    #[test]
    fn pure_dephasing_coupling_vanishes_under_decoupling() {
        let bath = BathModel::new(CMatrix::zeros(2, 2), BTreeMap::from([("b".to_string(), pauli_x())])).unwrap();
        let term = CouplingTerm::new("z", pauli_z(), "b").unwrap();
        let joint = assemble_joint(
            &decompose(&CMatrix::zeros(2, 2), std::slice::from_ref(&term)).unwrap(),
            &bath,
        )
        .unwrap();
        let basis = pauli();
        let s = example_a(EnvelopeKind::RaisedCosine);
        let m = magnus_terms(&joint, &s, &basis, 256).unwrap();
        let sector = coupling_sector(&joint, &basis, &m.h0_bar).unwrap();
        assert!(sector.couplings["b"].iter().all(|x| x.abs() < 1e-6));
        let v = to_error_vector(&term, &basis).unwrap();
        let report = check_decoupling(&[v], &s, &basis, &CheckOptions::default()).unwrap();
        assert!(report.decoupled);
    }

    #[test]
    fn non_cyclic_schedule_is_rejected() {
        let seg = ControlSegment::new(
            vec![0.0, 1.0, 0.0],
            crate::control::Envelope::constant(1.0, 0.5).unwrap(),
        )
        .unwrap();
        let s = ControlSchedule::new(vec![seg]).unwrap();
        assert!(matches!(
            magnus_terms(&model(), &s, &pauli(), 32),
            Err(Error::NonCyclic { .. })
        ));
    }

    #[test]
    fn second_order_truncation_error_is_third_order() {
        let joint = model();
        let basis = pauli();
        let error = |scale: f64| {
            let s = example_a(EnvelopeKind::Constant);
            let s = ControlSchedule::new(
                s.segments()
                    .iter()
                    .map(|seg| {
                        let env = seg
                            .envelope
                            .with_duration(seg.duration() * scale)
                            .unwrap()
                            .scaled(1.0 / scale);
                        ControlSegment::new(seg.direction.clone(), env).unwrap()
                    })
                    .collect(),
            )
            .unwrap();
            let m = magnus_terms(&joint, &s, &basis, 4096).unwrap();
            let u = evolve_joint_final(&joint, Some(&s), &basis, s.cycle_time(), s.cycle_time() / 8192.0).unwrap();
            let uc = joint.on_system(&crate::control::control_unitary_at(&s, &basis, s.cycle_time()).unwrap());
            (m.propagator() - uc.adjoint() * u).norm()
        };
        let e1 = error(0.2);
        let e2 = error(0.1);
        assert!(e1 / e2 >= 8.0, "ratio {}", e1 / e2);
    }
}
