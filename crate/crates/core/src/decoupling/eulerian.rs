use std::collections::BTreeMap;

use crate::control::{propagate_unitary, ControlSchedule, ControlSegment, CYCLIC_TOL};
use crate::decoupling::{validate_eulerian, CayleyGraph, DecouplingGroup};
use crate::error::{Error, Result};
use crate::lie_algebra::GeneratorBasis;
use crate::linalg::phase_distance;

/// Relative tolerance on equal pulse durations.
const DURATION_TOL: f64 = 1e-12;

/// Control schedule that walks an Eulerian cycle, one pulse per edge.
#[derive(Debug, Clone)]
pub struct EulerianSchedule {
    pub cycle: Vec<String>,
    pub delta_t: f64,
    pub schedule: ControlSchedule,
    /// Phase-removed distance between `U_c` at each pulse boundary and the group element reached.
    pub boundary_deviations: Vec<f64>,
}

/// Flattens per-generator pulse designs along `cycle`.
///
/// Every design must realize its `μ(f_α)` up to phase and all designs must share one duration.
pub fn eulerian_schedule(
    group: &DecouplingGroup,
    graph: &CayleyGraph,
    start: &str,
    cycle: &[String],
    designs: &BTreeMap<String, Vec<ControlSegment>>,
    basis: &GeneratorBasis,
    steps_per_segment: usize,
) -> Result<EulerianSchedule> {
    let path = validate_eulerian(graph, start, cycle)?;
    let mut delta_t: Option<f64> = None;
    let mut pulses = BTreeMap::new();
    for (color, label) in graph.generating_set().iter().enumerate() {
        let segments = designs.get(label).ok_or_else(|| Error::MissingPulse(label.clone()))?;
        let pulse = ControlSchedule::new(segments.clone())?;
        let duration = pulse.cycle_time();
        match delta_t {
            None => delta_t = Some(duration),
            Some(d) if (d - duration).abs() > DURATION_TOL * d.max(duration) => {
                return Err(Error::InvalidSchedule(format!(
                    "pulse `{label}` lasts {duration} but the others last {d}; all pulses need one Δt"
                )));
            }
            Some(_) => {}
        }
        let realized = propagate_unitary(&pulse, basis, steps_per_segment)?;
        let target = group.rep(graph.generator_element(color));
        let deviation = phase_distance(realized.final_unitary(), target);
        if deviation > CYCLIC_TOL {
            return Err(Error::PulseMismatch {
                label: label.clone(),
                deviation,
            });
        }
        pulses.insert(label.clone(), pulse);
    }

    let mut segments = Vec::new();
    for label in cycle {
        segments.extend(pulses[label].segments().iter().cloned());
    }
    let schedule = ControlSchedule::new(segments)?;

    // U_c after l pulses should be μ(g_l) μ(g_0)† up to phase.
    let propagation = propagate_unitary(&schedule, basis, steps_per_segment)?;
    let per_pulse = schedule.segments().len() / cycle.len();
    let origin = group.rep(path[0]).adjoint();
    let mut boundary_deviations = Vec::with_capacity(cycle.len());
    for (l, &vertex) in path.iter().enumerate().skip(1) {
        let index = propagation.segment_bounds[l * per_pulse];
        let expected = group.rep(vertex) * &origin;
        let deviation = phase_distance(&propagation.unitaries[index], &expected);
        if deviation > CYCLIC_TOL {
            return Err(Error::PulseMismatch {
                label: format!("{} (boundary {l})", cycle[l - 1]),
                deviation,
            });
        }
        boundary_deviations.push(deviation);
    }
    Ok(EulerianSchedule {
        cycle: cycle.to_vec(),
        delta_t: delta_t.unwrap_or(0.0),
        schedule,
        boundary_deviations,
    })
}
