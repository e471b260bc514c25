//! Decoupling verdicts from averaged error vectors, plus the bang-bang and
//! Eulerian reference constructions.

mod average;
mod cayley;
mod eulerian;
mod group;
mod robustness;

pub use average::{
    average_error_vector, average_error_vector_with, check_decoupling, AverageEntry, AverageReport, CheckOptions,
    Quadrature, DEFAULT_TOLERANCE,
};
pub use cayley::{build_cayley_graph, eulerian_cycle, validate_eulerian, CayleyEdge, CayleyGraph};
pub use eulerian::{eulerian_schedule, EulerianSchedule};
pub use group::{group_average_vector, symmetrize, DecouplingGroup, GROUP_TOL};
pub use robustness::robustness_distance;
