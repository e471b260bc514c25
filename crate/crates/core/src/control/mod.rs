//! Bounded control schedules, the control propagator and toggling-frame trajectories.

mod design;
mod envelope;
mod propagate;
mod schedule;
mod trajectory;

pub use design::{design_half_cycle_profile, plane_rate};
pub use envelope::{Envelope, EnvelopeKind, EnvelopeShape};
pub use propagate::{control_unitary_at, cyclicity_deviation, propagate_unitary, ControlPropagation, CYCLIC_TOL};
pub use schedule::{ControlSchedule, ControlSegment, TimeGrid, DEFAULT_STEPS, MIN_STEPS};
pub use trajectory::{trajectory, trajectory_with, Stepper, Trajectory};
