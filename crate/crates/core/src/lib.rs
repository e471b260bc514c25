//! Continuous dynamical decoupling with bounded controls.
//!
//! A traceless system coupling operator `S` is represented by its coefficient
//! vector in a fixed basis of SU(n) generators (an *error vector*). A control
//! Hamiltonian `a(t) c·λ` acts on error vectors as a rotation in SO(n²−1), and
//! the system decouples from its bath to first order when the time average of
//! every rotated error vector over one control cycle vanishes.
//!
//! The crate is organised bottom-up:
//!
//! - [`lie_algebra`]: generator bases, structure constants, the adjoint map
//!   `U ↦ R[U]` and adjoint rotation generators with their plane decomposition.
//! - [`error_model`]: traceless decomposition of system and system–bath
//!   Hamiltonians and the operator ↔ error-vector maps.
//! - [`control`]: bounded envelopes, control schedules, control propagators and
//!   error-vector trajectories.
//! - [`decoupling`]: time-averaged error vectors, bang-bang symmetrization,
//!   Cayley graphs, Eulerian cycles and robustness distances.
//! - [`bath`]: explicit small baths, exact joint evolution, first and second
//!   order average Hamiltonians and coherence curves.
//! - [`scenario`]: the JSON scenario format, built-in presets and the runner
//!   behind the `cdd` command line tool.

pub mod bath;
pub mod control;
pub mod decoupling;
pub mod error;
pub mod error_model;
pub mod lie_algebra;
pub mod linalg;
pub mod scenario;

pub use error::{Error, Result};
pub use linalg::{CMatrix, RMatrix, RVector};
