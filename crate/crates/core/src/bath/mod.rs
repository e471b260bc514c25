//! Explicit finite baths: exact joint evolution, average Hamiltonians and
//! stroboscopic coherence.

mod coherence;
mod evolve;
mod magnus;
mod model;

pub use coherence::{coherence_comparison, coherence_curve, CoherenceComparison, CoherenceCurve, CoherenceRequest};
pub use evolve::{evolve_joint, evolve_joint_final, interaction_picture_hamiltonian, JointEvolution, MAX_STEP_PRODUCT};
pub use magnus::{coupling_sector, magnus_terms, magnus_terms_oriented, CouplingSector, MagnusTerms, Orientation};
pub use model::{assemble_joint, BathModel, JointModel, MAX_BATH_DIM, MIN_BATH_DIM};
