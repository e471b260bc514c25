//! SU(n) generator bases, structure constants and the adjoint map into SO(N).

mod adjoint;
mod appendix;
mod basis;
mod structure;

pub use adjoint::{adjoint_generator, adjoint_rotation, AdjointGenerator, Plane, PLANE_THRESHOLD, UNITARY_TOL};
pub use appendix::{printed_planes, reconcile_appendix, AlternatePrinting, PlaneTriple, ReconciliationEntry};
pub use basis::{BasisKind, GeneratorBasis};
pub use structure::{structure_constants, StructureTensor};
