use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_algebra::{structure_constants, GeneratorBasis, StructureTensor};
use crate::linalg::{ensure_unitary, trace_product, CMatrix, RMatrix, RVector};

/// Magnitude below which a trajectory-generator entry is treated as zero.
pub const PLANE_THRESHOLD: f64 = 1e-12;

/// One coordinate plane `(μ, ν)` of an adjoint generator, `μ < ν`, one-based.
///
/// `coefficient` is the entry `F_μν` of the real trajectory generator, so that
/// `F = Σ coefficient · (e_μν − e_νμ)`. In terms of the Hermitian natural
/// generators `[L_μν]_ij = −i(δ_μi δ_νj − δ_μj δ_νi)` the same plane carries
/// the coefficient `−F_μν` (see [`Plane::natural_coefficient`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plane {
    pub mu: usize,
    pub nu: usize,
    pub coefficient: f64,
}

impl Plane {
    /// Coefficient of `L_μν` in `L = Σ X_μν L_μν`, where `F = −i L`.
    pub fn natural_coefficient(&self) -> f64 {
        -self.coefficient
    }
}

/// Real antisymmetric generator `F` of error-vector trajectories for a control
/// Hamiltonian `a(t) Σ_l c_l λ_l`: `ds/dt = a(t) F s`.
///
/// For a pure direction `l`, `F_ij = f_lij`, equivalently `F = −i L_l` with
/// `[L_l]_ij = i f_lij`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointGenerator {
    direction: Vec<f64>,
    matrix: RMatrix,
    planes: Vec<Plane>,
}

impl AdjointGenerator {
    pub fn from_structure(f: &StructureTensor, direction: &[f64]) -> Result<Self> {
        let dim = f.dim();
        if direction.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: direction.len(),
            });
        }
        if direction.iter().all(|c| *c == 0.0) || direction.iter().any(|c| !c.is_finite()) {
            return Err(Error::ZeroDirection);
        }
        let mut matrix = RMatrix::zeros(dim, dim);
        let mut planes = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let value: f64 = direction.iter().enumerate().map(|(l, c)| c * f.get(l, i, j)).sum();
                if value.abs() > PLANE_THRESHOLD {
                    matrix[(i, j)] = value;
                    matrix[(j, i)] = -value;
                    planes.push(Plane {
                        mu: i + 1,
                        nu: j + 1,
                        coefficient: value,
                    });
                }
            }
        }
        Ok(Self {
            direction: direction.to_vec(),
            matrix,
            planes,
        })
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    /// The matrix `F`.
    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    /// `Σ coefficient · (e_μν − e_νμ)` rebuilt from the plane list.
    pub fn reconstruct(&self) -> RMatrix {
        let dim = self.matrix.nrows();
        let mut out = RMatrix::zeros(dim, dim);
        for p in &self.planes {
            out[(p.mu - 1, p.nu - 1)] += p.coefficient;
            out[(p.nu - 1, p.mu - 1)] -= p.coefficient;
        }
        out
    }

    /// Instantaneous angular speed `|F s| / |s|` of `s` under unit amplitude.
    ///
    /// For a vector lying in planes that all share one coefficient magnitude
    /// this is exactly the rotation rate of those planes.
    pub fn angular_speed(&self, s: &RVector) -> f64 {
        let norm = s.norm();
        if norm == 0.0 {
            return 0.0;
        }
        (&self.matrix * s).norm() / norm
    }
}

/// Adjoint generator for `Σ_l c_l λ_l` in the given basis.
pub fn adjoint_generator(basis: &GeneratorBasis, direction: &[f64]) -> Result<AdjointGenerator> {
    AdjointGenerator::from_structure(&structure_constants(basis), direction)
}

/// Tolerance on `U†U = 1` accepted by [`adjoint_rotation`].
pub const UNITARY_TOL: f64 = 1e-10;

/// The rotation `R[U]` defined by `U† λ_i U = Σ_j R_ij λ_j`, computed as
/// `R_ij = Tr(λ_j U† λ_i U) / M`.
pub fn adjoint_rotation(basis: &GeneratorBasis, u: &CMatrix) -> Result<RMatrix> {
    let n = basis.system_dim();
    if u.nrows() != n || u.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.nrows(),
        });
    }
    ensure_unitary(u, UNITARY_TOL)?;
    Ok(adjoint_rotation_unchecked(basis, u))
}

fn adjoint_rotation_unchecked(basis: &GeneratorBasis, u: &CMatrix) -> RMatrix {
    let dim = basis.adjoint_dim();
    let m = basis.normalization();
    let u_dag = u.adjoint();
    let conjugated: Vec<CMatrix> = basis.generators().iter().map(|g| &u_dag * g * u).collect();
    RMatrix::from_fn(dim, dim, |i, j| {
        trace_product(basis.generator(j), &conjugated[i]).re / m
    })
}
