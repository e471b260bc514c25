//! Traceless decomposition of system and system–bath Hamiltonians and the
//! map between traceless system operators and error vectors.
//!
//! Storage convention for the identity part of `H_S`: `e0 = Tr(H_S) / n`, so
//! that `H_S = e0 · 1 + H_S'` with `H_S'` traceless. `e0` only contributes a
//! global phase. The identity part `Tr(S_γ)/n · 1` of each coupling operator
//! is kept as a bath shift: it turns into a bath-only term
//! `1 ⊗ (Tr(S_γ)/n) B_γ` and never rotates under system controls.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie_algebra::{BasisKind, GeneratorBasis};
use crate::linalg::{self, c, cmatrix, ensure_hermitian, kron, trace, trace_product, CMatrix, RVector};

/// Tolerance for Hermiticity of user supplied operators, relative to their size.
pub const HERMITIAN_TOL: f64 = 1e-14;
/// Tolerance on `|Tr S|` accepted by [`to_error_vector`].
pub const TRACELESS_TOL: f64 = 1e-12;

fn check_hermitian(m: &CMatrix) -> Result<()> {
    ensure_hermitian(m, HERMITIAN_TOL * linalg::max_abs(m).max(1.0))
}

/// One system–bath coupling `S_γ ⊗ B_γ`; the bath side is only a label here.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTerm {
    pub gamma: String,
    pub operator: CMatrix,
    pub bath_label: String,
}

impl CouplingTerm {
    pub fn new(gamma: impl Into<String>, operator: CMatrix, bath_label: impl Into<String>) -> Result<Self> {
        if !operator.is_square() {
            return Err(Error::DimensionMismatch {
                expected: operator.nrows(),
                found: operator.ncols(),
            });
        }
        check_hermitian(&operator)?;
        Ok(Self {
            gamma: gamma.into(),
            operator,
            bath_label: bath_label.into(),
        })
    }
}

/// Real coefficient vector `s` of a traceless operator `S = Σ_i s_i λ_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorVector {
    pub gamma: String,
    pub components: Vec<f64>,
    pub basis: BasisKind,
}

impl ErrorVector {
    pub fn new(gamma: impl Into<String>, components: Vec<f64>, basis: BasisKind) -> Result<Self> {
        let expected = basis.system_dim().pow(2) - 1;
        if components.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: components.len(),
            });
        }
        Ok(Self {
            gamma: gamma.into(),
            components,
            basis,
        })
    }

    /// `scale · e_l` for a one-based generator label.
    pub fn unit(gamma: impl Into<String>, basis: BasisKind, label: usize, scale: f64) -> Result<Self> {
        let mut e = GeneratorBasis::new(basis).unit_direction(label)?;
        e.iter_mut().for_each(|x| *x *= scale);
        Self::new(gamma, e, basis)
    }

    pub fn as_vector(&self) -> RVector {
        RVector::from_column_slice(&self.components)
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Identity part of one coupling, absorbed into the bath Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct BathShift {
    pub gamma: String,
    pub bath_label: String,
    /// `Tr(S_γ) / n`.
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedHamiltonian {
    /// `Tr(H_S) / n`.
    pub e0: f64,
    /// Traceless part of `H_S`.
    pub system: CMatrix,
    /// Couplings with traceless system operators.
    pub couplings: Vec<CouplingTerm>,
    pub bath_shifts: Vec<BathShift>,
}

impl DecomposedHamiltonian {
    pub fn system_dim(&self) -> usize {
        self.system.nrows()
    }

    /// `e0 · 1 + H_S'`.
    pub fn original_system(&self) -> CMatrix {
        &self.system + linalg::identity(self.system_dim()) * c(self.e0, 0.0)
    }

    /// `S_γ' + shift_γ · 1` for the coupling at `index`.
    pub fn original_coupling(&self, index: usize) -> CMatrix {
        let n = self.system_dim();
        &self.couplings[index].operator + linalg::identity(n) * c(self.bath_shifts[index].shift, 0.0)
    }
}

/// Splits `m` into `(m − Tr(m)/n · 1, Tr(m)/n)`.
pub fn traceless_part(m: &CMatrix) -> (CMatrix, f64) {
    let n = m.nrows();
    let shift = trace(m).re / n as f64;
    (m - linalg::identity(n) * c(shift, 0.0), shift)
}

/// Removes identity parts from `H_S` and every `S_γ`.
pub fn decompose(h_s: &CMatrix, couplings: &[CouplingTerm]) -> Result<DecomposedHamiltonian> {
    if !h_s.is_square() {
        return Err(Error::DimensionMismatch {
            expected: h_s.nrows(),
            found: h_s.ncols(),
        });
    }
    check_hermitian(h_s)?;
    let n = h_s.nrows();
    let (system, e0) = traceless_part(h_s);
    let mut out_couplings = Vec::with_capacity(couplings.len());
    let mut bath_shifts = Vec::with_capacity(couplings.len());
    for term in couplings {
        if term.operator.nrows() != n || term.operator.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: term.operator.nrows(),
            });
        }
        check_hermitian(&term.operator)?;
        let (operator, shift) = traceless_part(&term.operator);
        out_couplings.push(CouplingTerm {
            gamma: term.gamma.clone(),
            operator,
            bath_label: term.bath_label.clone(),
        });
        bath_shifts.push(BathShift {
            gamma: term.gamma.clone(),
            bath_label: term.bath_label.clone(),
            shift,
        });
    }
    Ok(DecomposedHamiltonian {
        e0,
        system,
        couplings: out_couplings,
        bath_shifts,
    })
}

/// `s_i = Tr(λ_i S) / M` for a traceless `S`.
pub fn to_error_vector(term: &CouplingTerm, basis: &GeneratorBasis) -> Result<ErrorVector> {
    let components = operator_components(&term.operator, basis)?;
    ErrorVector::new(term.gamma.clone(), components, basis.kind())
}

/// Error-vector components of a traceless Hermitian operator.
pub fn operator_components(s: &CMatrix, basis: &GeneratorBasis) -> Result<Vec<f64>> {
    let n = basis.system_dim();
    if s.nrows() != n || s.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: s.nrows(),
        });
    }
    check_hermitian(s)?;
    let tr = trace(s).norm();
    if tr > TRACELESS_TOL {
        return Err(Error::NotTraceless { trace: tr });
    }
    let m = basis.normalization();
    Ok(basis.generators().iter().map(|g| trace_product(g, s).re / m).collect())
}

/// `Σ_i s_i λ_i`.
pub fn from_error_vector(vec: &ErrorVector, basis: &GeneratorBasis) -> Result<CMatrix> {
    if vec.basis != basis.kind() {
        return Err(Error::BasisMismatch {
            expected: basis.kind(),
            found: vec.basis,
        });
    }
    basis.combination(&vec.components)
}

/// Named system operators accepted in scenario files.
pub const OPERATOR_PRESETS: &[&str] = &[
    "sigma_x",
    "sigma_y",
    "sigma_z",
    "ket1_projector",
    "ket12_diff",
    "ket13_sym",
    "ket23_sym",
    "sigma_z_tensor_id",
    "id_tensor_sigma_z",
    "sigma_x_tensor_sigma_x",
    "sigma_y_tensor_sigma_y",
    "sigma_z_tensor_sigma_z",
];

/// Levels are one-based in preset names: `ket13_sym = |1⟩⟨3| + |3⟩⟨1|`.
pub fn operator_preset(name: &str) -> Result<CMatrix> {
    let o = (0.0, 0.0);
    let one = (1.0, 0.0);
    let id2 = linalg::identity(2);
    Ok(match name {
        "sigma_x" => linalg::pauli_x(),
        "sigma_y" => linalg::pauli_y(),
        "sigma_z" => linalg::pauli_z(),
        "ket1_projector" => cmatrix(2, &[one, o, o, o]),
        "ket12_diff" => cmatrix(3, &[one, o, o, o, (-1.0, 0.0), o, o, o, o]),
        "ket13_sym" => cmatrix(3, &[o, o, one, o, o, o, one, o, o]),
        "ket23_sym" => cmatrix(3, &[o, o, o, o, o, one, o, one, o]),
        "sigma_z_tensor_id" => kron(&linalg::pauli_z(), &id2),
        "id_tensor_sigma_z" => kron(&id2, &linalg::pauli_z()),
        "sigma_x_tensor_sigma_x" => kron(&linalg::pauli_x(), &linalg::pauli_x()),
        "sigma_y_tensor_sigma_y" => kron(&linalg::pauli_y(), &linalg::pauli_y()),
        "sigma_z_tensor_sigma_z" => kron(&linalg::pauli_z(), &linalg::pauli_z()),
        other => return Err(Error::UnknownOperator(other.to_string())),
    })
}
