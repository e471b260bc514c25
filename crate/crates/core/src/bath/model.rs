use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::error_model::{DecomposedHamiltonian, HERMITIAN_TOL};
use crate::linalg::{ensure_hermitian, identity, kron, matrix_from_json, matrix_to_json, max_abs, CMatrix, JsonMatrix};

pub const MIN_BATH_DIM: usize = 2;
pub const MAX_BATH_DIM: usize = 8;

fn check_bath_operator(label: &str, m: &CMatrix, dim: usize) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.nrows(),
        });
    }
    ensure_hermitian(m, HERMITIAN_TOL * max_abs(m).max(1.0)).map_err(|e| match e {
        Error::NotHermitian { deviation } => Error::InvalidInput(format!(
            "bath operator `{label}` is not Hermitian (deviation {deviation:.3e})"
        )),
        other => other,
    })
}

/// Finite bath: `H_B` and the operators `B_γ` that couplings refer to by label.
#[derive(Debug, Clone, PartialEq)]
pub struct BathModel {
    dim: usize,
    hamiltonian: CMatrix,
    operators: BTreeMap<String, CMatrix>,
}

impl BathModel {
    pub fn new(hamiltonian: CMatrix, operators: BTreeMap<String, CMatrix>) -> Result<Self> {
        let dim = hamiltonian.nrows();
        if !(MIN_BATH_DIM..=MAX_BATH_DIM).contains(&dim) {
            return Err(Error::InvalidInput(format!(
                "bath dimension must be between {MIN_BATH_DIM} and {MAX_BATH_DIM}, got {dim}"
            )));
        }
        check_bath_operator("H_B", &hamiltonian, dim)?;
        for (label, op) in &operators {
            check_bath_operator(label, op, dim)?;
        }
        Ok(Self {
            dim,
            hamiltonian,
            operators,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &CMatrix {
        &self.hamiltonian
    }

    pub fn operators(&self) -> &BTreeMap<String, CMatrix> {
        &self.operators
    }

    pub fn operator(&self, label: &str) -> Result<&CMatrix> {
        self.operators
            .get(label)
            .ok_or_else(|| Error::UnresolvedBathLabel(label.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct BathRepr {
    #[serde(rename = "d_B")]
    dim: usize,
    #[serde(rename = "H_B")]
    hamiltonian: JsonMatrix,
    #[serde(default)]
    operators: BTreeMap<String, JsonMatrix>,
}

impl Serialize for BathModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BathRepr {
            dim: self.dim,
            hamiltonian: matrix_to_json(&self.hamiltonian),
            operators: self
                .operators
                .iter()
                .map(|(k, v)| (k.clone(), matrix_to_json(v)))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl TryFrom<BathRepr> for BathModel {
    type Error = Error;

    fn try_from(r: BathRepr) -> Result<Self> {
        let hamiltonian = matrix_from_json(&r.hamiltonian)?;
        if hamiltonian.nrows() != r.dim {
            return Err(Error::DimensionMismatch {
                expected: r.dim,
                found: hamiltonian.nrows(),
            });
        }
        let operators = r
            .operators
            .iter()
            .map(|(k, v)| Ok((k.clone(), matrix_from_json(v)?)))
            .collect::<Result<_>>()?;
        BathModel::new(hamiltonian, operators)
    }
}

impl<'de> Deserialize<'de> for BathModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        BathModel::try_from(BathRepr::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// System ⊗ bath model with the assembled `H0` on the `n · d_B` joint space.
#[derive(Debug, Clone)]
pub struct JointModel {
    pub decomposed: DecomposedHamiltonian,
    pub bath: BathModel,
    pub h0: CMatrix,
}

impl JointModel {
    pub fn system_dim(&self) -> usize {
        self.decomposed.system_dim()
    }

    pub fn bath_dim(&self) -> usize {
        self.bath.dim()
    }

    pub fn dim(&self) -> usize {
        self.system_dim() * self.bath_dim()
    }

    /// Extends a system operator to the joint space, `X ⊗ 1_B`.
    pub fn on_system(&self, x: &CMatrix) -> CMatrix {
        kron(x, &identity(self.bath_dim()))
    }
}

/// `H0 = H_S ⊗ 1 + 1 ⊗ H_B + Σ S_γ ⊗ B_γ` with every identity part restored.
pub fn assemble_joint(decomposed: &DecomposedHamiltonian, bath: &BathModel) -> Result<JointModel> {
    let n = decomposed.system_dim();
    let d = bath.dim();
    let mut h0 = kron(&decomposed.original_system(), &identity(d)) + kron(&identity(n), bath.hamiltonian());
    for (i, term) in decomposed.couplings.iter().enumerate() {
        let b = bath.operator(&term.bath_label)?;
        h0 += kron(&decomposed.original_coupling(i), b);
    }
    ensure_hermitian(&h0, HERMITIAN_TOL * max_abs(&h0).max(1.0))?;
    Ok(JointModel {
        decomposed: decomposed.clone(),
        bath: bath.clone(),
        h0,
    })
}
