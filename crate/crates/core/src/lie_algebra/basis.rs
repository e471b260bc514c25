use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, cmatrix, kron, CMatrix};

/// The three generator families supported by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    /// σx, σy, σz on a qubit.
    Pauli,
    /// The eight Gell-Mann matrices on a qutrit.
    GellMann,
    /// The fifteen two-qubit Pauli products σa⊗1, 1⊗σb, σa⊗σb.
    PauliProduct,
}

impl BasisKind {
    pub const ALL: [BasisKind; 3] = [BasisKind::Pauli, BasisKind::GellMann, BasisKind::PauliProduct];

    /// System dimension `n` the family is defined for.
    pub fn system_dim(self) -> usize {
        match self {
            BasisKind::Pauli => 2,
            BasisKind::GellMann => 3,
            BasisKind::PauliProduct => 4,
        }
    }

    /// Short group tag used by the `tables` command (`su2`, `su3`, `su4`).
    pub fn group_tag(self) -> &'static str {
        match self {
            BasisKind::Pauli => "su2",
            BasisKind::GellMann => "su3",
            BasisKind::PauliProduct => "su4",
        }
    }

    pub fn from_group_tag(tag: &str) -> Option<Self> {
        BasisKind::ALL.into_iter().find(|k| k.group_tag() == tag)
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BasisKind::Pauli => "pauli",
            BasisKind::GellMann => "gell_mann",
            BasisKind::PauliProduct => "pauli_product",
        })
    }
}

/// An ordered, trace-orthogonal basis `λ_1 … λ_N` of traceless Hermitian
/// `n×n` matrices with `Tr(λ_i λ_j) = M δ_ij`.
///
/// Generator indices in the public API are zero-based (`generator(0)` is
/// `λ_1`); plane and direction labels that mirror printed tables (`e7`,
/// `L_{2,13}`) are one-based.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    kind: BasisKind,
    generators: Vec<CMatrix>,
    normalization: f64,
    labels: Vec<String>,
}

impl GeneratorBasis {
    /// Builds the basis of the given family, checking that `n` matches it.
    pub fn build(kind: BasisKind, n: usize) -> Result<Self> {
        let required = kind.system_dim();
        if n != required {
            return Err(Error::UnsupportedBasis { kind, n, required });
        }
        Ok(Self::new(kind))
    }

    pub fn new(kind: BasisKind) -> Self {
        match kind {
            BasisKind::Pauli => Self::pauli(),
            BasisKind::GellMann => Self::gell_mann(),
            BasisKind::PauliProduct => Self::pauli_product(),
        }
    }

    fn pauli() -> Self {
        Self {
            kind: BasisKind::Pauli,
            generators: vec![linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z()],
            normalization: 2.0,
            labels: vec!["σx".into(), "σy".into(), "σz".into()],
        }
    }

    fn gell_mann() -> Self {
        let o = (0.0, 0.0);
        let one = (1.0, 0.0);
        let m_one = (-1.0, 0.0);
        let m_i = (0.0, -1.0);
        let p_i = (0.0, 1.0);
        let s = 1.0 / 3f64.sqrt();
        let generators = vec![
            cmatrix(3, &[o, one, o, one, o, o, o, o, o]),
            cmatrix(3, &[o, m_i, o, p_i, o, o, o, o, o]),
            cmatrix(3, &[one, o, o, o, m_one, o, o, o, o]),
            cmatrix(3, &[o, o, one, o, o, o, one, o, o]),
            cmatrix(3, &[o, o, m_i, o, o, o, p_i, o, o]),
            cmatrix(3, &[o, o, o, o, o, one, o, one, o]),
            cmatrix(3, &[o, o, o, o, o, m_i, o, p_i, o]),
            cmatrix(3, &[(s, 0.), o, o, o, (s, 0.), o, o, o, (-2.0 * s, 0.)]),
        ];
        Self {
            kind: BasisKind::GellMann,
            generators,
            normalization: 2.0,
            labels: (1..=8).map(|i| format!("λ{i}")).collect(),
        }
    }

    fn pauli_product() -> Self {
        let id = linalg::identity(2);
        let sigma = [linalg::pauli_x(), linalg::pauli_y(), linalg::pauli_z()];
        let names = ["σx", "σy", "σz"];
        let mut generators = Vec::with_capacity(15);
        let mut labels = Vec::with_capacity(15);
        for (s, name) in sigma.iter().zip(names) {
            generators.push(kron(s, &id));
            labels.push(format!("{name}⊗1"));
        }
        for (s, name) in sigma.iter().zip(names) {
            generators.push(kron(&id, s));
            labels.push(format!("1⊗{name}"));
        }
        for (a, name_a) in sigma.iter().zip(names) {
            for (b, name_b) in sigma.iter().zip(names) {
                generators.push(kron(a, b));
                labels.push(format!("{name_a}⊗{name_b}"));
            }
        }
        Self {
            kind: BasisKind::PauliProduct,
            generators,
            normalization: 4.0,
            labels,
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// System dimension `n`.
    pub fn system_dim(&self) -> usize {
        self.kind.system_dim()
    }

    /// Adjoint dimension `N = n² − 1`.
    pub fn adjoint_dim(&self) -> usize {
        self.generators.len()
    }

    /// Trace normalization `M`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// Zero-based access: `generator(0)` is `λ_1`.
    pub fn generator(&self, index: usize) -> &CMatrix {
        &self.generators[index]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Unit direction `e_l` for the one-based generator label `l`.
    pub fn unit_direction(&self, label: usize) -> Result<Vec<f64>> {
        let dim = self.adjoint_dim();
        if label == 0 || label > dim {
            return Err(Error::InvalidInput(format!(
                "generator label {label} outside 1..={dim} for {} basis",
                self.kind
            )));
        }
        let mut e = vec![0.0; dim];
        e[label - 1] = 1.0;
        Ok(e)
    }

    /// `Σ_l c_l λ_l`.
    pub fn combination(&self, coefficients: &[f64]) -> Result<CMatrix> {
        if coefficients.len() != self.adjoint_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.adjoint_dim(),
                found: coefficients.len(),
            });
        }
        let n = self.system_dim();
        let mut out = CMatrix::zeros(n, n);
        for (coef, g) in coefficients.iter().zip(&self.generators) {
            if *coef != 0.0 {
                out += g * c(*coef, 0.0);
            }
        }
        Ok(out)
    }

    /// Gram matrix `G_ij = Re Tr(λ_i λ_j)`.
    pub fn gram(&self) -> DMatrix<f64> {
        let dim = self.adjoint_dim();
        DMatrix::from_fn(dim, dim, |i, j| {
            linalg::trace_product(&self.generators[i], &self.generators[j]).re
        })
    }
}
