use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lie_algebra::{adjoint_rotation, GeneratorBasis};
use crate::linalg::{
    c, expm_hermitian, identity, matrix_from_json, matrix_to_json, pauli_x, pauli_z, phase_distance, unitarity_error,
    CMatrix, JsonMatrix, RVector,
};

/// Tolerance for unitarity and the projective homomorphism check.
pub const GROUP_TOL: f64 = 1e-10;

/// Finite group given by its multiplication table with a projective unitary representation.
#[derive(Debug, Clone)]
pub struct DecouplingGroup {
    elements: Vec<String>,
    /// `table[i][j]` is the index of `g_i g_j`.
    table: Vec<Vec<usize>>,
    rep: Vec<CMatrix>,
    identity: usize,
}

impl DecouplingGroup {
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>, rep: Vec<CMatrix>) -> Result<Self> {
        let k = elements.len();
        if k == 0 {
            return Err(Error::InvalidGroup("group has no elements".into()));
        }
        for (i, a) in elements.iter().enumerate() {
            if elements[..i].contains(a) {
                return Err(Error::InvalidGroup(format!("duplicate element `{a}`")));
            }
        }
        if table.len() != k || table.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidGroup(format!("multiplication table must be {k}×{k}")));
        }
        if table.iter().flatten().any(|&x| x >= k) {
            return Err(Error::InvalidGroup("table entry outside the element set".into()));
        }
        if rep.len() != k {
            return Err(Error::InvalidGroup(format!(
                "representation has {} matrices for {k} elements",
                rep.len()
            )));
        }
        let identity = (0..k)
            .find(|&e| (0..k).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        for a in 0..k {
            if !(0..k).any(|b| table[a][b] == identity && table[b][a] == identity) {
                return Err(Error::InvalidGroup(format!("`{}` has no inverse", elements[a])));
            }
        }
        for a in 0..k {
            for b in 0..k {
                for d in 0..k {
                    if table[table[a][b]][d] != table[a][table[b][d]] {
                        return Err(Error::InvalidGroup(format!(
                            "table is not associative at ({}, {}, {})",
                            elements[a], elements[b], elements[d]
                        )));
                    }
                }
            }
        }
        let n = rep[0].nrows();
        for (label, u) in elements.iter().zip(&rep) {
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: u.nrows(),
                });
            }
            let deviation = unitarity_error(u);
            if deviation > GROUP_TOL {
                return Err(Error::InvalidGroup(format!(
                    "representation of `{label}` is not unitary (deviation {deviation:.3e})"
                )));
            }
        }
        for a in 0..k {
            for b in 0..k {
                let deviation = phase_distance(&(&rep[a] * &rep[b]), &rep[table[a][b]]);
                if deviation > GROUP_TOL {
                    return Err(Error::InvalidGroup(format!(
                        "μ({})μ({}) differs from a phase times μ({}) by {deviation:.3e}",
                        elements[a], elements[b], elements[table[a][b]]
                    )));
                }
            }
        }
        Ok(Self {
            elements,
            table,
            rep,
            identity,
        })
    }

    /// `Z₂ = {e, g}` with the parity kick `μ(g) = σx`.
    pub fn z2() -> Self {
        Self::new(
            vec!["e".into(), "g".into()],
            vec![vec![0, 1], vec![1, 0]],
            vec![identity(2), pauli_x()],
        )
        .expect("Z2 is a valid group")
    }

    /// `C₄` generated by `μ(g) = exp(−iπσx/4)`.
    pub fn c4() -> Self {
        let g = expm_hermitian(&pauli_x(), std::f64::consts::FRAC_PI_4);
        let mut rep = vec![identity(2)];
        for i in 1..4 {
            rep.push(&g * &rep[i - 1]);
        }
        let table = (0..4).map(|i| (0..4).map(|j| (i + j) % 4).collect()).collect();
        Self::new(vec!["e".into(), "g".into(), "g2".into(), "g3".into()], table, rep).expect("C4 is a valid group")
    }

    /// Klein four-group `{e, X, Z, XZ}` represented by Pauli operators.
    pub fn klein_pauli() -> Self {
        let table = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        let rep = vec![identity(2), pauli_x(), pauli_z(), pauli_x() * pauli_z()];
        Self::new(vec!["e".into(), "X".into(), "Z".into(), "XZ".into()], table, rep)
            .expect("Klein group is a valid group")
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn system_dim(&self) -> usize {
        self.rep[0].nrows()
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| Error::LabelMismatch(format!("`{label}` is not a group element")))
    }

    /// Index of `g_a g_b`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn rep(&self, index: usize) -> &CMatrix {
        &self.rep[index]
    }

    pub fn rep_of(&self, label: &str) -> Result<&CMatrix> {
        Ok(&self.rep[self.index_of(label)?])
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.system_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.system_dim(),
                found: n,
            });
        }
        Ok(())
    }
}

/// `Π_G(S) = (1/|G|) Σ μ(g)† S μ(g)`.
pub fn symmetrize(group: &DecouplingGroup, s: &CMatrix) -> Result<CMatrix> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch {
            expected: group.system_dim(),
            found: s.nrows(),
        });
    }
    group.check_dim(s.nrows())?;
    let mut acc = CMatrix::zeros(s.nrows(), s.nrows());
    for u in &group.rep {
        acc += u.adjoint() * s * u;
    }
    Ok(acc * c(1.0 / group.order() as f64, 0.0))
}

/// Bang-bang average of an error vector, `(1/|G|) Σ R[μ(g)]ᵀ s`.
pub fn group_average_vector(group: &DecouplingGroup, basis: &GeneratorBasis, s: &RVector) -> Result<RVector> {
    group.check_dim(basis.system_dim())?;
    if s.len() != basis.adjoint_dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.adjoint_dim(),
            found: s.len(),
        });
    }
    let mut acc = RVector::zeros(s.len());
    for u in &group.rep {
        acc += adjoint_rotation(basis, u)?.transpose() * s;
    }
    Ok(acc / group.order() as f64)
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    elements: Vec<String>,
    table: Vec<Vec<String>>,
    rep: BTreeMap<String, JsonMatrix>,
}

impl TryFrom<GroupRepr> for DecouplingGroup {
    type Error = Error;

    fn try_from(r: GroupRepr) -> Result<Self> {
        let find = |label: &str| {
            r.elements
                .iter()
                .position(|e| e == label)
                .ok_or_else(|| Error::InvalidGroup(format!("table refers to unknown element `{label}`")))
        };
        let table = r
            .table
            .iter()
            .map(|row| row.iter().map(|l| find(l)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let rep = r
            .elements
            .iter()
            .map(|e| {
                r.rep
                    .get(e)
                    .ok_or_else(|| Error::InvalidGroup(format!("no representation matrix for `{e}`")))
                    .and_then(matrix_from_json)
            })
            .collect::<Result<Vec<_>>>()?;
        DecouplingGroup::new(r.elements, table, rep)
    }
}

impl Serialize for DecouplingGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr {
            elements: self.elements.clone(),
            table: self
                .table
                .iter()
                .map(|row| row.iter().map(|&i| self.elements[i].clone()).collect())
                .collect(),
            rep: self
                .elements
                .iter()
                .cloned()
                .zip(self.rep.iter().map(matrix_to_json))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DecouplingGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GroupRepr::deserialize(deserializer)?;
        DecouplingGroup::try_from(repr).map_err(serde::de::Error::custom)
    }
}
