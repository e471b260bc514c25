//! Small dense complex and real matrix helpers shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;
pub type RVector = DVector<f64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from row-major `(re, im)` pairs.
pub fn cmatrix(n: usize, entries: &[(f64, f64)]) -> CMatrix {
    assert_eq!(entries.len(), n * n);
    CMatrix::from_row_iterator(n, n, entries.iter().map(|&(re, im)| c(re, im)))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn pauli_x() -> CMatrix {
    cmatrix(2, &[(0., 0.), (1., 0.), (1., 0.), (0., 0.)])
}

pub fn pauli_y() -> CMatrix {
    cmatrix(2, &[(0., 0.), (0., -1.), (0., 1.), (0., 0.)])
}

pub fn pauli_z() -> CMatrix {
    cmatrix(2, &[(1., 0.), (0., 0.), (0., 0.), (-1., 0.)])
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise deviation of `m` from `m†`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(m - m.adjoint()))
}

pub fn ensure_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    let deviation = hermiticity_error(m);
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Frobenius norm of `U†U − 1`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    (u.adjoint() * u - identity(u.nrows())).norm()
}

pub fn ensure_unitary(u: &CMatrix, tol: f64) -> Result<()> {
    let deviation = unitarity_error(u);
    if deviation > tol {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// Frobenius distance between `u` and `v` after removing the best global phase,
/// `min_φ ‖u − e^{iφ} v‖`.
pub fn phase_distance(u: &CMatrix, v: &CMatrix) -> f64 {
    let overlap = trace_product(&v.adjoint(), u);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    (u - v * phase).norm()
}

/// Spectral norm of a Hermitian matrix.
pub fn hermitian_norm(h: &CMatrix) -> f64 {
    SymmetricEigen::new(h.clone())
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, e| acc.max(e.abs()))
}

/// Eigendecomposition of a Hermitian matrix, cached for repeated exponentials
/// `exp(−i θ H)` with varying `θ`.
#[derive(Debug, Clone)]
pub struct HermitianExp {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl HermitianExp {
    pub fn new(h: &CMatrix) -> Self {
        let hermitian = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(hermitian);
        Self {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            eigenvectors: eig.eigenvectors,
        }
    }

    /// `exp(−i θ H)`.
    pub fn propagator(&self, theta: f64) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &e) in self.eigenvalues.iter().enumerate() {
            let phase = Complex64::from_polar(1.0, -theta * e);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= phase;
            }
        }
        scaled * v.adjoint()
    }
}

/// `exp(−i θ H)` for Hermitian `H`.
pub fn expm_hermitian(h: &CMatrix, theta: f64) -> CMatrix {
    HermitianExp::new(h).propagator(theta)
}

/// `exp(θ F)` for a real matrix; orthogonal when `F` is antisymmetric.
pub fn expm_real(f: &RMatrix, theta: f64) -> RMatrix {
    (f * theta).exp()
}

/// Partial trace over the second tensor factor of a `(d_a·d_b)`-dimensional operator.
pub fn partial_trace_second(m: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d_a, d_a);
    for i in 0..d_a {
        for j in 0..d_a {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d_b {
                acc += m[(i * d_b + k, j * d_b + k)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Partial trace over the first tensor factor.
pub fn partial_trace_first(m: &CMatrix, d_a: usize, d_b: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d_b, d_b);
    for i in 0..d_b {
        for j in 0..d_b {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d_a {
                acc += m[(k * d_b + i, k * d_b + j)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Matrix entry in JSON: a bare real or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonEntry {
    Real(f64),
    Complex([f64; 2]),
}

impl JsonEntry {
    fn value(self) -> Complex64 {
        match self {
            JsonEntry::Real(re) => c(re, 0.0),
            JsonEntry::Complex([re, im]) => c(re, im),
        }
    }
}

/// Row-major JSON matrix.
pub type JsonMatrix = Vec<Vec<JsonEntry>>;

pub fn matrix_from_json(rows: &JsonMatrix) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!(
            "matrix must be square and non-empty, got {n} rows of lengths {:?}",
            rows.iter().map(Vec::len).collect::<Vec<_>>()
        )));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j].value()))
}

pub fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| JsonEntry::Complex([m[(i, j)].re, m[(i, j)].im]))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_exponential_closed_form() {
        // exp(−iθσy) = cos θ − i sin θ σy
        let theta = 0.37;
        let u = expm_hermitian(&pauli_y(), theta);
        let expected = identity(2) * c(theta.cos(), 0.0) - pauli_y() * (I * theta.sin());
        assert!(max_abs(&(u - expected)) < 1e-14);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let u = expm_hermitian(&pauli_x(), 0.9);
        let v = &u * Complex64::from_polar(1.0, 2.1);
        assert!(phase_distance(&u, &v) < 1e-14);
        assert!(phase_distance(&u, &identity(2)) > 0.1);
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = pauli_z() + identity(2);
        let b = pauli_x() + identity(2) * c(2.0, 0.0);
        let reduced = partial_trace_second(&kron(&a, &b), 2, 2);
        assert!(max_abs(&(reduced - &a * trace(&b))) < 1e-14);
        let other = partial_trace_first(&kron(&a, &b), 2, 2);
        assert!(max_abs(&(other - b * trace(&a))) < 1e-14);
    }

    #[test]
    fn json_matrix_accepts_reals_and_pairs() {
        let rows: JsonMatrix = serde_json::from_str("[[0, [0, -1]], [[0, 1], 0]]").unwrap();
        assert_eq!(matrix_from_json(&rows).unwrap(), pauli_y());
        assert_eq!(matrix_from_json(&matrix_to_json(&pauli_y())).unwrap(), pauli_y());
        let ragged: JsonMatrix = serde_json::from_str("[[1, 0], [0]]").unwrap();
        assert!(matrix_from_json(&ragged).is_err());
    }

    #[test]
    fn hermitian_norm_of_pauli_sum() {
        let h = pauli_x() + pauli_z();
        assert!((hermitian_norm(&h) - 2f64.sqrt()).abs() < 1e-14);
    }
}
