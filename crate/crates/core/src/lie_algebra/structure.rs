use crate::lie_algebra::GeneratorBasis;
use crate::linalg::{commutator, trace_product, I};

/// Structure constants `f_ijk` defined by `[λ_i, λ_j] = i Σ_k f_ijk λ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureTensor {
    dim: usize,
    data: Vec<f64>,
}

impl StructureTensor {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Zero-based `f_ijk`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.dim + j) * self.dim + k]
    }

    /// Largest violation of total antisymmetry over all index permutations.
    pub fn antisymmetry_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let f = self.get(i, j, k);
                    worst = worst
                        .max((f + self.get(j, i, k)).abs())
                        .max((f + self.get(i, k, j)).abs())
                        .max((f + self.get(k, j, i)).abs());
                }
            }
        }
        worst
    }
}

/// Extracts `f_ijk = Tr(λ_k [λ_i, λ_j]) / (i M)`.
///
/// Exact for trace-orthogonal bases. Entries below `1e-14` in magnitude are
/// set to zero so that sparsity patterns are exact.
pub fn structure_constants(basis: &GeneratorBasis) -> StructureTensor {
    let dim = basis.adjoint_dim();
    let m = basis.normalization();
    let gens = basis.generators();
    let mut data = vec![0.0; dim * dim * dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let bracket = commutator(&gens[i], &gens[j]);
            for k in 0..dim {
                let value = (trace_product(&gens[k], &bracket) / (I * m)).re;
                let value = if value.abs() < 1e-14 { 0.0 } else { value };
                data[(i * dim + j) * dim + k] = value;
                data[(j * dim + i) * dim + k] = -value;
            }
        }
    }
    StructureTensor { dim, data }
}
