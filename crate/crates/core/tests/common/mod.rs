#![allow(dead_code)]

use cdd_core::control::{ControlSchedule, ControlSegment, Envelope};
use cdd_core::lie_algebra::{BasisKind, GeneratorBasis};
use cdd_core::linalg::{c, expm_hermitian};
use cdd_core::CMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const KINDS: [BasisKind; 3] = [BasisKind::Pauli, BasisKind::GellMann, BasisKind::PauliProduct];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_direction(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-2 {
            return v;
        }
    }
}

/// `e^{iφ} exp(−i H)` with `H` a random traceless Hermitian combination.
pub fn random_unitary(rng: &mut impl Rng, basis: &GeneratorBasis) -> CMatrix {
    let coeffs: Vec<f64> = (0..basis.adjoint_dim()).map(|_| rng.random_range(-2.0..2.0)).collect();
    let h = basis.combination(&coeffs).unwrap();
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    expm_hermitian(&h, 1.0) * c(phase.cos(), phase.sin())
}

pub fn random_envelope(rng: &mut impl Rng) -> Envelope {
    let duration = rng.random_range(0.2..1.5);
    match rng.random_range(0..4) {
        0 => Envelope::constant(rng.random_range(-2.0..2.0), duration).unwrap(),
        1 => Envelope::raised_cosine(rng.random_range(0.1..2.0), duration).unwrap(),
        2 => Envelope::piecewise((0..3).map(|_| rng.random_range(-2.0..2.0)).collect(), duration).unwrap(),
        _ => Envelope::sampled((0..9).map(|_| rng.random_range(0.0..2.0)).collect(), duration).unwrap(),
    }
}

pub fn random_schedule(rng: &mut impl Rng, basis: &GeneratorBasis) -> ControlSchedule {
    let k = rng.random_range(1..5);
    let segments = (0..k)
        .map(|_| ControlSegment::new(random_direction(rng, basis.adjoint_dim()), random_envelope(rng)).unwrap())
        .collect();
    ControlSchedule::new(segments).unwrap()
}
