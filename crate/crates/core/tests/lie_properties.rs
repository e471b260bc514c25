mod common;

use cdd_core::lie_algebra::{adjoint_generator, adjoint_rotation, structure_constants, GeneratorBasis};
use cdd_core::linalg::{commutator, expm_hermitian, expm_real, trace, trace_product};
use cdd_core::{CMatrix, RMatrix};
use common::{random_direction, random_unitary, rng, KINDS};
use proptest::prelude::*;

#[test]
fn bases_are_orthonormal_hermitian_and_traceless() {
    for kind in KINDS {
        let b = GeneratorBasis::new(kind);
        let m = b.normalization();
        for (i, li) in b.generators().iter().enumerate() {
            assert!((li - li.adjoint()).norm() <= 1e-14);
            assert!(trace(li).norm() <= 1e-14);
            for (j, lj) in b.generators().iter().enumerate() {
                let expected = if i == j { m } else { 0.0 };
                assert!((trace_product(li, lj).re - expected).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn structure_constants_reconstruct_commutators() {
    for kind in KINDS {
        let b = GeneratorBasis::new(kind);
        let f = structure_constants(&b);
        assert!(f.antisymmetry_error() <= 1e-12);
        let n = b.adjoint_dim();
        for i in 0..n {
            for j in 0..n {
                let mut rebuilt = CMatrix::zeros(b.system_dim(), b.system_dim());
                for k in 0..n {
                    rebuilt += b.generator(k) * cdd_core::linalg::c(0.0, f.get(i, j, k));
                }
                assert!((rebuilt - commutator(b.generator(i), b.generator(j))).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn adjoint_map_is_an_orthogonal_homomorphism() {
    let mut r = rng(7);
    for kind in KINDS {
        let b = GeneratorBasis::new(kind);
        let id = RMatrix::identity(b.adjoint_dim(), b.adjoint_dim());
        for _ in 0..100 {
            let u = random_unitary(&mut r, &b);
            let v = random_unitary(&mut r, &b);
            let ru = adjoint_rotation(&b, &u).unwrap();
            let rv = adjoint_rotation(&b, &v).unwrap();
            let ruv = adjoint_rotation(&b, &(&u * &v)).unwrap();
            assert!((&ruv - &ru * &rv).amax() <= 1e-10, "{kind}");
            assert!((ru.transpose() * &ru - &id).amax() <= 1e-10, "{kind}");
        }
    }
}

#[test]
fn adjoint_generator_exponentiates_to_rotation() {
    let mut r = rng(11);
    for kind in KINDS {
        let b = GeneratorBasis::new(kind);
        for _ in 0..10 {
            let dir = random_direction(&mut r, b.adjoint_dim());
            let g = adjoint_generator(&b, &dir).unwrap();
            assert_eq!(g.matrix().transpose(), -g.matrix());
            assert_eq!(&g.reconstruct(), g.matrix());
            let t = 0.37;
            let u = expm_hermitian(&b.combination(&dir).unwrap(), t);
            let rot = adjoint_rotation(&b, &u).unwrap();
            assert!((expm_real(g.matrix(), t) - rot.transpose()).amax() <= 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_of_inverse_is_transpose(seed in any::<u64>(), k in 0usize..3) {
        let b = GeneratorBasis::new(KINDS[k]);
        let mut r = rng(seed);
        let u = random_unitary(&mut r, &b);
        let ru = adjoint_rotation(&b, &u).unwrap();
        let rinv = adjoint_rotation(&b, &u.adjoint()).unwrap();
        prop_assert!((rinv - ru.transpose()).amax() <= 1e-10);
    }
}
