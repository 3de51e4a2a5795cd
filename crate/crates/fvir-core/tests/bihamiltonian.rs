//! Bihamiltonian verification across the parameter grid, plus the worked
//! two-dimensional presentations and their negative controls.

use fvir_core::algdiff::{
    alg_variational_derivative, h2_density, verify_bihamiltonian, AlgDiffPoly,
};
use fvir_core::pairs::{verify_example_pairs, PairCase};
use fvir_core::{rat, rint, AlgebraElement, FrobeniusAlgebra, Rat, FIELD_U};

fn grid_elements(alg: &FrobeniusAlgebra<Rat>) -> Vec<AlgebraElement<Rat>> {
    let dim = alg.dim();
    let mut out = vec![AlgebraElement::zeros(dim), alg.unit().clone()];
    if dim >= 2 {
        let e2 = AlgebraElement::basis(dim, 1);
        out.push(e2.clone());
        out.push(alg.unit().add(&e2));
    }
    out
}

#[test]
fn bihamiltonian_grid_over_z2_both_traces() {
    for eps in [-1i64, 0, 1, 2] {
        for k in [1usize, 2] {
            let alg = FrobeniusAlgebra::<Rat>::z2(rint(eps), k).unwrap();
            let grid = grid_elements(&alg);
            for alpha in &grid {
                for beta in &grid {
                    if alpha.is_zero() && beta.is_zero() {
                        continue;
                    }
                    for zeta in &grid {
                        let rep = verify_bihamiltonian(&alg, alpha, beta, zeta);
                        assert!(
                            rep.all_passed(),
                            "eps={eps} k={k} alpha={alpha:?} beta={beta:?} zeta={zeta:?}: {:?}",
                            rep.failures().collect::<Vec<_>>()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn bihamiltonian_grid_over_reals() {
    let alg = FrobeniusAlgebra::<Rat>::reals();
    let grid = grid_elements(&alg);
    for alpha in &grid {
        for beta in &grid {
            if alpha.is_zero() && beta.is_zero() {
                continue;
            }
            for zeta in &grid {
                assert!(verify_bihamiltonian(&alg, alpha, beta, zeta).all_passed());
            }
        }
    }
}

/// Perturbing a Hamiltonian coefficient must break identity (c).
#[test]
fn perturbed_h2_fails_identity_c() {
    let alg = FrobeniusAlgebra::<Rat>::z2(rint(1), 1).unwrap();
    let one = alg.unit().clone();
    let zero = AlgebraElement::zeros(2);
    let u = AlgDiffPoly::symbol(FIELD_U, 2);
    let m = u.clone(); // alpha = 1, beta = 0
    let zeta = one.clone();

    // correct H2 passes
    let h2 = h2_density(&one, &zero, &zeta, &alg);
    let dh2 = alg_variational_derivative(&h2, FIELD_U, &alg);
    let lhs = dh2.dx().neg();
    let rhs = fvir_core::algdiff::coadjoint_rhs(&m, &u, &zeta, &alg).neg();
    assert_eq!(lhs, rhs);

    // 3/2 -> 2 coefficient bump on the cubic term
    let bump = u
        .mul(&u, &alg)
        .mul_elem(&one, &alg)
        .trace(&alg)
        .mul(&u.component(0).clone())
        .scale(&rat(1, 2));
    let tampered = h2.add(&bump.scale(&rat(1, 3)));
    let dh2_bad = alg_variational_derivative(&tampered, FIELD_U, &alg);
    assert_ne!(dh2_bad.dx().neg(), rhs);
}

#[test]
fn example_pairs_full_suite() {
    for eps in [rint(-1), rint(1), rint(2)] {
        for case in [PairCase::KdV, PairCase::Ch, PairCase::Hs] {
            let rep = verify_example_pairs(case, &eps, false);
            assert!(
                rep.all_passed(),
                "{case} eps={eps}: {:?}",
                rep.failures().collect::<Vec<_>>()
            );
        }
    }
    let zero = Rat::from_integer(0.into());
    for case in [PairCase::KdV, PairCase::Ch, PairCase::Hs] {
        assert!(verify_example_pairs(case, &zero, false).all_passed());
    }
}

#[test]
fn example_pairs_negative_control() {
    for case in [PairCase::KdV, PairCase::Ch, PairCase::Hs] {
        let rep = verify_example_pairs(case, &rint(2), true);
        assert!(!rep.all_passed(), "{case} tamper not detected");
    }
}
