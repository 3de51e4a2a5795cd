//! Bihamiltonian presentations of the two-dimensional KdV/CH/HS reductions:
//! each case states two Hamiltonian pairs and two operator matrices, and this
//! module checks symbolically that applying the stated operators to the
//! variational derivatives of the stated Hamiltonians reproduces the
//! componentwise system.
//!
//! The constant first-structure matrices act on `dH/dp_j`, which is nonlocal
//! as a standalone object; every entry factors as `c * (-d Lambda)` though,
//! so each application is evaluated in the equivalent local form
//! `c * (-d) dH/du_j`. The field-dependent second-structure matrices act on
//! `dH1/dp_j`, which is local and is obtained by an exact constant-coefficient
//! preimage solve.

use crate::algebra::{AlgebraElement, FrobeniusAlgebra};
use crate::diffpoly::{solve_const_coeff_preimage, DiffPoly, JetVar};
use crate::euler::{build_euler_equation, InertiaSpec};
use crate::printer::component_namer;
use crate::report::{IdentityCheck, Report};
use crate::{rat, rint, Rat, FIELD_U};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::Zero;

/// Which two-dimensional reduction to verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCase {
    KdV,
    Ch,
    Hs,
}

impl core::fmt::Display for PairCase {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PairCase::KdV => write!(f, "KdV"),
            PairCase::Ch => write!(f, "CH"),
            PairCase::Hs => write!(f, "HS"),
        }
    }
}

fn vj(n: u16) -> JetVar {
    JetVar::new(FIELD_U, 0, n)
}

fn wj(n: u16) -> JetVar {
    JetVar::new(FIELD_U, 1, n)
}

fn mono(c: Rat, factors: &[(JetVar, u32)]) -> DiffPoly {
    DiffPoly::monomial(c, factors)
}

/// One entry of a field-dependent operator matrix: a sum of `coeff * (f d + d f)`
/// terms and constant third derivatives (for `J_0 = d^3 + v d + d v`).
#[derive(Clone)]
enum SecondTerm {
    Lie { coeff: Rat, f: DiffPoly },
    Der3 { coeff: Rat },
}

impl SecondTerm {
    fn apply(&self, y: &DiffPoly) -> DiffPoly {
        match self {
            SecondTerm::Lie { coeff, f } => f
                .mul(&y.total_x_derivative())
                .scale(&rint(2))
                .add(&f.total_x_derivative().mul(y))
                .scale(coeff),
            SecondTerm::Der3 { coeff } => y.dxn(3).scale(coeff),
        }
    }
}

type SecondEntry = Vec<SecondTerm>;

fn lie(coeff: Rat, f: &DiffPoly) -> SecondTerm {
    SecondTerm::Lie {
        coeff,
        f: f.clone(),
    }
}

fn der3(coeff: Rat) -> SecondTerm {
    SecondTerm::Der3 { coeff }
}

/// Exact division of constant-coefficient operator polynomials (coefficients
/// indexed by derivative order). Returns the quotient when the remainder is
/// zero.
fn op_div(num: &[Rat], den: &[Rat]) -> Option<Vec<Rat>> {
    let dd = den.iter().rposition(|c| !c.is_zero())?;
    let mut rem: Vec<Rat> = num.to_vec();
    let nd = rem.iter().rposition(|c| !c.is_zero());
    let Some(nd) = nd else {
        return Some(vec![]);
    };
    if nd < dd {
        return None;
    }
    let mut quot = vec![Rat::zero(); nd - dd + 1];
    for k in (0..=(nd - dd)).rev() {
        let c = rem[k + dd].clone() / den[dd].clone();
        quot[k] = c.clone();
        for (i, d) in den.iter().enumerate().take(dd + 1) {
            rem[k + i] -= c.clone() * d.clone();
        }
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}

struct CaseData {
    /// inertia symbol as a polynomial in d (scalar, diagonal on components)
    lambda: Vec<Rat>,
    /// componentwise flow `(p_t, q_t)` in u-jets
    system: Vec<DiffPoly>,
    /// per pair: (H1 density, H2 density, first matrix, second matrix)
    pairs: Vec<PairData>,
}

struct PairData {
    label: &'static str,
    h1: DiffPoly,
    h2: DiffPoly,
    /// 2x2 constant-operator matrix, entries as polynomials in d
    first: [[Vec<Rat>; 2]; 2],
    /// 2x2 field-operator matrix
    second: [[SecondEntry; 2]; 2],
}

fn case_data(case: PairCase, eps: &Rat) -> CaseData {
    let table = FrobeniusAlgebra::<Rat>::z2(eps.clone(), 2)
        .expect("Z2 table with the basic traces is always nondegenerate");
    let unit = table.unit().clone();
    let zero = AlgebraElement::zeros(2);
    let (alpha, beta, zeta, lambda) = match case {
        PairCase::KdV => (unit.clone(), zero.clone(), unit.clone(), vec![rint(1)]),
        PairCase::Ch => (
            unit.clone(),
            unit.clone(),
            zero.clone(),
            vec![rint(1), rint(0), rint(-1)],
        ),
        PairCase::Hs => (
            zero.clone(),
            unit.clone(),
            zero.clone(),
            vec![rint(0), rint(0), rint(-1)],
        ),
    };
    let inertia = if beta.is_zero() {
        InertiaSpec::new(vec![alpha]).unwrap()
    } else {
        InertiaSpec::order_one(alpha, beta).unwrap()
    };
    let eq = build_euler_equation(&table, inertia, zeta).unwrap();
    let system: Vec<DiffPoly> = eq.rhs_in_u().components().to_vec();

    let v = DiffPoly::var(vj(0));
    let w = DiffPoly::var(wj(0));
    let p = eq.m_of_u().component(0).clone();
    let q = eq.m_of_u().component(1).clone();
    let eps_zero = eps.is_zero();
    let half = rat(1, 2);
    let quarter = rat(1, 4);

    // constant-operator building blocks
    let d1 = |c: i64| vec![rint(0), rint(c)];
    let d1_scaled = |c: Rat| vec![Rat::zero(), c];
    let zero_op: Vec<Rat> = vec![];

    let pairs = match case {
        PairCase::KdV => {
            // J0 = d^3 + v d + d v, J1 = w d + d w
            let j0 = |c: Rat| vec![der3(c.clone()), lie(c, &v)];
            let j1 = |c: Rat| vec![lie(c, &w)];
            let h1 = mono(rint(1), &[(vj(0), 1), (wj(0), 1)]);
            let h2 = mono(rat(3, 2), &[(vj(0), 2), (wj(0), 1)])
                .add(&mono(eps * &half, &[(wj(0), 3)]))
                .add(&mono(rint(1), &[(vj(0), 1), (wj(2), 1)]));
            let first = [[zero_op.clone(), d1(-1)], [d1(-1), zero_op.clone()]];
            let second = [
                [j1(-eps.clone()), j0(rint(-1))],
                [j0(rint(-1)), j1(rint(-1))],
            ];
            let h1t = if eps_zero {
                mono(half.clone(), &[(vj(0), 2)]).add(&mono(rint(1), &[(vj(0), 1), (wj(0), 1)]))
            } else {
                mono(half.clone(), &[(vj(0), 2)]).add(&mono(eps * &half, &[(wj(0), 2)]))
            };
            let h2t = if eps_zero {
                mono(half.clone(), &[(vj(0), 3)])
                    .add(&mono(half.clone(), &[(vj(0), 1), (vj(2), 1)]))
                    .add(&mono(rat(3, 2), &[(vj(0), 2), (wj(0), 1)]))
                    .add(&mono(rint(1), &[(vj(0), 1), (wj(2), 1)]))
            } else {
                mono(half.clone(), &[(vj(0), 3)])
                    .add(&mono(half.clone(), &[(vj(0), 1), (vj(2), 1)]))
                    .add(&mono(eps * rat(3, 2), &[(vj(0), 1), (wj(0), 2)]))
                    .add(&mono(eps * &half, &[(wj(0), 1), (wj(2), 1)]))
            };
            let (first_t, second_t) = if eps_zero {
                (
                    [[zero_op.clone(), d1(-1)], [d1(-1), d1(1)]],
                    [
                        [vec![], j0(rint(-1))],
                        [j0(rint(-1)), {
                            let mut e = j1(rint(-1));
                            e.extend(j0(rint(1)));
                            e
                        }],
                    ],
                )
            } else {
                (
                    [
                        [d1(-1), zero_op.clone()],
                        [zero_op.clone(), d1_scaled(-eps.recip())],
                    ],
                    [
                        [j0(rint(-1)), j1(rint(-1))],
                        [j1(rint(-1)), j0(-eps.recip())],
                    ],
                )
            };
            vec![
                PairData {
                    label: "(H1,H2)",
                    h1,
                    h2,
                    first,
                    second,
                },
                PairData {
                    label: "(H~1,H~2)",
                    h1: h1t,
                    h2: h2t,
                    first: first_t,
                    second: second_t,
                },
            ]
        }
        PairCase::Ch | PairCase::Hs => {
            let k0 = |c: Rat| vec![lie(c, &p)];
            let k1 = |c: Rat| vec![lie(c, &q)];
            // lambda factored out of the first matrices: d^3 - d for CH, d^3 for HS
            let c_op = match case {
                PairCase::Ch => vec![rint(0), rint(-1), rint(0), rint(1)],
                _ => vec![rint(0), rint(0), rint(0), rint(1)],
            };
            let c_op_scaled = |s: Rat| c_op.iter().map(|c| c * &s).collect::<Vec<_>>();
            let h1 = q.mul(&v).add(&p.mul(&w)).scale(&half);
            let h2 = match case {
                PairCase::Ch => mono(rat(6, 4), &[(vj(0), 2), (wj(0), 1)])
                    .add(&mono(eps * &half, &[(wj(0), 3)]))
                    .add(&mono(rat(-2, 4), &[(wj(0), 1), (vj(0), 1), (vj(2), 1)]))
                    .add(&mono(rat(-1, 4), &[(vj(0), 2), (wj(2), 1)]))
                    .add(&mono(eps * rat(-1, 4), &[(wj(0), 2), (wj(2), 1)])),
                _ => w
                    .mul(&v)
                    .mul(&p)
                    .scale(&rat(2, 4))
                    .add(&mono(rint(1), &[(vj(0), 2)]).mul(&q).scale(&quarter))
                    .add(&mono(eps.clone(), &[(wj(0), 2)]).mul(&q).scale(&quarter)),
            };
            let first = [
                [zero_op.clone(), c_op.clone()],
                [c_op.clone(), zero_op.clone()],
            ];
            let second = [
                [k1(-eps.clone()), k0(rint(-1))],
                [k0(rint(-1)), k1(rint(-1))],
            ];
            let h1t = if eps_zero {
                p.mul(&v).add(&q.mul(&v)).add(&p.mul(&w)).scale(&half)
            } else {
                p.mul(&v).add(&q.mul(&w).scale(eps)).scale(&half)
            };
            let h2t = match (case, eps_zero) {
                (PairCase::Ch, false) => mono(rat(2, 4), &[(vj(0), 3)])
                    .add(&mono(eps * rat(6, 4), &[(vj(0), 1), (wj(0), 2)]))
                    .add(&mono(rat(-1, 4), &[(vj(0), 2), (vj(2), 1)]))
                    .add(&mono(eps * rat(-1, 4), &[(wj(0), 2), (vj(2), 1)]))
                    .add(&mono(
                        eps * rat(-2, 4),
                        &[(vj(0), 1), (wj(0), 1), (wj(2), 1)],
                    )),
                (PairCase::Ch, true) => mono(rat(2, 4), &[(vj(0), 3)])
                    .add(&mono(rat(6, 4), &[(vj(0), 2), (wj(0), 1)]))
                    .add(&mono(rat(-1, 4), &[(vj(0), 2), (vj(2), 1)]))
                    .add(&mono(rat(-1, 4), &[(vj(0), 2), (wj(2), 1)]))
                    .add(&mono(rat(-2, 4), &[(vj(0), 1), (wj(0), 1), (vj(2), 1)])),
                (_, false) => p
                    .mul(&mono(rint(1), &[(vj(0), 2)]))
                    .add(&p.mul(&mono(eps.clone(), &[(wj(0), 2)])))
                    .add(&q.mul(&v).mul(&w).scale(&(eps * rint(2))))
                    .scale(&quarter),
                (_, true) => p
                    .mul(&mono(rint(1), &[(vj(0), 2)]))
                    .add(&p.mul(&v).mul(&w).scale(&rint(2)))
                    .add(&q.mul(&mono(rint(1), &[(vj(0), 2)])))
                    .scale(&quarter),
            };
            let (first_t, second_t) = if eps_zero {
                (
                    [
                        [zero_op.clone(), c_op.clone()],
                        [c_op.clone(), c_op_scaled(rint(-1))],
                    ],
                    [
                        [vec![], k0(rint(-1))],
                        [k0(rint(-1)), {
                            let mut e = k1(rint(-1));
                            e.extend(k0(rint(1)));
                            e
                        }],
                    ],
                )
            } else {
                (
                    [
                        [c_op.clone(), zero_op.clone()],
                        [zero_op.clone(), c_op_scaled(eps.recip())],
                    ],
                    [
                        [k0(rint(-1)), k1(rint(-1))],
                        [k1(rint(-1)), k0(-eps.recip())],
                    ],
                )
            };
            vec![
                PairData {
                    label: "(H1,H2)",
                    h1,
                    h2,
                    first,
                    second,
                },
                PairData {
                    label: "(H~1,H~2)",
                    h1: h1t,
                    h2: h2t,
                    first: first_t,
                    second: second_t,
                },
            ]
        }
    };
    CaseData {
        lambda,
        system,
        pairs,
    }
}

/// Verify one case. `inject_error` perturbs one Hamiltonian coefficient as a
/// negative control; the corresponding rows must then fail.
pub fn verify_example_pairs(case: PairCase, eps: &Rat, inject_error: bool) -> Report {
    let CaseData {
        lambda,
        system,
        pairs,
    } = case_data(case, eps);
    let namer = component_namer(2);
    let comp_names = ["p", "q"];
    let mut report = Report::new();
    for (pair_idx, pair) in pairs.iter().enumerate() {
        let mut h2 = pair.h2.clone();
        if inject_error && pair_idx == 0 {
            // bump one coefficient (3 -> 4 style perturbation)
            let (m0, c0) = h2
                .terms()
                .next()
                .map(|(m, c)| (m.clone(), c.clone()))
                .unwrap();
            let bump = c0 / rint(3);
            h2.insert(m0, bump);
        }
        // first structure: rows of `first . grad_p H2`, evaluated through the
        // factorization entry = quot(d) o lambda(d)
        let grad_u_h2: Vec<DiffPoly> = (0..2)
            .map(|c| h2.euler_operator(FIELD_U, c as u16))
            .collect();
        for row in 0..2 {
            let name = format!(
                "{case} eps={eps} {} first structure, row {}",
                pair.label, comp_names[row]
            );
            let mut acc = DiffPoly::zero();
            let mut ok = true;
            for col in 0..2 {
                let entry = &pair.first[row][col];
                if entry.iter().all(Zero::is_zero) {
                    continue;
                }
                match op_div(entry, &lambda) {
                    Some(quot) => {
                        let mut applied = DiffPoly::zero();
                        for (k, c) in quot.iter().enumerate() {
                            if !c.is_zero() {
                                applied = applied.add(&grad_u_h2[col].dxn(k as u32).scale(c));
                            }
                        }
                        acc = acc.add(&applied);
                    }
                    None => {
                        report.push(IdentityCheck::fail(
                            name.clone(),
                            "operator entry does not factor through the inertia symbol",
                        ));
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let residual = acc.sub(&system[row]);
            report.push(if residual.is_zero() {
                IdentityCheck::pass(name)
            } else {
                IdentityCheck::fail(name, residual.format_with(&namer))
            });
        }
        // second structure: rows of `second . grad_p H1` with the local
        // preimage grad_p H1 = lambda^{-1} grad_u H1
        let mut grad_p_h1: Vec<Option<DiffPoly>> = Vec::new();
        for c in 0..2u16 {
            let gu = pair.h1.euler_operator(FIELD_U, c);
            grad_p_h1.push(solve_const_coeff_preimage(&lambda, &gu));
        }
        for row in 0..2 {
            let name = format!(
                "{case} eps={eps} {} second structure, row {}",
                pair.label, comp_names[row]
            );
            let mut acc = DiffPoly::zero();
            let mut ok = true;
            for col in 0..2 {
                if pair.second[row][col].is_empty() {
                    continue;
                }
                let Some(y) = &grad_p_h1[col] else {
                    report.push(IdentityCheck::fail(
                        name.clone(),
                        "dH1/dp is not a local differential polynomial",
                    ));
                    ok = false;
                    break;
                };
                for term in &pair.second[row][col] {
                    acc = acc.add(&term.apply(y));
                }
            }
            if !ok {
                continue;
            }
            let residual = acc.sub(&system[row]);
            report.push(if residual.is_zero() {
                IdentityCheck::pass(name)
            } else {
                IdentityCheck::fail(name, residual.format_with(&namer))
            });
        }
    }
    report
}

/// Run every case of the worked examples: the three reductions at the given
/// nonzero epsilon and at epsilon = 0.
pub fn verify_all_pairs(eps_nonzero: &Rat, inject_error: bool) -> Report {
    assert!(!eps_nonzero.is_zero());
    let mut report = Report::new();
    let zero = Rat::zero();
    for case in [PairCase::KdV, PairCase::Ch, PairCase::Hs] {
        report.merge(verify_example_pairs(case, eps_nonzero, inject_error));
        report.merge(verify_example_pairs(case, &zero, inject_error));
    }
    report
}
