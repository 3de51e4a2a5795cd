//! Algebra-valued differential polynomials and the Lie-algebraic operations
//! built on them: the x-bracket on algebra-valued vector fields, the trace
//! cocycle, coadjoint action, the two Poisson operators, variational
//! derivatives, and the bihamiltonian identity checks.

use crate::algebra::{AlgebraElement, FrobeniusAlgebra};
use crate::diffpoly::{default_namer, DiffPoly, JetVar};
use crate::report::{IdentityCheck, Report};
use crate::{rat, rint, Rat};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::Zero;

/// Vector of `dim` scalar differential polynomials: the coordinates of an
/// algebra-valued differential polynomial in the basis `e_1, ..., e_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgDiffPoly {
    comps: Vec<DiffPoly>,
}

impl AlgDiffPoly {
    pub fn zero(dim: usize) -> Self {
        Self {
            comps: alloc::vec![DiffPoly::zero(); dim],
        }
    }

    /// The symbol field itself: component `c` is the order-0 jet of
    /// `(field, c)`.
    pub fn symbol(field: u16, dim: usize) -> Self {
        Self {
            comps: (0..dim)
                .map(|c| DiffPoly::var(JetVar::new(field, c as u16, 0)))
                .collect(),
        }
    }

    /// Constant element, embedded as degree-0 polynomials.
    pub fn constant(elem: &AlgebraElement<Rat>) -> Self {
        Self {
            comps: elem
                .coeffs
                .iter()
                .map(|c| DiffPoly::constant(c.clone()))
                .collect(),
        }
    }

    pub fn from_components(comps: Vec<DiffPoly>) -> Self {
        Self { comps }
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn component(&self, k: usize) -> &DiffPoly {
        &self.comps[k]
    }

    pub fn components(&self) -> &[DiffPoly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(DiffPoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            comps: self.comps.iter().map(DiffPoly::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn dx(&self) -> Self {
        Self {
            comps: self
                .comps
                .iter()
                .map(DiffPoly::total_x_derivative)
                .collect(),
        }
    }

    pub fn dxn(&self, n: u32) -> Self {
        Self {
            comps: self.comps.iter().map(|p| p.dxn(n)).collect(),
        }
    }

    /// Algebra product through the structure constants.
    pub fn mul(&self, other: &Self, alg: &FrobeniusAlgebra<Rat>) -> Self {
        let l = alg.dim();
        assert_eq!(self.dim(), l);
        assert_eq!(other.dim(), l);
        let mut comps = alloc::vec![DiffPoly::zero(); l];
        for i in 0..l {
            if self.comps[i].is_zero() {
                continue;
            }
            for j in 0..l {
                if other.comps[j].is_zero() {
                    continue;
                }
                let prod = self.comps[i].mul(&other.comps[j]);
                for (k, comp) in comps.iter_mut().enumerate() {
                    let c = alg.structure_const(i, j, k);
                    if !c.is_zero() {
                        *comp = comp.add(&prod.scale(c));
                    }
                }
            }
        }
        Self { comps }
    }

    /// Left multiplication by a constant algebra element.
    pub fn mul_elem(&self, elem: &AlgebraElement<Rat>, alg: &FrobeniusAlgebra<Rat>) -> Self {
        Self::constant(elem).mul(self, alg)
    }

    /// Trace functional applied componentwise: `tr(self)` as a scalar
    /// differential polynomial.
    pub fn trace(&self, alg: &FrobeniusAlgebra<Rat>) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (t, p) in alg.trace_vec().iter().zip(&self.comps) {
            if !t.is_zero() {
                out = out.add(&p.scale(t));
            }
        }
        out
    }

    /// Substitute every jet of `field` componentwise.
    pub fn substitute_field(&self, field: u16, replacements: &[DiffPoly]) -> Self {
        Self {
            comps: self
                .comps
                .iter()
                .map(|p| p.substitute_field(field, replacements))
                .collect(),
        }
    }

    pub fn format_with(&self, namer: &dyn Fn(JetVar) -> String) -> String {
        let mut s = String::new();
        for (k, p) in self.comps.iter().enumerate() {
            if k > 0 {
                s.push_str("; ");
            }
            s.push_str(&format!("e{}: {}", k + 1, p.format_with(namer)));
        }
        s
    }
}

impl core::fmt::Display for AlgDiffPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.format_with(&default_namer))
    }
}

/// `[u d, v d] = (u o v_x - u_x o v) d` on algebra-valued vector fields.
pub fn bracket_x(u: &AlgDiffPoly, v: &AlgDiffPoly, alg: &FrobeniusAlgebra<Rat>) -> AlgDiffPoly {
    u.mul(&v.dx(), alg).sub(&u.dx().mul(v, alg))
}

/// Integrand of the trace Gelfand-Fuchs cocycle: `tr(u o v_xxx)`.
pub fn cocycle_integrand(
    u: &AlgDiffPoly,
    v: &AlgDiffPoly,
    alg: &FrobeniusAlgebra<Rat>,
) -> DiffPoly {
    u.mul(&v.dxn(3), alg).trace(alg)
}

/// Coadjoint action density: `2 m o u_x + m_x o u + zeta o u_xxx`.
pub fn coadjoint_rhs(
    m: &AlgDiffPoly,
    u: &AlgDiffPoly,
    zeta: &AlgebraElement<Rat>,
    alg: &FrobeniusAlgebra<Rat>,
) -> AlgDiffPoly {
    m.mul(&u.dx(), alg)
        .scale(&rint(2))
        .add(&m.dx().mul(u, alg))
        .add(&u.dxn(3).mul_elem(zeta, alg))
}

/// Lie-Poisson operator `J_2 = -(m d + d m + zeta d^3)` applied to `x`.
pub fn poisson_apply_j2(
    m: &AlgDiffPoly,
    zeta: &AlgebraElement<Rat>,
    x: &AlgDiffPoly,
    alg: &FrobeniusAlgebra<Rat>,
) -> AlgDiffPoly {
    coadjoint_rhs(m, x, zeta, alg).neg()
}

/// Frozen operator `J_1 = beta d^3 - alpha d` applied to `x`.
pub fn poisson_apply_j1(
    alpha: &AlgebraElement<Rat>,
    beta: &AlgebraElement<Rat>,
    x: &AlgDiffPoly,
    alg: &FrobeniusAlgebra<Rat>,
) -> AlgDiffPoly {
    x.dxn(3)
        .mul_elem(beta, alg)
        .sub(&x.dx().mul_elem(alpha, alg))
}

/// Algebra-valued variational derivative of a trace density: the components
/// are `gram_inverse . (delta f / delta u_k)_k`, so that
/// `tr(dF/du o du) = sum_k (df/du_k) du_k` modulo total derivatives.
pub fn alg_variational_derivative(
    density: &DiffPoly,
    field: u16,
    alg: &FrobeniusAlgebra<Rat>,
) -> AlgDiffPoly {
    let l = alg.dim();
    let grad: Vec<DiffPoly> = (0..l)
        .map(|c| density.euler_operator(field, c as u16))
        .collect();
    let gi = alg.gram_inv();
    let comps = (0..l)
        .map(|k| {
            let mut acc = DiffPoly::zero();
            for (j, g) in grad.iter().enumerate() {
                let w = &gi[k * l + j];
                if !w.is_zero() {
                    acc = acc.add(&g.scale(w));
                }
            }
            acc
        })
        .collect();
    AlgDiffPoly::from_components(comps)
}

/// Element of the Frobenius-Virasoro algebra: `(u d, a)`.
#[derive(Debug, Clone)]
pub struct VirasoroElement {
    pub vector_field: AlgDiffPoly,
    pub central: AlgebraElement<Rat>,
}

/// Element of the regular dual: `(m dx^2, zeta)`.
#[derive(Debug, Clone)]
pub struct DualElement {
    pub moment: AlgDiffPoly,
    pub cocentral: AlgebraElement<Rat>,
}

/// Integrand of the dual pairing, `tr(m o u)`; the full pairing adds
/// `tr(zeta o a)` after integration.
pub fn pairing_integrand(
    dual: &DualElement,
    vir: &VirasoroElement,
    alg: &FrobeniusAlgebra<Rat>,
) -> DiffPoly {
    dual.moment.mul(&vir.vector_field, alg).trace(alg)
}

/// Evaluate the pairing for x-independent entries: `L tr(m o u) + tr(zeta o a)`.
/// Returns `None` when either field part is not constant in x.
pub fn pairing_constant(
    dual: &DualElement,
    vir: &VirasoroElement,
    circle_len: &Rat,
    alg: &FrobeniusAlgebra<Rat>,
) -> Option<Rat> {
    fn const_coeffs(p: &AlgDiffPoly) -> Option<Vec<Rat>> {
        p.components()
            .iter()
            .map(|c| {
                if c.is_zero() {
                    Some(Rat::zero())
                } else if c.num_terms() == 1 {
                    let (m, coeff) = c.terms().next().unwrap();
                    m.is_one().then(|| coeff.clone())
                } else {
                    None
                }
            })
            .collect()
    }
    let m = AlgebraElement::new(const_coeffs(&dual.moment)?);
    let u = AlgebraElement::new(const_coeffs(&vir.vector_field)?);
    let mu = alg.pairing_form(&m, &u).ok()?;
    let za = alg.pairing_form(&dual.cocentral, &vir.central).ok()?;
    Some(circle_len * mu + za)
}

fn identity_from_residual(name: &str, residual: &AlgDiffPoly) -> IdentityCheck {
    if residual.is_zero() {
        IdentityCheck::pass(name)
    } else {
        IdentityCheck::fail(name, residual.format_with(&default_namer))
    }
}

/// Density of `H_1 = 1/2 tr int m o u dx` with `m = alpha o u - beta o u_xx`
/// substituted, as a polynomial in u-jets.
pub fn h1_density(
    alpha: &AlgebraElement<Rat>,
    beta: &AlgebraElement<Rat>,
    alg: &FrobeniusAlgebra<Rat>,
) -> DiffPoly {
    let u = AlgDiffPoly::symbol(crate::FIELD_U, alg.dim());
    let m = u.mul_elem(alpha, alg).sub(&u.dxn(2).mul_elem(beta, alg));
    m.mul(&u, alg).trace(alg).scale(&rat(1, 2))
}

/// Density of `H_2 = 1/2 tr int (zeta o u o u_xx + alpha o u^3
/// - 1/2 beta o u^2 o u_xx) dx` in u-jets.
pub fn h2_density(
    alpha: &AlgebraElement<Rat>,
    beta: &AlgebraElement<Rat>,
    zeta: &AlgebraElement<Rat>,
    alg: &FrobeniusAlgebra<Rat>,
) -> DiffPoly {
    let u = AlgDiffPoly::symbol(crate::FIELD_U, alg.dim());
    let u2 = u.mul(&u, alg);
    let uxx = u.dxn(2);
    let t1 = u.mul(&uxx, alg).mul_elem(zeta, alg);
    let t2 = u2.mul(&u, alg).mul_elem(alpha, alg);
    let t3 = u2.mul(&uxx, alg).mul_elem(beta, alg).scale(&rat(-1, 2));
    t1.add(&t2).add(&t3).trace(alg).scale(&rat(1, 2))
}

/// Symbolic verification that the Euler flow for `Lambda = alpha - beta d^2`
/// is bihamiltonian:
///   (a) `dH1/du = Lambda(u)`,
///   (b) `dH2/du = zeta o u_xx + 3/2 alpha o u^2 - 1/2 beta o u_x^2
///        - beta o u o u_xx`,
///   (c) `-d(dH2/du) = -(2 m o u_x + m_x o u + zeta o u_xxx)` with
///       `m = Lambda(u)` substituted (this is `J_1 dH2/dm = J_2 dH1/dm`
///       without forming the nonlocal `Lambda^{-1}`).
pub fn verify_bihamiltonian(
    alg: &FrobeniusAlgebra<Rat>,
    alpha: &AlgebraElement<Rat>,
    beta: &AlgebraElement<Rat>,
    zeta: &AlgebraElement<Rat>,
) -> Report {
    let u = AlgDiffPoly::symbol(crate::FIELD_U, alg.dim());
    let m = u.mul_elem(alpha, alg).sub(&u.dxn(2).mul_elem(beta, alg));

    let mut report = Report::new();

    let dh1 = alg_variational_derivative(&h1_density(alpha, beta, alg), crate::FIELD_U, alg);
    report.push(identity_from_residual("dH1/du = Lambda(u)", &dh1.sub(&m)));

    let dh2 = alg_variational_derivative(&h2_density(alpha, beta, zeta, alg), crate::FIELD_U, alg);
    let u2 = u.mul(&u, alg);
    let expected_dh2 = u
        .dxn(2)
        .mul_elem(zeta, alg)
        .add(&u2.mul_elem(alpha, alg).scale(&rat(3, 2)))
        .sub(
            &u.dx()
                .mul(&u.dx(), alg)
                .mul_elem(beta, alg)
                .scale(&rat(1, 2)),
        )
        .sub(&u.mul(&u.dxn(2), alg).mul_elem(beta, alg));
    report.push(identity_from_residual(
        "dH2/du closed form",
        &dh2.sub(&expected_dh2),
    ));

    let lhs = dh2.dx().neg();
    let rhs = coadjoint_rhs(&m, &u, zeta, alg).neg();
    report.push(identity_from_residual(
        "J1 dH2/dm = J2 dH1/dm (as -d dH2/du = rhs)",
        &lhs.sub(&rhs),
    ));

    report
}

/// The cocycle and bracket identity suite for one algebra:
/// antisymmetry and the cyclic identity modulo exact terms, the Jacobi
/// identity of the bracket, and the loop-algebra contrast.
pub fn cocycle_suite(alg: &FrobeniusAlgebra<Rat>) -> Report {
    let l = alg.dim();
    // three independent symbol fields
    let u = AlgDiffPoly::symbol(1, l);
    let v = AlgDiffPoly::symbol(2, l);
    let w = AlgDiffPoly::symbol(3, l);
    let mut report = Report::new();

    let anti = cocycle_integrand(&u, &v, alg).add(&cocycle_integrand(&v, &u, alg));
    report.push(if anti.is_total_derivative() {
        IdentityCheck::pass("cocycle antisymmetry mod exact terms")
    } else {
        IdentityCheck::fail(
            "cocycle antisymmetry mod exact terms",
            anti.format_with(&default_namer),
        )
    });

    let diag = cocycle_integrand(&u, &u, alg);
    report.push(if diag.is_total_derivative() {
        IdentityCheck::pass("cocycle vanishes on the diagonal mod exact terms")
    } else {
        IdentityCheck::fail(
            "cocycle vanishes on the diagonal mod exact terms",
            diag.format_with(&default_namer),
        )
    });

    let cyc = cocycle_integrand(&u, &bracket_x(&v, &w, alg), alg)
        .add(&cocycle_integrand(&v, &bracket_x(&w, &u, alg), alg))
        .add(&cocycle_integrand(&w, &bracket_x(&u, &v, alg), alg));
    report.push(if cyc.is_total_derivative() {
        IdentityCheck::pass("cocycle cyclic identity mod exact terms")
    } else {
        IdentityCheck::fail(
            "cocycle cyclic identity mod exact terms",
            cyc.format_with(&default_namer),
        )
    });

    let jac = bracket_x(&u, &bracket_x(&v, &w, alg), alg)
        .add(&bracket_x(&v, &bracket_x(&w, &u, alg), alg))
        .add(&bracket_x(&w, &bracket_x(&u, &v, alg), alg));
    report.push(identity_from_residual("bracket Jacobi identity", &jac));

    report.push(identity_from_residual(
        "bracket antisymmetry on the diagonal",
        &bracket_x(&u, &u, alg),
    ));

    // pointwise commutator vanishes while the bracket does not: Psi is not a
    // Lie algebra homomorphism from the loop algebra
    let comm = u.mul(&v, alg).sub(&v.mul(&u, alg));
    report.push(identity_from_residual(
        "loop-algebra commutator vanishes",
        &comm,
    ));
    report.push(if bracket_x(&u, &v, alg).is_zero() {
        IdentityCheck::fail("bracket is nonzero on generic fields", "bracket vanished")
    } else {
        IdentityCheck::pass("bracket is nonzero on generic fields")
    });

    // duality of the coadjoint action against the bracket + cocycle:
    // tr(coad(m,u,zeta) o v) + tr(m o [u,v]) + tr(zeta o (u o v_xxx))
    // is a total derivative (the pairing identity <ad* m, v> = -<m, [u,v]>)
    let m = AlgDiffPoly::symbol(crate::FIELD_M, l);
    let zeta = alg.unit().clone();
    let coad = coadjoint_rhs(&m, &u, &zeta, alg);
    let lhs = coad.mul(&v, alg).trace(alg);
    let rhs = m
        .mul(&bracket_x(&u, &v, alg), alg)
        .trace(alg)
        .add(&u.mul(&v.dxn(3), alg).mul_elem(&zeta, alg).trace(alg));
    let residual = lhs.add(&rhs);
    report.push(if residual.is_total_derivative() {
        IdentityCheck::pass("coadjoint action dual to bracket mod exact terms")
    } else {
        IdentityCheck::fail(
            "coadjoint action dual to bracket mod exact terms",
            residual.format_with(&default_namer),
        )
    });

    report
}
