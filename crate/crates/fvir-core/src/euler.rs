//! Concrete Euler equations on the dual of the Frobenius-Virasoro algebra,
//! built from an inertia specification `(alpha_0, ..., alpha_n)` with
//! `Lambda(u) = alpha_0 o u + sum_k (-1)^k alpha_k o u^(2k)`.

use crate::algdiff::{alg_variational_derivative, coadjoint_rhs, poisson_apply_j2, AlgDiffPoly};
use crate::algebra::{AlgebraElement, FrobeniusAlgebra};
use crate::diffpoly::DiffPoly;
use crate::report::{IdentityCheck, Report};
use crate::{rat, Rat, FIELD_M, FIELD_U};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerError {
    ZeroInertia,
    /// H_2 is only defined for inertia order n <= 1.
    UnsupportedHamiltonian {
        order: usize,
    },
    MismatchedAlgebra,
}

impl fmt::Display for EulerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EulerError::ZeroInertia => write!(f, "inertia operator has no nonzero coefficient"),
            EulerError::UnsupportedHamiltonian { order } => {
                write!(
                    f,
                    "H2 is undefined for inertia order n = {order} (requires n <= 1)"
                )
            }
            EulerError::MismatchedAlgebra => {
                write!(f, "trace choice does not share the multiplication table")
            }
        }
    }
}

impl core::error::Error for EulerError {}

/// Coefficients `alpha_0, ..., alpha_n` of the inertia operator. Trailing
/// zero coefficients are stripped on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct InertiaSpec {
    coeffs: Vec<AlgebraElement<Rat>>,
}

impl InertiaSpec {
    pub fn new(mut coeffs: Vec<AlgebraElement<Rat>>) -> Result<Self, EulerError> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(AlgebraElement::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() || coeffs.iter().all(AlgebraElement::is_zero) {
            return Err(EulerError::ZeroInertia);
        }
        Ok(Self { coeffs })
    }

    /// `Lambda = alpha - beta d^2`.
    pub fn order_one(
        alpha: AlgebraElement<Rat>,
        beta: AlgebraElement<Rat>,
    ) -> Result<Self, EulerError> {
        Self::new(alloc::vec![alpha, beta])
    }

    /// Highest index n.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &AlgebraElement<Rat> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[AlgebraElement<Rat>] {
        &self.coeffs
    }

    pub fn alpha(&self) -> &AlgebraElement<Rat> {
        &self.coeffs[0]
    }

    /// `beta = alpha_1` when present, zero otherwise.
    pub fn beta(&self, dim: usize) -> AlgebraElement<Rat> {
        self.coeffs
            .get(1)
            .cloned()
            .unwrap_or_else(|| AlgebraElement::zeros(dim))
    }

    /// `m = Lambda(u)` as an algebra-valued polynomial in u-jets.
    pub fn apply(&self, u: &AlgDiffPoly, alg: &FrobeniusAlgebra<Rat>) -> AlgDiffPoly {
        let mut out = AlgDiffPoly::zero(alg.dim());
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = u.dxn(2 * k as u32).mul_elem(a, alg);
            out = if k % 2 == 0 {
                out.add(&term)
            } else {
                out.sub(&term)
            };
        }
        out
    }

    /// Fourier symbol `S(kappa) = alpha_0 + sum alpha_k kappa^(2k)` as an
    /// algebra element (exact, for a rational kappa^2).
    pub fn symbol(&self, kappa_sq: &Rat, dim: usize) -> AlgebraElement<Rat> {
        let mut out = AlgebraElement::zeros(dim);
        let mut pow = Rat::from_integer(1.into());
        for a in &self.coeffs {
            out = out.add(&a.scale(&pow));
            pow *= kappa_sq;
        }
        out
    }
}

/// Classification of the built flow, mirroring the named reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquationKind {
    FKdV,
    FCh,
    FHs,
    General,
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquationKind::FKdV => write!(f, "F-KdV"),
            EquationKind::FCh => write!(f, "F-CH"),
            EquationKind::FHs => write!(f, "F-HS"),
            EquationKind::General => write!(f, "general"),
        }
    }
}

/// An Euler equation `m_t = -(2 m o u_x + m_x o u + zeta o u_xxx)`,
/// `m = Lambda(u)`, on the regular dual. `zeta` is constant data and never
/// evolves. Immutable after construction.
#[derive(Debug, Clone)]
pub struct EulerEquation {
    algebra: FrobeniusAlgebra<Rat>,
    inertia: InertiaSpec,
    zeta: AlgebraElement<Rat>,
    kind: EquationKind,
    m_of_u: AlgDiffPoly,
    rhs: AlgDiffPoly,
}

/// Build and classify the equation; fails only on all-zero inertia.
pub fn build_euler_equation(
    algebra: &FrobeniusAlgebra<Rat>,
    inertia: InertiaSpec,
    zeta: AlgebraElement<Rat>,
) -> Result<EulerEquation, EulerError> {
    let l = algebra.dim();
    let u = AlgDiffPoly::symbol(FIELD_U, l);
    let m = AlgDiffPoly::symbol(FIELD_M, l);
    let m_of_u = inertia.apply(&u, algebra);
    let rhs = coadjoint_rhs(&m, &u, &zeta, algebra).neg();
    let n = inertia.order();
    let alpha_nonzero = !inertia.alpha().is_zero();
    let alpha_invertible = algebra.invert(inertia.alpha()).is_ok();
    let kind = match n {
        0 if alpha_invertible && !zeta.is_zero() => EquationKind::FKdV,
        1 if alpha_nonzero && !inertia.coeff(1).is_zero() => EquationKind::FCh,
        1 if !alpha_nonzero && !inertia.coeff(1).is_zero() => EquationKind::FHs,
        _ => EquationKind::General,
    };
    Ok(EulerEquation {
        algebra: algebra.clone(),
        inertia,
        zeta,
        kind,
        m_of_u,
        rhs,
    })
}

impl EulerEquation {
    pub fn algebra(&self) -> &FrobeniusAlgebra<Rat> {
        &self.algebra
    }

    pub fn inertia(&self) -> &InertiaSpec {
        &self.inertia
    }

    pub fn zeta(&self) -> &AlgebraElement<Rat> {
        &self.zeta
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    /// `m` as a polynomial in u-jets.
    pub fn m_of_u(&self) -> &AlgDiffPoly {
        &self.m_of_u
    }

    /// `-(2 m o u_x + m_x o u + zeta o u_xxx)` in mixed (m, u) jets.
    pub fn rhs(&self) -> &AlgDiffPoly {
        &self.rhs
    }

    /// The right-hand side with `m = Lambda(u)` substituted.
    pub fn rhs_in_u(&self) -> AlgDiffPoly {
        self.rhs.substitute_field(FIELD_M, self.m_of_u.components())
    }

    /// Density of `H_1 = 1/2 tr int m o u dx` in u-jets. Defined for every
    /// inertia order.
    pub fn hamiltonian_h1(&self) -> DiffPoly {
        let u = AlgDiffPoly::symbol(FIELD_U, self.algebra.dim());
        self.m_of_u
            .mul(&u, &self.algebra)
            .trace(&self.algebra)
            .scale(&rat(1, 2))
    }

    /// Density of `H_2`; defined only for inertia order n <= 1.
    pub fn hamiltonian_h2(&self) -> Result<DiffPoly, EulerError> {
        let n = self.inertia.order();
        if n > 1 {
            return Err(EulerError::UnsupportedHamiltonian { order: n });
        }
        Ok(crate::algdiff::h2_density(
            self.inertia.alpha(),
            &self.inertia.beta(self.algebra.dim()),
            &self.zeta,
            &self.algebra,
        ))
    }

    /// `H_1` (and `H_2` when defined) under each given trace choice. All
    /// traces must share this equation's multiplication table; the flow does
    /// not depend on the trace, the functionals do.
    pub fn conserved_functionals(
        &self,
        traces: &[FrobeniusAlgebra<Rat>],
    ) -> Result<Vec<ConservedFunctionals>, EulerError> {
        let u = AlgDiffPoly::symbol(FIELD_U, self.algebra.dim());
        traces
            .iter()
            .map(|alg| {
                if !alg.same_table(&self.algebra) {
                    return Err(EulerError::MismatchedAlgebra);
                }
                let h1 = self.m_of_u.mul(&u, alg).trace(alg).scale(&rat(1, 2));
                let h2 = (self.inertia.order() <= 1).then(|| {
                    crate::algdiff::h2_density(
                        self.inertia.alpha(),
                        &self.inertia.beta(alg.dim()),
                        &self.zeta,
                        alg,
                    )
                });
                Ok(ConservedFunctionals {
                    trace_name: String::from(alg.trace_name()),
                    h1,
                    h2,
                })
            })
            .collect()
    }

    /// Check that `J_2` applied to `dH_1/dm = u` reproduces the right-hand
    /// side; valid for every inertia order, including n >= 2.
    pub fn rhs_is_hamiltonian_j2(&self) -> Report {
        let l = self.algebra.dim();
        let u = AlgDiffPoly::symbol(FIELD_U, l);
        let mut report = Report::new();

        // VD1 mechanics on the pairing density: with u held independent, the
        // m-gradient of 1/2 tr(m o u) is u/2 (the self-adjoint inertia
        // contributes the other half, giving dH1/dm = u).
        let m = AlgDiffPoly::symbol(FIELD_M, l);
        let h1_mixed = m
            .mul(&u, &self.algebra)
            .trace(&self.algebra)
            .scale(&rat(1, 2));
        let half_u = alg_variational_derivative(&h1_mixed, FIELD_M, &self.algebra);
        let vd1_residual = half_u.scale(&rat(2, 1)).sub(&u);
        report.push(if vd1_residual.is_zero() {
            IdentityCheck::pass("VD1: m-gradient of the pairing density is u/2")
        } else {
            IdentityCheck::fail(
                "VD1: m-gradient of the pairing density is u/2",
                format!("{vd1_residual}"),
            )
        });

        let j2u = poisson_apply_j2(&m, &self.zeta, &u, &self.algebra)
            .substitute_field(FIELD_M, self.m_of_u.components());
        let rhs_u = self.rhs_in_u();
        let residual = j2u.sub(&rhs_u);
        report.push(if residual.is_zero() {
            IdentityCheck::pass("m_t = {m, H1}_2: J2(dH1/dm) reproduces the flow")
        } else {
            IdentityCheck::fail(
                "m_t = {m, H1}_2: J2(dH1/dm) reproduces the flow",
                format!("{residual}"),
            )
        });
        report
    }
}

/// Conserved functional densities under one trace choice.
#[derive(Debug, Clone)]
pub struct ConservedFunctionals {
    pub trace_name: String,
    pub h1: DiffPoly,
    pub h2: Option<DiffPoly>,
}
