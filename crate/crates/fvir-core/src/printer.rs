//! Canonical componentwise pretty-printer for built Euler equations.
//!
//! Naming follows the worked two-dimensional examples: velocity components
//! print as `v, w` and moment components as `p, q` (with `u`/`m` in the
//! one-dimensional case). Output is deterministic: monomials print in the
//! canonical term order, so golden comparisons are exact.

use crate::algdiff::AlgDiffPoly;
use crate::diffpoly::{DiffPoly, JetVar};
use crate::euler::EulerEquation;
use crate::{FIELD_M, FIELD_U};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

/// Component names for one field at the given algebra dimension.
pub fn component_names(field: u16, dim: usize) -> Vec<String> {
    match (field, dim) {
        (FIELD_U, 1) => alloc::vec![String::from("u")],
        (FIELD_M, 1) => alloc::vec![String::from("m")],
        (FIELD_U, 2) => alloc::vec![String::from("v"), String::from("w")],
        (FIELD_M, 2) => alloc::vec![String::from("p"), String::from("q")],
        (FIELD_U, _) => (1..=dim).map(|k| format!("u{k}")).collect(),
        (FIELD_M, _) => (1..=dim).map(|k| format!("m{k}")).collect(),
        (f, _) => (1..=dim).map(|k| format!("f{f}c{k}")).collect(),
    }
}

/// Variable namer used by the componentwise printer: `v`, `v_x`, `v_xx`, ...
pub fn component_namer(dim: usize) -> impl Fn(JetVar) -> String {
    move |v: JetVar| {
        let names = component_names(v.field, dim);
        let mut s = names
            .get(v.component as usize)
            .cloned()
            .unwrap_or_else(|| format!("f{}c{}", v.field, v.component));
        if v.order > 0 {
            s.push('_');
            for _ in 0..v.order {
                s.push('x');
            }
        }
        s
    }
}

/// Format `p` as a continuation of an expression already on the line:
/// `" + ..."` or `" - ..."`.
fn continuation(p: &DiffPoly, namer: &dyn Fn(JetVar) -> String) -> String {
    let s = p.format_with(namer);
    if let Some(rest) = s.strip_prefix('-') {
        format!(" - {rest}")
    } else {
        format!(" + {s}")
    }
}

/// Componentwise system of a built equation, one line per component, followed
/// by the `m = Lambda(u)` constraint lines when the moment variables are kept.
/// A purely algebraic inertia with unit leading coefficient (`m = u`) is
/// substituted away, matching the usual presentation of the KdV reduction.
pub fn expand_equation(eq: &EulerEquation) -> Vec<String> {
    let dim = eq.algebra().dim();
    let namer = component_namer(dim);
    let substitute_m = eq.inertia().order() == 0 && eq.inertia().alpha() == eq.algebra().unit();
    let mut lines = Vec::new();
    if substitute_m {
        let rhs = eq.rhs_in_u();
        let unames = component_names(FIELD_U, dim);
        for k in 0..dim {
            lines.push(equation_line(&unames[k], &rhs.component(k).neg(), &namer));
        }
    } else {
        let mnames = component_names(FIELD_M, dim);
        for k in 0..dim {
            lines.push(equation_line(
                &mnames[k],
                &eq.rhs().component(k).neg(),
                &namer,
            ));
        }
        for k in 0..dim {
            lines.push(format!(
                "{} = {}",
                mnames[k],
                eq.m_of_u().component(k).format_with(&namer)
            ));
        }
    }
    lines
}

fn equation_line(name: &str, moved_rhs: &DiffPoly, namer: &dyn Fn(JetVar) -> String) -> String {
    if moved_rhs.is_zero() {
        format!("{name}_t = 0")
    } else {
        format!("{name}_t{} = 0", continuation(moved_rhs, namer))
    }
}

/// Project an algebra-valued equation onto the basis: the scalar component
/// polynomials, paired with their printed form.
pub fn expand_components(equation: &AlgDiffPoly, dim: usize) -> Vec<(DiffPoly, String)> {
    let namer = component_namer(dim);
    equation
        .components()
        .iter()
        .map(|p| (p.clone(), p.format_with(&namer)))
        .collect()
}

/// Render a density (e.g. a conserved functional) in the componentwise names.
pub fn format_density(p: &DiffPoly, dim: usize) -> String {
    p.format_with(&component_namer(dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraElement, FrobeniusAlgebra};
    use crate::euler::{build_euler_equation, InertiaSpec};
    use crate::{rint, Rat};
    use alloc::string::ToString;

    fn z2_eq(eps: i64, alpha: [i64; 2], beta: [i64; 2], zeta: [i64; 2]) -> EulerEquation {
        let alg = FrobeniusAlgebra::<Rat>::z2(rint(eps), 2).unwrap();
        let elem = |c: [i64; 2]| AlgebraElement::new(alloc::vec![rint(c[0]), rint(c[1])]);
        let inertia = if beta == [0, 0] {
            InertiaSpec::new(alloc::vec![elem(alpha)]).unwrap()
        } else {
            InertiaSpec::order_one(elem(alpha), elem(beta)).unwrap()
        };
        build_euler_equation(&alg, inertia, elem(zeta)).unwrap()
    }

    #[test]
    fn scalar_kdv_line() {
        let alg = FrobeniusAlgebra::<Rat>::reals();
        let one = AlgebraElement::new(alloc::vec![rint(1)]);
        let eq = build_euler_equation(
            &alg,
            InertiaSpec::new(alloc::vec![one.clone()]).unwrap(),
            one,
        )
        .unwrap();
        assert_eq!(
            expand_equation(&eq),
            alloc::vec!["u_t + 3*u*u_x + u_xxx = 0".to_string()]
        );
    }

    #[test]
    fn z2_kdv_matches_componentwise_system() {
        let eq = z2_eq(1, [1, 0], [0, 0], [1, 0]);
        assert_eq!(
            expand_equation(&eq),
            alloc::vec![
                "v_t + 3*v*v_x + v_xxx + 3*w*w_x = 0".to_string(),
                "w_t + 3*v*w_x + 3*v_x*w + w_xxx = 0".to_string(),
            ]
        );
    }

    #[test]
    fn z2_ch_keeps_moment_variables() {
        let eq = z2_eq(2, [1, 0], [1, 0], [0, 0]);
        assert_eq!(
            expand_equation(&eq),
            alloc::vec![
                "p_t + 2*p*v_x + p_x*v + 4*q*w_x + 2*q_x*w = 0".to_string(),
                "q_t + 2*p*w_x + p_x*w + 2*q*v_x + q_x*v = 0".to_string(),
                "p = v - v_xx".to_string(),
                "q = w - w_xx".to_string(),
            ]
        );
    }

    #[test]
    fn expand_components_projects_on_basis() {
        let eq = z2_eq(1, [1, 0], [0, 0], [1, 0]);
        let comps = expand_components(&eq.rhs_in_u(), 2);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].1, "-3*v*v_x - v_xxx - 3*w*w_x");
        assert_eq!(comps[1].1, "-3*v*w_x - 3*v_x*w - w_xxx");
        // dim-1 projection is the input itself
        let alg = FrobeniusAlgebra::<Rat>::reals();
        let one = AlgebraElement::new(alloc::vec![rint(1)]);
        let eq1 = build_euler_equation(
            &alg,
            InertiaSpec::new(alloc::vec![one.clone()]).unwrap(),
            one,
        )
        .unwrap();
        let rhs = eq1.rhs_in_u();
        let comps = expand_components(&rhs, 1);
        assert_eq!(&comps[0].0, rhs.component(0));
    }

    #[test]
    fn z2_hs_constraints() {
        let eq = z2_eq(-1, [0, 0], [1, 0], [0, 0]);
        let lines = expand_equation(&eq);
        assert_eq!(lines[2], "p = -v_xx");
        assert_eq!(lines[3], "q = -w_xx");
        assert_eq!(lines[0], "p_t + 2*p*v_x + p_x*v - 2*q*w_x - q_x*w = 0");
    }
}
