//! Exact differential polynomials in jet variables `u_i^{(n)}`.
//!
//! A [`DiffPoly`] is a canonical sum of monomials with rational coefficients;
//! variables carry a field id (several independent fields may coexist, e.g.
//! `m` and `u`), a component index within the algebra basis, and a derivative
//! order. Canonical form is maintained by construction, so structural equality
//! is mathematical equality.

use crate::Rat;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use num_traits::{One, Signed, Zero};

/// One jet variable: component `component` of field `field`, differentiated
/// `order` times in x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub field: u16,
    pub component: u16,
    pub order: u16,
}

impl JetVar {
    pub fn new(field: u16, component: u16, order: u16) -> Self {
        Self {
            field,
            component,
            order,
        }
    }

    fn raised(self) -> Self {
        Self {
            order: self.order + 1,
            ..self
        }
    }
}

/// Product of jet variables with positive integer exponents, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    factors: Vec<(JetVar, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    pub fn var(v: JetVar) -> Self {
        Self {
            factors: vec![(v, 1)],
        }
    }

    pub fn from_factors(mut factors: Vec<(JetVar, u32)>) -> Self {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(JetVar, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Self { factors: merged }
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self::from_factors(factors)
    }

    /// Sum of derivative orders over all factors (with multiplicity).
    pub fn total_order(&self) -> u32 {
        self.factors.iter().map(|(v, e)| v.order as u32 * e).sum()
    }

    /// Polynomial degree (sum of exponents).
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.factors.iter();
        let mut b = other.factors.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((va, ea)), Some((vb, eb))) => {
                    match va.cmp(vb) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                    // higher exponent of the same variable sorts first
                    match eb.cmp(ea) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical differential polynomial: sorted monomials, merged like terms,
/// no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        p.insert(Monomial::one(), c);
        p
    }

    pub fn var(v: JetVar) -> Self {
        let mut p = Self::zero();
        p.insert(Monomial::var(v), Rat::one());
        p
    }

    /// Single term `c * prod v_i^(e_i)`.
    pub fn monomial(c: Rat, factors: &[(JetVar, u32)]) -> Self {
        let mut p = Self::zero();
        p.insert(Monomial::from_factors(factors.to_vec()), c);
        p
    }

    pub fn insert(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(Rat::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Total x-derivative; obeys the Leibniz rule and raises the total
    /// derivative order of every monomial by exactly one.
    pub fn total_x_derivative(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            for (idx, &(v, e)) in m.factors.iter().enumerate() {
                let mut factors = m.factors.clone();
                if e == 1 {
                    factors.remove(idx);
                } else {
                    factors[idx].1 = e - 1;
                }
                factors.push((v.raised(), 1));
                out.insert(
                    Monomial::from_factors(factors),
                    c * Rat::from_integer(e.into()),
                );
            }
        }
        out
    }

    pub fn dxn(&self, n: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.total_x_derivative();
        }
        out
    }

    /// Partial derivative with respect to one jet variable.
    pub fn partial(&self, v: JetVar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if let Some(idx) = m.factors.iter().position(|&(w, _)| w == v) {
                let e = m.factors[idx].1;
                let mut factors = m.factors.clone();
                if e == 1 {
                    factors.remove(idx);
                } else {
                    factors[idx].1 = e - 1;
                }
                out.insert(
                    Monomial::from_factors(factors),
                    c * Rat::from_integer(e.into()),
                );
            }
        }
        out
    }

    /// Highest derivative order of the given field component appearing.
    fn max_order_of(&self, field: u16, component: u16) -> Option<u16> {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter())
            .filter(|(v, _)| v.field == field && v.component == component)
            .map(|(v, _)| v.order)
            .max()
    }

    /// Highest total derivative order over all monomials.
    pub fn max_total_order(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_order)
            .max()
            .unwrap_or(0)
    }

    /// All `(field, component)` pairs appearing in the polynomial.
    pub fn components_present(&self) -> Vec<(u16, u16)> {
        let mut out: Vec<(u16, u16)> = self
            .terms
            .keys()
            .flat_map(|m| m.factors.iter().map(|(v, _)| (v.field, v.component)))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Variational derivative `sum_n (-D)^n d/d u^(n)` with respect to one
    /// field component. Annihilates total derivatives.
    pub fn euler_operator(&self, field: u16, component: u16) -> Self {
        let Some(max_order) = self.max_order_of(field, component) else {
            return Self::zero();
        };
        let mut out = Self::zero();
        for n in 0..=max_order {
            let p = self.partial(JetVar::new(field, component, n));
            if p.is_zero() {
                continue;
            }
            let dn = p.dxn(n as u32);
            out = if n % 2 == 0 {
                out.add(&dn)
            } else {
                out.sub(&dn)
            };
        }
        out
    }

    /// True iff the polynomial is a total x-derivative (plus a constant),
    /// decided by vanishing of the Euler operator in every component.
    pub fn is_total_derivative(&self) -> bool {
        self.components_present()
            .into_iter()
            .all(|(f, c)| self.euler_operator(f, c).is_zero())
    }

    /// Replace every jet of `field` by the corresponding derivative of the
    /// given component expressions (`replacements[c]` substitutes the order-0
    /// jet of component `c`).
    pub fn substitute_field(&self, field: u16, replacements: &[DiffPoly]) -> Self {
        let mut cache: BTreeMap<(u16, u16), DiffPoly> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for &(v, e) in &m.factors {
                if v.field == field {
                    let repl = cache
                        .entry((v.component, v.order))
                        .or_insert_with(|| replacements[v.component as usize].dxn(v.order as u32))
                        .clone();
                    acc = acc.mul(&repl.pow(e));
                } else {
                    acc = acc.mul(&Self::monomial(Rat::one(), &[(v, e)]));
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Render with a caller-chosen variable namer.
    pub fn format_with(&self, namer: &dyn Fn(JetVar) -> String) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff_is_one = abs.is_one();
            if !coeff_is_one || m.is_one() {
                let _ = write!(s, "{abs}");
            }
            if !m.is_one() {
                if !coeff_is_one {
                    s.push('*');
                }
                for (fi, (v, e)) in m.factors.iter().enumerate() {
                    if fi > 0 {
                        s.push('*');
                    }
                    s.push_str(&namer(*v));
                    if *e > 1 {
                        let _ = write!(s, "^{e}");
                    }
                }
            }
        }
        s
    }
}

/// Default naming: field 0 prints as `m`/`p`/`q`, field 1 as `u`/`v`/`w`,
/// higher fields as `f<id>c<comp>`. Used for report residuals.
pub fn default_namer(v: JetVar) -> String {
    use core::fmt::Write;
    let mut s = match (v.field, v.component) {
        (crate::FIELD_M, c) => generic_name(&["m"], &["p", "q"], c),
        (crate::FIELD_U, c) => generic_name(&["u"], &["v", "w"], c),
        (f, c) => {
            let mut s = String::new();
            let _ = write!(s, "f{f}c{c}");
            s
        }
    };
    if v.order > 0 {
        s.push('_');
        for _ in 0..v.order {
            s.push('x');
        }
    }
    s
}

fn generic_name(one: &[&str], two: &[&str], c: u16) -> String {
    use core::fmt::Write;
    if (c as usize) < two.len() {
        String::from(two[c as usize])
    } else {
        let mut s = String::from(one[0]);
        let _ = write!(s, "{}", c + 1);
        s
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_namer))
    }
}

/// Solve `sum_k op[k] * D^k(y) = rhs` for a differential polynomial `y`,
/// where `op` lists rational coefficients by derivative order. The solution
/// is sought in the span of monomials sharing a multidegree with some
/// monomial of `rhs` and bounded total order; `None` when no
/// differential-polynomial preimage exists.
pub fn solve_const_coeff_preimage(op: &[Rat], rhs: &DiffPoly) -> Option<DiffPoly> {
    if rhs.is_zero() {
        return Some(DiffPoly::zero());
    }
    if op.iter().all(Zero::is_zero) {
        return None;
    }
    // candidate monomials
    let max_order = rhs.max_total_order();
    let mut signatures: Vec<Vec<((u16, u16), u32)>> = Vec::new();
    for (m, _) in rhs.terms() {
        let mut sig: BTreeMap<(u16, u16), u32> = BTreeMap::new();
        for (v, e) in m.factors() {
            *sig.entry((v.field, v.component)).or_insert(0) += e;
        }
        let sig: Vec<_> = sig.into_iter().collect();
        if !signatures.contains(&sig) {
            signatures.push(sig);
        }
    }
    let mut candidates: Vec<Monomial> = Vec::new();
    for sig in &signatures {
        enumerate_monomials(sig, 0, max_order, &mut Vec::new(), &mut candidates);
    }
    candidates.sort();
    candidates.dedup();
    // linear system: columns = candidates, rows = monomials of L(candidate) and rhs
    let images: Vec<DiffPoly> = candidates
        .iter()
        .map(|m| {
            let base = DiffPoly::monomial(Rat::one(), m.factors());
            let mut acc = DiffPoly::zero();
            for (k, ck) in op.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                acc = acc.add(&base.dxn(k as u32).scale(ck));
            }
            acc
        })
        .collect();
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for img in &images {
        for (m, _) in img.terms() {
            let next = row_index.len();
            row_index.entry(m.clone()).or_insert(next);
        }
    }
    for (m, _) in rhs.terms() {
        let next = row_index.len();
        row_index.entry(m.clone()).or_insert(next);
    }
    let nrows = row_index.len();
    let ncols = candidates.len();
    let mut aug = vec![Rat::zero(); nrows * (ncols + 1)];
    for (col, img) in images.iter().enumerate() {
        for (m, c) in img.terms() {
            aug[row_index[m] * (ncols + 1) + col] = c.clone();
        }
    }
    for (m, c) in rhs.terms() {
        aug[row_index[m] * (ncols + 1) + ncols] = c.clone();
    }
    let solution = solve_exact(nrows, ncols, &mut aug)?;
    let mut y = DiffPoly::zero();
    for (m, c) in candidates.into_iter().zip(solution) {
        y.insert(m, c);
    }
    // final consistency check against the original equation
    let mut check = DiffPoly::zero();
    for (k, ck) in op.iter().enumerate() {
        if !ck.is_zero() {
            check = check.add(&y.dxn(k as u32).scale(ck));
        }
    }
    if check == *rhs {
        Some(y)
    } else {
        None
    }
}

fn enumerate_monomials(
    sig: &[((u16, u16), u32)],
    pos: usize,
    order_budget: u32,
    acc: &mut Vec<(JetVar, u32)>,
    out: &mut Vec<Monomial>,
) {
    if pos == sig.len() {
        out.push(Monomial::from_factors(acc.clone()));
        return;
    }
    let ((field, comp), degree) = sig[pos];
    // multisets of `degree` orders with total <= order_budget, nondecreasing
    fn rec(
        field: u16,
        comp: u16,
        remaining: u32,
        min_order: u32,
        budget: u32,
        acc: &mut Vec<(JetVar, u32)>,
        cont: &mut dyn FnMut(&mut Vec<(JetVar, u32)>, u32),
    ) {
        if remaining == 0 {
            cont(acc, budget);
            return;
        }
        let mut order = min_order;
        while order * remaining <= budget {
            acc.push((JetVar::new(field, comp, order as u16), 1));
            rec(field, comp, remaining - 1, order, budget - order, acc, cont);
            acc.pop();
            order += 1;
        }
    }
    let sig_owned = sig.to_vec();
    let mut cont = |acc: &mut Vec<(JetVar, u32)>, budget_left: u32| {
        enumerate_monomials(&sig_owned, pos + 1, budget_left, acc, out);
    };
    rec(field, comp, degree, 0, order_budget, acc, &mut cont);
}

/// Exact Gaussian elimination on an augmented matrix (row-major,
/// `ncols + 1` wide). Returns one solution (free variables set to zero) or
/// `None` when inconsistent.
fn solve_exact(nrows: usize, ncols: usize, aug: &mut [Rat]) -> Option<Vec<Rat>> {
    let w = ncols + 1;
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !aug[r * w + col].is_zero()) else {
            continue;
        };
        for k in 0..w {
            aug.swap(p * w + k, row * w + k);
        }
        let piv = aug[row * w + col].clone();
        for k in col..w {
            let val = aug[row * w + k].clone() / piv.clone();
            aug[row * w + k] = val;
        }
        for r in 0..nrows {
            if r != row && !aug[r * w + col].is_zero() {
                let f = aug[r * w + col].clone();
                for k in col..w {
                    let val = aug[r * w + k].clone() - f.clone() * aug[row * w + k].clone();
                    aug[r * w + k] = val;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
        if row == nrows {
            break;
        }
    }
    // inconsistent row: 0 ... 0 | nonzero
    for r in 0..nrows {
        if aug[r * w..r * w + ncols].iter().all(Zero::is_zero) && !aug[r * w + ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    for col in 0..ncols {
        if let Some(r) = pivot_of_col[col] {
            x[col] = aug[r * w + ncols].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{rat, rint, FIELD_U};

    fn u(c: u16, n: u16) -> JetVar {
        JetVar::new(FIELD_U, c, n)
    }

    #[test]
    fn leibniz_on_square() {
        // D(u1 * u1) = 2 u1 u1'
        let p = DiffPoly::monomial(rint(1), &[(u(0, 0), 2)]);
        let d = p.total_x_derivative();
        let want = DiffPoly::monomial(rint(2), &[(u(0, 0), 1), (u(0, 1), 1)]);
        assert_eq!(d, want);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        assert!(DiffPoly::constant(rat(5, 3)).total_x_derivative().is_zero());
    }

    #[test]
    fn leibniz_mixed_orders() {
        // D(u1^(1) u2^(2)) = u1^(2) u2^(2) + u1^(1) u2^(3)
        let p = DiffPoly::monomial(rint(1), &[(u(0, 1), 1), (u(1, 2), 1)]);
        let d = p.total_x_derivative();
        let want = DiffPoly::monomial(rint(1), &[(u(0, 2), 1), (u(1, 2), 1)])
            .add(&DiffPoly::monomial(rint(1), &[(u(0, 1), 1), (u(1, 3), 1)]));
        assert_eq!(d, want);
    }

    #[test]
    fn euler_standard_variational_identity() {
        // delta/delta u of (1/2)(u')^2 = -u''
        let p = DiffPoly::monomial(rat(1, 2), &[(u(0, 1), 2)]);
        let e = p.euler_operator(FIELD_U, 0);
        assert_eq!(e, DiffPoly::monomial(rint(-1), &[(u(0, 2), 1)]));
    }

    #[test]
    fn euler_cubic() {
        // delta/delta u of u^3 = 3u^2
        let p = DiffPoly::monomial(rint(1), &[(u(0, 0), 3)]);
        assert_eq!(
            p.euler_operator(FIELD_U, 0),
            DiffPoly::monomial(rint(3), &[(u(0, 0), 2)])
        );
    }

    #[test]
    fn euler_of_h2_density() {
        // delta/delta u of (1/2) u u'' = u''
        let p = DiffPoly::monomial(rat(1, 2), &[(u(0, 0), 1), (u(0, 2), 1)]);
        assert_eq!(
            p.euler_operator(FIELD_U, 0),
            DiffPoly::monomial(rint(1), &[(u(0, 2), 1)])
        );
    }

    #[test]
    fn total_derivative_detection() {
        let exact = DiffPoly::monomial(rint(1), &[(u(0, 0), 1), (u(0, 1), 1)]);
        assert!(exact.is_total_derivative());
        let not_exact = DiffPoly::monomial(rint(1), &[(u(0, 0), 1), (u(0, 2), 1)]);
        assert!(!not_exact.is_total_derivative());
    }

    #[test]
    fn substitution() {
        // substitute u -> v - v_xx into u_x gives v_x - v_xxx (field ids 0 -> 1)
        let p = DiffPoly::var(JetVar::new(0, 0, 1));
        let repl = DiffPoly::var(u(0, 0)).sub(&DiffPoly::var(u(0, 2)));
        let got = p.substitute_field(0, &[repl]);
        let want = DiffPoly::var(u(0, 1)).sub(&DiffPoly::var(u(0, 3)));
        assert_eq!(got, want);
    }

    #[test]
    fn preimage_helmholtz() {
        // (1 - D^2) y = w - w_xx  => y = w
        let rhs = DiffPoly::var(u(1, 0)).sub(&DiffPoly::var(u(1, 2)));
        let y = solve_const_coeff_preimage(&[rint(1), rint(0), rint(-1)], &rhs).unwrap();
        assert_eq!(y, DiffPoly::var(u(1, 0)));
    }

    #[test]
    fn preimage_minus_dxx() {
        // -D^2 y = -w_xx => y = w
        let rhs = DiffPoly::var(u(1, 2)).neg();
        let y = solve_const_coeff_preimage(&[rint(0), rint(0), rint(-1)], &rhs).unwrap();
        assert_eq!(y, DiffPoly::var(u(1, 0)));
    }

    #[test]
    fn preimage_nonlocal_case_rejected() {
        // (1 - D^2) y = v_xx has no differential-polynomial solution
        let rhs = DiffPoly::var(u(0, 2));
        assert!(solve_const_coeff_preimage(&[rint(1), rint(0), rint(-1)], &rhs).is_none());
    }

    #[test]
    fn display_formatting() {
        let p = DiffPoly::monomial(rint(3), &[(u(0, 0), 1), (u(0, 1), 1)])
            .add(&DiffPoly::monomial(rint(-1), &[(u(0, 2), 1)]))
            .add(&DiffPoly::monomial(rat(1, 2), &[(u(1, 0), 2)]));
        assert_eq!(alloc::format!("{p}"), "3*v*v_x - v_xx + 1/2*w^2");
    }
}
