//! Finite-dimensional commutative associative algebras with a trace
//! functional, validated against the Frobenius axioms on construction.

use crate::scalar::{det_matrix, invert_matrix, Scalar};
use crate::Rat;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Residual tolerance for axiom checks in floating mode.
const AXIOM_TOL: f64 = 1e-14;
/// Determinant tolerance for nondegeneracy/invertibility in floating mode.
const DET_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    ShapeMismatch(&'static str),
    CommutativityViolation { i: usize, j: usize },
    AssociativityViolation { i: usize, j: usize, k: usize },
    UnitViolation { i: usize },
    DegenerateTrace,
    DimensionMismatch { expected: usize, got: usize },
    NotInvertible,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::ShapeMismatch(what) => write!(f, "shape mismatch in {what}"),
            AlgebraError::CommutativityViolation { i, j } => {
                write!(f, "commutativity violated at basis pair ({i},{j})")
            }
            AlgebraError::AssociativityViolation { i, j, k } => {
                write!(f, "associativity violated at basis triple ({i},{j},{k})")
            }
            AlgebraError::UnitViolation { i } => {
                write!(f, "unit axiom violated on basis element {i}")
            }
            AlgebraError::DegenerateTrace => write!(f, "trace form is degenerate"),
            AlgebraError::DimensionMismatch { expected, got } => {
                write!(
                    f,
                    "element dimension {got} does not match algebra dimension {expected}"
                )
            }
            AlgebraError::NotInvertible => write!(f, "element is not invertible"),
        }
    }
}

impl core::error::Error for AlgebraError {}

/// Coefficient vector in the algebra basis `e_1, ..., e_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> AlgebraElement<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coeffs: vec![T::zero(); dim],
        }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); dim];
        coeffs[k] = T::one();
        Self { coeffs }
    }

    pub fn from_rats(rs: &[Rat]) -> Self {
        Self {
            coeffs: rs.iter().map(T::from_rat).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| -a.clone()).collect(),
        }
    }
}

/// A commutative associative unital algebra together with one chosen trace
/// functional. The Gram matrix `g(e_i,e_j) = tr(e_i o e_j)` and its inverse
/// are precomputed; construction fails if any axiom or nondegeneracy fails.
#[derive(Debug, Clone)]
pub struct FrobeniusAlgebra<T> {
    dim: usize,
    /// `e_i o e_j = sum_k structure[(i*dim + j)*dim + k] e_k`
    structure: Vec<T>,
    unit: AlgebraElement<T>,
    trace_vec: Vec<T>,
    trace_name: String,
    gram: Vec<T>,
    gram_inv: Vec<T>,
}

impl<T: Scalar> FrobeniusAlgebra<T> {
    pub fn new(
        dim: usize,
        structure: Vec<T>,
        unit: Vec<T>,
        trace: Vec<T>,
        trace_name: &str,
    ) -> Result<Self, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::ShapeMismatch("dim must be >= 1"));
        }
        if structure.len() != dim * dim * dim {
            return Err(AlgebraError::ShapeMismatch("structure constants"));
        }
        if unit.len() != dim {
            return Err(AlgebraError::ShapeMismatch("unit"));
        }
        if trace.len() != dim {
            return Err(AlgebraError::ShapeMismatch("trace"));
        }
        let scale = structure
            .iter()
            .map(Scalar::magnitude)
            .fold(1.0_f64, f64::max);
        let scale = scale * scale;
        let c = |i: usize, j: usize, k: usize| &structure[(i * dim + j) * dim + k];
        for i in 0..dim {
            for j in 0..i {
                for k in 0..dim {
                    let d = c(i, j, k).clone() - c(j, i, k).clone();
                    if !d.is_zero_within(AXIOM_TOL, scale) {
                        return Err(AlgebraError::CommutativityViolation { i, j });
                    }
                }
            }
        }
        // (e_i o e_j) o e_k = e_i o (e_j o e_k) componentwise
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for m in 0..dim {
                        let mut lhs = T::zero();
                        let mut rhs = T::zero();
                        for s in 0..dim {
                            lhs = lhs + c(i, j, s).clone() * c(s, k, m).clone();
                            rhs = rhs + c(j, k, s).clone() * c(i, s, m).clone();
                        }
                        if !(lhs - rhs).is_zero_within(AXIOM_TOL, scale) {
                            return Err(AlgebraError::AssociativityViolation { i, j, k });
                        }
                    }
                }
            }
        }
        // unit o e_i = e_i
        for i in 0..dim {
            for k in 0..dim {
                let mut acc = T::zero();
                for s in 0..dim {
                    acc = acc + unit[s].clone() * c(s, i, k).clone();
                }
                let want = if k == i { T::one() } else { T::zero() };
                if !(acc - want).is_zero_within(AXIOM_TOL, scale) {
                    return Err(AlgebraError::UnitViolation { i });
                }
            }
        }
        let mut gram = vec![T::zero(); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut acc = T::zero();
                for k in 0..dim {
                    acc = acc + c(i, j, k).clone() * trace[k].clone();
                }
                gram[i * dim + j] = acc;
            }
        }
        let gmax = gram.iter().map(Scalar::magnitude).fold(1.0_f64, f64::max);
        let det = det_matrix(dim, &gram);
        if det.is_zero_within(DET_TOL, gmax) {
            return Err(AlgebraError::DegenerateTrace);
        }
        let (gram_inv, _) =
            invert_matrix(dim, &gram, DET_TOL).ok_or(AlgebraError::DegenerateTrace)?;
        Ok(Self {
            dim,
            structure,
            unit: AlgebraElement::new(unit),
            trace_vec: trace,
            trace_name: trace_name.to_string(),
            gram,
            gram_inv,
        })
    }

    /// The one-dimensional algebra R with tr = id.
    pub fn reals() -> Self {
        Self::new(1, vec![T::one()], vec![T::one()], vec![T::one()], "tr").unwrap()
    }

    /// `Z_2^eps`: basis `e_1 = 1`, `e_2` with `e_2 o e_2 = eps e_1`, carrying
    /// the basic trace `tr^(k)(A) = a_k + a_2 (1 - delta_{k,2}) delta_{eps,0}`
    /// for `k` in `{1, 2}`.
    pub fn z2(eps: T, trace_index: usize) -> Result<Self, AlgebraError> {
        if trace_index != 1 && trace_index != 2 {
            return Err(AlgebraError::ShapeMismatch("Z2 trace index must be 1 or 2"));
        }
        let z = T::zero();
        let o = T::one();
        #[rustfmt::skip]
        let structure = vec![
            // e1 o e1 = e1 ; e1 o e2 = e2
            o.clone(), z.clone(),   z.clone(), o.clone(),
            // e2 o e1 = e2 ; e2 o e2 = eps e1
            z.clone(), o.clone(),   eps.clone(), z.clone(),
        ];
        let trace = if trace_index == 1 {
            let second = if eps.is_zero() { T::one() } else { T::zero() };
            vec![o.clone(), second]
        } else {
            vec![z.clone(), o.clone()]
        };
        let name = if trace_index == 1 { "tr1" } else { "tr2" };
        Self::new(2, structure, vec![o, z], trace, name)
    }

    /// `Z_l = R[t]/(t^l)` with basis `1, t, ..., t^(l-1)` and a caller-chosen
    /// trace covector.
    pub fn zl(l: usize, trace: Vec<T>, trace_name: &str) -> Result<Self, AlgebraError> {
        let mut structure = vec![T::zero(); l * l * l];
        for i in 0..l {
            for j in 0..l {
                if i + j < l {
                    structure[(i * l + j) * l + (i + j)] = T::one();
                }
            }
        }
        let mut unit = vec![T::zero(); l];
        unit[0] = T::one();
        Self::new(l, structure, unit, trace, trace_name)
    }

    /// `Z_l` with the trace that picks the coefficient of `t^(l-1)`.
    pub fn zl_top(l: usize) -> Result<Self, AlgebraError> {
        let mut trace = vec![T::zero(); l];
        trace[l - 1] = T::one();
        Self::zl(l, trace, "top")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &AlgebraElement<T> {
        &self.unit
    }

    pub fn trace_vec(&self) -> &[T] {
        &self.trace_vec
    }

    pub fn trace_name(&self) -> &str {
        &self.trace_name
    }

    pub fn gram(&self) -> &[T] {
        &self.gram
    }

    pub fn gram_inv(&self) -> &[T] {
        &self.gram_inv
    }

    pub fn structure_const(&self, i: usize, j: usize, k: usize) -> &T {
        &self.structure[(i * self.dim + j) * self.dim + k]
    }

    /// True when `other` has the same multiplication table (same scalar data),
    /// regardless of the trace choice.
    pub fn same_table(&self, other: &Self) -> bool {
        self.dim == other.dim && self.structure == other.structure
    }

    fn check_dim(&self, a: &AlgebraElement<T>) -> Result<(), AlgebraError> {
        if a.dim() != self.dim {
            Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                got: a.dim(),
            })
        } else {
            Ok(())
        }
    }

    pub fn multiply(
        &self,
        a: &AlgebraElement<T>,
        b: &AlgebraElement<T>,
    ) -> Result<AlgebraElement<T>, AlgebraError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let mut out = vec![T::zero(); self.dim];
        for i in 0..self.dim {
            if a.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if b.coeffs[j].is_zero() {
                    continue;
                }
                let ab = a.coeffs[i].clone() * b.coeffs[j].clone();
                for k in 0..self.dim {
                    let c = self.structure_const(i, j, k);
                    if !c.is_zero() {
                        out[k] = out[k].clone() + ab.clone() * c.clone();
                    }
                }
            }
        }
        Ok(AlgebraElement::new(out))
    }

    pub fn trace(&self, a: &AlgebraElement<T>) -> Result<T, AlgebraError> {
        self.check_dim(a)?;
        let mut acc = T::zero();
        for (t, c) in self.trace_vec.iter().zip(&a.coeffs) {
            acc = acc + t.clone() * c.clone();
        }
        Ok(acc)
    }

    /// `g(a,b) = tr(a o b)`.
    pub fn pairing_form(
        &self,
        a: &AlgebraElement<T>,
        b: &AlgebraElement<T>,
    ) -> Result<T, AlgebraError> {
        let ab = self.multiply(a, b)?;
        self.trace(&ab)
    }

    /// Row-major matrix of left multiplication by `a`:
    /// `L_a . coeffs(b) = coeffs(a o b)`.
    pub fn left_mult_matrix(&self, a: &AlgebraElement<T>) -> Vec<T> {
        assert_eq!(a.dim(), self.dim, "element dimension mismatch");
        let mut mat = vec![T::zero(); self.dim * self.dim];
        for j in 0..self.dim {
            for i in 0..self.dim {
                if a.coeffs[i].is_zero() {
                    continue;
                }
                for k in 0..self.dim {
                    let c = self.structure_const(i, j, k);
                    if !c.is_zero() {
                        mat[k * self.dim + j] =
                            mat[k * self.dim + j].clone() + a.coeffs[i].clone() * c.clone();
                    }
                }
            }
        }
        mat
    }

    /// Multiplicative inverse via the regular representation.
    pub fn invert(&self, a: &AlgebraElement<T>) -> Result<AlgebraElement<T>, AlgebraError> {
        self.check_dim(a)?;
        let mat = self.left_mult_matrix(a);
        let (inv, _) = invert_matrix(self.dim, &mat, DET_TOL).ok_or(AlgebraError::NotInvertible)?;
        let mut out = vec![T::zero(); self.dim];
        for k in 0..self.dim {
            for j in 0..self.dim {
                out[k] =
                    out[k].clone() + inv[k * self.dim + j].clone() * self.unit.coeffs[j].clone();
            }
        }
        Ok(AlgebraElement::new(out))
    }

    /// Rebuild the same algebra over a different scalar type, re-running the
    /// axiom checks of the target arithmetic.
    pub fn map_scalar<U: Scalar>(
        &self,
        f: impl Fn(&T) -> U,
    ) -> Result<FrobeniusAlgebra<U>, AlgebraError> {
        FrobeniusAlgebra::new(
            self.dim,
            self.structure.iter().map(&f).collect(),
            self.unit.coeffs.iter().map(&f).collect(),
            self.trace_vec.iter().map(&f).collect(),
            &self.trace_name,
        )
    }
}

impl FrobeniusAlgebra<Rat> {
    /// Floating-point instance of the same algebra, revalidated with the
    /// floating tolerances.
    pub fn to_f64(&self) -> Result<FrobeniusAlgebra<f64>, AlgebraError> {
        use num_traits::ToPrimitive;
        self.map_scalar(|r| r.to_f64().unwrap_or(f64::NAN))
    }
}
