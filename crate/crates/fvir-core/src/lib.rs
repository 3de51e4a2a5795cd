//! Exact symbolic core for Frobenius-algebra-valued Euler equations on the
//! circle: finite-dimensional Frobenius algebras, differential polynomials in
//! jet variables, the x-bracket and its trace cocycle, variational calculus,
//! and the bihamiltonian verification suites.
//!
//! Everything here works over exact rational coefficients (or `f64` where the
//! algebra type is instantiated for numerics) and is `no_std` + `alloc`.

#![no_std]

extern crate alloc;

pub mod algdiff;
pub mod algebra;
pub mod diffpoly;
pub mod euler;
pub mod pairs;
pub mod printer;
pub mod report;
pub mod scalar;

/// Exact rational scalar used by all symbolic computations.
pub type Rat = num_rational::BigRational;

pub use algdiff::{AlgDiffPoly, DualElement, VirasoroElement};
pub use algebra::{AlgebraElement, AlgebraError, FrobeniusAlgebra};
pub use diffpoly::{DiffPoly, JetVar, Monomial};
pub use euler::{EquationKind, EulerEquation, EulerError, InertiaSpec};
pub use report::{IdentityCheck, Report};

/// Conventional field ids: moment variables (`m`, components `p`, `q`, ...)
/// sort before velocity variables (`u`, components `v`, `w`, ...).
pub const FIELD_M: u16 = 0;
/// Velocity field id, see [`FIELD_M`].
pub const FIELD_U: u16 = 1;

/// Shorthand for an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    use num_bigint::BigInt;
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an exact rational from an integer.
pub fn rint(num: i64) -> Rat {
    rat(num, 1)
}
