//! Scalar abstraction: the algebra layer is generic over exact rationals
//! (symbolic verification) and `f64` (the numerical solver).

use crate::Rat;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};
use num_traits::{One, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact scalars compare to zero structurally; floating scalars use
    /// tolerance thresholds scaled by the data.
    const IS_EXACT: bool;

    fn from_rat(r: &Rat) -> Self;

    fn from_int(n: i64) -> Self;

    /// Approximate magnitude, used for pivot selection and tolerance tests.
    fn magnitude(&self) -> f64;

    fn is_zero_within(&self, tol: f64, scale: f64) -> bool {
        if Self::IS_EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol * scale
        }
    }
}

impl Scalar for Rat {
    const IS_EXACT: bool = true;

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn from_int(n: i64) -> Self {
        crate::rint(n)
    }

    fn magnitude(&self) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::MAX)
    }
}

impl Scalar for f64 {
    const IS_EXACT: bool = false;

    fn from_rat(r: &Rat) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn magnitude(&self) -> f64 {
        // f64::abs is not available in core
        if *self < 0.0 {
            -*self
        } else {
            *self
        }
    }
}

/// LU-style inversion with partial pivoting for a small row-major `n x n`
/// matrix. Returns `(inverse, det)`, or `None` when the matrix is singular:
/// exactly for exact scalars, or when `|det| <= tol * max(1, max|entry|)^n`
/// for floating ones.
pub(crate) fn invert_matrix<T: Scalar>(n: usize, a: &[T], tol: f64) -> Option<(Vec<T>, T)> {
    assert_eq!(a.len(), n * n);
    let mut work: Vec<T> = a.to_vec();
    let mut inv: Vec<T> = vec![T::zero(); n * n];
    for i in 0..n {
        inv[i * n + i] = T::one();
    }
    let max_entry = a.iter().map(Scalar::magnitude).fold(1.0_f64, f64::max);
    let mut scale = 1.0_f64;
    for _ in 0..n {
        scale *= max_entry;
    }
    let mut det = T::one();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                work[r * n + col]
                    .magnitude()
                    .total_cmp(&work[s * n + col].magnitude())
            })
            .unwrap();
        if work[pivot_row * n + col].is_zero() {
            return None;
        }
        if pivot_row != col {
            for k in 0..n {
                work.swap(pivot_row * n + k, col * n + k);
                inv.swap(pivot_row * n + k, col * n + k);
            }
            det = -det;
        }
        let p = work[col * n + col].clone();
        det = det * p.clone();
        for k in 0..n {
            work[col * n + k] = work[col * n + k].clone() / p.clone();
            inv[col * n + k] = inv[col * n + k].clone() / p.clone();
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = work[r * n + col].clone();
            if f.is_zero() {
                continue;
            }
            for k in 0..n {
                work[r * n + k] = work[r * n + k].clone() - f.clone() * work[col * n + k].clone();
                inv[r * n + k] = inv[r * n + k].clone() - f.clone() * inv[col * n + k].clone();
            }
        }
    }
    if det.is_zero_within(tol, scale) {
        return None;
    }
    Some((inv, det))
}

/// Determinant by elimination; shares the singularity convention of
/// [`invert_matrix`] but always returns the computed value.
pub(crate) fn det_matrix<T: Scalar>(n: usize, a: &[T]) -> T {
    assert_eq!(a.len(), n * n);
    let mut work: Vec<T> = a.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                work[r * n + col]
                    .magnitude()
                    .total_cmp(&work[s * n + col].magnitude())
            })
            .unwrap();
        if work[pivot_row * n + col].is_zero() {
            return T::zero();
        }
        if pivot_row != col {
            for k in 0..n {
                work.swap(pivot_row * n + k, col * n + k);
            }
            det = -det;
        }
        let p = work[col * n + col].clone();
        det = det * p.clone();
        for r in (col + 1)..n {
            let f = work[r * n + col].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            for k in col..n {
                work[r * n + k] = work[r * n + k].clone() - f.clone() * work[col * n + k].clone();
            }
        }
    }
    det
}
