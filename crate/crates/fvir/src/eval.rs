//! Pointwise numerical evaluation of symbolic differential polynomials on
//! grid samples; the cross-check between the solver's right-hand side and the
//! exact algebra-valued expression goes through here.

use crate::grid::{GridField, SpectralCtx};
use fvir_core::algdiff::AlgDiffPoly;
use fvir_core::diffpoly::{DiffPoly, JetVar};
use num_traits::ToPrimitive;
use std::collections::HashMap;

/// Table of jet samples: for each `(field, component, order)` a grid column.
#[derive(Default)]
pub struct JetTable {
    data: HashMap<JetVar, Vec<f64>>,
    n: usize,
}

impl JetTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Register a field and its spectral derivatives up to `max_order`.
    pub fn insert_field(
        &mut self,
        ctx: &SpectralCtx,
        field: u16,
        values: &GridField,
        max_order: u16,
    ) {
        self.n = values.n();
        let spec = ctx.forward(values);
        for order in 0..=max_order {
            let g = if order == 0 {
                values.clone()
            } else {
                ctx.inverse(&ctx.derivative_spec(&spec, order as u32))
            };
            for c in 0..values.dim() {
                let col: Vec<f64> = (0..values.n()).map(|j| g.get(j, c)).collect();
                self.data.insert(JetVar::new(field, c as u16, order), col);
            }
        }
    }

    /// Evaluate one scalar polynomial on every grid point.
    pub fn eval(&self, p: &DiffPoly) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (mono, coeff) in p.terms() {
            let c = coeff.to_f64().unwrap_or(f64::NAN);
            for (j, slot) in out.iter_mut().enumerate() {
                let mut term = c;
                for (v, e) in mono.factors() {
                    let col = self
                        .data
                        .get(v)
                        .unwrap_or_else(|| panic!("jet {v:?} missing from the table"));
                    for _ in 0..*e {
                        term *= col[j];
                    }
                }
                *slot += term;
            }
        }
        out
    }

    /// Evaluate an algebra-valued polynomial into a grid field.
    pub fn eval_alg(&self, p: &AlgDiffPoly, length: f64) -> GridField {
        let dim = p.dim();
        let mut g = GridField::zeros(self.n, dim, length).unwrap();
        for (c, comp) in p.components().iter().enumerate() {
            let col = self.eval(comp);
            for (j, v) in col.into_iter().enumerate() {
                g.set(j, c, v);
            }
        }
        g
    }
}
