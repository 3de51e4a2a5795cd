//! Periodic uniform grids of algebra-valued samples and the FFT layer:
//! transforms, wavenumbers, spectral derivatives, and 2/3-rule dealiasing.

use crate::solver::SolverError;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Samples of an algebra-valued function at `x_j = j L / N`; row = grid
/// point, column = algebra component.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    n: usize,
    dim: usize,
    length: f64,
    data: Vec<f64>,
}

impl GridField {
    pub fn zeros(n: usize, dim: usize, length: f64) -> Result<Self, SolverError> {
        if n < 16 || !n.is_power_of_two() {
            return Err(SolverError::InvalidGrid(format!(
                "grid size {n} must be a power of two >= 16"
            )));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(SolverError::InvalidGrid(format!(
                "domain length {length} must be positive"
            )));
        }
        if dim == 0 {
            return Err(SolverError::InvalidGrid(
                "algebra dimension must be >= 1".into(),
            ));
        }
        Ok(Self {
            n,
            dim,
            length,
            data: vec![0.0; n * dim],
        })
    }

    pub fn from_fn(
        n: usize,
        dim: usize,
        length: f64,
        f: impl Fn(f64, usize) -> f64,
    ) -> Result<Self, SolverError> {
        let mut g = Self::zeros(n, dim, length)?;
        for j in 0..n {
            let x = g.x(j);
            for c in 0..dim {
                g.data[j * dim + c] = f(x, c);
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.length / self.n as f64
    }

    pub fn get(&self, j: usize, c: usize) -> f64 {
        self.data[j * self.dim + c]
    }

    pub fn set(&mut self, j: usize, c: usize, v: f64) {
        self.data[j * self.dim + c] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |a, &v| a.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn component_mean(&self, c: usize) -> f64 {
        let mut acc = 0.0;
        for j in 0..self.n {
            acc += self.data[j * self.dim + c];
        }
        acc / self.n as f64
    }

    /// Largest componentwise |mean|.
    pub fn max_mean_abs(&self) -> f64 {
        (0..self.dim)
            .map(|c| self.component_mean(c).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |a, (&x, &y)| a.max((x - y).abs()))
    }
}

/// Componentwise complex spectrum; `comps[c][k]` is mode `k` of component `c`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub comps: Vec<Vec<Complex64>>,
}

impl Spectrum {
    pub fn zeros(n: usize, dim: usize) -> Self {
        Self {
            comps: vec![vec![Complex64::ZERO; n]; dim],
        }
    }

    pub fn n(&self) -> usize {
        self.comps[0].len()
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn axpy(&mut self, a: f64, other: &Spectrum) {
        for (c, oc) in self.comps.iter_mut().zip(&other.comps) {
            for (v, o) in c.iter_mut().zip(oc) {
                *v += a * o;
            }
        }
    }

    pub fn scaled(&self, a: f64) -> Spectrum {
        Spectrum {
            comps: self
                .comps
                .iter()
                .map(|c| c.iter().map(|v| a * v).collect())
                .collect(),
        }
    }
}

/// FFT plans and wavenumber bookkeeping for one `(N, L)` grid.
pub struct SpectralCtx {
    n: usize,
    dim: usize,
    length: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// retained band: |signed index| <= cutoff (2/3 rule)
    cutoff: usize,
}

impl SpectralCtx {
    pub fn new(n: usize, dim: usize, length: f64) -> Result<Self, SolverError> {
        GridField::zeros(n, dim, length)?; // reuse validation
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            dim,
            length,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            cutoff: n / 3,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn dealias_cutoff(&self) -> usize {
        self.cutoff
    }

    /// Signed integer mode index for slot `k`.
    pub fn signed_index(&self, k: usize) -> i64 {
        if k <= self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        }
    }

    /// Physical wavenumber `2 pi k~ / L` of slot `k`.
    pub fn kappa(&self, k: usize) -> f64 {
        2.0 * PI * self.signed_index(k) as f64 / self.length
    }

    pub fn retained(&self, k: usize) -> bool {
        self.signed_index(k).unsigned_abs() as usize <= self.cutoff
    }

    pub fn forward(&self, field: &GridField) -> Spectrum {
        assert_eq!(field.n(), self.n);
        assert_eq!(field.dim(), self.dim);
        let mut spec = Spectrum::zeros(self.n, self.dim);
        let mut buf = vec![Complex64::ZERO; self.n];
        for c in 0..self.dim {
            for j in 0..self.n {
                buf[j] = Complex64::new(field.get(j, c), 0.0);
            }
            self.fwd.process(&mut buf);
            spec.comps[c].copy_from_slice(&buf);
        }
        spec
    }

    pub fn inverse(&self, spec: &Spectrum) -> GridField {
        let mut field = GridField::zeros(self.n, self.dim, self.length).unwrap();
        let mut buf = vec![Complex64::ZERO; self.n];
        let scale = 1.0 / self.n as f64;
        for c in 0..self.dim {
            buf.copy_from_slice(&spec.comps[c]);
            self.inv.process(&mut buf);
            for j in 0..self.n {
                field.set(j, c, buf[j].re * scale);
            }
        }
        field
    }

    /// Zero every mode outside the retained band.
    pub fn apply_mask(&self, spec: &mut Spectrum) {
        for c in 0..self.dim {
            for k in 0..self.n {
                if !self.retained(k) {
                    spec.comps[c][k] = Complex64::ZERO;
                }
            }
        }
    }

    /// Spectrum of the `order`-th derivative: multiply by `(i kappa)^order`;
    /// odd orders zero the Nyquist mode.
    pub fn derivative_spec(&self, spec: &Spectrum, order: u32) -> Spectrum {
        let mut out = spec.clone();
        for c in 0..self.dim {
            for k in 0..self.n {
                if order % 2 == 1 && k == self.n / 2 {
                    out.comps[c][k] = Complex64::ZERO;
                    continue;
                }
                let ik = Complex64::new(0.0, self.kappa(k));
                out.comps[c][k] *= ik.powu(order);
            }
        }
        out
    }

    /// Spectral derivative of a field, exact for band-limited data.
    pub fn spectral_derivative(&self, field: &GridField, order: u32) -> GridField {
        let spec = self.forward(field);
        self.inverse(&self.derivative_spec(&spec, order))
    }
}
