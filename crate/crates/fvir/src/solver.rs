//! Pseudo-spectral time integration of a built Euler equation on `[0, L)`:
//! mode-wise inertia inversion through the regular representation, classical
//! RK4 with an optional integrating factor for the stiff `zeta d^3` term, and
//! conservation diagnostics under every registered trace.

use crate::grid::{GridField, SpectralCtx, Spectrum};
use fvir_core::{AlgebraElement, AlgebraError, EquationKind, EulerEquation, FrobeniusAlgebra, Rat};
use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use rustfft::num_complex::Complex64;
use std::fmt;

/// Explicit-step CFL constant for the third-derivative term.
const CFL_CONST: f64 = 0.3;
/// Blow-up threshold on the max norm of m.
const BLOWUP_LIMIT: f64 = 1e8;
/// Relative zero-mode bound for the F-HS gauge.
const HS_MEAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    InvalidGrid(String),
    /// `det L_{S(kappa)}` below tolerance at a nonzero retained mode.
    SingularSymbol {
        mode: i64,
    },
    /// F-HS gauge requires mean-zero moment data.
    NonzeroMeanHs {
        magnitude: f64,
    },
    CflViolation {
        dt: f64,
        limit: f64,
    },
    NumericalBlowup {
        t: f64,
    },
    Algebra(AlgebraError),
    Unsupported(String),
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            SolverError::SingularSymbol { mode } => {
                write!(f, "inertia symbol is singular at mode {mode}")
            }
            SolverError::NonzeroMeanHs { magnitude } => write!(
                f,
                "F-HS gauge requires mean-zero moment data (zero-mode magnitude {magnitude:.3e})"
            ),
            SolverError::CflViolation { dt, limit } => {
                write!(
                    f,
                    "dt = {dt} exceeds the explicit-scheme limit {limit:.3e}; use if_rk4"
                )
            }
            SolverError::NumericalBlowup { t } => write!(f, "numerical blow-up at t = {t}"),
            SolverError::Algebra(e) => write!(f, "algebra error: {e}"),
            SolverError::Unsupported(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for SolverError {}

impl From<AlgebraError> for SolverError {
    fn from(e: AlgebraError) -> Self {
        SolverError::Algebra(e)
    }
}

/// Time stepping scheme actually used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Rk4,
    IfRk4,
}

/// Requested scheme; `Auto` picks the integrating factor whenever the
/// equation carries a `zeta d^3` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeChoice {
    Auto,
    Rk4,
    IfRk4,
}

/// Numeric (f64) image of the equation data used by the solver.
struct NumericEquation {
    algebra: FrobeniusAlgebra<f64>,
    inertia: Vec<AlgebraElement<f64>>,
    zeta: AlgebraElement<f64>,
    kind: EquationKind,
    h2_defined: bool,
    alpha: AlgebraElement<f64>,
    beta: AlgebraElement<f64>,
}

fn elem_to_f64(e: &AlgebraElement<Rat>) -> AlgebraElement<f64> {
    AlgebraElement::new(
        e.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect(),
    )
}

/// Evolving state: time, the moment field `m`, and the cached velocity
/// `u = Lambda^{-1} m` (kept consistent after every accepted step).
#[derive(Debug, Clone)]
pub struct SolverState {
    pub t: f64,
    m_hat: Spectrum,
    pub m: GridField,
    pub u: GridField,
}

/// One diagnostics record: conserved functionals per registered trace and the
/// largest componentwise |mean of m| (the F-HS gauge monitor).
#[derive(Debug, Clone)]
pub struct DiagnosticsRecord {
    pub t: f64,
    /// values in the label order of [`Solver::diagnostic_labels`]
    pub values: Vec<f64>,
    pub max_mean_m: f64,
}

/// Full run output: diagnostic rows, relative drifts from t = 0, and optional
/// field snapshots.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub labels: Vec<String>,
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<(f64, GridField)>,
    pub final_state: SolverState,
}

impl TimeSeries {
    /// Relative drift of each diagnostic column at record `row`.
    pub fn drifts(&self, row: usize) -> Vec<f64> {
        let base = &self.records[0].values;
        self.records[row]
            .values
            .iter()
            .zip(base)
            .map(|(v, b)| (v - b).abs() / b.abs().max(1e-300))
            .collect()
    }

    pub fn max_drift(&self, column: usize) -> f64 {
        (0..self.records.len())
            .map(|r| self.drifts(r)[column])
            .fold(0.0, f64::max)
    }

    pub fn max_mean_m(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.max_mean_m)
            .fold(0.0, f64::max)
    }

    /// Worst drift across columns with a scale-aware denominator, so that a
    /// functional whose initial value is numerically zero does not report
    /// spurious relative drift.
    pub fn summary_drift(&self) -> f64 {
        let mut worst = 0.0_f64;
        for c in 0..self.labels.len() {
            let base = self.records[0].values[c];
            let col_max = self
                .records
                .iter()
                .map(|r| r.values[c].abs())
                .fold(0.0_f64, f64::max);
            let denom = base.abs().max(1e-8 * (1.0 + col_max));
            for r in &self.records {
                worst = worst.max((r.values[c] - base).abs() / denom);
            }
        }
        worst
    }
}

/// Immutable per-run machinery: FFT plans, mode-wise inertia factorizations,
/// and integrating-factor exponentials for the fixed time step.
pub struct Solver {
    ctx: SpectralCtx,
    eq: NumericEquation,
    traces: Vec<FrobeniusAlgebra<f64>>,
    dt: f64,
    scheme: Scheme,
    /// inverse of `L_{S(kappa)}` per retained mode
    inv_s: Vec<Option<DMatrix<f64>>>,
    /// left-multiplication matrix of zeta
    l_zeta: DMatrix<f64>,
    hs_gauge: bool,
    exp_full: Vec<DMatrix<Complex64>>,
    exp_half: Vec<DMatrix<Complex64>>,
}

impl fmt::Debug for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Solver")
            .field("n", &self.ctx.n())
            .field("dim", &self.ctx.dim())
            .field("dt", &self.dt)
            .field("scheme", &self.scheme)
            .field("kind", &self.eq.kind)
            .field("hs_gauge", &self.hs_gauge)
            .finish()
    }
}

impl Solver {
    /// Build the solver for one equation at fixed `(N, L, dt)`. The traces
    /// list gives the diagnostics functionals; it must share the equation's
    /// multiplication table and defaults to the equation's own trace.
    pub fn new(
        equation: &EulerEquation,
        traces: &[FrobeniusAlgebra<Rat>],
        n: usize,
        length: f64,
        dt: f64,
        choice: SchemeChoice,
    ) -> Result<Self, SolverError> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(SolverError::InvalidGrid(format!(
                "dt = {dt} must be nonzero"
            )));
        }
        let algebra = equation.algebra().to_f64()?;
        let l = algebra.dim();
        let ctx = SpectralCtx::new(n, l, length)?;
        let inertia: Vec<AlgebraElement<f64>> = equation
            .inertia()
            .coeffs()
            .iter()
            .map(elem_to_f64)
            .collect();
        let zeta = elem_to_f64(equation.zeta());
        let alpha = inertia[0].clone();
        let beta = inertia
            .get(1)
            .cloned()
            .unwrap_or_else(|| AlgebraElement::new(vec![0.0; l]));
        let eq = NumericEquation {
            h2_defined: equation.inertia().order() <= 1,
            kind: equation.kind(),
            algebra,
            inertia,
            zeta,
            alpha,
            beta,
        };
        let trace_algs: Vec<FrobeniusAlgebra<f64>> = if traces.is_empty() {
            vec![eq.algebra.clone()]
        } else {
            let converted: Result<Vec<_>, AlgebraError> =
                traces.iter().map(|t| t.to_f64()).collect();
            let converted = converted?;
            for t in &converted {
                if !t.same_table(&eq.algebra) {
                    return Err(SolverError::Unsupported(
                        "diagnostic trace does not share the multiplication table".into(),
                    ));
                }
            }
            converted
        };

        // mode-wise regular-representation factorizations of S(kappa)
        let mut inv_s: Vec<Option<DMatrix<f64>>> = vec![None; n];
        let mut hs_gauge = false;
        for k in 0..n {
            if !ctx.retained(k) {
                continue;
            }
            let kappa = ctx.kappa(k);
            let s = inertia_symbol(&eq.inertia, kappa * kappa, l);
            let ls = left_mult_na(&eq.algebra, &s);
            let det = ls.clone().determinant();
            let scale = ls
                .iter()
                .fold(1.0_f64, |a, &v| a.max(v.abs()))
                .powi(l as i32);
            if det.abs() < 1e-12 * scale {
                if ctx.signed_index(k) == 0 {
                    hs_gauge = true;
                    continue;
                }
                return Err(SolverError::SingularSymbol {
                    mode: ctx.signed_index(k),
                });
            }
            inv_s[k] = Some(ls.try_inverse().ok_or(SolverError::SingularSymbol {
                mode: ctx.signed_index(k),
            })?);
        }

        let l_zeta = left_mult_na(&eq.algebra, &eq.zeta);
        let zeta_is_zero = eq.zeta.coeffs.iter().all(|c| *c == 0.0);
        let scheme = match choice {
            SchemeChoice::Rk4 => Scheme::Rk4,
            SchemeChoice::IfRk4 => Scheme::IfRk4,
            SchemeChoice::Auto => {
                if zeta_is_zero {
                    Scheme::Rk4
                } else {
                    Scheme::IfRk4
                }
            }
        };
        if scheme == Scheme::Rk4 && !zeta_is_zero {
            let op_norm = l_zeta
                .clone()
                .singular_values()
                .iter()
                .fold(0.0_f64, |a, &v| a.max(v));
            if op_norm > 0.0 {
                let h = length / n as f64;
                let limit = CFL_CONST * h * h * h / op_norm;
                if dt.abs() > limit {
                    return Err(SolverError::CflViolation { dt, limit });
                }
            }
        }

        // integrating-factor exponentials e^{A dt}, e^{A dt/2} with
        // A = i kappa^3 L_zeta L_S^{-1} per retained mode
        let (mut exp_full, mut exp_half) = (Vec::new(), Vec::new());
        if scheme == Scheme::IfRk4 {
            for k in 0..n {
                let (ef, eh) = if let Some(inv) = &inv_s[k] {
                    let kappa = ctx.kappa(k);
                    let b = &l_zeta * inv;
                    let a_dt = cmatrix_scale(&b, Complex64::new(0.0, kappa.powi(3) * dt));
                    let a_half = cmatrix_scale(&b, Complex64::new(0.0, kappa.powi(3) * dt / 2.0));
                    (a_dt.exp(), a_half.exp())
                } else {
                    (DMatrix::identity(l, l), DMatrix::identity(l, l))
                };
                exp_full.push(ef);
                exp_half.push(eh);
            }
        }

        Ok(Self {
            ctx,
            eq,
            traces: trace_algs,
            dt,
            scheme,
            inv_s,
            l_zeta,
            hs_gauge,
            exp_full,
            exp_half,
        })
    }

    pub fn ctx(&self) -> &SpectralCtx {
        &self.ctx
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn hs_gauge(&self) -> bool {
        self.hs_gauge
    }

    pub fn kind(&self) -> EquationKind {
        self.eq.kind
    }

    /// Initial state from velocity samples: `m = Lambda(u)` mode by mode.
    /// Under the F-HS gauge the zero mode of u is pinned to zero.
    pub fn state_from_u(&self, u: &GridField) -> Result<SolverState, SolverError> {
        self.check_field(u)?;
        let mut u_hat = self.ctx.forward(u);
        self.ctx.apply_mask(&mut u_hat);
        let l = self.ctx.dim();
        let mut m_hat = Spectrum::zeros(self.ctx.n(), l);
        for k in 0..self.ctx.n() {
            if !self.ctx.retained(k) {
                continue;
            }
            if self.hs_gauge && self.ctx.signed_index(k) == 0 {
                for c in 0..l {
                    u_hat.comps[c][k] = Complex64::ZERO;
                }
            }
            let kappa = self.ctx.kappa(k);
            let s = inertia_symbol(&self.eq.inertia, kappa * kappa, l);
            let ls = left_mult_na(&self.eq.algebra, &s);
            let uk: Vec<Complex64> = (0..l).map(|c| u_hat.comps[c][k]).collect();
            for r in 0..l {
                let mut acc = Complex64::ZERO;
                for c in 0..l {
                    acc += ls[(r, c)] * uk[c];
                }
                m_hat.comps[r][k] = acc;
            }
        }
        Ok(self.state_from_m_hat(0.0, m_hat))
    }

    /// Initial state from moment samples; rejects non-mean-zero data under
    /// the F-HS gauge.
    pub fn state_from_m(&self, m: &GridField) -> Result<SolverState, SolverError> {
        self.check_field(m)?;
        if self.hs_gauge {
            let mag = m.max_mean_abs();
            if mag > HS_MEAN_TOL * (1.0 + m.max_abs()) {
                return Err(SolverError::NonzeroMeanHs { magnitude: mag });
            }
        }
        let mut m_hat = self.ctx.forward(m);
        self.ctx.apply_mask(&mut m_hat);
        Ok(self.state_from_m_hat(0.0, m_hat))
    }

    fn check_field(&self, f: &GridField) -> Result<(), SolverError> {
        if f.n() != self.ctx.n() || f.dim() != self.ctx.dim() {
            return Err(SolverError::InvalidGrid(
                "field shape does not match the solver".into(),
            ));
        }
        Ok(())
    }

    fn state_from_m_hat(&self, t: f64, m_hat: Spectrum) -> SolverState {
        let m = self.ctx.inverse(&m_hat);
        let u = self.ctx.inverse(&self.u_hat_from_m_hat(&m_hat));
        SolverState { t, m_hat, m, u }
    }

    /// Mode-wise inertia inversion `u^_k = L_{S(kappa)}^{-1} m^_k`.
    fn u_hat_from_m_hat(&self, m_hat: &Spectrum) -> Spectrum {
        let l = self.ctx.dim();
        let mut u_hat = Spectrum::zeros(self.ctx.n(), l);
        for k in 0..self.ctx.n() {
            let Some(inv) = &self.inv_s[k] else { continue };
            for r in 0..l {
                let mut acc = Complex64::ZERO;
                for c in 0..l {
                    acc += inv[(r, c)] * m_hat.comps[c][k];
                }
                u_hat.comps[r][k] = acc;
            }
        }
        u_hat
    }

    /// Public inertia inversion on physical fields: `Lambda(result) = m`.
    pub fn invert_inertia(&self, m: &GridField) -> Result<GridField, SolverError> {
        self.check_field(m)?;
        if self.hs_gauge {
            let mag = m.max_mean_abs();
            if mag > HS_MEAN_TOL * (1.0 + m.max_abs()) {
                return Err(SolverError::NonzeroMeanHs { magnitude: mag });
            }
        }
        let mut m_hat = self.ctx.forward(m);
        self.ctx.apply_mask(&mut m_hat);
        Ok(self.ctx.inverse(&self.u_hat_from_m_hat(&m_hat)))
    }

    /// Pointwise algebra product of two physical fields.
    fn alg_product(&self, a: &GridField, b: &GridField) -> GridField {
        let l = self.ctx.dim();
        let alg = &self.eq.algebra;
        let mut out = GridField::zeros(self.ctx.n(), l, self.ctx.length()).unwrap();
        for j in 0..self.ctx.n() {
            for i in 0..l {
                let ai = a.get(j, i);
                if ai == 0.0 {
                    continue;
                }
                for jj in 0..l {
                    let bj = b.get(j, jj);
                    if bj == 0.0 {
                        continue;
                    }
                    for k in 0..l {
                        let c = *alg.structure_const(i, jj, k);
                        if c != 0.0 {
                            out.set(j, k, out.get(j, k) + ai * bj * c);
                        }
                    }
                }
            }
        }
        out
    }

    /// Dealiased spectrum of `-(2 m o u_x + m_x o u)`.
    fn nonlinear_hat(&self, m_hat: &Spectrum) -> Spectrum {
        let u_hat = self.u_hat_from_m_hat(m_hat);
        let m = self.ctx.inverse(m_hat);
        let u = self.ctx.inverse(&u_hat);
        let ux = self.ctx.inverse(&self.ctx.derivative_spec(&u_hat, 1));
        let mx = self.ctx.inverse(&self.ctx.derivative_spec(m_hat, 1));
        let mut phys = GridField::zeros(self.ctx.n(), self.ctx.dim(), self.ctx.length()).unwrap();
        let t1 = self.alg_product(&m, &ux);
        let t2 = self.alg_product(&mx, &u);
        for j in 0..self.ctx.n() {
            for c in 0..self.ctx.dim() {
                phys.set(j, c, -(2.0 * t1.get(j, c) + t2.get(j, c)));
            }
        }
        let mut out = self.ctx.forward(&phys);
        self.ctx.apply_mask(&mut out);
        out
    }

    /// Spectrum of the stiff term `-(zeta o u_xxx)` = `A m^`.
    fn zeta_term_hat(&self, m_hat: &Spectrum) -> Spectrum {
        let l = self.ctx.dim();
        let u_hat = self.u_hat_from_m_hat(m_hat);
        let mut out = Spectrum::zeros(self.ctx.n(), l);
        for k in 0..self.ctx.n() {
            if self.inv_s[k].is_none() {
                continue;
            }
            let ik3 = Complex64::new(0.0, self.ctx.kappa(k)).powu(3);
            for r in 0..l {
                let mut acc = Complex64::ZERO;
                for c in 0..l {
                    acc += self.l_zeta[(r, c)] * u_hat.comps[c][k];
                }
                out.comps[r][k] = -ik3 * acc;
            }
        }
        out
    }

    fn full_rhs_hat(&self, m_hat: &Spectrum) -> Spectrum {
        let mut out = self.nonlinear_hat(m_hat);
        let zt = self.zeta_term_hat(m_hat);
        out.axpy(1.0, &zt);
        out
    }

    /// `dm/dt` on the grid for the current state.
    pub fn rhs_eval(&self, state: &SolverState) -> GridField {
        self.ctx.inverse(&self.full_rhs_hat(&state.m_hat))
    }

    fn apply_exp(&self, table: &[DMatrix<Complex64>], spec: &Spectrum) -> Spectrum {
        let l = self.ctx.dim();
        let mut out = Spectrum::zeros(self.ctx.n(), l);
        for k in 0..self.ctx.n() {
            if !self.ctx.retained(k) {
                continue;
            }
            let e = &table[k];
            for r in 0..l {
                let mut acc = Complex64::ZERO;
                for c in 0..l {
                    acc += e[(r, c)] * spec.comps[c][k];
                }
                out.comps[r][k] = acc;
            }
        }
        out
    }

    /// Advance one step of the solver's fixed dt.
    pub fn step(&self, state: &mut SolverState) -> Result<(), SolverError> {
        let dt = self.dt;
        let m_hat = &state.m_hat;
        let new_hat = match self.scheme {
            Scheme::Rk4 => {
                let k1 = self.full_rhs_hat(m_hat);
                let mut s2 = m_hat.clone();
                s2.axpy(dt / 2.0, &k1);
                let k2 = self.full_rhs_hat(&s2);
                let mut s3 = m_hat.clone();
                s3.axpy(dt / 2.0, &k2);
                let k3 = self.full_rhs_hat(&s3);
                let mut s4 = m_hat.clone();
                s4.axpy(dt, &k3);
                let k4 = self.full_rhs_hat(&s4);
                let mut out = m_hat.clone();
                out.axpy(dt / 6.0, &k1);
                out.axpy(dt / 3.0, &k2);
                out.axpy(dt / 3.0, &k3);
                out.axpy(dt / 6.0, &k4);
                out
            }
            Scheme::IfRk4 => {
                // w' = e^{-tA} N(e^{tA} w) advanced by classical RK4, stages
                // expressed back in m^ space through the cached exponentials
                let g1 = self.nonlinear_hat(m_hat);
                let em = self.apply_exp(&self.exp_half, m_hat);
                let eg1 = self.apply_exp(&self.exp_half, &g1);
                let mut s2 = em.clone();
                s2.axpy(dt / 2.0, &eg1);
                let g2 = self.nonlinear_hat(&s2);
                let mut s3 = em.clone();
                s3.axpy(dt / 2.0, &g2);
                let g3 = self.nonlinear_hat(&s3);
                let e1m = self.apply_exp(&self.exp_full, m_hat);
                let eg3 = self.apply_exp(&self.exp_half, &g3);
                let mut s4 = e1m.clone();
                s4.axpy(dt, &eg3);
                let g4 = self.nonlinear_hat(&s4);
                let e1g1 = self.apply_exp(&self.exp_full, &g1);
                let mut g23 = g2;
                g23.axpy(1.0, &g3);
                let eg23 = self.apply_exp(&self.exp_half, &g23);
                let mut out = e1m;
                out.axpy(dt / 6.0, &e1g1);
                out.axpy(dt / 3.0, &eg23);
                out.axpy(dt / 6.0, &g4);
                out
            }
        };
        let t_next = state.t + dt;
        let m = self.ctx.inverse(&new_hat);
        if !m.is_finite() || m.max_abs() > BLOWUP_LIMIT {
            return Err(SolverError::NumericalBlowup { t: t_next });
        }
        let u = self.ctx.inverse(&self.u_hat_from_m_hat(&new_hat));
        state.t = t_next;
        state.m_hat = new_hat;
        state.m = m;
        state.u = u;
        Ok(())
    }

    /// Diagnostic column labels: `H1[trace]` per trace, then `H2[trace]` when
    /// the second Hamiltonian is defined.
    pub fn diagnostic_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .traces
            .iter()
            .map(|t| format!("H1[{}]", t.trace_name()))
            .collect();
        if self.eq.h2_defined {
            labels.extend(
                self.traces
                    .iter()
                    .map(|t| format!("H2[{}]", t.trace_name())),
            );
        }
        labels
    }

    /// Evaluate the registered conserved functionals by spectral quadrature.
    pub fn diagnostics(&self, state: &SolverState) -> DiagnosticsRecord {
        let dx = self.ctx.dx();
        let n = self.ctx.n();
        let l = self.ctx.dim();
        let mut values = Vec::new();
        // H1 = 1/2 dx sum_j tr(m_j o u_j)
        let mu = self.alg_product(&state.m, &state.u);
        for talg in &self.traces {
            let tv = talg.trace_vec();
            let mut acc = 0.0;
            for j in 0..n {
                for c in 0..l {
                    acc += tv[c] * mu.get(j, c);
                }
            }
            values.push(0.5 * dx * acc);
        }
        if self.eq.h2_defined {
            // H2 = 1/2 dx sum_j tr(zeta o u o u_xx + alpha o u^3
            //      - 1/2 beta o u^2 o u_xx)
            let u_hat = self.ctx.forward(&state.u);
            let uxx = self.ctx.inverse(&self.ctx.derivative_spec(&u_hat, 2));
            let u2 = self.alg_product(&state.u, &state.u);
            let u3 = self.alg_product(&u2, &state.u);
            let u_uxx = self.alg_product(&state.u, &uxx);
            let u2_uxx = self.alg_product(&u2, &uxx);
            let zeta_f = constant_field(&self.eq.zeta, n, self.ctx.length());
            let alpha_f = constant_field(&self.eq.alpha, n, self.ctx.length());
            let beta_f = constant_field(&self.eq.beta, n, self.ctx.length());
            let t1 = self.alg_product(&zeta_f, &u_uxx);
            let t2 = self.alg_product(&alpha_f, &u3);
            let t3 = self.alg_product(&beta_f, &u2_uxx);
            for talg in &self.traces {
                let tv = talg.trace_vec();
                let mut acc = 0.0;
                for j in 0..n {
                    for c in 0..l {
                        acc += tv[c] * (t1.get(j, c) + t2.get(j, c) - 0.5 * t3.get(j, c));
                    }
                }
                values.push(0.5 * dx * acc);
            }
        }
        DiagnosticsRecord {
            t: state.t,
            values,
            max_mean_m: state.m.max_mean_abs(),
        }
    }

    /// Integrate from `state` to `t_end`, recording diagnostics every
    /// `every` steps (and at both endpoints). `snapshot_every` optionally
    /// stores field snapshots on the same cadence.
    pub fn run(
        &self,
        mut state: SolverState,
        t_end: f64,
        every: usize,
        snapshots: bool,
    ) -> Result<TimeSeries, SolverError> {
        let steps = (t_end / self.dt).round() as usize;
        let every = every.max(1);
        let labels = self.diagnostic_labels();
        let mut records = vec![self.diagnostics(&state)];
        let mut snaps = Vec::new();
        if snapshots {
            snaps.push((state.t, state.m.clone()));
        }
        for i in 1..=steps {
            self.step(&mut state)?;
            if i % every == 0 || i == steps {
                records.push(self.diagnostics(&state));
                if snapshots {
                    snaps.push((state.t, state.m.clone()));
                }
            }
        }
        Ok(TimeSeries {
            labels,
            records,
            snapshots: snaps,
            final_state: state,
        })
    }
}

fn constant_field(e: &AlgebraElement<f64>, n: usize, length: f64) -> GridField {
    GridField::from_fn(n, e.coeffs.len(), length, |_, c| e.coeffs[c]).unwrap()
}

/// `S(kappa) = alpha_0 + sum_k alpha_k kappa^{2k}` (the `(-1)^k (i kappa)^{2k}`
/// signs cancel).
fn inertia_symbol(
    coeffs: &[AlgebraElement<f64>],
    kappa_sq: f64,
    dim: usize,
) -> AlgebraElement<f64> {
    let mut out = AlgebraElement::new(vec![0.0; dim]);
    let mut pw = 1.0;
    for a in coeffs {
        for c in 0..dim {
            out.coeffs[c] += a.coeffs[c] * pw;
        }
        pw *= kappa_sq;
    }
    out
}

fn left_mult_na(alg: &FrobeniusAlgebra<f64>, a: &AlgebraElement<f64>) -> DMatrix<f64> {
    let l = alg.dim();
    let m = alg.left_mult_matrix(a);
    DMatrix::from_fn(l, l, |r, c| m[r * l + c])
}

fn cmatrix_scale(b: &DMatrix<f64>, z: Complex64) -> DMatrix<Complex64> {
    DMatrix::from_fn(b.nrows(), b.ncols(), |r, c| z * b[(r, c)])
}
