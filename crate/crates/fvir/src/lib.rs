//! Pseudo-spectral time integration of Frobenius-algebra-valued Euler
//! equations on a periodic domain, with conservation diagnostics, plus the
//! configuration, report serialization, and output formats used by the CLI.

pub mod config;
pub mod eval;
pub mod grid;
pub mod output;
pub mod report_json;
pub mod solver;

pub use grid::{GridField, SpectralCtx, Spectrum};
pub use solver::{Scheme, SchemeChoice, Solver, SolverError, SolverState, TimeSeries};
