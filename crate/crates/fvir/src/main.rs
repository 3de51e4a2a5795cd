//! Command-line front end: algebra inspection, symbolic verification suites,
//! componentwise expansion printing, and simulation runs from a config file.
//!
//! Exit codes: 0 success, 1 verification or precondition failure,
//! 2 configuration error, 3 numerical blow-up.

use clap::{Parser, Subcommand};
use fvir::config::{ConfigError, InitialField, RunConfig};
use fvir::output::{field_csv, snapshot_path, time_series_csv};
use fvir::report_json::{report_to_json, report_to_text};
use fvir::solver::{Solver, SolverError};
use fvir_core::algdiff::{
    alg_variational_derivative, coadjoint_rhs, cocycle_suite, h2_density, verify_bihamiltonian,
    AlgDiffPoly,
};
use fvir_core::pairs::{verify_example_pairs, PairCase};
use fvir_core::printer::expand_equation;
use fvir_core::{EulerEquation, FrobeniusAlgebra, IdentityCheck, Rat, Report, FIELD_U};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BLOWUP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fvir",
    version,
    about = "Frobenius-algebra-valued Euler equations: verify, expand, simulate"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the symbolic verification suites and write a JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Write the JSON report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print JSON instead of text to stdout.
        #[arg(long)]
        json: bool,
        /// Tamper a fixture coefficient; the run must then fail (exit 1).
        #[arg(long)]
        inject_error: bool,
    },
    /// Print the canonical componentwise PDE system.
    Expand {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integrate the flow and write a CSV time series.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Override the [output] path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Show the algebra(s) defined by the config: table, trace, Gram data.
    AlgebraInfo {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify {
            config,
            out,
            json,
            inject_error,
        } => cmd_verify(&config, out.as_deref(), json, inject_error),
        Command::Expand { config, out } => cmd_expand(&config, out.as_deref()),
        Command::Simulate { config, out } => cmd_simulate(&config, out.as_deref()),
        Command::AlgebraInfo { config, json } => cmd_algebra_info(&config, json),
    };
    ExitCode::from(code)
}

fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    RunConfig::from_file(path)
}

fn config_fail(e: &dyn std::fmt::Display) -> u8 {
    eprintln!("error: {e}");
    EXIT_CONFIG
}

/// Detect the Z2 multiplication table and return epsilon.
fn z2_epsilon(alg: &FrobeniusAlgebra<Rat>) -> Option<Rat> {
    use num_traits::{One, Zero};
    if alg.dim() != 2 {
        return None;
    }
    let one = Rat::one();
    let zero = Rat::zero();
    let c = |i, j, k| alg.structure_const(i, j, k).clone();
    let pattern = c(0, 0, 0) == one
        && c(0, 0, 1) == zero
        && c(0, 1, 0) == zero
        && c(0, 1, 1) == one
        && c(1, 1, 1) == zero
        && alg.unit().coeffs == vec![one.clone(), zero.clone()];
    pattern.then(|| c(1, 1, 0))
}

fn prefixed(report: Report, prefix: &str) -> Report {
    let mut out = Report::new();
    for mut item in report.items {
        item.name = format!("[{prefix}] {}", item.name);
        out.push(item);
    }
    out
}

/// Negative control: identity (c) must break under a perturbed H2.
fn tampered_bihamiltonian(eq: &EulerEquation) -> IdentityCheck {
    use fvir_core::rat;
    let alg = eq.algebra();
    let dim = alg.dim();
    let alpha = eq.inertia().alpha().clone();
    let beta = eq.inertia().beta(dim);
    let h2 = h2_density(&alpha, &beta, eq.zeta(), alg);
    let u = AlgDiffPoly::symbol(FIELD_U, dim);
    let bump = u
        .mul(&u, alg)
        .trace(alg)
        .mul(u.component(0))
        .scale(&rat(1, 2));
    let tampered = h2.add(&bump);
    let dh2 = alg_variational_derivative(&tampered, FIELD_U, alg);
    let m = eq.m_of_u().clone();
    let rhs = coadjoint_rhs(&m, &u, eq.zeta(), alg).neg();
    let residual = dh2.dx().neg().sub(&rhs);
    if residual.is_zero() {
        IdentityCheck::fail(
            "injected error was not detected",
            "tampered H2 still satisfies identity (c)",
        )
    } else {
        // the tamper is *supposed* to break the identity; report it as the
        // requested failure
        IdentityCheck::fail(
            "tampered H2 fixture (injected error)",
            residual.format_with(&fvir_core::diffpoly::default_namer),
        )
    }
}

fn cmd_verify(config: &Path, out: Option<&Path>, json: bool, inject_error: bool) -> u8 {
    let cfg = match load_config(config) {
        Ok(c) => c,
        Err(e) => return config_fail(&e),
    };
    let eq = match cfg.build_equation() {
        Ok(eq) => eq,
        Err(e) => return config_fail(&e),
    };
    let mut report = Report::new();
    for alg in &cfg.algebras {
        report.push(IdentityCheck::pass(format!(
            "[{}] algebra axioms (commutative, associative, unital, nondegenerate trace)",
            alg.trace_name()
        )));
        report.merge(prefixed(cocycle_suite(alg), alg.trace_name()));
    }
    if eq.inertia().order() <= 1 {
        let alpha = eq.inertia().alpha().clone();
        let beta = eq.inertia().beta(eq.algebra().dim());
        for alg in &cfg.algebras {
            report.merge(prefixed(
                verify_bihamiltonian(alg, &alpha, &beta, eq.zeta()),
                alg.trace_name(),
            ));
        }
    }
    report.merge(eq.rhs_is_hamiltonian_j2());
    if let Some(eps) = z2_epsilon(eq.algebra()) {
        for case in [PairCase::KdV, PairCase::Ch, PairCase::Hs] {
            report.merge(verify_example_pairs(case, &eps, inject_error));
        }
    } else if inject_error {
        report.push(tampered_bihamiltonian(&eq));
    }

    let json_value = report_to_json(&report);
    if json {
        println!("{}", serde_json::to_string_pretty(&json_value).unwrap());
    } else {
        print!("{}", report_to_text(&report));
    }
    if let Some(path) = out {
        if let Err(e) = std::fs::write(path, serde_json::to_string_pretty(&json_value).unwrap()) {
            return config_fail(&e);
        }
    }
    if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn cmd_expand(config: &Path, out: Option<&Path>) -> u8 {
    let cfg = match load_config(config) {
        Ok(c) => c,
        Err(e) => return config_fail(&e),
    };
    let eq = match cfg.build_equation() {
        Ok(eq) => eq,
        Err(e) => return config_fail(&e),
    };
    let mut text = String::new();
    for line in expand_equation(&eq) {
        text.push_str(&line);
        text.push('\n');
    }
    print!("{text}");
    if let Some(path) = out {
        if let Err(e) = std::fs::write(path, &text) {
            return config_fail(&e);
        }
    }
    EXIT_OK
}

fn solver_error_code(e: &SolverError) -> u8 {
    match e {
        SolverError::NumericalBlowup { .. } => EXIT_BLOWUP,
        SolverError::NonzeroMeanHs { .. }
        | SolverError::CflViolation { .. }
        | SolverError::SingularSymbol { .. } => EXIT_FAIL,
        SolverError::InvalidGrid(_) | SolverError::Algebra(_) | SolverError::Unsupported(_) => {
            EXIT_CONFIG
        }
    }
}

fn cmd_simulate(config: &Path, out_override: Option<&Path>) -> u8 {
    let cfg = match load_config(config) {
        Ok(c) => c,
        Err(e) => return config_fail(&e),
    };
    let eq = match cfg.build_equation() {
        Ok(eq) => eq,
        Err(e) => return config_fail(&e),
    };
    let Some((length, n)) = cfg.domain else {
        return config_fail(&ConfigError(
            "[domain] section required for simulate".into(),
        ));
    };
    let Some(time) = cfg.time.clone() else {
        return config_fail(&ConfigError("[time] section required for simulate".into()));
    };
    let Some(initial) = cfg.initial.clone() else {
        return config_fail(&ConfigError(
            "[initial] section required for simulate".into(),
        ));
    };
    let field = match cfg.build_initial_field() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return solver_error_code(&e);
        }
    };
    let run = (|| -> Result<_, SolverError> {
        let solver = Solver::new(&eq, &cfg.algebras, n, length, time.dt, time.scheme)?;
        let state = match initial.field {
            InitialField::U => solver.state_from_u(&field)?,
            InitialField::M => solver.state_from_m(&field)?,
        };
        let do_snapshots = cfg.output.fields;
        let ts = solver.run(state, time.t_end, cfg.output.every, do_snapshots)?;
        Ok(ts)
    })();
    let ts = match run {
        Ok(ts) => ts,
        Err(e) => {
            eprintln!("error: {e}");
            return solver_error_code(&e);
        }
    };
    let csv = time_series_csv(&ts);
    let out_path: Option<PathBuf> = out_override
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.path.clone());
    match &out_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &csv) {
                return config_fail(&e);
            }
            if cfg.output.fields {
                for (i, (_, snap)) in ts.snapshots.iter().enumerate() {
                    let sp = snapshot_path(path, i);
                    if let Err(e) = std::fs::write(&sp, field_csv(snap)) {
                        return config_fail(&e);
                    }
                }
            }
            let last = ts.records.len() - 1;
            println!(
                "completed t = {:.6}; wrote {} rows to {}; max relative drift {:.3e}",
                ts.records[last].t,
                ts.records.len(),
                path.display(),
                ts.summary_drift()
            );
        }
        None => print!("{csv}"),
    }
    EXIT_OK
}

fn cmd_algebra_info(config: &Path, json: bool) -> u8 {
    let cfg = match load_config(config) {
        Ok(c) => c,
        Err(e) => return config_fail(&e),
    };
    if json {
        let algs: Vec<serde_json::Value> = cfg
            .algebras
            .iter()
            .map(|alg| {
                let l = alg.dim();
                serde_json::json!({
                    "dim": l,
                    "trace_name": alg.trace_name(),
                    "trace": alg.trace_vec().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "unit": alg.unit().coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "structure_constants": (0..l).map(|i| (0..l).map(|j| (0..l)
                        .map(|k| alg.structure_const(i, j, k).to_string())
                        .collect::<Vec<_>>()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "gram": alg.gram().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "gram_inverse": alg.gram_inv().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({ "algebras": algs })).unwrap()
        );
        return EXIT_OK;
    }
    for alg in &cfg.algebras {
        let l = alg.dim();
        println!("algebra: dim {l}, trace `{}`", alg.trace_name());
        println!("  unit: {}", join_rats(&alg.unit().coeffs));
        println!("  trace vector: {}", join_rats(alg.trace_vec()));
        for i in 0..l {
            for j in 0..l {
                let products: Vec<String> = (0..l)
                    .map(|k| alg.structure_const(i, j, k).to_string())
                    .collect();
                println!("  e{} o e{} = [{}]", i + 1, j + 1, products.join(", "));
            }
        }
        for r in 0..l {
            let row: Vec<String> = (0..l).map(|c| alg.gram()[r * l + c].to_string()).collect();
            println!("  gram[{r}] = [{}]", row.join(", "));
        }
        for r in 0..l {
            let row: Vec<String> = (0..l)
                .map(|c| alg.gram_inv()[r * l + c].to_string())
                .collect();
            println!("  gram_inv[{r}] = [{}]", row.join(", "));
        }
    }
    EXIT_OK
}

fn join_rats(v: &[Rat]) -> String {
    v.iter().map(Rat::to_string).collect::<Vec<_>>().join(", ")
}
