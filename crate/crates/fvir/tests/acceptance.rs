//! Acceptance suite: one test per criterion, each printing a pass line with
//! its measured figures (run with `--nocapture` to see them).

use fvir::grid::GridField;
use fvir::solver::{SchemeChoice, Solver, SolverError};
use fvir_core::algdiff::{cocycle_suite, verify_bihamiltonian};
use fvir_core::euler::{build_euler_equation, EulerEquation, InertiaSpec};
use fvir_core::pairs::{verify_example_pairs, PairCase};
use fvir_core::printer::expand_equation;
use fvir_core::{rint, AlgebraElement, FrobeniusAlgebra, Rat};
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;
use std::time::Instant;

fn elem(coeffs: &[i64]) -> AlgebraElement<Rat> {
    AlgebraElement::new(coeffs.iter().map(|&c| rint(c)).collect())
}

fn scalar_kdv() -> EulerEquation {
    let alg = FrobeniusAlgebra::<Rat>::reals();
    build_euler_equation(
        &alg,
        InertiaSpec::new(vec![elem(&[1])]).unwrap(),
        elem(&[1]),
    )
    .unwrap()
}

/// 1. Cocycle suite over R, Z2^{-1,0,1,2} with both traces, and Z3 (top).
#[test]
fn criterion_01_cocycle_suite() {
    let start = Instant::now();
    let mut algebras = vec![FrobeniusAlgebra::<Rat>::reals()];
    for eps in [-1i64, 0, 1, 2] {
        for k in [1usize, 2] {
            algebras.push(FrobeniusAlgebra::z2(rint(eps), k).unwrap());
        }
    }
    algebras.push(FrobeniusAlgebra::zl_top(3).unwrap());
    for alg in &algebras {
        let rep = cocycle_suite(alg);
        assert!(
            rep.all_passed(),
            "cocycle suite failed for dim {} trace {}: {:?}",
            alg.dim(),
            alg.trace_name(),
            rep.failures().collect::<Vec<_>>()
        );
    }
    let dt = start.elapsed();
    assert!(
        dt.as_secs_f64() < 10.0,
        "cocycle suite took {dt:?} (limit 10 s)"
    );
    println!(
        "criterion 1 PASS: cocycle antisymmetry + cyclic identity exact for {} algebras in {dt:?}",
        algebras.len()
    );
}

/// 2. Bihamiltonian identities on the (alpha, beta, zeta) grid over Z2 and
/// R, with a perturbed negative control.
#[test]
fn criterion_02_bihamiltonian_grid() {
    let start = Instant::now();
    let mut cases = 0usize;
    for eps in [-1i64, 0, 1, 2] {
        for k in [1usize, 2] {
            let alg = FrobeniusAlgebra::<Rat>::z2(rint(eps), k).unwrap();
            let e2 = AlgebraElement::basis(2, 1);
            let grid = [
                AlgebraElement::zeros(2),
                alg.unit().clone(),
                e2.clone(),
                alg.unit().add(&e2),
            ];
            for alpha in &grid {
                for beta in &grid {
                    if alpha.is_zero() && beta.is_zero() {
                        continue;
                    }
                    for zeta in &grid {
                        let rep = verify_bihamiltonian(&alg, alpha, beta, zeta);
                        assert!(
                            rep.all_passed(),
                            "eps={eps} k={k}: {:?}",
                            rep.failures().collect::<Vec<_>>()
                        );
                        cases += 1;
                    }
                }
            }
        }
    }
    let alg = FrobeniusAlgebra::<Rat>::reals();
    for a in 0..2i64 {
        for b in 0..2i64 {
            if a == 0 && b == 0 {
                continue;
            }
            for z in 0..2i64 {
                assert!(
                    verify_bihamiltonian(&alg, &elem(&[a]), &elem(&[b]), &elem(&[z])).all_passed()
                );
                cases += 1;
            }
        }
    }
    // negative control through the tampered pairs fixture
    assert!(!verify_example_pairs(PairCase::KdV, &rint(2), true).all_passed());
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "grid took {dt:?} (limit 60 s)");
    println!("criterion 2 PASS: {cases} bihamiltonian verifications exact in {dt:?}");
}

/// 3. The six explicit bihamiltonian presentations, both pairs each.
#[test]
fn criterion_03_example_pairs() {
    let start = Instant::now();
    let mut identities = 0usize;
    for eps in [rint(-1), rint(2)] {
        for case in [PairCase::KdV, PairCase::Ch, PairCase::Hs] {
            let rep = verify_example_pairs(case, &eps, false);
            assert!(
                rep.all_passed(),
                "{case} eps={eps}: {:?}",
                rep.failures().collect::<Vec<_>>()
            );
            identities += rep.items.len();
        }
    }
    let zero = Rat::from_integer(0.into());
    for case in [PairCase::KdV, PairCase::Ch, PairCase::Hs] {
        let rep = verify_example_pairs(case, &zero, false);
        assert!(
            rep.all_passed(),
            "{case} eps=0: {:?}",
            rep.failures().collect::<Vec<_>>()
        );
        identities += rep.items.len();
    }
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "pairs took {dt:?} (limit 60 s)");
    println!("criterion 3 PASS: {identities} operator identities exact in {dt:?}");
}

/// 4. Componentwise expansions equal the frozen golden systems.
#[test]
fn criterion_04_componentwise_goldens() {
    let check = |eq: &EulerEquation, golden: &str| {
        let got: String = expand_equation(eq).into_iter().map(|l| l + "\n").collect();
        assert_eq!(got, golden, "componentwise expansion differs from golden");
    };
    for (eps, suffix) in [(-1i64, "m1"), (0, "0"), (1, "1"), (2, "2")] {
        let alg = FrobeniusAlgebra::<Rat>::z2(rint(eps), 1).unwrap();
        let one = elem(&[1, 0]);
        let zero = AlgebraElement::zeros(2);
        let kdv = build_euler_equation(
            &alg,
            InertiaSpec::new(vec![one.clone()]).unwrap(),
            one.clone(),
        )
        .unwrap();
        let ch = build_euler_equation(
            &alg,
            InertiaSpec::order_one(one.clone(), one.clone()).unwrap(),
            zero.clone(),
        )
        .unwrap();
        let hs = build_euler_equation(
            &alg,
            InertiaSpec::order_one(zero.clone(), one.clone()).unwrap(),
            zero.clone(),
        )
        .unwrap();
        match suffix {
            "m1" => {
                check(&kdv, include_str!("golden/kdv_eps_m1.txt"));
                check(&ch, include_str!("golden/ch_eps_m1.txt"));
                check(&hs, include_str!("golden/hs_eps_m1.txt"));
            }
            "0" => {
                check(&kdv, include_str!("golden/kdv_eps_0.txt"));
                check(&ch, include_str!("golden/ch_eps_0.txt"));
                check(&hs, include_str!("golden/hs_eps_0.txt"));
            }
            "1" => {
                check(&kdv, include_str!("golden/kdv_eps_1.txt"));
                check(&ch, include_str!("golden/ch_eps_1.txt"));
                check(&hs, include_str!("golden/hs_eps_1.txt"));
            }
            _ => {
                check(&kdv, include_str!("golden/kdv_eps_2.txt"));
                check(&ch, include_str!("golden/ch_eps_2.txt"));
                check(&hs, include_str!("golden/hs_eps_2.txt"));
            }
        }
    }
    check(&scalar_kdv(), include_str!("golden/kdv_r.txt"));
    println!("criterion 4 PASS: 13 componentwise golden systems match character for character");
}

/// 5. Single-Hamiltonian J2 form for higher-order inertia.
#[test]
fn criterion_05_higher_order_j2() {
    let configs: Vec<(FrobeniusAlgebra<Rat>, Vec<AlgebraElement<Rat>>)> = vec![
        (
            FrobeniusAlgebra::<Rat>::reals(),
            vec![elem(&[1]), elem(&[2]), elem(&[1])],
        ),
        (
            FrobeniusAlgebra::<Rat>::reals(),
            vec![elem(&[1]), elem(&[1]), elem(&[1]), elem(&[1])],
        ),
        (
            FrobeniusAlgebra::<Rat>::z2(rint(1), 1).unwrap(),
            vec![elem(&[1, 0]), elem(&[1, 1]), elem(&[0, 1])],
        ),
        (
            FrobeniusAlgebra::<Rat>::z2(rint(1), 2).unwrap(),
            vec![elem(&[1, 0]), elem(&[1, 0]), elem(&[1, 0]), elem(&[2, 1])],
        ),
    ];
    for (alg, coeffs) in configs {
        let n = coeffs.len() - 1;
        let eq = build_euler_equation(&alg, InertiaSpec::new(coeffs).unwrap(), alg.unit().clone())
            .unwrap();
        let rep = eq.rhs_is_hamiltonian_j2();
        assert!(
            rep.all_passed(),
            "n={n} over dim {}: {:?}",
            alg.dim(),
            rep.failures().collect::<Vec<_>>()
        );
    }
    println!("criterion 5 PASS: m_t = {{m, H1}}_2 exact for n = 2, 3 inertia over R and Z2");
}

fn wrap_periodic(d: f64, length: f64) -> f64 {
    d - length * (d / length).round()
}

fn soliton_field(n: usize, length: f64, c: f64, x0: f64, t: f64) -> GridField {
    GridField::from_fn(n, 1, length, |x, _| {
        let d = wrap_periodic(x - x0 - c * t, length);
        let s = 1.0 / ((c.sqrt() * d / 2.0).cosh());
        c * s * s
    })
    .unwrap()
}

/// 6. KdV soliton: shape preservation and H1 conservation.
#[test]
fn criterion_06_soliton() {
    let start = Instant::now();
    let (n, length, c, x0) = (512usize, 40.0, 1.0, 20.0);
    let eq = scalar_kdv();
    let solver = Solver::new(&eq, &[], n, length, 1e-4, SchemeChoice::Auto).unwrap();
    let u0 = soliton_field(n, length, c, x0, 0.0);
    let state = solver.state_from_u(&u0).unwrap();
    let ts = solver.run(state, 1.0, 1000, false).unwrap();
    let exact = soliton_field(n, length, c, x0, 1.0);
    let shape_err = ts.final_state.u.max_abs_diff(&exact);
    let drift = ts.max_drift(0);
    let dt = start.elapsed();
    assert!(shape_err < 1e-5, "soliton shape error {shape_err:.3e}");
    assert!(drift < 1e-8, "H1 drift {drift:.3e}");
    assert!(dt.as_secs_f64() < 60.0, "soliton run took {dt:?}");
    println!(
        "criterion 6 PASS: soliton shape error {shape_err:.3e} (< 1e-5), H1 drift {drift:.3e} (< 1e-8) in {dt:?}"
    );
}

/// Independent complex-scalar KdV integrator (same scheme, same dealiasing),
/// the oracle for the Z2^{-1} complexification.
struct ComplexKdv {
    n: usize,
    length: f64,
    dt: f64,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
    exp_full: Vec<Complex64>,
    exp_half: Vec<Complex64>,
    cutoff: usize,
}

impl ComplexKdv {
    fn new(n: usize, length: f64, dt: f64) -> Self {
        let mut planner = FftPlanner::new();
        let kappa = |k: usize| {
            let s = if k <= n / 2 {
                k as i64
            } else {
                k as i64 - n as i64
            };
            2.0 * PI * s as f64 / length
        };
        let exp_full: Vec<Complex64> = (0..n)
            .map(|k| (Complex64::new(0.0, kappa(k).powi(3) * dt)).exp())
            .collect();
        let exp_half: Vec<Complex64> = (0..n)
            .map(|k| (Complex64::new(0.0, kappa(k).powi(3) * dt / 2.0)).exp())
            .collect();
        Self {
            n,
            length,
            dt,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            exp_full,
            exp_half,
            cutoff: n / 3,
        }
    }

    fn retained(&self, k: usize) -> bool {
        let s = if k <= self.n / 2 {
            k as i64
        } else {
            k as i64 - self.n as i64
        };
        s.unsigned_abs() as usize <= self.cutoff
    }

    fn mask(&self, spec: &mut [Complex64]) {
        for k in 0..self.n {
            if !self.retained(k) {
                spec[k] = Complex64::ZERO;
            }
        }
    }

    fn nonlinear(&self, psi_hat: &[Complex64]) -> Vec<Complex64> {
        let kappa = |k: usize| {
            let s = if k <= self.n / 2 {
                k as i64
            } else {
                k as i64 - self.n as i64
            };
            2.0 * PI * s as f64 / self.length
        };
        let mut psi = psi_hat.to_vec();
        self.inv.process(&mut psi);
        let scale = 1.0 / self.n as f64;
        for v in &mut psi {
            *v *= scale;
        }
        let mut dpsi: Vec<Complex64> = psi_hat
            .iter()
            .enumerate()
            .map(|(k, v)| v * Complex64::new(0.0, kappa(k)))
            .collect();
        // odd-order derivative: zero the Nyquist mode
        dpsi[self.n / 2] = Complex64::ZERO;
        self.inv.process(&mut dpsi);
        for v in &mut dpsi {
            *v *= scale;
        }
        // -(2 psi psi_x + psi_x psi) with the solver's operation order
        let mut out: Vec<Complex64> = (0..self.n)
            .map(|j| {
                let t1 = psi[j] * dpsi[j];
                let t2 = dpsi[j] * psi[j];
                -(2.0 * t1 + t2)
            })
            .collect();
        self.fwd.process(&mut out);
        self.mask(&mut out);
        out
    }

    fn step(&self, psi_hat: &mut Vec<Complex64>) {
        let dt = self.dt;
        let ax = |a: &[Complex64], s: f64, b: &[Complex64]| -> Vec<Complex64> {
            a.iter().zip(b).map(|(x, y)| x + s * y).collect()
        };
        let emul = |e: &[Complex64], v: &[Complex64]| -> Vec<Complex64> {
            e.iter().zip(v).map(|(a, b)| a * b).collect()
        };
        let g1 = self.nonlinear(psi_hat);
        let em = emul(&self.exp_half, psi_hat);
        let eg1 = emul(&self.exp_half, &g1);
        let g2 = self.nonlinear(&ax(&em, dt / 2.0, &eg1));
        let g3 = self.nonlinear(&ax(&em, dt / 2.0, &g2));
        let e1m = emul(&self.exp_full, psi_hat);
        let eg3 = emul(&self.exp_half, &g3);
        let g4 = self.nonlinear(&ax(&e1m, dt, &eg3));
        let e1g1 = emul(&self.exp_full, &g1);
        let g23: Vec<Complex64> = g2.iter().zip(&g3).map(|(a, b)| a + b).collect();
        let eg23 = emul(&self.exp_half, &g23);
        let mut out = e1m;
        out = ax(&out, dt / 6.0, &e1g1);
        out = ax(&out, dt / 3.0, &eg23);
        out = ax(&out, dt / 6.0, &g4);
        *psi_hat = out;
    }
}

/// 7. Z2^{-1} KdV against the independent complex-scalar integrator.
#[test]
fn criterion_07_complexification() {
    let (n, length, dt, t_end) = (256usize, 2.0 * PI, 5e-4_f64, 0.5_f64);
    let steps = (t_end / dt).round() as usize;

    let v0 = |x: f64| 0.6 * x.sin() + 0.25 * (2.0 * x).cos();
    let w0 = |x: f64| 0.4 * (x).cos() - 0.2 * (3.0 * x).sin();

    // algebra-valued run over Z2^{-1}
    let alg = FrobeniusAlgebra::<Rat>::z2(rint(-1), 1).unwrap();
    let eq = build_euler_equation(
        &alg,
        InertiaSpec::new(vec![elem(&[1, 0])]).unwrap(),
        elem(&[1, 0]),
    )
    .unwrap();
    let solver = Solver::new(&eq, &[], n, length, dt, SchemeChoice::IfRk4).unwrap();
    let u0 = GridField::from_fn(n, 2, length, |x, c| if c == 0 { v0(x) } else { w0(x) }).unwrap();
    let mut state = solver.state_from_u(&u0).unwrap();
    for _ in 0..steps {
        solver.step(&mut state).unwrap();
    }

    // independent complex-scalar run
    let oracle = ComplexKdv::new(n, length, dt);
    let mut psi_hat: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = j as f64 * length / n as f64;
            Complex64::new(v0(x), w0(x))
        })
        .collect();
    oracle.fwd.process(&mut psi_hat);
    oracle.mask(&mut psi_hat);
    for _ in 0..steps {
        oracle.step(&mut psi_hat);
    }
    let mut psi = psi_hat;
    oracle.inv.process(&mut psi);
    for v in &mut psi {
        *v *= 1.0 / n as f64;
    }

    let mut max_diff = 0.0_f64;
    for j in 0..n {
        max_diff = max_diff.max((state.m.get(j, 0) - psi[j].re).abs());
        max_diff = max_diff.max((state.m.get(j, 1) - psi[j].im).abs());
    }
    assert!(max_diff < 1e-9, "complexification mismatch {max_diff:.3e}");
    println!(
        "criterion 7 PASS: Z2^-1 KdV vs complex-scalar oracle, componentwise max diff {max_diff:.3e} (< 1e-9)"
    );
}

/// 8. Multi-trace conservation on a Z2^2 F-CH run.
#[test]
fn criterion_08_multitrace_conservation() {
    let (n, length, dt, t_end) = (256usize, 2.0 * PI, 2e-4, 0.5);
    let table = FrobeniusAlgebra::<Rat>::z2(rint(2), 1).unwrap();
    let one = elem(&[1, 0]);
    let eq = build_euler_equation(
        &table,
        InertiaSpec::order_one(one.clone(), one.clone()).unwrap(),
        AlgebraElement::zeros(2),
    )
    .unwrap();
    let traces = vec![
        FrobeniusAlgebra::<Rat>::z2(rint(2), 1).unwrap(),
        FrobeniusAlgebra::<Rat>::z2(rint(2), 2).unwrap(),
    ];
    let solver = Solver::new(&eq, &traces, n, length, dt, SchemeChoice::Auto).unwrap();
    let u0 = GridField::from_fn(n, 2, length, |x, c| {
        if c == 0 {
            0.5 * x.sin() + 0.15 * (2.0 * x).cos()
        } else {
            0.3 * x.sin() - 0.1 * (2.0 * x).sin()
        }
    })
    .unwrap();
    let ts = solver
        .run(solver.state_from_u(&u0).unwrap(), t_end, 100, false)
        .unwrap();
    let d1 = ts.max_drift(0);
    let d2 = ts.max_drift(1);
    assert_eq!(ts.labels[0], "H1[tr1]");
    assert_eq!(ts.labels[1], "H1[tr2]");
    assert!(d1 < 1e-6, "tr1 H1 drift {d1:.3e}");
    assert!(d2 < 1e-6, "tr2 H1 drift {d2:.3e}");
    println!(
        "criterion 8 PASS: F-CH H1 drift {d1:.3e} under tr1 and {d2:.3e} under tr2 (both < 1e-6)"
    );
}

/// 9. Fourth-order convergence of the time stepper on the soliton run.
#[test]
fn criterion_09_convergence_order() {
    let (n, length, c, x0, t_end) = (512usize, 40.0, 1.0, 20.0, 0.1);
    let eq = scalar_kdv();
    let u0 = soliton_field(n, length, c, x0, 0.0);
    let solve = |dt: f64| -> GridField {
        let solver = Solver::new(&eq, &[], n, length, dt, SchemeChoice::IfRk4).unwrap();
        let mut state = solver.state_from_u(&u0).unwrap();
        let steps = (t_end / dt).round() as usize;
        for _ in 0..steps {
            solver.step(&mut state).unwrap();
        }
        state.u
    };
    let coarse = solve(4e-3);
    let mid = solve(2e-3);
    let fine = solve(1e-3);
    let e1 = coarse.max_abs_diff(&mid);
    let e2 = mid.max_abs_diff(&fine);
    let ratio = e1 / e2;
    assert!(
        (12.0..=20.0).contains(&ratio),
        "convergence ratio {ratio:.2} outside [12, 20] (e1 = {e1:.3e}, e2 = {e2:.3e})"
    );
    println!("criterion 9 PASS: dt-halving error ratio {ratio:.2} in [12, 20]");
}

/// 10. F-HS gauge: the zero mode of m stays pinned; non-mean-zero moment
/// data is rejected.
#[test]
fn criterion_10_hs_gauge() {
    let (n, length, dt, t_end) = (256usize, 2.0 * PI, 1e-3, 0.5);
    let alg = FrobeniusAlgebra::<Rat>::reals();
    let eq = build_euler_equation(
        &alg,
        InertiaSpec::order_one(AlgebraElement::zeros(1), elem(&[1])).unwrap(),
        elem(&[1]),
    )
    .unwrap();
    assert_eq!(eq.kind(), fvir_core::EquationKind::FHs);
    let solver = Solver::new(&eq, &[], n, length, dt, SchemeChoice::Auto).unwrap();
    assert!(solver.hs_gauge());

    let u0 =
        GridField::from_fn(n, 1, length, |x, _| 0.8 * x.sin() + 0.2 * (2.0 * x).cos()).unwrap();
    let ts = solver
        .run(solver.state_from_u(&u0).unwrap(), t_end, 50, false)
        .unwrap();
    let worst = ts.max_mean_m();
    assert!(worst < 1e-10, "zero mode of m reached {worst:.3e}");

    let m_bad = GridField::from_fn(n, 1, length, |x, _| 0.3 + x.sin()).unwrap();
    let err = solver.state_from_m(&m_bad).unwrap_err();
    assert!(
        matches!(err, SolverError::NonzeroMeanHs { .. }),
        "got {err:?}"
    );
    println!(
        "criterion 10 PASS: |zero mode of m| <= {worst:.3e} (< 1e-10) over t <= 0.5; non-mean-zero m rejected"
    );
}
