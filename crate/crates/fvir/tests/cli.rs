//! End-to-end CLI checks: every exit code path, golden `expand` output, and
//! byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn fvir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fvir"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_cfg(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const CH_VERIFY: &str = "
[algebra]
spec = Z2(-1,2), Z2(-1,1)
[inertia]
alpha0 = 1, 0
alpha1 = 1, 0
[zeta]
zeta = 0, 0
";

#[test]
fn verify_passes_on_ch() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "ch.cfg", CH_VERIFY);
    let report = dir.path().join("report.json");
    let out = fvir(&[
        "verify",
        "--config",
        &cfg,
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PASS"));
    assert!(!stdout.contains("FAIL"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(json["all_passed"], serde_json::Value::Bool(true));
    assert!(json["identities"].as_array().unwrap().len() > 10);
}

#[test]
fn verify_json_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "ch.cfg", CH_VERIFY);
    let out = fvir(&["verify", "--config", &cfg, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["all_passed"], serde_json::Value::Bool(true));
}

#[test]
fn verify_rejects_degenerate_trace_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "bad.cfg",
        "[algebra]\nspec = Zl(2,[1,0])\n[inertia]\nalpha0 = 1, 0\n[zeta]\nzeta = 0, 0\n",
    );
    let out = fvir(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degenerate"));
}

#[test]
fn verify_inject_error_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "ch.cfg", CH_VERIFY);
    let out = fvir(&["verify", "--config", &cfg, "--inject-error"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn verify_inject_error_exits_1_on_scalar_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "r.cfg",
        "[algebra]\nspec = R\n[inertia]\nalpha0 = 1\n[zeta]\nzeta = 1\n",
    );
    assert_eq!(fvir(&["verify", "--config", &cfg]).status.code(), Some(0));
    let out = fvir(&["verify", "--config", &cfg, "--inject-error"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn expand_matches_goldens_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let kdv = write_cfg(
        dir.path(),
        "kdv.cfg",
        "[algebra]\nspec = Z2(2,1)\n[inertia]\nalpha0 = 1, 0\n[zeta]\nzeta = 1, 0\n",
    );
    let out1 = fvir(&["expand", "--config", &kdv]);
    assert_eq!(out1.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out1.stdout),
        include_str!("golden/kdv_eps_2.txt")
    );
    let out2 = fvir(&["expand", "--config", &kdv]);
    assert_eq!(
        out1.stdout, out2.stdout,
        "expand output must be byte-identical across runs"
    );

    let hs = write_cfg(
        dir.path(),
        "hs.cfg",
        "[algebra]\nspec = Z2(-1,1)\n[inertia]\nalpha0 = 0, 0\nalpha1 = 1, 0\n[zeta]\nzeta = 0, 0\n",
    );
    let out = fvir(&["expand", "--config", &hs]);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        include_str!("golden/hs_eps_m1.txt")
    );

    let r = write_cfg(
        dir.path(),
        "r.cfg",
        "[algebra]\nspec = R\n[inertia]\nalpha0 = 1\n[zeta]\nzeta = 1\n",
    );
    let out = fvir(&["expand", "--config", &r]);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "u_t + 3*u*u_x + u_xxx = 0\n"
    );
}

#[test]
fn expand_rejects_malformed_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "bad.cfg", "[algebra]\nspec = Q9(1)\n");
    let out = fvir(&["expand", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}

fn soliton_cfg(out_csv: &str) -> String {
    format!(
        "
[algebra]
spec = R
[inertia]
alpha0 = 1
[zeta]
zeta = 1
[domain]
length = 40
n = 256
[time]
dt = 1e-3
t_end = 0.2
scheme = if_rk4
[initial]
profile = sech2
sech2.c = 1
sech2.x0 = 20
[output]
path = {out_csv}
every = 50
"
    )
}

#[test]
fn simulate_soliton_writes_csv_with_small_drift() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("run.csv");
    let cfg = write_cfg(
        dir.path(),
        "sol.cfg",
        &soliton_cfg(csv_path.to_str().unwrap()),
    );
    let out = fvir(&["simulate", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# fvir"));
    let header = lines.next().unwrap();
    assert_eq!(header.split(',').next(), Some("t"));
    assert!(header.contains("H1[tr]"));
    assert!(header.contains("drift_H1[tr]"));
    let drift_col = header.split(',').position(|c| c == "drift_H1[tr]").unwrap();
    let last = csv.lines().last().unwrap();
    let drift: f64 = last.split(',').nth(drift_col).unwrap().parse().unwrap();
    assert!(drift < 1e-8, "final H1 drift {drift:.3e}");

    // determinism: identical bytes on a rerun
    let csv2_path = dir.path().join("run2.csv");
    let out2 = fvir(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        csv2_path.to_str().unwrap(),
    ]);
    assert_eq!(out2.status.code(), Some(0));
    assert_eq!(csv, std::fs::read_to_string(&csv2_path).unwrap());
}

#[test]
fn simulate_writes_field_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("run.csv");
    let body =
        soliton_cfg(csv_path.to_str().unwrap()).replace("every = 50", "every = 100\nfields = true");
    let cfg = write_cfg(dir.path(), "sol.cfg", &body);
    let out = fvir(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let snap0 = dir.path().join("run_fields_000000.csv");
    assert!(snap0.exists());
    let text = std::fs::read_to_string(snap0).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("x,m1"));
}

#[test]
fn simulate_rejects_zero_dt_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_body = soliton_cfg("unused.csv").replace("dt = 1e-3", "dt = 0");
    let cfg = write_cfg(dir.path(), "bad.cfg", &cfg_body);
    let out = fvir(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dt"));
}

#[test]
fn simulate_hs_nonzero_mean_m_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("hs.csv");
    let cfg = write_cfg(
        dir.path(),
        "hs.cfg",
        &format!(
            "
[algebra]
spec = R
[inertia]
alpha0 = 0
alpha1 = 1
[zeta]
zeta = 1
[domain]
length = 6.283185307179586
n = 64
[time]
dt = 1e-3
t_end = 0.01
[initial]
field = m
profile = sech2
sech2.c = 1
sech2.x0 = 3
[output]
path = {}
",
            csv.to_str().unwrap()
        ),
    );
    let out = fvir(&["simulate", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("mean-zero"));
}

#[test]
fn simulate_blowup_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("blow.csv");
    let cfg = write_cfg(
        dir.path(),
        "blow.cfg",
        &format!(
            "
[algebra]
spec = R
[inertia]
alpha0 = 1
[zeta]
zeta = 0
[domain]
length = 6.283185307179586
n = 64
[time]
dt = 0.1
t_end = 2
[initial]
profile = sine
sine.1.k = 1
sine.1.amp = 1e7
[output]
path = {}
",
            csv.to_str().unwrap()
        ),
    );
    let out = fvir(&["simulate", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("blow-up"));
}

#[test]
fn algebra_info_prints_gram_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "alg.cfg",
        "[algebra]\nspec = Z2(2,1)\n[inertia]\nalpha0 = 1, 0\n[zeta]\nzeta = 0, 0\n",
    );
    let out = fvir(&["algebra-info", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("dim 2"));
    assert!(stdout.contains("gram"));

    let out = fvir(&["algebra-info", "--config", &cfg, "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["algebras"][0]["gram"][3], "2");
}

#[test]
fn custom_algebra_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    // Z2^{-1} written out longhand
    std::fs::write(
        dir.path().join("my.alg"),
        "dim = 2\nstructure_constants = 1, 0, 0, 1, 0, 1, -1, 0\nunit = 1, 0\ntrace = 1, 0\nname = custom\n",
    )
    .unwrap();
    let cfg = write_cfg(
        dir.path(),
        "file.cfg",
        "[algebra]\nspec = file:my.alg\n[inertia]\nalpha0 = 1, 0\n[zeta]\nzeta = 1, 0\n",
    );
    let out = fvir(&["expand", "--config", &cfg]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        include_str!("golden/kdv_eps_m1.txt")
    );
}
