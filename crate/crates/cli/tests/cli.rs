use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tsankov::algebra::Rational;
use tsankov::model::build_m14;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsankov"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Exit code and parsed stdout report.
fn report(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().expect("exit code");
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "no JSON report ({e}); stderr:\n{}",
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (code, json)
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name} in {r}"))
}

fn exact(n: i64, d: i64) -> Value {
    json!({ "num": n.to_string(), "den": d.to_string() })
}

#[test]
fn m14_is_jacobi_and_mixed_tsankov() {
    let (code, r) = report(&[
        "check-model",
        "m14",
        "--properties",
        "jacobi-tsankov,mixed-tsankov",
    ]);
    assert_eq!(code, 0);
    assert_eq!(r["holds"], true);
    assert_eq!(r["config"]["mode"], "rational");
    assert_eq!(check(&r, "jacobi-tsankov")["holds"], true);
    assert_eq!(check(&r, "mixed-tsankov")["holds"], true);
    assert_eq!(
        check(&r, "signature")["detail"],
        json!({"p": 8, "q": 6, "dim": 14})
    );
}

#[test]
fn two_step_nilpotency_fails_with_a_witness() {
    let out = run(&[
        "check-model",
        "m14",
        "--properties",
        "2-step-jacobi-nilpotent",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let c = check(&r, "2-step-jacobi-nilpotent");
    assert_eq!(c["holds"], false);
    assert_eq!(c["summary"], "fails: J(a3)J(a2) a1 = a1*");
    let w = &c["detail"]["witness"];
    assert_eq!(w["expr"]["left"], json!({"op": "jacobi", "x": 2, "y": 2}));
    assert_eq!(w["expr"]["right"], json!({"op": "jacobi", "x": 1, "y": 1}));
    assert_eq!(w["vector"], 0);
    let residual = w["residual"].as_array().unwrap();
    for (i, v) in residual.iter().enumerate() {
        assert_eq!(*v, exact(i64::from(i == 3), 1), "residual entry {i}");
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("J(a3)J(a2) a1 = a1*"));
}

#[test]
fn zero_model_has_every_property() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    let doc = json!({
        "dim": 3,
        "form": [
            [exact(1, 1), exact(0, 1), exact(0, 1)],
            [exact(0, 1), exact(-1, 1), exact(0, 1)],
            [exact(0, 1), exact(0, 1), exact(1, 1)],
        ],
        "tensor": [],
    });
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, r) = report(&["check-model", path.to_str().unwrap(), "--properties", "all"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["checks"].as_array().unwrap().len(), 2 + 7);
    assert_eq!(
        check(&r, "signature")["detail"],
        json!({"p": 1, "q": 2, "dim": 3})
    );
}

#[test]
fn float_model_files_run_in_float_mode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let doc = json!({
        "dim": 2,
        "form": [[1.0, 0.0], [0.0, 1.0]],
        "tensor": [{"idx": [0, 1, 1, 0], "val": 1.5}],
    });
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, r) = report(&["check-model", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["config"]["mode"], "float");
    // round spheres are not Jacobi-Tsankov
    let (code, r) = report(&[
        "check-model",
        path.to_str().unwrap(),
        "--properties",
        "jacobi-tsankov",
    ]);
    assert_eq!(code, 1);
    assert_eq!(
        check(&r, "jacobi-tsankov")["summary"],
        "fails: [J(e0), J(e0,e1)] e0 = -1.125 e1"
    );
    let out = run(&["--mode", "rational", "check-model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn builtin_m14_fixture_is_the_library_model() {
    let text = std::fs::read_to_string(fixture("m14.json")).unwrap();
    let m = tsankov::model::Model0::<Rational>::from_json(&text).unwrap();
    assert_eq!(m, build_m14::<Rational>());
}

#[test]
fn dilatation_symmetry_and_its_tau() {
    let (code, r) = report(&["symmetry", "m14", "--generator", "dilatation:2,1/2,1"]);
    assert_eq!(code, 0, "{r}");
    let tau = &check(&r, "tau")["detail"];
    assert_eq!(
        tau["tau"],
        json!([
            [exact(1, 2), exact(0, 1), exact(0, 1)],
            [exact(0, 1), exact(2, 1), exact(0, 1)],
            [exact(0, 1), exact(0, 1), exact(1, 1)],
        ])
    );
    assert_eq!(tau["det"], exact(1, 1));
}

#[test]
fn inadmissible_dilatation_fails() {
    let (code, r) = report(&["symmetry", "m14", "--generator", "dilatation:2,1,1"]);
    assert_eq!(code, 1);
    assert_eq!(check(&r, "parameters")["holds"], false);
    assert_eq!(check(&r, "invariance")["holds"], false);
    assert!(!check(&r, "invariance")["detail"]["mismatches"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn generators_from_json_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rot.json");
    let doc = json!({"kind": "rotation", "cos": exact(3, 5), "sin": exact(4, 5)});
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, r) = report(&["symmetry", "m14", "--generator", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{r}");
    for g in ["swap12", "swap13"] {
        assert_eq!(report(&["symmetry", "m14", "--generator", g]).0, 0, "{g}");
    }
}

#[test]
fn random_kernel_element_has_identity_tau() {
    let (code, r) = report(&["symmetry", "m14", "--kernel-random", "--seed", "7"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["config"]["seed"], 7);
    assert_eq!(check(&r, "tau-identity")["holds"], true);

    // the sampled parameters, read back from a file, give the same verdict
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    std::fs::write(&path, check(&r, "parameters")["detail"].to_string()).unwrap();
    let (code, back) = report(&["symmetry", "m14", "--kernel-params", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(check(&back, "invariance"), check(&r, "invariance"));
}

#[test]
fn broken_kernel_parameters_fail() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let mut b = vec![vec![exact(0, 1); 8]; 3];
    b[0][6] = exact(1, 1);
    let doc = json!({"b": b, "c_antisym": [exact(0, 1), exact(0, 1), exact(0, 1)]});
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, r) = report(&["symmetry", "m14", "--kernel-params", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(check(&r, "parameters")["holds"], false);
}

#[test]
fn kernel_dimension_is_21() {
    let (code, r) = report(&["symmetry", "m14", "--kernel-dim"]);
    assert_eq!(code, 0);
    let d = &check(&r, "kernel-dimension")["detail"];
    assert_eq!(d["dimension"], 21);
    assert_eq!(d["rank"], 6);
    assert_eq!(d["unknowns"], 24);
}

#[test]
fn all_ones_is_not_symmetric() {
    let ones = fixture("ones.json");
    let (code, r) = report(&["geometry", "m-a", "--params", &ones, "symmetric"]);
    assert_eq!(code, 1);
    let eq = check(&r, "equations");
    assert_eq!(
        eq["detail"]["residuals"],
        json!([exact(1, 1), exact(5, 1), exact(5, 1)])
    );
    assert_eq!(eq["summary"], "residuals (1, 5, 5)");
    assert_eq!(check(&r, "nabla-r-vanishes")["holds"], false);
}

#[test]
fn hand_solved_family_is_symmetric() {
    let sym = fixture("sym.json");
    let (code, r) = report(&["geometry", "m-a", "--params", &sym, "symmetric"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(check(&r, "locally-symmetric")["detail"]["max_nabla_r"], 0.0);
}

#[test]
fn m_a_has_0_model_m14() {
    let sym = fixture("sym.json");
    let (code, r) = report(&[
        "geometry",
        "m-a",
        "--params",
        &sym,
        "verify-0-model",
        "--points",
        "100",
    ]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(check(&r, "0-model")["detail"]["points"], 100);
}

#[test]
fn m_phi_has_0_model_m14_in_float_mode() {
    let (code, r) = report(&["geometry", "m-phi", "verify-0-model", "--tol", "1e-10"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(r["config"]["mode"], "float");
}

#[test]
fn exponential_family_xi_sweep_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("xi.csv");
    let exp = fixture("exp-family.json");
    let (code, r) = report(&[
        "geometry",
        "m-phi",
        "--params",
        &exp,
        "xi",
        "--sweep",
        "x1=0:1:0.1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{r}");
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x1,Xi"));
    let rows: Vec<(String, f64)> = lines
        .map(|l| {
            let (x, xi) = l.split_once(',').unwrap();
            (x.to_string(), xi.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[3].0, "0.3");
    assert!(rows.iter().all(|(_, xi)| xi.abs() < 1e-12), "{rows:?}");
}

#[test]
fn default_m_phi_xi_varies_along_x1() {
    let (code, r) = report(&["geometry", "m-phi", "xi", "--sweep", "x1=0:1:1"]);
    assert_eq!(code, 0, "{r}");
    let rows = check(&r, "xi")["detail"]["rows"]
        .as_array()
        .unwrap()
        .clone();
    let xi: Vec<f64> = rows.iter().map(|r| r["xi"].as_f64().unwrap()).collect();
    assert_eq!(xi.len(), 2);
    assert!((xi[0] - xi[1]).abs() > 1e-3, "{xi:?}");
}

#[test]
fn geodesic_trace_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let (code, r) = report(&[
        "geometry",
        "m-a",
        "geodesic",
        "--velocity",
        "1,2,3,0,0,0,1,0,0,0,0,0,0,1",
        "--steps",
        "4",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(check(&r, "geodesic-equation")["holds"], true);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].starts_with("t,x1,x2,x3,x1*"));
    assert!(lines[2].starts_with("1/4,1/4,1/2,3/4,"));
}

#[test]
fn exp_inverse_roundtrips() {
    let (code, r) = report(&["geometry", "m-a", "exp-inverse", "--points", "5"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(check(&r, "exp-inverse")["detail"]["max_residual"], 0.0);
    let (code, r) = report(&["geometry", "m-phi", "exp-inverse", "--points", "5"]);
    assert_eq!(code, 0, "{r}");
}

#[test]
fn curvature_and_nabla_r_at_a_point() {
    let at = "1,1,1,0,0,0,0,0,0,0,0,0,0,0";
    let (code, r) = report(&["geometry", "m-a", "curvature", "--at", at]);
    assert_eq!(code, 0, "{r}");
    let comps = check(&r, "curvature")["detail"][0]["components"]
        .as_array()
        .unwrap()
        .clone();
    assert!(comps.contains(&json!({"component": "R(x1,x2,x1,y21)", "value": exact(-1, 1)})));
    let (code, r) = report(&[
        "geometry",
        "m-a",
        "nabla-r",
        "--at",
        "1,2,3,0,0,0,0,0,0,0,0,0,0,0",
    ]);
    assert_eq!(code, 0);
    let comps = check(&r, "nabla-r")["detail"]["points"][0]["components"]
        .as_array()
        .unwrap()
        .clone();
    assert!(comps.contains(&json!({"component": "R(x1,x2,x1,x2;x3)", "value": exact(6, 1)})));
}

#[test]
fn metric_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("metric.json");
    // a = 1, b = 1, C = [[1]], psi_{0,0,0} = x0^2
    let doc = json!({
        "a": 1, "b": 1, "C": [[exact(1, 1)]],
        "psi": {"0,0": [{"op": "mul", "args": [{"var": 0}, {"var": 0}]}]},
    });
    std::fs::write(&path, doc.to_string()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(report(&["geometry", p, "curvature"]).0, 0);
    assert_eq!(report(&["geometry", p, "exp-inverse"]).0, 0);
    assert_eq!(
        run(&["geometry", p, "verify-0-model"]).status.code(),
        Some(2)
    );
}

#[test]
fn reports_are_reproducible() {
    let sym = fixture("sym.json");
    let cases: [&[&str]; 3] = [
        &["symmetry", "m14", "--kernel-random", "--seed", "3"],
        &[
            "geometry",
            "m-a",
            "--params",
            &sym,
            "verify-0-model",
            "--seed",
            "5",
        ],
        &["geometry", "m-a", "exp-inverse", "--seed", "9"],
    ];
    for args in cases {
        let (a, b) = (run(args), run(args));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let (a, b) = (
        run(&["geometry", "m-a", "exp-inverse", "--seed", "1"]),
        run(&["geometry", "m-a", "exp-inverse", "--seed", "2"]),
    );
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn timing_is_opt_in() {
    let (_, r) = report(&["symmetry", "m14", "--kernel-dim"]);
    assert!(r.get("duration_s").is_none());
    let (_, r) = report(&["symmetry", "m14", "--kernel-dim", "--timing"]);
    assert!(r["duration_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let missing: PathBuf = tempfile::tempdir().unwrap().path().join("nope.json");
    let cases: Vec<Vec<&str>> = vec![
        vec![],
        vec!["frobnicate"],
        vec!["check-model", "m14", "--properties", "osserman"],
        vec!["check-model", missing.to_str().unwrap()],
        vec!["symmetry", "m14"],
        vec!["symmetry", "m14", "--generator", "shear:1"],
        vec!["symmetry", "m14", "--kernel-dim", "--kernel-random"],
        vec!["geometry", "m-a", "xi", "--sweep", "x1=0:1"],
        vec!["geometry", "m-phi", "symmetric"],
        vec!["geometry", "m-a", "curvature", "--at", "1,2"],
        vec!["--mode", "complex", "check-model", "m14"],
        vec!["--mode", "rational", "geometry", "m-phi", "verify-0-model"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}
