//! End-to-end tests of the `qtgrav` binary: outputs, exit codes and error
//! objects.

use std::path::PathBuf;
use std::process::{Command, Output};

use qtgrav::triangulation::{automorphisms, cycles_to_one_based, flip, isomorphisms, Permutation};
use serde_json::Value;

fn qtgrav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtgrav"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&o.stdout)
        )
    })
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|e| {
        panic!(
            "stderr is not JSON ({e}): {}",
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn f64_of(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

/// A fresh scratch directory for one test.
fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qtgrav-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &std::path::Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.display().to_string()
}

fn assert_usage_error(o: &Output) {
    assert_eq!(code(o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stderr_json(o)["error"]["message"].is_string());
}

#[test]
fn eps_of_the_four_punctured_sphere() {
    let o = qtgrav(&["surface", "eps", "example_0_4.json"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    let eps: Vec<Vec<i64>> = serde_json::from_value(v["eps"].clone()).unwrap();
    assert_eq!(eps.len(), 6);
    for i in 0..6 {
        assert_eq!(eps[i].len(), 6);
        for j in 0..6 {
            assert_eq!(eps[i][j], -eps[j][i]);
        }
    }
    assert_eq!(eps[0], [0, -1, 1, 1, -1, 0]);
    let csv = qtgrav(&["surface", "eps", "example_0_4.json", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert_eq!(text.lines().next().unwrap(), "0,-1,1,1,-1,0");
}

#[test]
fn surface_info_on_each_fixture() {
    for (name, arcs, triangles) in [
        ("example_0_3.json", 3, 2),
        ("example_0_4.json", 6, 4),
        ("example_1_2.json", 6, 4),
    ] {
        let o = qtgrav(&["surface", "info", name]);
        assert_eq!(code(&o), 0);
        let v = stdout_json(&o);
        assert_eq!(v["arcs"], arcs);
        assert_eq!(v["triangles"], triangles);
        assert!(v["automorphisms"].as_u64().unwrap() >= 1);
    }
}

#[test]
fn flip_then_path_back() {
    let dir = scratch("flip");
    let o = qtgrav(&["surface", "flip", "example_1_2.json", "--arc", "1"]);
    assert_eq!(code(&o), 0);
    let flipped = write(&dir, "flipped.json", &stdout_json(&o));
    let back = qtgrav(&["surface", "flip", &flipped, "--arc", "1"]);
    assert_eq!(code(&back), 0);
    let path = qtgrav(&["surface", "path", "example_1_2.json", &flipped]);
    assert_eq!(code(&path), 0);
    let w = stdout_json(&path);
    assert_eq!(w["start"], "example_1_2.json");
    assert_eq!(w["moves"].as_array().unwrap().len(), 1);
    assert_eq!(w["moves"][0]["flip"], 1);
}

#[test]
fn flip_errors_exit_two() {
    let o = qtgrav(&["surface", "flip", "example_1_2.json", "--arc", "99"]);
    assert_eq!(code(&o), 2);
    assert_eq!(stderr_json(&o)["error"]["kind"], "triangulation");
    let illegal = qtgrav(&["surface", "flip", "example_0_3.json", "--arc", "1"]);
    assert_eq!(code(&illegal), 2);
    assert!(stderr_json(&illegal)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("illegal flip"));
}

#[test]
fn malformed_and_missing_files_exit_two() {
    let dir = scratch("bad");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"genus\": 0}").unwrap();
    for file in [bad.display().to_string(), "no_such_file.json".to_string()] {
        let o = qtgrav(&["surface", "info", &file]);
        assert_eq!(code(&o), 2);
        assert_eq!(stderr_json(&o)["error"]["kind"], "triangulation");
    }
}

#[test]
fn fixture_directory_override() {
    let dir = scratch("fixtures");
    let src = qtgrav::fixtures::fixture_dir().join("example_0_4.json");
    std::fs::copy(src, dir.join("renamed.json")).unwrap();
    let run = |env: &std::path::Path| {
        Command::new(env!("CARGO_BIN_EXE_qtgrav"))
            .args(["surface", "eps", "renamed.json"])
            .env(qtgrav::fixtures::FIXTURE_ENV, env)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run(&dir)), 0);
    assert_eq!(code(&run(&dir.join("missing"))), 2);
}

#[test]
fn qd_table_is_unimodular_csv() {
    let o = qtgrav(&[
        "qd", "table", "--lambda", "0", "--x", "-3..3", "--y", "-3..3",
    ]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,y,re,im,abs");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 21 * 21);
    for r in &rows {
        assert_eq!(r.len(), 5);
        assert!((r[4] - 1.0).abs() <= 1e-9, "{r:?}");
        assert!((r[2].hypot(r[3]) - 1.0).abs() <= 1e-9);
    }
    assert_eq!((rows[0][0], rows[0][1]), (-3.0, -3.0));
    assert_eq!((rows[440][0], rows[440][1]), (3.0, 3.0));
    let json = qtgrav(&[
        "qd", "table", "--lambda", "-1", "--points", "3", "--format", "json",
    ]);
    assert_eq!(stdout_json(&json)["samples"].as_array().unwrap().len(), 9);
}

#[test]
fn qd_eval_values() {
    let f = stdout_json(&qtgrav(&[
        "qd", "eval", "--lambda", "-1", "--hbar", "0.7", "--x", "0.3", "--y", "-1.2",
    ]));
    assert_eq!(f["function"], "F");
    assert!((f64_of(&f["abs"]) - 1.0).abs() <= 1e-9);
    // Φ^ℏ(0) = exp(−πi(ℏ + 1/ℏ)/24).
    let phi = stdout_json(&qtgrav(&[
        "qd",
        "eval",
        "--function",
        "phi",
        "--hbar",
        "0.7",
        "--x",
        "0",
    ]));
    let arg = -std::f64::consts::PI * (0.7 + 1.0 / 0.7) / 24.0;
    assert!((f64_of(&phi["re"]) - arg.cos()).abs() <= 1e-9);
    assert!((f64_of(&phi["im"]) - arg.sin()).abs() <= 1e-9);
}

#[test]
fn qd_usage_errors() {
    assert_usage_error(&qtgrav(&["qd", "eval", "--x", "0"]));
    assert_usage_error(&qtgrav(&["qd", "eval", "--lambda", "2", "--x", "0"]));
    assert_usage_error(&qtgrav(&["qd", "table", "--lambda", "0", "--hbar", "-1"]));
    assert_usage_error(&qtgrav(&["qd", "table", "--lambda", "0", "--x", "3..-3"]));
    assert_eq!(
        stderr_json(&qtgrav(&["qd", "table", "--lambda", "0", "--x", "nope"]))["error"]["kind"],
        "usage"
    );
}

#[test]
fn heisenberg_checks_and_negative_control() {
    for name in ["example_0_3.json", "example_0_4.json", "example_1_2.json"] {
        let o = qtgrav(&["heis", "check", name]);
        assert_eq!(code(&o), 0, "{name}");
        assert_eq!(stdout_json(&o)["passed"], true);
    }
    let o = qtgrav(&[
        "heis",
        "check",
        "example_0_4.json",
        "--solution",
        "reducible",
    ]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    assert!(!v["x_constraint_failures"].as_array().unwrap().is_empty());
    assert!(v["heisenberg_defects"].as_array().unwrap().is_empty());
}

#[test]
fn irreducible_system_dump() {
    let v = stdout_json(&qtgrav(&["heis", "irrep", "example_1_2.json"]));
    // 6 arcs and 2 punctures leave 4 variables.
    assert_eq!(v["variables"].as_array().unwrap().len(), 4);
    assert_eq!(v["pivots"].as_array().unwrap().len(), 2);
    let x1 = &v["operators"]["x_1"];
    assert!(x1["pos"].is_array() && x1["mom"].is_array());
    assert!(x1["mom"].as_array().unwrap().iter().all(Value::is_string));
}

#[test]
fn phi_pentagon_passes() {
    let o = qtgrav(&[
        "check",
        "phi-pentagon",
        "--hbar",
        "0.7",
        "--grid",
        "1024",
        "--domain",
        "12",
    ]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert!(f64_of(&v["max_residual"]) <= 1e-3);
    assert_eq!(v["N"], 1024);
    assert_eq!(
        v["per_state"].as_array().unwrap().len(),
        v["states"].as_u64().unwrap() as usize
    );
}

#[test]
fn f_pentagon_passes_for_negative_lambda() {
    let o = qtgrav(&[
        "check",
        "f-pentagon",
        "--lambda",
        "-1",
        "--hbar",
        "0.7",
        "--grid",
        "512",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert!(f64_of(&stdout_json(&o)["max_residual"]) <= 1e-3);
}

#[test]
fn tolerance_override_turns_a_pass_into_a_failure() {
    let o = qtgrav(&[
        "check",
        "phi-pentagon",
        "--grid",
        "256",
        "--tolerance",
        "1e-30",
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["passed"], false);
}

#[test]
fn grid_errors_exit_two() {
    assert_usage_error(&qtgrav(&["check", "phi-pentagon", "--grid", "1000"]));
    assert_usage_error(&qtgrav(&[
        "check",
        "f-pentagon",
        "--lambda",
        "0",
        "--refine",
        "--grid",
        "256",
    ]));
}

#[test]
fn relation_suite_and_corrupted_control() {
    let o = qtgrav(&["check", "relations", "example_1_2.json", "--lambda", "-1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = stdout_json(&o);
    assert_eq!(v["passed"], true);
    assert!(v["summary"]["pentagon"]["instances"].as_u64().unwrap() > 0);
    assert!(f64_of(&v["max_residual"]) <= 1e-3);
    let bad = qtgrav(&[
        "check",
        "relations",
        "example_1_2.json",
        "--lambda",
        "-1",
        "--corrupt-auto",
        "3",
        "--resampling-budget",
        "inf",
    ]);
    assert_eq!(code(&bad), 1);
    let v = stdout_json(&bad);
    assert!(f64_of(&v["max_residual"]) > 0.5);
    assert_eq!(v["corrupt_auto"], 3);
}

#[test]
fn exact_relations_on_every_fixture_and_worker_counts_agree() {
    for name in ["example_0_3.json", "example_0_4.json", "example_1_2.json"] {
        let one = qtgrav(&[
            "check",
            "relations",
            name,
            "--lambda",
            "0",
            "--exact-only",
            "--radius",
            "1",
        ]);
        assert_eq!(code(&one), 0, "{name}");
        let two = qtgrav(&[
            "check",
            "relations",
            name,
            "--lambda",
            "0",
            "--exact-only",
            "--radius",
            "1",
            "--workers",
            "2",
        ]);
        assert_eq!(one.stdout, two.stdout);
    }
}

/// Writes loop files on the (0,4) surface: a relabeling by an automorphism
/// and two flips at different arcs closed by an isomorphism. A single flip
/// never returns to the tetrahedral shape.
fn loop_files(dir: &std::path::Path) -> (String, String) {
    let t = qtgrav::fixtures::load("example_0_4.json").unwrap();
    let sigma = automorphisms(&t)
        .into_iter()
        .find(|s| !s.is_identity())
        .unwrap();
    let relabel = serde_json::json!({"start": "example_0_4.json", "moves": [], "closing_iso": cycles_to_one_based(&sigma)});
    let (k, l, tau) = (0..6)
        .flat_map(|k| (0..6).filter(move |&l| l != k).map(move |l| (k, l)))
        .find_map(|(k, l)| {
            let end = flip(&flip(&t, k).ok()?, l).ok()?;
            isomorphisms(&end, &t).into_iter().next().map(|s| (k, l, s))
        })
        .unwrap();
    let flipped = serde_json::json!({
        "start": "example_0_4.json",
        "moves": [{"flip": k + 1}, {"flip": l + 1}],
        "closing_iso": cycles_to_one_based(&tau),
    });
    (
        write(dir, "relabel.json", &relabel),
        write(dir, "flip_loop.json", &flipped),
    )
}

#[test]
fn loops_verify_and_compile() {
    let dir = scratch("loops");
    let (relabel, flipped) = loop_files(&dir);
    for file in [&relabel, &flipped] {
        let o = qtgrav(&["mcg", "verify", file]);
        assert_eq!(code(&o), 0);
        assert_eq!(stdout_json(&o)["eps_invariant"], true);
        let r = qtgrav(&["mcg", "rho", file, "--lambda", "0"]);
        assert_eq!(code(&r), 0);
        let v = stdout_json(&r);
        assert_eq!(v["phase"], "undetermined");
        assert_eq!(v["linear_part"].as_array().unwrap().len(), 6);
    }
    let v = stdout_json(&qtgrav(&["mcg", "rho", &flipped, "--lambda", "0"]));
    let kinds: Vec<&str> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, ["Perm", "Monomial", "Auto", "Monomial", "Auto"]);
}

#[test]
fn invalid_loop_is_a_failure_or_an_input_error() {
    let dir = scratch("badloop");
    let t = qtgrav::fixtures::load("example_0_4.json").unwrap();
    let not_auto = (0..6)
        .flat_map(|a| (a + 1..6).map(move |b| Permutation::transposition(6, a, b)))
        .find(|s| !automorphisms(&t).contains(s))
        .unwrap();
    let file = write(
        &dir,
        "bad.json",
        &serde_json::json!({"start": "example_0_4.json", "moves": [], "closing_iso": cycles_to_one_based(&not_auto)}),
    );
    let o = qtgrav(&["mcg", "verify", &file]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["valid"], false);
    let r = qtgrav(&["mcg", "rho", &file, "--lambda", "-1"]);
    assert_eq!(code(&r), 2);
    assert_eq!(stderr_json(&r)["error"]["kind"], "intertwiner");
}

#[test]
fn consistency_suite_is_seeded() {
    let a = qtgrav(&[
        "mcg",
        "consistency",
        "example_0_4.json",
        "--pairs",
        "5",
        "--paths",
        "10",
        "--seed",
        "9",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout_json(&a)["passed"], true);
    let b = qtgrav(&[
        "--seed",
        "9",
        "mcg",
        "consistency",
        "example_0_4.json",
        "--pairs",
        "5",
        "--paths",
        "10",
    ]);
    assert_eq!(a.stdout, b.stdout);
    let c = qtgrav(&[
        "mcg",
        "consistency",
        "example_0_4.json",
        "--pairs",
        "5",
        "--paths",
        "10",
        "--seed",
        "10",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn usage_errors_are_json() {
    for args in [
        &["bogus"][..],
        &["surface"],
        &["surface", "eps"],
        &["heis", "check", "example_0_4.json", "--format", "csv"],
        &["surface", "info", "example_0_4.json", "--workers", "0"],
    ] {
        let o = qtgrav(args);
        assert_usage_error(&o);
        assert_eq!(stderr_json(&o)["error"]["kind"], "usage", "{args:?}");
    }
    assert_eq!(code(&qtgrav(&["--help"])), 0);
}
