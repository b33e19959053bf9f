use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fca_core::cli::{builtin, parse_operator, CircuitFile, Params, RuleFile, BUILTINS};
use fca_core::fca::Automaton;
use fca_core::graded::{jw_matrix, CellWindow};
use serde_json::Value;
use tempfile::TempDir;

fn fca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fca")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write_rule(dir: &TempDir, name: &str, a: &Automaton) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, RuleFile::from_rule(&a.local_rule()).to_json()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let good = write_rule(&dir, "forking.json", &Automaton::forking(0.2, 1).unwrap());
    assert_eq!(fca(&["validate", s(&good)]).status.code(), Some(0));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"neighbourhood":[0,1],"image_x":[{"coeff_re":1,"modes":[0]}],"image_y":[{"coeff_re":1,"modes":[2]}]}"#,
    )
    .unwrap();
    let out = fca(&["validate", s(&bad), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["result"]["valid"], false);
    assert!(v["result"]["violations"].as_array().unwrap().iter().any(|x| x.as_str().unwrap().starts_with("overlap")));

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{ not json").unwrap();
    assert_eq!(fca(&["validate", s(&broken)]).status.code(), Some(2));
    assert_eq!(fca(&["validate", "/nonexistent/rule.json"]).status.code(), Some(2));
}

#[test]
fn index_reports_exact_values() {
    let v = json(&fca(&["index", "--builtin", "majorana-shift-plus", "--json"]));
    assert_eq!(v["index"]["log2_num"].as_i64().unwrap().abs(), 1);
    assert_eq!(v["index"]["log2_den"], 2);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);

    let out = fca(&["index", "--builtin", "identity"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "index 2^(0) ≈ 1.000000");

    let dir = TempDir::new().unwrap();
    let cp = write_rule(&dir, "cp.json", &Automaton::controlled_phase(1.0, 0.3, 0).unwrap());
    assert_eq!(json(&fca(&["index", s(&cp), "--json"]))["index"]["log2_num"], 0);
}

#[test]
fn classify_recovers_parameters() {
    let dir = TempDir::new().unwrap();
    let f = write_rule(&dir, "f.json", &Automaton::forking(0.7, 1).unwrap());
    let v = json(&fca(&["classify", s(&f), "--json"]));
    assert_eq!(v["result"]["family"], "forking");
    assert!((v["result"]["unitary"]["theta"].as_f64().unwrap() - 0.7).abs() < 1e-9);
    assert_eq!(v["result"]["unitary"]["n"], 1);

    let v = json(&fca(&["classify", "--builtin", "identity", "--json"]));
    assert_eq!(v["result"]["family"], "local-conjugation");
    assert_eq!(v["result"]["unitary"]["theta"], 0.0);
    assert_eq!(v["result"]["unitary"]["n"], 0);

    let cp = write_rule(&dir, "cp.json", &Automaton::controlled_phase(1.0, 0.3, 0).unwrap());
    let v = json(&fca(&["classify", s(&cp), "--json"]));
    assert_eq!(v["result"]["family"], "controlled-phase");
    assert!((v["result"]["phi"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    // the echoed normal form is itself a valid rule
    let normal: RuleFile = serde_json::from_value(v["result"]["normal_form"].clone()).unwrap();
    assert!(fca_core::fca::validate_local_rule(&normal.to_rule().unwrap(), 1e-10).is_valid());
}

#[test]
fn synthesize_writes_reloadable_circuits() {
    let dir = TempDir::new().unwrap();
    let f = write_rule(&dir, "f.json", &Automaton::forking(0.4, 0).unwrap());
    let out_path = dir.path().join("circuit.json");
    let out = fca(&["synthesize", s(&f), "-o", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let file = CircuitFile::parse(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(file.layers.len(), 2);
    let circuit = file.to_fdfc().unwrap();
    for layer in circuit.layers() {
        if let fca_core::circuits::Layer::Periodic { template, .. } = layer {
            assert_eq!(template.matrix().unwrap().nrows(), 4);
        }
    }
    assert_eq!(fca(&["check-circuit", s(&out_path), s(&f)]).status.code(), Some(0));
    // a different automaton is rejected
    assert_eq!(
        fca(&["check-circuit", s(&out_path), "--builtin", "forking", "--theta", "0.5"]).status.code(),
        Some(1)
    );

    let v = json(&fca(&["synthesize", "--builtin", "conjugation", "--theta", "0.3", "--json"]));
    let layers = v["result"]["circuit"]["layers"].as_array().unwrap();
    assert_eq!(layers.len(), 1);
    assert_eq!(layers[0]["template"]["cells"].as_array().unwrap().len(), 1);
}

#[test]
fn synthesize_refuses_shifts() {
    let out = fca(&["synthesize", "--builtin", "shift-plus", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["index"]["log2_num"].as_i64().unwrap().abs(), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("if and only if its index is one"));
}

#[test]
fn evolve_examples() {
    let out = fca(&["evolve", "--builtin", "majorana-shift-plus", "--op", "X(0)", "--steps", "2", "--json"]);
    let got = parse_operator(json(&out)["result"]["operator"].as_str().unwrap()).unwrap();
    assert_eq!(got, parse_operator("X(1)").unwrap());

    let expr = "X(0) Y(2) + 0.5i Z(1)";
    let out = fca(&["evolve", "--builtin", "identity", "--op", expr, "--steps", "3", "--json"]);
    let got = parse_operator(json(&out)["result"]["operator"].as_str().unwrap()).unwrap();
    assert!(got.approx_eq(&parse_operator(expr).unwrap(), 1e-15));

    // Z(0) under forking, checked against the dense matrices of the images
    let out = fca(&["evolve", "--builtin", "forking", "--op", "Z(0)", "--json"]);
    let got = parse_operator(json(&out)["result"]["operator"].as_str().unwrap()).unwrap();
    let rule = Automaton::forking(0.0, 0).unwrap().local_rule();
    let w = CellWindow::new(-1, 1).unwrap();
    let (x, y) = (jw_matrix(&rule.image_x, &w).unwrap(), jw_matrix(&rule.image_y, &w).unwrap());
    // Z = i Y X
    let expected = (&y * &x) * num_complex::Complex64::new(0.0, 1.0);
    assert!((jw_matrix(&got, &w).unwrap() - expected).norm() < 1e-12);
    assert_eq!(got.support().len(), 2);

    assert_eq!(fca(&["evolve", "--builtin", "identity", "--op", "X(0"]).status.code(), Some(2));
    assert_eq!(
        fca(&["evolve", "--builtin", "shift-plus", "--op", "X(0)", "--steps", "3", "--window", "0..2"]).status.code(),
        Some(1)
    );
}

#[test]
fn equivalence_examples() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("w.json");
    let out = fca(&["equivalence", "builtin:forking", "builtin:identity", "-o", s(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(CircuitFile::parse(&std::fs::read_to_string(&out_path).unwrap()).unwrap().layers.len(), 2);

    let out = fca(&["equivalence", "builtin:shift-plus", "builtin:majorana-shift-plus", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["ratio"]["log2_num"].as_i64().unwrap().abs(), 1);

    let f = write_rule(&dir, "cp.json", &Automaton::controlled_phase(2.0, 0.1, 1).unwrap());
    let v = json(&fca(&["equivalence", s(&f), s(&f), "--json"]));
    assert_eq!(v["result"]["depth"], 0);
}

#[test]
fn builtin_rules_round_trip_exactly() {
    let p = Params { theta: 0.37, n: 1, phi: 2.2 };
    for name in BUILTINS {
        let rule = builtin(name, &p).unwrap().local_rule();
        let text = RuleFile::from_rule(&rule).to_json();
        assert_eq!(RuleFile::parse(&text).unwrap().to_rule().unwrap(), rule, "{name}");
    }
}

#[test]
fn bad_arguments_are_input_errors() {
    assert_eq!(fca(&["index"]).status.code(), Some(2));
    assert_eq!(fca(&["index", "--builtin", "forking", "--n", "3"]).status.code(), Some(2));
    assert_eq!(fca(&["frobnicate"]).status.code(), Some(2));
}
