#![allow(clippy::excessive_precision)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_inner-entropy");

fn spec(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("INNER_ENTROPY_THREADS", "2")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn profile_of_identity_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = spec(dir.path(), "z.json", r#"{"blaschke": [{"re": 0, "im": 0}]}"#);
    let o = run(&["profile", "--input", f.to_str().unwrap(), "--n", "8"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# quantity=A n=8 t_max="), "{}", lines[0]);
    assert!(lines[0].contains("abs_tol=") && lines[0].contains("divergence_cap="));
    assert_eq!(lines[1], "angle,value,status");
    assert_eq!(lines.len(), 10);
    for (k, line) in lines[2..].iter().enumerate() {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0].parse::<f64>().unwrap(), k as f64 / 8.0);
        assert_eq!(cols[1].parse::<f64>().unwrap(), 0.0);
        assert_eq!(cols[2], "finite");
    }
}

#[test]
fn profile_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = spec(
        dir.path(),
        "sq.json",
        r#"{"blaschke": [{"re": 0, "im": 0, "mult": 2}]}"#,
    );
    let out = dir.path().join("sq.csv");
    let o = run(&[
        "profile",
        "--input",
        f.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--n",
        "4",
        "--quantity",
        "B_alpha",
        "--alpha",
        "2",
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.starts_with("# quantity=B_alpha n=4"));
    let first: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    // B_2 for z^2, independent high-precision value.
    assert!((first[1].parse::<f64>().unwrap() - 0.427000975605347838).abs() < 1e-7);
}

#[test]
fn entropy_of_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let f = spec(
        dir.path(),
        "a5.json",
        r#"{"blaschke": [{"re": 0, "im": 0}, {"re": 0.5, "im": 0}]}"#,
    );
    let o = run(&["entropy", "--input", f.to_str().unwrap(), "--p", "1", "--n", "64"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let a0 = v["A"]["at_angle_zero"]["value"].as_f64().unwrap();
    let l0 = v["logfp"]["at_angle_zero"]["value"].as_f64().unwrap();
    assert!((a0 - 3f64.ln()).abs() < 1e-6, "{a0}");
    assert!((l0 - 4f64.ln()).abs() < 1e-12, "{l0}");
    assert_eq!(v["header"]["n"], "64");
}

#[test]
fn bcset_thirds_converges() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec(
        dir.path(),
        "thirds.json",
        r#"{"cantor": {"rule": "thirds", "levels": 40}}"#,
    );
    let o = run(&["bcset", "--input", s.to_str().unwrap(), "--p", "1"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"], "converges");
    assert_eq!(v["unanimous"], true);
    for test in ["integral", "complementary", "dyadic"] {
        assert_eq!(v[test]["verdict"], "converges");
    }
}

#[test]
fn decompose_reports_exact_masses() {
    let dir = tempfile::tempdir().unwrap();
    let f = spec(dir.path(), "atom.json", r#"{"atoms": [{"angle": "1/3", "mass": 1}]}"#);
    let o = run(&["decompose", "--input", f.to_str().unwrap(), "--M", "4", "--depth", "12"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["report"]["passed"], true);
    // First heavy arc is [1/4, 1/2), where the density is exactly 4.
    assert_eq!(v["heavy"][0]["level"], 2);
    assert_eq!(v["heavy"][0]["index"], 1);
    assert_eq!(v["heavy"][0]["tie"], true);
    assert_eq!(v["heavy"][0]["mass"], "1");
    assert_eq!(v["residual_support"][0], "1/3");
}

#[test]
fn verify_passes_on_mixed_function() {
    let dir = tempfile::tempdir().unwrap();
    let f = spec(
        dir.path(),
        "mix.json",
        r#"{"blaschke": [{"re": 0, "im": 0}, {"re": 0.3, "im": -0.4, "mult": 2}],
            "atoms": [{"angle": "1/3", "mass": 0.3}]}"#,
    );
    let o = run(&["verify", "--input", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] != "fail"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let z = spec(d, "z.json", r#"{"blaschke": [{"re": 0, "im": 0}]}"#);
    let z = z.to_str().unwrap();
    let schema = [
        spec(d, "unknown.json", r#"{"zeros": []}"#),
        spec(d, "outside.json", r#"{"blaschke": [{"re": 1.5, "im": 0}]}"#),
        spec(d, "broken.json", "{"),
        d.join("missing.json"),
    ];
    for s in &schema {
        assert_eq!(
            code(&run(&["profile", "--input", s.to_str().unwrap(), "--n", "2"])),
            2,
            "{s:?}"
        );
    }
    assert_eq!(code(&run(&["goodlambda", "--input", z, "--n", "2"])), 2);
    assert_eq!(code(&run(&["profile", "--input", z, "--n", "0"])), 3);
    assert_eq!(
        code(&run(&[
            "profile",
            "--input",
            z,
            "--n",
            "2",
            "--quantity",
            "B_alpha",
            "--alpha",
            "0.5"
        ])),
        3
    );
    assert_eq!(code(&run(&["profile", "--input", z, "--n", "2", "--tol", "-1"])), 3);
    let nz = spec(d, "nz.json", r#"{"blaschke": [{"re": 0.5, "im": 0}]}"#);
    assert_eq!(
        code(&run(&[
            "goodlambda",
            "--input",
            nz.to_str().unwrap(),
            "--M",
            "3",
            "--n",
            "4"
        ])),
        3
    );
    let float_atom = spec(d, "fa.json", r#"{"atoms": [{"angle": 0.3, "mass": 1}]}"#);
    assert_eq!(
        code(&run(&[
            "decompose",
            "--input",
            float_atom.to_str().unwrap(),
            "--M",
            "4"
        ])),
        3
    );
    let thirds = spec(d, "t.json", r#"{"cantor": {"rule": "thirds", "levels": 40}}"#);
    assert_eq!(
        code(&run(&["bcset", "--input", thirds.to_str().unwrap(), "--p", "-1"])),
        3
    );
    let c = spec(d, "c.json", r#"{"atoms": [{"angle": "1/2", "mass": 1}]}"#);
    assert_eq!(
        code(&run(&["sublevel", "--input", c.to_str().unwrap(), "--c", "1.5"])),
        3
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let f = spec(
        dir.path(),
        "f.json",
        r#"{"blaschke": [{"re": 0, "im": 0}, {"re": 0.2, "im": 0.7}],
            "atoms": [{"angle": "3/8", "mass": 0.2}]}"#,
    );
    let f = f.to_str().unwrap();
    for args in [
        vec!["profile", "--input", f, "--n", "64"],
        vec!["entropy", "--input", f, "--n", "64"],
        vec!["goodlambda", "--input", f, "--n", "64", "--M", "3"],
    ] {
        let first = run(&args).stdout;
        let serial = Command::new(BIN)
            .args(&args)
            .env("INNER_ENTROPY_THREADS", "1")
            .output()
            .unwrap()
            .stdout;
        assert!(!first.is_empty());
        assert_eq!(first, run(&args).stdout, "{args:?}");
        assert_eq!(first, serial, "{args:?}");
    }
}
