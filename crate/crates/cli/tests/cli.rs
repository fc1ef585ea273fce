use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sic"))
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_d3_writes_sorted_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = sic(&[
        "verify",
        "--dim",
        "3",
        "--tol",
        "1e-9",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["version"], 1);
    assert_eq!(r["metadata"]["d"], 3);
    assert_eq!(r["metadata"]["fiducial_sha256"].as_str().unwrap().len(), 64);
    let names: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.len() >= 25);
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(names, sorted);
}

#[test]
fn verify_d2_marks_degenerate_checks() {
    let o = sic(&["verify", "--dim", "2"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "geometry.q_uniform_inclination")
        .unwrap();
    assert_eq!(c["skipped_reason"], "skipped (degenerate dimension)");
    assert!(c["max_error"].is_null());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("corrupt.txt");
    std::fs::write(&bad, "3\n0.5 0.5\nnot a number\n").unwrap();
    assert_eq!(
        code(&sic(&[
            "verify",
            "--dim",
            "3",
            "--fiducial",
            bad.to_str().unwrap()
        ])),
        2
    );
    assert_eq!(code(&sic(&["verify", "--dim", "9"])), 2);
    assert_eq!(
        code(&sic(&["verify", "--dim", "3", "--checks", "nonsense"])),
        2
    );
    assert_eq!(code(&sic(&["verify"])), 2);
    assert_eq!(code(&sic(&["search", "--dim", "1"])), 2);
    assert_eq!(code(&sic(&["frobnicate"])), 2);
}

#[test]
fn failing_checks_exit_1_and_are_named() {
    let o = sic(&["verify", "--dim", "3", "--tol", "1e-30", "--checks", "sic"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL sic."));
}

#[test]
fn check_selection() {
    let o = sic(&["verify", "--dim", "4", "--checks", "sic,hs"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    for c in r["checks"].as_array().unwrap() {
        let name = c["name"].as_str().unwrap();
        assert!(
            name.starts_with("sic.") || name.starts_with("adjoint.hs_"),
            "{name}"
        );
    }
}

#[test]
fn search_is_reproducible_and_verifiable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = sic(&[
            "search",
            "--dim",
            "4",
            "--seed",
            "7",
            "--restarts",
            "40",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        assert!(String::from_utf8_lossy(&o.stderr).contains("residual"));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(
        code(&sic(&[
            "verify",
            "--dim",
            "4",
            "--fiducial",
            a.to_str().unwrap()
        ])),
        0
    );
}

#[test]
fn reconstruct_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.bin");
    assert_eq!(
        code(&sic(&[
            "theta3",
            "--dim",
            "3",
            "--out",
            t.to_str().unwrap()
        ])),
        0
    );
    let mut outputs = Vec::new();
    for anchor in ["0", "5"] {
        let v = dir.path().join(format!("v{anchor}.txt"));
        let o = sic(&[
            "reconstruct",
            "--theta3",
            t.to_str().unwrap(),
            "--anchor",
            anchor,
            "--out",
            v.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).contains("matches"));
        outputs.push(v);
    }
    let sets: Vec<_> = outputs
        .iter()
        .map(|p| sic_core::sicpovm::parse_vector_set(&std::fs::read_to_string(p).unwrap()).unwrap())
        .collect();
    let t0 = sic_core::tensors::triple_products(&sets[0]).theta3;
    let t5 = sic_core::tensors::triple_products(&sets[1]).theta3;
    assert!(sic_core::suite::theta3_distance(&t0, &t5) < 1e-8);
    assert_eq!(
        code(&sic(&[
            "reconstruct",
            "--theta3",
            t.to_str().unwrap(),
            "--anchor",
            "9"
        ])),
        2
    );
}

#[test]
fn random_theta3_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("random.bin");
    let n = 4;
    let mut theta = sic_core::tensors::Tensor3::<f64>::zeros(n);
    let mut x = 0.37;
    for r in 0..n {
        for s in (r + 1)..n {
            for u in (s + 1)..n {
                x = (x * 7.3 + 0.1) % 3.0;
                for (a, b, c, sign) in [
                    (r, s, u, 1.0),
                    (s, u, r, 1.0),
                    (u, r, s, 1.0),
                    (s, r, u, -1.0),
                    (r, u, s, -1.0),
                    (u, s, r, -1.0),
                ] {
                    theta.set(a, b, c, sign * x);
                }
            }
        }
    }
    std::fs::write(&t, sic_core::tensors::encode_theta3(&theta)).unwrap();
    let o = sic(&["reconstruct", "--theta3", t.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("consistency condition failed"));
}
