use std::process::{Command, Output};

fn qfrm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfrm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn hrm_enumerator_text() {
    let out = qfrm(&["dist", "--family", "hrm2", "--q", "3", "--m", "4", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "1 + 1560*Z^36 + 21060*Z^48 + 18800*Z^54 + 16848*Z^60 + 780*Z^72\n"
    );
}

#[test]
fn binary_rm_needs_two_variables() {
    let out = qfrm(&["dist", "--family", "rm2", "--q", "2", "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn prm_json_schema() {
    let out = qfrm(&["dist", "--family", "prm2", "--q", "3", "--m", "4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["family"], "prm2");
    assert_eq!((v["n"].as_u64(), v["k"].as_u64(), v["d"].as_u64()), (Some(121), Some(15), Some(54)));
    let a81 = v["distribution"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["weight"] == 81)
        .unwrap();
    assert_eq!(a81["frequency"], "9740258");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["family", "q", "m", "n", "k", "d", "distribution"]);
}

#[test]
fn csv_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rm.csv");
    let out = qfrm(&[
        "dist", "--family", "rm2", "--q", "2", "--m", "3", "--format", "csv", "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(path).unwrap(),
        "weight,frequency\n0,1\n2,28\n4,70\n6,28\n8,1\n"
    );
}

#[test]
fn method_paths_agree() {
    let table = qfrm(&["dist", "--family", "rm2", "--q", "3", "--m", "2"]);
    for method in ["coset", "brute"] {
        let other = qfrm(&["dist", "--family", "rm2", "--q", "3", "--m", "2", "--method", method]);
        assert_eq!(stdout(&other), stdout(&table), "{method}");
    }
}

#[test]
fn classify_reports() {
    let out = qfrm(&["classify", "--form", "q=2 m=2; c[1][1]=1; c[1][2]=1; c[2][2]=1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("rank: 2\ntype: -1\nzeros: 1\n"), "{text}");

    let out = qfrm(&["classify", "--form", "q=5 m=3"]);
    assert!(stdout(&out).starts_with("rank: 0\ntype: +1\nzeros: 125\n"));

    // x1*x2 over GF(3): the symmetric table entry is 1/2 = 2
    let out = qfrm(&["classify", "--form", "q=3 m=2; c[1][2]=2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["rank"].as_u64(), v["type"].as_str()), (Some(2), Some("plus")));
}

#[test]
fn classify_rejects_bad_input() {
    for args in [
        &["classify", "--form", "q=3 m=2; c[1][3]=1"][..],
        &["classify", "--form", "q=3 m=2; c[2][1]=1"],
        &["classify", "--form", "q=6 m=2"],
        &["classify", "--form", "q=3 m=2", "--m", "3"],
        &["classify", "--form", "q=3 m=2", "--q", "5"],
    ] {
        assert_eq!(qfrm(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn classify_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("form.txt");
    std::fs::write(&path, "q=4 m=3; c[1][2]=1; c[3][3]=1\n").unwrap();
    let out = qfrm(&["classify", "--file", path.to_str().unwrap()]);
    assert!(stdout(&out).starts_with("rank: 3\ntype: untyped\n"));
}

#[test]
fn counts() {
    assert_eq!(stdout(&qfrm(&["count", "--q", "3", "--m", "4", "--rank", "1"])), "80\n");
    assert_eq!(stdout(&qfrm(&["count", "--q", "2", "--m", "3", "--rank", "3"])), "28\n");
    let exhaustive = qfrm(&["count", "--q", "2", "--m", "3", "--rank", "3", "--exhaustive"]);
    assert_eq!(stdout(&exhaustive), "28\n");
    let table = qfrm(&["count", "--q", "2", "--m", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&table.stdout).unwrap();
    let total: u64 = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["count"].as_str().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 8);
    assert_eq!(qfrm(&["count", "--q", "2", "--m", "3", "--rank", "3", "--type", "plus"]).status.code(), Some(2));
    assert_eq!(qfrm(&["count", "--q", "2", "--m", "3", "--rank", "4"]).status.code(), Some(2));
}

#[test]
fn spectra() {
    let out = qfrm(&["spectrum", "--q", "2", "--m", "3", "--rank", "3", "--c-class", "zero"]);
    assert_eq!(stdout(&out), "{2: 1, 4: 4, 6: 3}\n");
    let merged = qfrm(&["spectrum", "--q", "3", "--m", "2", "--rank", "1", "--type", "plus"]);
    let oracle = qfrm(&["spectrum", "--q", "3", "--m", "2", "--rank", "1", "--type", "plus", "--oracle"]);
    assert_eq!(stdout(&merged), "{0: 3, 3: 21, 6: 3}\n");
    assert_eq!(stdout(&merged), stdout(&oracle));
    let weights = qfrm(&["spectrum", "--q", "3", "--m", "2", "--rank", "1", "--type", "plus", "--coset-weights"]);
    assert_eq!(stdout(&weights), "{3: 3, 6: 21, 9: 3}\n");
    let bad = qfrm(&["spectrum", "--q", "3", "--m", "2", "--rank", "1", "--type", "plus", "--c-class", "nonzero"]);
    assert_eq!(bad.status.code(), Some(2));
    let binary = qfrm(&["spectrum", "--q", "2", "--m", "2", "--rank", "2", "--type", "plus", "--coset-weights"]);
    assert_eq!(binary.status.code(), Some(2));
}

#[test]
fn verify_reports() {
    let out = qfrm(&["verify", "--scope", "census", "--q", "2", "--m", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS census q=2 m=4 (1024 forms classified)\n"));

    let out = qfrm(&["verify", "--scope", "codes", "--q", "3", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS codes rm2 q=3 m=2 (triple agreement)"));

    let out = qfrm(&["verify", "--scope", "spectra", "--q", "2..4", "--m", "1-2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("summary: 6 passed, 0 failed, 0 skipped\n"));

    let out = qfrm(&["verify", "--scope", "codes", "--q", "3", "--m", "3", "--max-codewords", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("SKIP codes rm2 q=3 m=3"));
}

#[test]
fn verify_rejects_bad_ranges() {
    for (q, m) in [("6", "2"), ("5..3", "2"), ("3", "0"), ("x", "2")] {
        let out = qfrm(&["verify", "--q", q, "--m", m]);
        assert_eq!(out.status.code(), Some(2), "q={q} m={m}");
    }
}

#[test]
fn describe_field_modulus() {
    let out = qfrm(&["describe-field", "--q", "8"]);
    assert!(stdout(&out).contains("modulus: 1,1,0,1\n"));
    assert_eq!(qfrm(&["describe-field", "--q", "12"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["dist", "--family", "rm2", "--q", "4", "--m", "3", "--format", "json"];
    assert_eq!(qfrm(&args).stdout, qfrm(&args).stdout);
}
