use std::process::{Command, Output};

use serde_json::Value;

fn locnilp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locnilp"))
        .args(args)
        .env_remove("LOCNILP_THREADS")
        .output()
        .expect("spawn locnilp")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn classify_gf3_json() {
    let out = locnilp(&["classify", "--q", "2", "--field", "gf:3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["count"]["count"], 1);
    assert_eq!(v["classes"][0]["tag"], "PrimitiveG");
    assert_eq!(v["classes"][0]["verified"]["order"], "16");
}

#[test]
fn classify_csv_has_header_and_rows() {
    let out = locnilp(&["classify", "--q", "2", "--field", "gf:5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().clone();
    assert_eq!(&header[0], "tag");
    let rows: Vec<_> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows
        .iter()
        .any(|row| &row[0] == "MonomialH" && &row[2] == "32"));
}

#[test]
fn classify_rational_stream() {
    let out = locnilp(&[
        "classify",
        "--q",
        "2",
        "--field",
        "q",
        "--limit",
        "4",
        "--no-maximality",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"]["count"], "infinite");
    let hs = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["tag"] == "MonomialH")
        .count();
    assert_eq!(hs, 4);
}

#[test]
fn output_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.to_str().unwrap();
    let to_file = locnilp(&["classify", "--q", "2", "--field", "gf:7", "--output", p]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let stdout = locnilp(&["classify", "--q", "2", "--field", "gf:7"]);
    assert_eq!(std::fs::read(&path).unwrap(), stdout.stdout);
}

#[test]
fn same_seed_same_bytes() {
    let args = [
        "oracle",
        "--q",
        "2",
        "--field",
        "gf:5",
        "--seed",
        "7",
        "--samples",
        "50",
    ];
    let a = locnilp(&args);
    let b = locnilp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["props", "--samples", "50"];
    let one = Command::new(env!("CARGO_BIN_EXE_locnilp"))
        .args(args)
        .env("LOCNILP_THREADS", "1")
        .output()
        .unwrap();
    let four = locnilp(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(json(&one)["discrepancies"], 0);
}

#[test]
fn bad_thread_env_is_an_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_locnilp"))
        .args(["props", "--samples", "5"])
        .env("LOCNILP_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("LOCNILP_THREADS"));
}

#[test]
fn timings_only_on_request() {
    let plain = json(&locnilp(&["classify", "--q", "2", "--field", "gf:3"]));
    assert!(plain.get("elapsed_ms").is_none());
    let timed = json(&locnilp(&[
        "classify",
        "--q",
        "2",
        "--field",
        "gf:3",
        "--timings",
    ]));
    assert!(timed["elapsed_ms"].is_u64());
}

#[test]
fn verify_reports_non_maximal_h1() {
    let out = locnilp(&[
        "verify", "--q", "2", "--field", "gf:3", "--kind", "H", "--alpha", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["group"]["verified"]["order"], "8");
    assert_eq!(v["group"]["verified"]["maximal"]["maximal"], false);
}

#[test]
fn verify_primitive_case_star() {
    let out = locnilp(&[
        "verify", "--q", "2", "--field", "gf:7", "--kind", "G", "--alpha", "-1", "--b", "1,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["group"]["verified"]["order"], "96");
    assert_eq!(v["group"]["verified"]["nilpotency_class"], 4);
}

#[test]
fn conj_text_default() {
    let out = locnilp(&[
        "conj", "--q", "2", "--field", "gf:7", "--kind", "Ia", "--a", "1,2", "--b", "2,1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("conjugate: true"));
    assert!(text.contains("brute_force: true"));
}

#[test]
fn conj_h_not_conjugate() {
    // 2 is not a square times ±1 in Q
    let out = locnilp(&[
        "conj", "--q", "2", "--field", "q", "--kind", "H", "--a", "1", "--b", "2", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["conjugate"], false);
    assert_eq!(v["brute_force"], false);
    assert_eq!(v["agree"], true);
}

#[test]
fn oracle_clean_gf7() {
    let out = locnilp(&["oracle", "--q", "2", "--field", "gf:7", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("DISCREPANCY"));
    assert!(text.lines().any(|l| l.starts_with("pass maximal")));
}

#[test]
fn invalid_inputs_exit_1() {
    for args in [
        &["classify", "--q", "4", "--field", "gf:3"][..],
        &["classify", "--q", "2", "--field", "gf:4"],
        &["classify", "--q", "2", "--field", "nonsense"],
        &["classify", "--q", "2"],
        &["frobnicate"],
    ] {
        let out = locnilp(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_0() {
    assert_eq!(locnilp(&["--help"]).status.code(), Some(0));
}
