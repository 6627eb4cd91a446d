use std::path::PathBuf;
use std::process::{Command, Output};

use qtrellis::cli::load_trellis;

fn qtrellis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtrellis"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let o = qtrellis(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qtrellis-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn build_trellis_saves_json() {
    let path = scratch("t422.json");
    let text = stdout_of(&[
        "build-trellis",
        "--code",
        "code422",
        "--multigoal",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(text.contains("1,4,16,64,16"), "{text}");
    let t = load_trellis(&path).unwrap();
    assert_eq!(t.level_sizes(), &[1, 4, 16, 64, 16]);
    assert_eq!(t.num_goals(), 16);
}

#[test]
fn methods_export_the_same_trellis() {
    let mut ts = Vec::new();
    for m in ["bcjr_wolf", "merge", "atomic_multigoal"] {
        let path = scratch(&format!("steane-{m}.json"));
        stdout_of(&[
            "export",
            "--code",
            "steane713",
            "--multigoal",
            "--method",
            m,
            "--out",
            path.to_str().unwrap(),
        ]);
        ts.push(load_trellis(&path).unwrap().canonical());
    }
    assert_eq!(ts[0], ts[1]);
    assert_eq!(ts[0], ts[2]);
}

#[test]
fn dot_export() {
    let dot = stdout_of(&[
        "export", "--code", "code422", "--css", "x", "--format", "dot",
    ]);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 22);
}

#[test]
fn simulate_csv() {
    let text = stdout_of(&[
        "simulate", "--code", "code422", "--mode", "all", "--p", "0.1,0.2", "--trials", "200",
        "--seed", "3",
    ]);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "code,mode,p,trials,failures,rate,ci_lo,ci_hi"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    assert!(rows
        .iter()
        .all(|r| r.len() == 8 && r[0] == "code422" && r[3] == "200"));
    let again = stdout_of(&[
        "simulate",
        "--code",
        "code422",
        "--mode",
        "all",
        "--p",
        "0.1,0.2",
        "--trials",
        "200",
        "--seed",
        "3",
        "--threads",
        "1",
    ]);
    assert_eq!(text, again);
}

#[test]
fn decode_json_agrees_with_oracle() {
    let text = stdout_of(&[
        "decode",
        "--code",
        "steane713",
        "--mode",
        "dml",
        "--syndrome",
        "101100",
        "--p",
        "0.05",
        "--json",
        "--oracle",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let got = v["result"]["coset_log_probs"].as_array().unwrap();
    let want = v["oracle"]["coset_log_probs"].as_array().unwrap();
    assert_eq!(got.len(), 4);
    for (a, b) in got.iter().zip(want) {
        assert!((a.as_f64().unwrap() - b.as_f64().unwrap()).abs() < 1e-9);
    }
    assert_eq!(v["result"]["ops"]["multiplications"], 292);
}

#[test]
fn css_decode() {
    let text = stdout_of(&[
        "decode",
        "--code",
        "steane713",
        "--mode",
        "css",
        "--syndrome",
        "001/010",
        "--p",
        "0.05",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let est = v["result"]["error_estimate"].as_str().unwrap();
    assert_eq!(est.len(), 7);
}

#[test]
fn complexity_table_with_reference() {
    let reference = scratch("ref.csv");
    std::fs::write(
        &reference,
        "code,trellis,vertices,edges,cost\ncode422,T,101,148,195\ncode422,T_X,19,23,\n",
    )
    .unwrap();
    let text = stdout_of(&[
        "complexity-table",
        "--codes",
        "code422",
        "--reference",
        reference.to_str().unwrap(),
    ]);
    let tx = text.lines().find(|l| l.contains("T_X")).unwrap();
    assert!(tx.contains("differs: edges 23"), "{tx}");
    let t = text.lines().find(|l| l.contains(" T ")).unwrap();
    assert!(!t.contains("differs"));
    let json = stdout_of(&["complexity-table", "--codes", "code422,steane713", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
}

#[test]
fn errors_exit_nonzero() {
    for args in [
        &[
            "decode",
            "--code",
            "nope",
            "--mode",
            "dml",
            "--syndrome",
            "1",
            "--p",
            "0.1",
        ][..],
        &[
            "decode",
            "--code",
            "code422",
            "--mode",
            "ndml",
            "--syndrome",
            "1x",
            "--p",
            "0.1",
        ],
        &[
            "decode",
            "--code",
            "code422",
            "--mode",
            "ndml",
            "--syndrome",
            "10",
            "--p",
            "1.5",
        ],
        &["simulate", "--code", "code422", "--p", "0.3:0.1:0.05"],
        &[
            "build-trellis",
            "--code",
            "code422",
            "--multigoal",
            "--css",
            "x",
        ],
    ] {
        let o = qtrellis(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}
