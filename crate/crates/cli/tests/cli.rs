use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mgstirling"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    let v: Value = serde_json::from_str(&stdout(&o)).expect("valid json");
    (o.status.code().unwrap(), v)
}

fn write_file(name: &str, text: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const TWO_STATE: &str = r#"{"P": [["1/2","1/2"],["2/3","1/3"]], "M": [1]}"#;
const NON_COMMUTABLE: &str = r#"{"P": [["1/2","0","1/2","0"],["1/4","1/4","0","1/2"],["0","1/2","1/2","0"],["1/3","0","1/3","1/3"]], "M": [1, 2]}"#;

#[test]
fn msn_values() {
    assert_eq!(stdout(&run(&["msn", "3", "2", "1"])).trim(), "12");
    assert_eq!(stdout(&run(&["msn", "4", "4", "7"])).trim(), "24");
    assert_eq!(stdout(&run(&["msn", "2", "1", "-1/3"])).trim(), "1/3");
    assert_eq!(stdout(&run(&["msn1", "3", "1", "0"])).trim(), "2");
}

#[test]
fn decimals_are_usage_errors() {
    let o = run(&["msn", "3", "2", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["msn", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_envelope() {
    let (code, v) = json(&["msn", "3", "2", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "msn");
    assert_eq!(v["status"], "ok");
    assert_eq!(v["result"], "12");
    assert_eq!(v["inputs"]["k"], "1");
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "inputs", "message", "result", "status"]);
}

#[test]
fn table_formats() {
    let text = stdout(&run(&["table", "3", "0"]));
    assert_eq!(text.lines().last().unwrap(), "0 1 6 6");
    let csv = stdout(&run(&["table", "2", "1", "--format", "csv"]));
    assert_eq!(
        csv.lines().collect::<Vec<_>>(),
        [
            "i,j,value",
            "0,0,1",
            "1,0,1",
            "1,1,1",
            "2,0,1",
            "2,1,3",
            "2,2,2"
        ]
    );
    let (_, v) = json(&["table", "2", "-1/2"]);
    assert_eq!(v["result"][2], serde_json::json!(["1/4", "0", "2"]));
    assert_eq!(
        run(&["msn", "1", "1", "1", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn inversion_check() {
    let o = run(&["invcheck", "4", "1/3", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last().unwrap(), "PASS");
    let (code, v) = json(&["invcheck", "3", "2", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["pass"], true);
    // binom(3, 0) 3^3
    assert_eq!(v["result"]["product"][3][0], "27");
}

#[test]
fn generating_function_check() {
    let o = run(&[
        "gf-check", "--which", "egf", "--jmax", "3", "--kset", "-2,0,3", "--order", "8",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("ALL PASS\n"));
    let o = run(&["gf-check", "--which", "egf", "--kset", "1/2"]);
    assert_eq!(o.status.code(), Some(3));
    let (code, v) = json(&["gf-check", "--which", "ogf", "--order", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"].as_array().unwrap().len(), 9);
}

#[test]
fn identity_suite_passes() {
    let o = run(&["identity-suite", "--imax", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().last().unwrap(), "ALL PASS");
    assert!(text.lines().count() > 40);
    assert!(text
        .lines()
        .all(|l| l.starts_with("PASS") || l == "ALL PASS"));
}

#[test]
fn markov_methods() {
    let path = write_file("two_state.json", TWO_STATE);
    let o = run(&[
        "markov", "--chain", &path, "--var", "R", "--k", "1", "--m", "1", "--method", "closed",
    ]);
    assert_eq!(stdout(&o).trim(), "7/4");
    let o = run(&[
        "markov",
        "--chain",
        TWO_STATE,
        "--var",
        "R",
        "--k",
        "1",
        "--m",
        "2",
        "--method",
        "recursive",
    ]);
    assert_eq!(stdout(&o).trim(), "4");
    let (code, v) = json(&[
        "markov", "--chain", &path, "--var", "Nbar", "--k", "2", "--m", "1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["inputs"]["method"], "convolved");
    assert_eq!(v["result"][0].as_array().unwrap().len(), 1);
}

#[test]
fn markov_precondition_failure() {
    let path = write_file("non_commutable.json", NON_COMMUTABLE);
    let args = [
        "markov",
        "--chain",
        &path,
        "--var",
        "R",
        "--k",
        "2",
        "--m",
        "1",
        "--method",
        "commutable",
    ];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("commutable"));
    let (code, v) = json(&args);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "precondition-failed");
    assert!(v["message"].as_str().unwrap().contains("commutable"));
}

#[test]
fn bad_chain_files() {
    let decimal = write_file(
        "decimal.json",
        r#"{"P": [["0.5","0.5"],["1","0"]], "M": [1]}"#,
    );
    assert_eq!(
        run(&["markov", "--chain", &decimal, "--var", "N", "--m", "1"])
            .status
            .code(),
        Some(2)
    );
    let missing = run(&[
        "markov",
        "--chain",
        "/nonexistent/chain.json",
        "--var",
        "N",
        "--m",
        "1",
    ]);
    assert_eq!(missing.status.code(), Some(2));
    let substochastic = write_file("sub.json", r#"{"P": [["1/2","1/4"],["1","0"]], "M": [1]}"#);
    assert_eq!(
        run(&[
            "markov",
            "--chain",
            &substochastic,
            "--var",
            "N",
            "--m",
            "1"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn distribution_moments() {
    let spec = r#"{"type":"negbinomial","p":"1/2","k":3}"#;
    let raw = stdout(&run(&["dist", "--spec", spec, "--m", "2"]));
    assert_eq!(raw.lines().collect::<Vec<_>>(), ["0 1", "1 6", "2 42"]);
    let (code, v) = json(&["dist", "--spec", spec, "--m", "3", "--central"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], serde_json::json!(["1", "0", "6", "18"]));
    let echoed: Value = serde_json::from_str(spec).unwrap();
    assert_eq!(v["inputs"]["spec"], echoed);
    let bad = run(&[
        "dist",
        "--spec",
        r#"{"type":"poisson","lambda":"0"}"#,
        "--m",
        "2",
    ]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn simulation_is_reproducible() {
    let path = write_file("sim_chain.json", TWO_STATE);
    let args = [
        "simulate", "--chain", &path, "--var", "N", "--k", "2", "--reps", "20000", "--seed", "42",
    ];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    assert!(a.starts_with("replications=20000 completed=20000 truncated=0"));
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    let moments = v["result"]["moments"].as_array().unwrap();
    assert_eq!(moments.len(), 4);
    assert_eq!(moments[0]["exact"], "13/3");
    for m in moments {
        assert!(m["z"].as_f64().unwrap().abs() < 5.0, "{m}");
    }
    let truncated = run(&[
        "simulate",
        "--chain",
        &path,
        "--var",
        "N",
        "--k",
        "2",
        "--reps",
        "1000",
        "--max-steps",
        "2",
    ]);
    assert_eq!(truncated.status.code(), Some(3));
}
