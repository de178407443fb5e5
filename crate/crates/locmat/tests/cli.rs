use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use locmat::formats::{descriptor_from_json, matrix_from_json, word_from_json};
use locmat_core::{Field, PeriodicMatrix};
use tempfile::TempDir;

fn locmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locmat"))
        .args(args)
        .env_remove("LOCMAT_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn steinitz_commands() {
    let o = locmat(&["steinitz", "eval", "lcm(12,18)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "36\n");

    let o = locmat(&["steinitz", "eval", "2^inf * 3"]);
    assert_eq!(stdout(&o), "2^inf * 3\n");
    assert_eq!(stdout(&locmat(&["steinitz", "gcd", "2^inf", "12", "8"])), "4\n");
    assert_eq!(stdout(&locmat(&["steinitz", "lcm", "4", "6", "5"])), "60\n");
    assert_eq!(stdout(&locmat(&["steinitz", "divides", "6", "2^inf*3^inf"])), "true\n");
    assert_eq!(stdout(&locmat(&["steinitz", "divides", "5", "2^inf"])), "false\n");
    assert_eq!(stdout(&locmat(&["steinitz", "quotient", "2^inf*3", "4"])), "2^inf * 3\n");

    let o = locmat(&["steinitz", "quotient", "6", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let o = locmat(&["steinitz", "eval", "4^2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("4^2"), "{}", stderr(&o));
}

#[test]
fn json_output_round_trips() {
    let o = locmat(&["--json", "steinitz", "eval", "lcm(2^inf, 9)"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let text = v["steinitz"].as_str().unwrap();
    let again = locmat(&["--json", "steinitz", "eval", text]);
    assert_eq!(stdout(&again), stdout(&o));

    let o = locmat(&["--json", "steinitz", "divides", "3", "9"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["divides"], true);
}

#[test]
fn matrix_commands() {
    let dir = TempDir::new().unwrap();
    let id = write(&dir, "id.json", r#"{"field": "GF(5)", "period": 3,
        "block": [["1","0","0"],["0","1","0"],["0","0","1"]]}"#);
    let o = locmat(&["matrix", "inv", s(&id)]);
    assert_eq!(o.status.code(), Some(0));
    let inv = matrix_from_json(&stdout(&o)).unwrap();
    assert!(inv.is_identity());
    assert_eq!(inv.period(), 1);

    let o = locmat(&["matrix", "canon", s(&id)]);
    assert!(stdout(&o).starts_with("period 1\n"));

    let a = write(&dir, "a.json", r#"{"field": "GF(5)", "period": 2, "block": [["1","2"],["3","4"]]}"#);
    let b = write(&dir, "b.json", r#"{"field": "GF(5)", "period": 1, "block": [["2"]]}"#);
    let prod = matrix_from_json(&stdout(&locmat(&["matrix", "mul", s(&a), s(&b)]))).unwrap();
    let f = Field::prime(5).unwrap();
    let want = PeriodicMatrix::make(&f, 2, vec![
        vec![f.from_i64(2), f.from_i64(4)],
        vec![f.from_i64(1), f.from_i64(3)],
    ])
    .unwrap();
    assert_eq!(prod, want);
    let sum = matrix_from_json(&stdout(&locmat(&["matrix", "add", s(&a), s(&b)]))).unwrap();
    assert_eq!(sum.entry(1, 1), f.from_i64(3));
    let t = matrix_from_json(&stdout(&locmat(&["matrix", "transpose", s(&a)]))).unwrap();
    assert_eq!(t.entry(1, 2), f.from_i64(3));

    // det [[1,2],[3,4]] = -2 = 3; at level 4 it is 3^2 = 4.
    assert_eq!(stdout(&locmat(&["matrix", "det", s(&a)])), "GF(5):3\n");
    assert_eq!(stdout(&locmat(&["matrix", "det", "--at", "4", s(&a)])), "GF(5):4\n");
    let o = locmat(&["--json", "matrix", "det", "--at", "4", s(&a)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["level"], 4);
    assert_eq!(locmat(&["matrix", "det", "--at", "3", s(&a)]).status.code(), Some(1));

    let sing = write(&dir, "s.json", r#"{"field": "Q", "period": 2, "block": [["1","2"],["2","4"]]}"#);
    let o = locmat(&["matrix", "inv", s(&sing)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("s.json"));
    let o = locmat(&["matrix", "mul", s(&a), s(&sing)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn input_errors_exit_2_and_name_the_input() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    let o = locmat(&["matrix", "inv", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.json"));
    let o = locmat(&["matrix", "inv", "/nonexistent/m.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/m.json"));
    assert_eq!(locmat(&["matrix", "frobnicate"]).status.code(), Some(2));
    assert_eq!(locmat(&["steinitz", "eval", "1", "--bogus"]).status.code(), Some(2));
    assert_eq!(locmat(&[]).status.code(), Some(2));
    assert_eq!(locmat(&["--help"]).status.code(), Some(0));
}

#[test]
fn group_commands() {
    let dir = TempDir::new().unwrap();
    let two = write(&dir, "two.json", r#"{"field": "GF(5)", "period": 1, "block": [["2"]]}"#);
    assert_eq!(stdout(&locmat(&["group", "sl-member", "--s", "2^inf", s(&two)])), "member level=4\n");
    let o = locmat(&["group", "sl-member", "--s", "2", s(&two)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "not-member\n");
    let o = locmat(&["--json", "group", "sl-member", "--s", "2^inf", s(&two)]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"member": true, "level": 4}));

    let rot = write(&dir, "rot.json", r#"{"field": "GF(7)", "period": 2, "block": [["0","1"],["-1","0"]]}"#);
    let o = locmat(&["group", "decompose", "--mode", "sl", s(&rot)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let w = word_from_json(&stdout(&o)).unwrap();
    assert_eq!(w.evaluate(), matrix_from_json(&std::fs::read_to_string(&rot).unwrap()).unwrap());
    assert_eq!(w.len(), 3);

    let o = locmat(&["group", "decompose", "--mode", "gl", "--at", "4", s(&two)]);
    let w = word_from_json(&stdout(&o)).unwrap();
    assert_eq!(w.period(), 4);
    assert_eq!(w.evaluate(), matrix_from_json(&std::fs::read_to_string(&two).unwrap()).unwrap());
    let o = locmat(&["group", "decompose", "--mode", "sl", s(&two)]);
    assert_eq!(o.status.code(), Some(1));

    let o = locmat(&["group", "lemma1", "--n", "2", "--q", "4", "--i", "1", "--j", "3", "--alpha", "-1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let w = word_from_json(&stdout(&o)).unwrap();
    assert_eq!(w.len(), 4);
    let f = Field::prime(5).unwrap();
    assert_eq!(w.evaluate(), PeriodicMatrix::transvection(&f, 4, 1, 3, f.from_i64(4)).unwrap());
    let o = locmat(&["group", "lemma1", "--n", "3", "--q", "4", "--i", "1", "--j", "3", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn detr_command() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", r#"{"field": "GF(5)", "period": 3,
        "block": [["2","0","0"],["0","1","0"],["0","0","1"]]}"#);
    assert_eq!(stdout(&locmat(&["detr", "--s", "3^inf", s(&d)])), "GF(5):3\n");
    // 2 divides 5 - 1, so no tower exists.
    assert_eq!(locmat(&["detr", "--s", "2^inf", s(&d)]).status.code(), Some(1));
    assert_eq!(locmat(&["detr", "--s", "5", s(&d)]).status.code(), Some(1));
}

#[test]
fn auto_commands() {
    let dir = TempDir::new().unwrap();
    let psi = write(&dir, "psi.json", r#"{"psi": true, "frob": 0, "inner": null}"#);
    let t = write(&dir, "t.json", r#"{"field": "GF(7)", "period": 2, "block": [["1","3"],["0","1"]]}"#);
    let o = locmat(&["auto", "apply", s(&psi), s(&t)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let img = matrix_from_json(&stdout(&o)).unwrap();
    let f = Field::prime(7).unwrap();
    assert_eq!(img, PeriodicMatrix::transvection(&f, 2, 2, 1, f.from_i64(-3)).unwrap());
    let o = locmat(&["auto", "apply", s(&psi), s(&psi), s(&t)]);
    assert_eq!(matrix_from_json(&stdout(&o)).unwrap(), matrix_from_json(&std::fs::read_to_string(&t).unwrap()).unwrap());

    let o = locmat(&["auto", "compose", s(&psi), s(&psi)]);
    let d = descriptor_from_json(&stdout(&o)).unwrap();
    assert!(d.is_trivial());

    let inner = write(&dir, "h.json", r#"{"psi": false, "frob": 0, "inner":
        {"field": "GF(7)", "period": 2, "block": [["2","1"],["1","1"]]}}"#);
    let o = locmat(&["auto", "compose", s(&psi), s(&inner), "--matrix", s(&t)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let composed = descriptor_from_json(&v["descriptor"].to_string()).unwrap();
    assert!(composed.has_psi());
    let image = matrix_from_json(&v["image"].to_string()).unwrap();
    let step = locmat(&["auto", "apply", s(&psi), s(&inner), s(&t)]);
    assert_eq!(image, matrix_from_json(&stdout(&step)).unwrap());

    let sing = write(&dir, "sing.json", r#"{"field": "GF(7)", "period": 1, "block": [["0"]]}"#);
    assert_eq!(locmat(&["auto", "apply", s(&psi), s(&sing)]).status.code(), Some(1));
}

#[test]
fn verify_command() {
    let o = locmat(&["verify", "--suite", "steinitz", "--seed", "9", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("verify seed=9 trials=20\n"));
    assert!(stdout(&o).ends_with("PASS\n"));

    let env = Command::new(env!("CARGO_BIN_EXE_locmat"))
        .args(["verify", "--suite", "steinitz", "--trials", "20"])
        .env("LOCMAT_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(env.stdout, o.stdout);

    let o = locmat(&["--json", "verify", "--suite", "autos", "--seed", "3", "--trials", "5"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["suite"], "autos");
    assert_eq!(locmat(&["verify", "--suite", "nope"]).status.code(), Some(2));
}
