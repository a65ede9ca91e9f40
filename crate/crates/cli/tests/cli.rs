use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const FERMAT: &str = "x^3+y^3+z^3+5*w^3";

fn cli(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cubic-brauer"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = cli(&all, None);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stderr(&o)));
    (v, o.status.code().unwrap())
}

#[test]
fn classify_reports_the_cone_normal_form() {
    let (v, code) = json(&["classify", "-e", FERMAT, "-p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["reduction"]["type"], "ConeOverSmoothCubic", "{v}");
    assert_eq!(v["reduction"]["vertex"], serde_json::json!([0, 0, 0, 1]));
    assert_eq!(v["cone"]["s"], 1);
    assert_eq!(v["cone"]["a"], "1");
    assert_eq!(v["cone"]["a_unit"], true);
}

#[test]
fn input_from_stdin_and_file_matches_inline_input() {
    let inline = stdout(&cli(&["classify", "-e", FERMAT, "-p", "5"], None));
    let piped = stdout(&cli(&["classify", "-p", "5"], Some(FERMAT)));
    let dash = stdout(&cli(&["classify", "-", "-p", "5"], Some(FERMAT)));
    let path = std::env::temp_dir().join(format!("cubic-brauer-cli-{}.txt", std::process::id()));
    std::fs::write(&path, "x^3 + y^3\n  + z^3 + 5 w^3\n").unwrap();
    let from_file = stdout(&cli(&["classify", path.to_str().unwrap(), "-p", "5"], None));
    std::fs::remove_file(&path).unwrap();
    assert_eq!(inline, piped);
    assert_eq!(inline, dash);
    assert_eq!(inline, from_file);
}

#[test]
fn bad_input_exits_with_one() {
    let o = cli(&["classify", "-e", FERMAT, "-p", "4"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("p = 4"), "{}", stderr(&o));

    let o = cli(&["analyze", "-e", "x^3+y^3", "-p", "5"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("4 variables"), "{}", stderr(&o));

    let o = cli(&["classify", "-p", "5"], Some("x^3+y^3+z^3\n + 5*w^3 +* x"));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2, column 11"), "{}", stderr(&o));

    let o = cli(&["classify", "/nonexistent/cubic.txt", "-p", "5"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn analyze_exit_codes_follow_the_outcome() {
    let (v, code) = json(&["analyze", "-e", FERMAT, "-p", "5"]);
    assert_eq!((code, v["outcome"].as_str()), (0, Some("verdict")));
    assert_eq!(v["cohomology"]["h1_invariants"], serde_json::json!([3, 3]));

    let (v, code) = json(&["analyze", "-e", "x^3+y^3+z^3+w^3", "-p", "7"]);
    assert_eq!((code, v["outcome"].as_str()), (0, Some("verdict")));
    assert_eq!(v["reduction"]["type"], "Smooth");

    let (v, code) = json(&["analyze", "-e", "x^3+y^3+z^3+5*z*w^2", "-p", "5"]);
    assert_eq!((code, v["outcome"].as_str()), (2, Some("theorem_inapplicable")));

    let (v, code) = json(&["analyze", "-e", "x^3+y^3+5*z^3+5*w^3", "-p", "5"]);
    assert_eq!((code, v["outcome"].as_str()), (2, Some("classified_only")));
}

#[test]
fn lines_and_cohomology_sections() {
    let (v, code) = json(&["lines", "-e", FERMAT, "-p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["lines"]["lines"].as_array().unwrap().len(), 27);
    assert_eq!(v["lines"]["triples"].as_array().unwrap().len(), 9);
    assert_eq!(v["lines"]["precision"], 24);

    let (v, _) = json(&["lines", "-e", FERMAT, "-p", "5", "--precision", "10"]);
    assert_eq!(v["lines"]["precision"], 10);

    let (v, code) = json(&["cohomology", "-e", FERMAT, "-p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["cohomology"]["h0_rank"], 1);
    assert_eq!(v["cohomology"]["h1_invariants"], serde_json::json!([3, 3]));

    let text = stdout(&cli(&["cohomology", "-e", FERMAT, "-p", "5"], None));
    assert!(text.contains("H^1 = Z/3 x Z/3"), "{text}");

    let o = cli(&["lines", "-e", "x^3+y^3+z^3+5*z*w^2", "-p", "5"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("no lines data"));
}

#[test]
fn curve_summary_of_the_fermat_cubic() {
    let (v, code) = json(&["curve", "-e", "x^3+y^3+z^3", "-p", "5"]);
    assert_eq!(code, 0);
    let c = &v["curve"];
    assert_eq!(c["point_count"], 6);
    assert_eq!(c["group"], serde_json::json!([6]));
    let rational = c["flexes"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|f| f["degree"] == 1)
        .count();
    assert_eq!(rational, 3);

    let o = cli(&["curve", "-e", "x^3+y^3+w^3", "-p", "5"], None);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn text_and_json_report_the_same_checks() {
    let (v, _) = json(&["analyze", "-e", FERMAT, "-p", "5"]);
    let text = stdout(&cli(&["analyze", "-e", FERMAT, "-p", "5"], None));
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        let tag = if c["passed"] == true { "[pass]" } else { "[FAIL]" };
        let id = c["id"].as_str().unwrap();
        assert!(text.contains(&format!("{tag} {id}:")), "{id}");
    }
}

#[test]
fn output_does_not_depend_on_the_seed() {
    let strip = |mut v: Value| {
        v["elapsed_ms"] = Value::Null;
        v
    };
    let (a, _) = json(&["analyze", "-e", FERMAT, "-p", "5", "--seed", "1"]);
    let (b, _) = json(&["analyze", "-e", FERMAT, "-p", "5", "--seed", "123456789"]);
    assert_eq!(strip(a), strip(b));
}
