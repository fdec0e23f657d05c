use assert_cmd::Command;

fn capcurl() -> Command {
    let mut c = Command::cargo_bin("capcurl").unwrap();
    c.env_remove("CAPCURL_NO_UNICODE");
    c
}

fn stdout(args: &[&str]) -> String {
    let out = capcurl().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails_with(args: &[&str], code: i32) {
    let out = capcurl().args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    assert!(out.stdout.is_empty(), "{args:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(!err.trim().is_empty());
}

const CTX: [&str; 6] = ["--p", "11", "--m", "7", "--s", "5"];

fn with_ctx<'a>(cmd: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![cmd];
    v.extend(CTX);
    v.extend(rest);
    v
}

#[test]
fn cap_diagram_ascii() {
    let out = stdout(&with_ctx("capcurl", &["--lambda", "6,6,6,3,2", "--mode", "c", "--format", "ascii"]));
    assert_eq!(out, "() | ()\nv^^|ov^\n");
}

#[test]
fn cap_codiagram_ascii() {
    let out = stdout(&with_ctx("capcurl", &["--lambda", "4,4,4,2,1", "--mode", "co", "--format", "ascii"]));
    assert_eq!(out, "vvv|o^v\n[] | ()\n");
}

#[test]
fn no_unicode_env_forces_ascii() {
    let out = capcurl()
        .env("CAPCURL_NO_UNICODE", "1")
        .args(with_ctx("diagram", &["--lambda", "6,6,6,3,2"]))
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "v^^|ov^\n");
    assert_eq!(stdout(&with_ctx("diagram", &["--lambda", "6,6,6,3,2"])), "∨∧∧|o∨∧\n");
}

#[test]
fn capcurl_json_is_valid() {
    let out = stdout(&with_ctx("capcurl", &["--lambda", "6,6,6,3,2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["caps"], serde_json::json!([[1, 2, "L"], [5, 6, "R"]]));
    assert_eq!(v["wall_after_node"], 3);
}

#[test]
fn decomposition_number() {
    let out = stdout(&with_ctx("decnum", &["--lambda", "5,5,4,3,2", "--mu", "4,4,4,2,1"]));
    assert_eq!(out, "1\n");
    let out = stdout(&with_ctx("tilting", &["--lambda", "5,5,4,3,2", "--mu", "5,5,4,3,2"]));
    assert_eq!(out, "1\n");
}

#[test]
fn order_queries() {
    let out = stdout(&with_ctx("order", &["--preceq", "4,4,4,2,1", "5,5,4,3,2"]));
    assert_eq!(out, "true\n");
    let out = stdout(&with_ctx("order", &["--preceq", "5,5,4,3,2", "4,4,4,2,1"]));
    assert_eq!(out, "false\n");
    let lower = stdout(&with_ctx("order", &["--lower-set", "6,6,6,3,2"]));
    assert_eq!(lower.lines().next(), Some("6,6,6,3,2"));
    let out = stdout(&with_ctx("order", &["--conjugate", "6,6,6,3,2", "5,5,4,3,2", "--group", "wpd"]));
    assert_eq!(out, "true\n");
}

#[test]
fn jsf_reduced_csv() {
    let out = stdout(&["jsf", "--p", "11", "--m", "7", "--lambda", "6,4,2", "--reduced", "--format", "csv"]);
    let mut reader = csv::Reader::from_reader(out.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["root", "i", "j", "l", "a", "valuation", "sign", "target"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][0], "e1+e2");
    assert_eq!(&rows[0][7], "5,3,2");
}

#[test]
fn decmat_csv_has_square_shape() {
    let out = stdout(&with_ctx("decmat", &["--lambda", "6,6,6,3,2", "--format", "csv"]));
    let mut reader = csv::ReaderBuilder::new().has_headers(false).from_reader(out.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let n = rows.len() - 1;
    assert!(n >= 1);
    assert!(rows.iter().all(|r| r.len() == n + 1));
    for (k, row) in rows.iter().skip(1).enumerate() {
        assert_eq!(&row[0], &rows[0][k + 1]);
        assert_eq!(&row[k + 1], "1");
    }
}

#[test]
fn brauer_golden_values() {
    let args = ["brauer", "--p", "5", "--delta", "1", "--r", "2", "--lambda", "1,1", "--mu", "0"];
    assert_eq!(stdout(&args), "0\n");
    let args = ["brauer", "--p", "5", "--delta", "0", "--r", "2", "--lambda", "1,1", "--mu", "0"];
    assert_eq!(stdout(&args), "1\n");
    let json = stdout(&["brauer", "--p", "5", "--delta", "-4", "--r", "2", "--lambda", "1,1", "--mu", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["value"], 0);
    assert_eq!(v["m"], 2);
}

#[test]
fn output_is_deterministic() {
    let args = with_ctx("decmat", &["--lambda", "6,6,6,3,2"]);
    assert_eq!(stdout(&args), stdout(&args));
    let sweep = ["verify", "--primes", "3,5", "--m-max", "3", "--size-max", "8"];
    let strip = |s: String| s.lines().filter(|l| !l.starts_with("{\"summary\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(stdout(&sweep)), strip(stdout(&sweep)));
}

#[test]
fn verify_reports_summary_last() {
    let out = stdout(&["verify", "--primes", "3,5", "--m-max", "3", "--size-max", "8", "--jobs", "2"]);
    let last: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(last["summary"]["discrepancies"], 0);
    assert!(last["summary"]["checks"].as_u64().unwrap() > 0);
}

#[test]
fn domain_errors_exit_two() {
    fails_with(&["decnum", "--p", "4", "--m", "2", "--lambda", "1", "--mu", "0"], 2);
    fails_with(&["decnum", "--p", "5", "--m", "2", "--lambda", "x", "--mu", "0"], 2);
    fails_with(&["decnum", "--p", "5", "--m", "2", "--lambda", "9,9", "--mu", "0"], 2);
    fails_with(&["brauer", "--p", "5", "--delta", "1", "--r", "3", "--lambda", "1,1", "--mu", "0"], 2);
    fails_with(&with_ctx("order", &["--lower-set", "6,6,6,3,2", "--preceq", "0", "0"]), 2);
    fails_with(&["frobnicate"], 2);
}
