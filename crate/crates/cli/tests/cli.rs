use std::process::{Command, Output};

use engelcf::batch::{run_case, VerifyCase};
use engelcf::{EngelState, SeedConfig};
use serde_json::Value;

fn engelcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_engelcf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(args: &[&str]) -> Vec<String> {
    let o = engelcf(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o).lines().map(str::to_string).collect()
}

fn code(args: &[&str]) -> i32 {
    engelcf(args).status.code().expect("exited")
}

fn record(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&engelcf(&full))).expect("one JSON record")
}

fn column(rows: &[String], i: usize) -> Vec<String> {
    rows[1..]
        .iter()
        .map(|r| r.split(' ').nth(i).unwrap().to_string())
        .collect()
}

#[test]
fn expand() {
    assert_eq!(
        lines(&["expand", "--pq", "6/7"]),
        ["canonical [0;1,6]", "even [0;1,6]"]
    );
    assert_eq!(
        lines(&["expand", "--pq", "1/1"]),
        ["canonical [1]", "even [1]"]
    );
    assert_eq!(
        lines(&["expand", "--pq", "7/3"]),
        ["canonical [2;3]", "even [2;2,1]"]
    );
    assert_eq!(
        lines(&["expand", "--pq", "-8/7"]),
        ["canonical [-2;1,6]", "even [-2;1,6]"]
    );
}

#[test]
fn generate() {
    let rows = lines(&["generate", "--pq", "6/7", "--z", "n", "--terms", "5"]);
    assert_eq!(
        column(&rows, 3),
        [
            "7",
            "112",
            "403200",
            "1755760043520000",
            "53695136666462381094317154204367872000000"
        ]
    );
    assert_eq!(column(&rows, 1), ["1", "2", "3", "4", "-"]);

    let rows = lines(&["generate", "--pq", "1/1", "--z", "1"]);
    assert_eq!(
        column(&rows, 3),
        ["1", "2", "12", "936", "68408496", "342022190843338960032"]
    );

    let rows = lines(&["generate", "--pq", "3/10", "--z", "x", "--terms", "1"]);
    assert_eq!(rows.len(), 2);
    assert_eq!(column(&rows, 3), ["10"]);
}

#[test]
fn verify() {
    let rows = lines(&["verify", "--pq", "6/7", "--z", "n", "--terms", "6"]);
    assert!(rows.iter().all(|l| l.ends_with(" pass")), "{rows:?}");
    assert_eq!(rows.iter().filter(|l| l.starts_with("theorem")).count(), 6);
    assert_eq!(
        code(&["verify", "--pq", "1/1", "--z", "1", "--terms", "7"]),
        0
    );

    let o = engelcf(&["verify", "--pq", "6/7", "--z", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n = 1"));
}

#[test]
fn verify_batch_matches_single_runs() {
    let batch = record(&[
        "verify", "--pq", "6/7", "--pq", "1/1", "--pq", "13/7", "--z", "n", "--terms", "5",
        "--jobs", "2",
    ]);
    assert_eq!(batch["exit_code"], 0);
    let cases = batch["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 3);
    for (case, pq) in cases.iter().zip(["6/7", "1/1", "13/7"]) {
        let single = record(&["verify", "--pq", pq, "--z", "n", "--terms", "5"]);
        assert_eq!(case["checks"], single["checks"]);
    }

    assert_eq!(
        code(&["verify", "--pq", "6/7", "--pq", "1/1", "--z", "n", "--z", "1", "--z", "x"]),
        2
    );
    assert_eq!(
        code(&["verify", "--pq", "6/7", "--pq", "1/1", "--z", "n", "--z", "0"]),
        3
    );
}

#[test]
fn verify_output_is_the_library_report() {
    let cfg = SeedConfig::parse("5/12", "x+1").unwrap();
    let report = run_case(
        &VerifyCase {
            config: cfg,
            terms: 5,
        },
        100_000,
    )
    .unwrap();
    let rec = record(&["verify", "--pq", "5/12", "--z", "x+1", "--terms", "5"]);
    let checks = rec["checks"].as_object().unwrap();
    assert_eq!(checks.len(), report.theorem.len() + report.growth.len() + 2);
    for t in &report.theorem {
        assert_eq!(checks[&format!("theorem n={}", t.n)], t.passed());
    }
    for (n, ok) in &report.growth {
        assert_eq!(checks[&format!("growth n={n}")], *ok);
    }
}

#[test]
fn digits() {
    let rows = lines(&["digits", "--pq", "6/7", "--z", "n", "--digits", "20"]);
    assert_eq!(rows[0], "0.86607390873015929971");
    assert_eq!(
        lines(&["digits", "--pq", "6/7", "--z", "n", "--digits", "1"])[0],
        "0.8"
    );

    let rows = lines(&["digits", "--pq", "1/2", "--z", "1", "--digits", "5"]);
    assert_eq!(rows[0].len(), "0.".len() + 5);
    assert!(rows[1].starts_with("n "));
    let tail: usize = rows[2]
        .strip_prefix("tail_exponent ")
        .unwrap()
        .parse()
        .unwrap();
    assert!(tail >= 7);

    assert_eq!(
        code(&["digits", "--pq", "6/7", "--z", "n", "--digits", "0"]),
        2
    );
    assert_eq!(
        code(&[
            "digits",
            "--pq",
            "6/7",
            "--z",
            "n",
            "--digits",
            "500",
            "--max-digits",
            "100"
        ]),
        4
    );
}

#[test]
fn cfseries() {
    let rows = lines(&["cfseries", "--pq", "6/7", "--z", "n", "--terms", "5"]);
    let coeffs: Vec<&str> = rows.iter().map(|r| r.split(' ').nth(1).unwrap()).collect();
    assert_eq!(
        coeffs,
        [
            "0",
            "1",
            "6",
            "2",
            "7",
            "32",
            "112",
            "10800",
            "403200",
            "17418254400",
            "1755760043520000"
        ]
    );
    assert_eq!(rows[10], "a_10 1755760043520000");

    let rec = record(&["cfseries", "--pq", "1/1", "--z", "1", "--terms", "4"]);
    assert_eq!(
        rec["cf"],
        serde_json::json!(["1", "1", "1", "2", "2", "6", "12"])
    );

    assert_eq!(
        lines(&["cfseries", "--pq", "7/3", "--z", "n", "--terms", "1"]),
        ["a_0 2", "a_1 2", "a_2 1"]
    );
}

#[test]
fn kappa() {
    let rows = lines(&["kappa", "--pq", "6/7", "--z", "n", "--terms", "8"]);
    assert_eq!(rows[0], "n q_digits kappa");
    let kappas: Vec<(usize, f64)> = rows[1..]
        .iter()
        .map(|r| {
            let f: Vec<&str> = r.split(' ').collect();
            (f[0].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    assert_eq!(kappas.first().unwrap().0, 2);
    assert_eq!(kappas.last().unwrap().0, 6);
    assert!(kappas.iter().all(|&(_, k)| k.is_finite()));
    assert!(kappas
        .iter()
        .filter(|&&(n, _)| n >= 3)
        .all(|&(_, k)| k >= 2.4));

    // For z = 1, log x_{n+1} ~ 3 log x_n - log x_{n-1}, so kappa tends to the
    // larger root of r^2 - 3r + 1.
    let limit = (3.0 + 5f64.sqrt()) / 2.0;
    let rows = lines(&["kappa", "--pq", "1/1", "--z", "1", "--terms", "8"]);
    let last: f64 = rows
        .last()
        .unwrap()
        .split(' ')
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!((last - limit).abs() < 1e-3, "{last}");

    assert_eq!(
        code(&["kappa", "--pq", "6/7", "--z", "n", "--terms", "4"]),
        5
    );
}

#[test]
fn exit_codes() {
    let o = engelcf(&["expand", "--pq", "6/x"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'x'"));
    assert_eq!(code(&["generate", "--pq", "6/7", "--z", "n-1"]), 2);
    assert_eq!(code(&["generate", "--pq", "1/0", "--z", "n"]), 2);
    assert_eq!(
        code(&["generate", "--pq", "6/7", "--z", "n", "--terms", "0"]),
        2
    );
    assert_eq!(code(&["generate", "--pq", "6/7", "--z", "n*0"]), 3);
    assert_eq!(
        code(&[
            "generate",
            "--pq",
            "1/1",
            "--z",
            "x^2+1",
            "--terms",
            "9",
            "--max-digits",
            "1000"
        ]),
        4
    );
    assert_eq!(
        code(&["kappa", "--pq", "6/7", "--z", "n", "--terms", "3"]),
        5
    );
}

#[test]
fn json_records_are_deterministic_and_reproducible() {
    let args = ["generate", "--pq", "6/7", "--z", "n", "--terms", "6"];
    let mut first = record(&args);
    let mut second = record(&args);
    assert!(first["timing_ms"].is_number());
    first.as_object_mut().unwrap().remove("timing_ms");
    second.as_object_mut().unwrap().remove("timing_ms");
    assert_eq!(first, second);
    assert_eq!(first["exit_code"], 0);
    assert_eq!(first["error"], Value::Null);

    // re-running the library from the echoed config reproduces the sequences
    let config = &first["config"];
    let cfg = SeedConfig::parse(
        config["pq"].as_str().unwrap(),
        config["z"].as_str().unwrap(),
    )
    .unwrap();
    let terms = config["terms"].as_u64().unwrap() as usize;
    let state = EngelState::generate(cfg, terms, config["max_digits"].as_u64().unwrap()).unwrap();
    let xs: Vec<String> = state.xs().iter().map(ToString::to_string).collect();
    assert_eq!(first["sequences"]["x"], serde_json::json!(xs));

    let failed = record(&["generate", "--pq", "6/7", "--z", "0"]);
    assert_eq!(failed["exit_code"], 3);
    assert!(failed["error"].as_str().unwrap().contains("n = 1"));
}
