use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_suzuki-cd"))
        .args(args)
        .env_remove("SUZUKI_CD_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn degrees(v: &serde_json::Value) -> Vec<String> {
    v["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["degree"].as_str().unwrap().to_owned())
        .collect()
}

#[test]
fn cd_json_for_extension_of_sz8() {
    let out = run(&["cd", "--f", "1", "--d", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(degrees(&v), ["1", "14", "64", "91", "105", "195"]);
    assert_eq!(v["verified_against_oracle"], true);
}

#[test]
fn cd_table_for_sz8() {
    let out = run(&["cd", "--f", "1", "--d", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.trim().parse::<u64>().is_ok())
        .map(str::trim)
        .collect();
    assert_eq!(rows, ["1", "14", "35", "64", "65", "91"]);
}

#[test]
fn cd_multiplicities() {
    let out = run(&["cd", "--f", "1", "--multiplicities", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "f,d,degree,multiplicity\n1,1,1,1\n1,1,14,2\n1,1,35,3\n1,1,64,1\n1,1,65,3\n1,1,91,1\n"
    );
}

#[test]
fn cd_beyond_budget_is_closed_form_only() {
    let out = run(&["cd", "--f", "31", "--d", "63", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verified_against_oracle"], false);
    assert_eq!(v["q2"], "9223372036854775808");
    assert!(v["degrees"][0]["multiplicity"].is_null());
}

#[test]
fn cd_all_is_ordered_by_divisor() {
    let out = run(&["cd", "--f", "4", "--d", "all", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ds: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["d"].as_u64().unwrap())
        .collect();
    assert_eq!(ds, [1, 3, 9]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["cd", "--f", "2", "--d", "3"]).status.code(), Some(2));
    assert_eq!(run(&["cd", "--f", "0"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["cd", "--f", "11", "--multiplicities"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["cd", "--f", "11", "--checked"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["orbits", "--f", "11", "--family", "X"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["verify", "theorem-a", "--f-max", "11"]).status.code(),
        Some(3)
    );
    let out = run(&[
        "gcd-table",
        "--f",
        "1",
        "--output",
        "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn orbits_examples() {
    let out = run(&["orbits", "--f", "1", "--family", "X", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        json(&out)["orbits"],
        serde_json::json!([{"stabilizer_exponent": 3, "count": 3}])
    );
    let out = run(&["orbits", "--f", "1", "--family", "Z", "--json"]);
    assert_eq!(
        json(&out)["orbits"],
        serde_json::json!([{"stabilizer_exponent": 1, "count": 1}])
    );
    let out = run(&["orbits", "--f", "4", "--family", "Y", "--json"]);
    let orbits = json(&out)["orbits"].as_array().unwrap().clone();
    let count = |e: u64| {
        orbits
            .iter()
            .find(|o| o["stabilizer_exponent"] == e)
            .map_or(0, |o| o["count"].as_u64().unwrap())
    };
    assert!(count(9) > 0);
    assert_eq!(count(3), 0);
}

#[test]
fn gcd_table_rows_and_file_output() {
    let out = run(&["gcd-table", "--f", "1..8"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("f,n,torus,sign,closed_form,euclid,branch,match")
    );
    // Proper divisors of 2f+1 for f <= 8: {1} six times, {1, 3} at f = 4, {1, 3, 5} at f = 7.
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), (6 + 2 + 3) * 6);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(!text.contains('\r'));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = run(&[
        "gcd-table",
        "--f",
        "1..8",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), text.as_bytes());
}

#[test]
fn gcd_table_empty_range_is_header_only() {
    let out = run(&["gcd-table", "--f", "5..4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "f,n,torus,sign,closed_form,euclid,branch,match\n"
    );
}

#[test]
fn verify_scopes_pass() {
    for args in [
        &["verify", "lemmas", "--f-max", "64"][..],
        &["verify", "theorem-a", "--f-max", "6"],
        &["verify", "stabilizers", "--f-max", "6"],
        &["verify", "corollary-b"],
        &["verify", "cyclotomic", "--n-max", "100"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(stdout(&out).contains("0 failures: PASS"), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for jobs in ["1", "3"] {
        let path = dir.path().join(format!("cd{jobs}.json"));
        let out = run(&[
            "--jobs",
            jobs,
            "cd",
            "--f",
            "6",
            "--d",
            "all",
            "--multiplicities",
            "--json",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        texts.push(std::fs::read(Path::new(&path)).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}
