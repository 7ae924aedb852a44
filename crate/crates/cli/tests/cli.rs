use std::process::{Command, Output};

use serde_json::Value;

fn qsphere(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsphere")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(out: &Output) -> Vec<csv::StringRecord> {
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    rdr.records().map(|r| r.unwrap()).collect()
}

#[test]
fn relations_pass_at_rank_two() {
    let out = qsphere(&["verify", "relations", "--ell", "2", "--q", "0.5", "--cutoff", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pass"], true);
    for a in v["result"].as_array().unwrap() {
        assert!(a["max_deviation"].as_f64().unwrap() <= 1e-9);
    }
}

#[test]
fn q0_decompositions_are_exact() {
    let out = qsphere(&["verify", "decompositions", "--q", "0", "--cutoff", "4"]);
    assert_eq!(out.status.code(), Some(0));
    for a in json(&out)["result"].as_array().unwrap() {
        assert_eq!(a["max_deviation"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(qsphere(&["verify", "--cutoff", "1"]).status.code(), Some(2));
    assert_eq!(qsphere(&["verify", "--q", "1.5"]).status.code(), Some(2));
    assert_eq!(qsphere(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(qsphere(&["decay", "--ell", "1"]).status.code(), Some(2));
    assert_eq!(qsphere(&["operator-dump", "--op", "w7"]).status.code(), Some(2));
    assert_eq!(qsphere(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failed_checks_exit_with_one() {
    // an impossible tolerance turns a passing check into a failing one
    let out = qsphere(&["verify", "relations", "--ell", "1", "--cutoff", "4", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["pass"], false);
}

#[test]
fn dimension_spectrum_tables() {
    let out = qsphere(&["dimension-spectrum", "--ell", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    let deq: Vec<(String, String)> = rows
        .iter()
        .filter(|r| &r[0] == "deq")
        .map(|r| (r[1].to_string(), r[2].to_string()))
        .collect();
    assert_eq!(deq, vec![("1".into(), "1".into()), ("2".into(), "2".into()), ("3".into(), "1".into())]);

    let out = qsphere(&["dimension-spectrum", "--ell", "2"]);
    let v = json(&out);
    let tables = v["result"].as_array().unwrap();
    let poles: Vec<u64> = tables[0]["residues"].as_array().unwrap().iter().map(|r| r["pole"].as_u64().unwrap()).collect();
    assert_eq!(poles, vec![1, 2, 3, 4, 5]);
    let identity = &tables[1]["residues"].as_array().unwrap();
    let top = identity.iter().find(|r| r["pole"] == 3).unwrap();
    assert_eq!(top["residue"], "1");
}

#[test]
fn symbol_files_are_read_and_errors_located() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(
        &good,
        r#"{"ell": 2, "parts": [{"support_dims": 2, "free_dims": 0, "values": [[[1, 2], "1/3"], [[0, 0], "2/3"]]}]}"#,
    )
    .unwrap();
    let out = qsphere(&["dimension-spectrum", "--ell", "2", "--symbol", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let table = &v["result"][2];
    assert_eq!(table["residues"][0]["pole"], 1);
    assert_eq!(table["residues"][0]["residue"], "2");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"ell\": 2,\n  \"parts\": [oops]\n}").unwrap();
    let out = qsphere(&["dimension-spectrum", "--symbol", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn decay_report_for_first_generator() {
    let out = qsphere(&["decay", "--j", "1", "--ell", "2", "--q", "0.3", "--cutoff", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["result"][0]["alpha_fit"].as_f64().unwrap() >= 0.98);

    let out = qsphere(&["decay", "--j", "1", "--q", "0.3", "--cutoff", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("j,row_gamma,col_gamma,weight,entry,ratio\n"));
    assert!(!csv_rows(&out).is_empty());
}

#[test]
fn cg_table_rows_match_move_counts() {
    let rows = csv_rows(&qsphere(&["cg-table", "--ell", "3", "--i", "3", "--format", "csv"]));
    assert_eq!(rows.len(), 24);
    let rows = csv_rows(&qsphere(&["cg-table", "--ell", "2", "--i", "3", "--format", "csv"]));
    assert_eq!(rows.len(), 6);
    let out = qsphere(&["cg-table", "--ell", "2", "--pattern", "2,1,0;2,1;1", "--i", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"].as_array().unwrap().len(), 3);
    assert_eq!(qsphere(&["cg-table", "--pattern", "1,2,0;1,1;1"]).status.code(), Some(2));
}

#[test]
fn operator_dump_of_q0_generator_is_a_partial_isometry_pattern() {
    let out = qsphere(&["operator-dump", "--op", "y2", "--q", "0", "--ell", "2", "--cutoff", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| &r[2] == "1.0"));
    // gamma tuples are comma-joined and quoted
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("row_gamma,col_gamma,value\n\""));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "q = 0.3\nell = 2\ncutoff = 4\n[verify]\ncutoff = 5\ncheck = relations\n").unwrap();
    let c = cfg.to_str().unwrap();

    let v = json(&qsphere(&["verify", "--config", c]));
    assert_eq!(v["params"]["q"], 0.3);
    assert_eq!(v["params"]["cutoff"], 5);
    assert_eq!(v["result"].as_array().unwrap().len(), 2);

    let v = json(&qsphere(&["verify", "--config", c, "--cutoff", "3", "--q", "0.6"]));
    assert_eq!(v["params"]["cutoff"], 3);
    assert_eq!(v["params"]["q"], 0.6);

    let v = json(&qsphere(&["dimension-spectrum", "--config", c]));
    assert_eq!(v["params"]["cutoff"], 4);

    std::fs::write(&cfg, "q = 0.3\nwidth = 4\n").unwrap();
    let out = qsphere(&["verify", "--config", c]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn out_flag_writes_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["verify", "cg", "--seed", "3", "--ell", "2"];
    let direct = qsphere(&args);
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let written = qsphere(&with_out);
    assert_eq!(written.status.code(), Some(0));
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}
