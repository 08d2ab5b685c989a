use std::process::{Command, Output};

use serde_json::Value;

fn seqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqlab")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn verify_is_deterministic() {
    let args = ["--seed", "9", "verify", "--suite", "thm2", "--cases", "5", "--n-max", "10"];
    let a = seqlab(&args);
    let b = seqlab(&args);
    let c = seqlab(&[&["--sequential"], &args[..]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let report = json(&a);
    assert_eq!(report["suite"], "thm2");
    assert_eq!(report["failed"], 0);
}

#[test]
fn misprint_exits_one_with_mismatch_report() {
    let out = seqlab(&["verify", "--suite", "thm4", "--n-max", "3", "--paper-verbatim"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    let first = &report["mismatches"][0];
    assert_eq!(first["n"], 2);
    assert_eq!(first["expected"], "l^2");
    assert_eq!(first["actual"], "l^3 + l^2");
    assert_eq!(first["conventions"][0], "q-binomial=C(i,k-1)");
}

#[test]
fn usage_and_resource_errors_exit_two() {
    assert_eq!(seqlab(&["verify", "--suite", "thm9"]).status.code(), Some(2));
    assert_eq!(seqlab(&["verify"]).status.code(), Some(2));
    assert_eq!(seqlab(&["--guard-bytes", "1024", "verify", "--suite", "exponents"]).status.code(), Some(2));
    assert_eq!(seqlab(&["table", "pcoeffs", "--n", "40"]).status.code(), Some(2));
    assert_eq!(
        seqlab(&["eval", "order2", "--method", "kron", "--n", "5", "--coeffs", "gen:nope"]).status.code(),
        Some(2)
    );
}

#[test]
fn eval_from_file_and_generator() {
    let dir = std::env::temp_dir().join(format!("seqlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("coeffs.json");
    std::fs::write(
        &file,
        r#"{"x1": "1", "x2": "1/2", "a": {"3": "2", "4": "-1/3", "5": "1"}, "b": {"3": "1", "4": "3", "5": "-2"}}"#,
    )
    .unwrap();
    let path = file.to_str().unwrap();
    let values: Vec<Value> = ["oracle", "fibword", "kron"]
        .iter()
        .map(|m| {
            let out = seqlab(&["eval", "order2", "--method", m, "--n", "5", "--coeffs", path]);
            assert_eq!(out.status.code(), Some(0), "{m}");
            json(&out)["value"].clone()
        })
        .collect();
    // x3 = 2, x4 = -2/3 + 3/2 = 5/6, x5 = 5/6 - 4 = -19/6.
    assert_eq!(values[0], "-19/6");
    assert!(values.iter().all(|v| *v == values[0]));
    std::fs::remove_dir_all(&dir).unwrap();

    let sym =
        seqlab(&["--format", "text", "eval", "order2", "--method", "kron", "--n", "3", "--coeffs", "gen:symbolic"]);
    assert_eq!(sym.status.code(), Some(0));
    let nonhom = seqlab(&["eval", "order2", "--method", "nonhom", "--n", "6", "--coeffs", "gen:ones"]);
    let oracle = seqlab(&["eval", "order2", "--method", "oracle", "--n", "6", "--coeffs", "gen:ones"]);
    // x_n = x_{n-1} + x_{n-2}: 1, 1, 2, 3, 5, 8.
    assert_eq!(json(&oracle)["value"], "8");
    assert_ne!(json(&nonhom)["value"], json(&oracle)["value"]);
    let chains = seqlab(&["eval", "fullhistory", "--method", "chains", "--n", "4", "--coeffs", "gen:ones"]);
    assert_eq!(json(&chains)["value"], "16");
}

#[test]
fn kappa_csv_round_trips() {
    let csv_out = seqlab(&["--format", "csv", "table", "kappa", "--n", "3"]);
    let json_out = seqlab(&["--json", "table", "kappa", "--n", "3"]);
    let tables = json(&json_out);
    let mut reader = csv::Reader::from_reader(csv_out.stdout.as_slice());
    assert_eq!(reader.headers().unwrap().len(), 1 + 8);
    for (row, table) in reader.records().zip(tables.as_array().unwrap()) {
        let row = row.unwrap();
        assert_eq!(row[0], table["n"].to_string());
        for (k, count) in table["counts"].as_array().unwrap().iter().enumerate() {
            assert_eq!(&row[k + 1], count.as_str().unwrap());
        }
    }
    let first = stdout(&csv_out);
    assert!(first.starts_with("n,k0,k1,k2,k3,k4,k5,k6,k7\n1,3,1,0,0,0,0,0,0\n2,9,6,0,1,"));
}

#[test]
fn pcoeffs_csv_round_trips() {
    let csv_out = seqlab(&["--format", "csv", "table", "pcoeffs", "--n", "3"]);
    let table = json(&seqlab(&["table", "pcoeffs", "--n", "3", "--method", "oracle"]));
    let mut rows = 0;
    for row in csv::Reader::from_reader(csv_out.stdout.as_slice()).records() {
        let row = row.unwrap();
        let terms = table["entries"][&row[1]].as_array().unwrap();
        let lexp: i64 = row[2].parse().unwrap();
        let term = terms.iter().find(|t| t["lexp"] == lexp).expect("term present");
        let coeff = if term["den"] == "1" {
            term["num"].as_str().unwrap().to_string()
        } else {
            format!("{}/{}", term["num"].as_str().unwrap(), term["den"].as_str().unwrap())
        };
        assert_eq!(row[3], coeff);
        rows += 1;
    }
    let total: usize = table["entries"].as_object().unwrap().values().map(|v| v.as_array().unwrap().len()).sum();
    assert_eq!(rows, total);
}

#[test]
fn words_and_reconcile() {
    assert_eq!(stdout(&seqlab(&["--format", "text", "words", "fib", "--len", "8"])), "01001010\n");
    assert_eq!(
        stdout(&seqlab(&["--format", "text", "words", "step", "--l", "2", "--m", "1", "--len", "7"])),
        "0010010\n"
    );
    let kappa = json(&seqlab(&["reconcile", "kappa", "--n", "4", "--candidates", "+2^n-1,-2^n-2"]));
    assert_eq!(kappa["candidates"][0]["matches_all"], true);
    assert_eq!(kappa["printed_vs_direct"][1]["agree"], false);
    let genpoly = json(&seqlab(&["reconcile", "genpoly", "--k", "2", "--ordering", "transposed"]));
    assert_eq!(genpoly[0]["equal"], false);
    let eq2 = json(&seqlab(&["reconcile", "eq2", "--n", "4"]));
    assert_eq!(eq2["consistent"].as_array().unwrap().len(), 1);
}

#[test]
fn hypothesis_report_validates() {
    for lambda in ["symbolic", "2"] {
        let out = seqlab(&["hypothesis", "f", "--n-max", "6", "--lambda", lambda]);
        assert_eq!(out.status.code(), Some(0));
        seqlab_core::quadratic::validate_hypothesis_json(&json(&out)).unwrap();
    }
}

#[test]
fn errata_document() {
    let path = std::env::temp_dir().join(format!("seqlab-errata-{}.md", std::process::id()));
    let out = seqlab(&["docs", "errata", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let md = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    for id in ["q-binomial", "kappa-recursion", "r2log-lower-limit", "q-generating-polynomial"] {
        assert!(md.contains(&format!("## {id}")), "{id}");
    }
}
