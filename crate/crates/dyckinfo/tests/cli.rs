use std::path::Path;
use std::process::{Command, Output};

fn dyckinfo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyckinfo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a named table in a CSV report.
fn rows(report: &str, table: &str) -> Vec<csv::StringRecord> {
    let marker = format!("# table: {table}\n");
    let start = report.find(&marker).expect("table present") + marker.len();
    let body = report[start..].split("\n\n").next().unwrap();
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn tradeoff_holds_on_block_protocol() {
    let o = dyckinfo(&["tradeoff", "--n", "8", "--l", "2", "--seed", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.starts_with("# dyckinfo "));
    assert!(out.contains("# seed=1\n"));
    let r = rows(&out, "tradeoff");
    assert_eq!(r.len(), 1);
    assert_eq!(&r[0][7], "true");
    assert_eq!(&r[0][2], "0");
    assert_eq!(&r[0][9], "exact");
}

#[test]
fn tradeoff_falls_back_to_sampling_over_budget() {
    let dir = tempfile::tempdir().unwrap();
    let save = dir.path().join("p.json");
    let o = dyckinfo(&[
        "compile",
        "--w",
        "2",
        "--passes",
        "3",
        "--target",
        "1",
        "--save",
        save.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let p = save.to_str().unwrap();
    let exact = rows(
        &stdout(&dyckinfo(&["tradeoff", "--n", "2", "--protocol", p])),
        "tradeoff",
    );
    let o = dyckinfo(&[
        "tradeoff",
        "--n",
        "2",
        "--protocol",
        p,
        "--eps",
        "0",
        "--budget",
        "50",
        "--samples",
        "50",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sampled = rows(&stdout(&o), "tradeoff");
    assert_eq!(&sampled[0][9], "sampled");
    assert_eq!(&sampled[0][8], "asserted");
    let half: f64 = sampled[0][10].parse().unwrap();
    for col in [3, 4] {
        let (e, s): (f64, f64) = (exact[0][col].parse().unwrap(), sampled[0][col].parse().unwrap());
        assert!(
            (e - s).abs() <= half,
            "column {col}: exact {e}, sampled {s}, half-width {half}"
        );
    }
}

#[test]
fn bound_value() {
    let o = dyckinfo(&["bound", "--N", "1000000", "--T", "2", "--eps", "0"]);
    assert!(o.status.success());
    let r = rows(&stdout(&o), "bound");
    let v: f64 = r[0][3].parse().unwrap();
    assert!((v - 3.868).abs() < 0.01, "{v}");
}

#[test]
fn excessive_error_is_a_precondition_failure() {
    let o = dyckinfo(&["bound", "--N", "1000000", "--T", "2", "--eps", "0.5"]);
    assert!(!o.status.success());
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "precondition");
    assert!(o.stdout.is_empty());
}

#[test]
fn reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gap.csv");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = dyckinfo(&["transcript-gap", "--n", "4", "--out", out.to_str().unwrap()]);
        assert!(o.status.success());
        runs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
    let o = dyckinfo(&["embed", "--n", "3", "--count", "4", "--seed", "9"]);
    assert_eq!(
        stdout(&o),
        stdout(&dyckinfo(&["embed", "--n", "3", "--count", "4", "--seed", "9"]))
    );
}

#[test]
fn json_format() {
    let o = dyckinfo(&["tradeoff", "--n", "4", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "tradeoff");
    assert_eq!(v["config"]["n"], "4");
    assert_eq!(v["tables"][0]["rows"].as_array().unwrap().len(), 2);
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn dyck_check_and_stream_run_agree() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write(dir.path(), "words.txt", "()[]\n([)]\n\n((([[]])))[]\n]\n");
    let expected = ["true", "false", "true", "false"];
    for algo in ["stack", "band", "freegroup"] {
        let o = dyckinfo(&["dyck-check", "--algo", algo, "--w", "2", "--file", &corpus]);
        assert!(o.status.success(), "{algo}: {}", String::from_utf8_lossy(&o.stderr));
        let r = rows(&stdout(&o), "verdicts");
        let got: Vec<&str> = r.iter().map(|r| &r[2]).collect();
        assert_eq!(got, expected, "{algo}");
        assert_eq!(&r[2][0], "4", "line numbers skip blanks");
    }
    let o = dyckinfo(&["stream-run", "--machine", "band", "--w", "2", "--file", &corpus]);
    let r = rows(&stdout(&o), "runs");
    assert_eq!(&r[2][3], "3");
    let o = dyckinfo(&[
        "stream-run",
        "--machine",
        "band",
        "--w",
        "2",
        "--passes",
        "1",
        "--file",
        &corpus,
    ]);
    assert!(o.status.success());
}

#[test]
fn bad_corpus_symbol() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write(dir.path(), "bad.txt", "(x)\n");
    let o = dyckinfo(&["dyck-check", "--algo", "stack", "--file", &corpus]);
    assert!(!o.status.success());
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "invalid_symbol");
}

#[test]
fn embed_writes_words_and_layouts() {
    let dir = tempfile::tempdir().unwrap();
    let words = dir.path().join("w.txt");
    let o = dyckinfo(&["embed", "--n", "2", "--count", "3", "--out", words.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&words).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.len() == 16));
    let layout: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.txt.layout.json")).unwrap()).unwrap();
    assert_eq!(layout.as_array().unwrap().len(), 3);
    let r = rows(&stdout(&o), "embeddings");
    for row in &r {
        assert_eq!(&row[4] == "true", &row[3] == "0");
    }
}

#[test]
fn compiled_protocol_file_feeds_tradeoff() {
    let dir = tempfile::tempdir().unwrap();
    let save = dir.path().join("p.json");
    let o = dyckinfo(&["compile", "--w", "2", "--passes", "3", "--save", save.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = dyckinfo(&["tradeoff", "--n", "2", "--protocol", save.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&stdout(&o), "tradeoff");
    assert_eq!(&r[0][2], "0");
    assert_eq!(&r[0][7], "true");
}

#[test]
fn quantum_demo_builtins() {
    let o = dyckinfo(&["quantum-demo", "--builtin", "full-send", "--hybrid"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let r = rows(&out, "quantum_tradeoff");
    assert_eq!((&r[0][3], &r[0][4], &r[0][5]), ("0.5", "0", "1"));
    assert!(rows(&out, "hybrid").iter().all(|r| &r[8] == "true"));

    let o = dyckinfo(&["quantum-demo", "--builtin", "fixed-reply"]);
    assert_eq!(
        serde_json::from_slice::<serde_json::Value>(&o.stderr).unwrap()["error"],
        "precondition"
    );
    let o = dyckinfo(&["quantum-demo", "--builtin", "full-send", "--n", "4"]);
    assert!(!o.status.success());
}

#[test]
fn selftest_passes() {
    let o = dyckinfo(&["selftest"]);
    assert!(o.status.success(), "{}", stdout(&o));
}
