use std::io::Write;
use std::process::{Command, Output, Stdio};

fn qconn(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qconn"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn construct_then_certify() {
    let a = qconn(&["construct", "a", "-n", "103", "-k", "3", "-d", "3"], "");
    assert!(a.status.success());
    let v = qconn(&["certify", "-k", "3", "--json"], &stdout(&a));
    assert_eq!(v.status.code(), Some(0));
    let v = json(&v);
    assert_eq!(v["outcome"], "EXCEPTIONAL_FAMILY");
    assert_eq!(v["threshold"], 200);
    assert_eq!(v["member"]["removed_edges"], serde_json::json!([]));
    assert_eq!(v["kappa"], 2);
}

#[test]
fn compute_q_and_kappa_from_stdin() {
    // K_3 then the path 0-1-2.
    for (g6, q) in [("Bw", 4.0), ("Bg", 3.0)] {
        let v = json(&qconn(&["compute-q", "--json"], g6));
        assert!(v["lower"].as_f64().unwrap() <= q + 1e-9 && v["upper"].as_f64().unwrap() >= q - 1e-9, "{g6}");
    }
    let o = qconn(&["kappa", "--brute"], "C~\n");
    assert!(stdout(&o).starts_with("kappa 3"));
}

#[test]
fn encode_decode_round_trip() {
    let o = qconn(&["encode"], "4\n0 1\n1 2\n2 3\n");
    let g6 = stdout(&o).trim().to_string();
    let back = qconn(&["decode"], &g6);
    assert_eq!(stdout(&back), "4\n0 1\n1 2\n2 3\n");
}

#[test]
fn exit_codes() {
    let o = qconn(&["certify", "-k", "3", "/nonexistent.g6"], "");
    assert_eq!(o.status.code(), Some(2));
    let o = qconn(&["certify", "-k", "3"], "not graph6 \u{7f}\n");
    assert_eq!(o.status.code(), Some(2));
    let o = qconn(&["verify", "chain", "-n", "13", "-k", "3", "-d", "3"], "");
    assert_eq!(o.status.code(), Some(1));
    let o = qconn(&["verify", "chain", "-n", "103", "-k", "3", "-d", "3"], "");
    assert_eq!(o.status.code(), Some(0));
    let o = qconn(&["verify", "3.1", "-n", "103", "-k", "3", "-d", "3", "--remove", "0-1,5-6"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reports_evidence() {
    let o = qconn(&["verify", "3.2", "-n", "103", "-k", "3", "-d", "3", "--remove", "0-1,5-6", "--json"], "");
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["identity_value"], -4);
    assert!(v["q_upper"].as_f64().unwrap() < 200.0);
}

#[test]
fn sweep_report_replays_through_certify() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.g6");
    let report = dir.path().join("report.json");
    let mut lines = String::new();
    for args in [["a", "103", "3", "3"], ["m", "20", "3", "0"], ["l", "20", "3", "0"]] {
        let o = qconn(&["construct", args[0], "-n", args[1], "-k", args[2], "-d", args[3]], "");
        lines += &stdout(&o);
    }
    std::fs::write(&corpus, &lines).unwrap();
    let o = qconn(
        &["sweep", "certify-one", "-k", "3", "--input", corpus.to_str().unwrap(), "-o", report.to_str().unwrap()],
        "",
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["schema"], 1);
    assert_eq!(r["counters"]["tested"], 3);
    let items = r["items"].as_array().unwrap();
    for (item, line) in items.iter().zip(lines.lines()) {
        let v = json(&qconn(&["certify", "-k", "3", "--json"], line));
        assert_eq!(item["outcome"], v["outcome"]);
    }
}
