use std::fs;
use std::path::Path;

use kfib_core::cli::{dispatch, render_report, RunManifest, EXIT_FAILED_CHECK, EXIT_OK, EXIT_USAGE};

fn run(dir: &Path, args: &[&str]) -> i32 {
    let md = dir.join("manifests");
    let mut argv = vec!["kfib", "--manifest-dir", md.to_str().unwrap()];
    argv.extend_from_slice(args);
    dispatch(argv)
}

fn manifests(dir: &Path) -> Vec<RunManifest> {
    let mut paths: Vec<_> = fs::read_dir(dir.join("manifests"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    paths.sort();
    paths.iter().map(|p| RunManifest::load(p).unwrap()).collect()
}

#[test]
fn documented_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(run(d.path(), &["verify", "--k", "3", "--n-max", "100"]), EXIT_OK);
    let out = d.path().join("s.jsonl");
    assert_eq!(run(d.path(), &["search", "--k", "2", "--z-max", "40", "--out", out.to_str().unwrap()]), EXIT_OK);
    assert_eq!(fs::read_to_string(&out).unwrap(), "");
    assert_eq!(run(d.path(), &["roots", "--k", "0"]), EXIT_USAGE);
    assert_eq!(run(d.path(), &["frobnicate"]), EXIT_USAGE);
    assert_eq!(run(d.path(), &["search", "--k", "3", "--z-max", "5"]), EXIT_USAGE);
    // one manifest per parsed run: verify, search and the rejected z_max
    let m = manifests(d.path());
    assert_eq!(m.len(), 3);
    assert!(m.iter().any(|m| m.subcommand == "search" && m.outcome.status == "usage-error"));
}

#[test]
fn every_subcommand_runs() {
    let d = tempfile::tempdir().unwrap();
    let o = |name: &str| d.path().join(name).to_str().unwrap().to_string();
    let cases: Vec<Vec<String>> = vec![
        vec!["seq".into(), "--k".into(), "3".into(), "--n".into(), "12".into(), "--out".into(), o("seq.jsonl")],
        vec!["roots".into(), "--k".into(), "5".into(), "--out".into(), o("roots.json")],
        vec!["norms".into(), "--k".into(), "6".into(), "--out".into(), o("norms.json")],
        vec!["gcd-scan".into(), "--k".into(), "3".into(), "--x-max".into(), "30".into(), "--out".into(), o("gcd.jsonl")],
        vec!["indep".into(), "--k".into(), "4".into(), "--probe-bound".into(), "2".into(), "--subset".into(), "1110".into(), "--out".into(), o("indep.json")],
        vec!["expand".into(), "--k".into(), "2".into(), "--T".into(), "2".into(), "--at".into(), "10,12,14".into(), "--out".into(), o("expand.json")],
        vec!["square-scan".into(), "--k-max".into(), "40".into(), "--out".into(), o("sq.jsonl")],
    ];
    for c in &cases {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        assert_eq!(run(d.path(), &args), EXIT_OK, "{c:?}");
    }
    let seq = fs::read_to_string(d.path().join("seq.jsonl")).unwrap();
    assert_eq!(seq.lines().nth(7).unwrap(), r#"{"n":8,"value":"44"}"#);
    let gcd = fs::read_to_string(d.path().join("gcd.jsonl")).unwrap();
    assert_eq!(gcd.lines().count(), (4..=30).map(|x| x - 3).sum::<usize>());
    let sq: serde_json::Value =
        serde_json::from_str(fs::read_to_string(d.path().join("sq.jsonl")).unwrap().lines().nth(2).unwrap()).unwrap();
    assert_eq!(sq["D"], "5067");
    let ex: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.path().join("expand.json")).unwrap()).unwrap();
    assert_eq!(ex["report"]["decay_ok"], true);
    assert_eq!(manifests(d.path()).len(), cases.len());
}

#[test]
fn rerun_from_manifest_is_byte_identical() {
    let d = tempfile::tempdir().unwrap();
    let first = d.path().join("a.jsonl");
    assert_eq!(run(d.path(), &["gcd-scan", "--k", "4", "--x-max", "25", "--out", first.to_str().unwrap()]), EXIT_OK);
    let m = manifests(d.path()).pop().unwrap();
    let mut params = m.parameters.clone();
    let second = d.path().join("b.jsonl");
    params["out"] = serde_json::json!(second.to_str().unwrap());
    let cfg = d.path().join("cfg.json");
    fs::write(&cfg, serde_json::to_string(&params).unwrap()).unwrap();
    assert_eq!(run(d.path(), &["--config", cfg.to_str().unwrap(), "gcd-scan"]), EXIT_OK);
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn config_values_yield_to_flags() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("cfg.json");
    fs::write(&cfg, r#"{"k": 2, "n": 5}"#).unwrap();
    let out = d.path().join("seq.jsonl");
    let code = run(
        d.path(),
        &["seq", "--config", cfg.to_str().unwrap(), "--k", "3", "--out", out.to_str().unwrap()],
    );
    assert_eq!(code, EXIT_OK);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().last().unwrap().contains(r#""value":"7""#)); // F_5 = 7 for k = 3, 3 for k = 2
    assert_eq!(manifests(d.path())[0].parameters["k"], 3);
}

#[test]
fn search_resumes_through_the_cli() {
    let d = tempfile::tempdir().unwrap();
    let cp = d.path().join("cp.json");
    let a = d.path().join("a.jsonl");
    let b = d.path().join("b.jsonl");
    let c = d.path().join("c.jsonl");
    let s = |p: &Path| p.to_str().unwrap().to_string();
    assert_eq!(run(d.path(), &["search", "--k", "4", "--z-max", "20", "--checkpoint", &s(&cp), "--out", &s(&a)]), EXIT_OK);
    assert_eq!(run(d.path(), &["search", "--k", "4", "--z-max", "36", "--resume", &s(&cp), "--out", &s(&b)]), EXIT_OK);
    assert_eq!(run(d.path(), &["--jobs", "2", "search", "--k", "4", "--z-max", "36", "--out", &s(&c)]), EXIT_OK);
    assert_eq!(fs::read(&b).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn report_cases() {
    let d = tempfile::tempdir().unwrap();
    let empty = d.path().join("empty");
    fs::create_dir(&empty).unwrap();
    assert_eq!(run(d.path(), &["report", "--manifests", empty.to_str().unwrap()]), EXIT_USAGE);

    assert_eq!(run(d.path(), &["verify", "--k", "2", "--n-max", "30"]), EXIT_OK);
    assert_eq!(run(d.path(), &["square-scan", "--k-max", "12"]), EXIT_OK);
    let summary = d.path().join("summary.md");
    assert_eq!(run(d.path(), &["report", "--out", summary.to_str().unwrap()]), EXIT_OK);
    let text = fs::read_to_string(&summary).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("| ") && !l.starts_with("| subcommand")).collect();
    assert_eq!(rows.len(), 2);

    // a synthetic failing gcd record
    let mut bad = manifests(d.path()).into_iter().find(|m| m.subcommand == "verify").unwrap();
    bad.subcommand = "gcd-scan".into();
    bad.outcome.status = "fail".into();
    bad.outcome.exit_code = EXIT_FAILED_CHECK;
    bad.outcome.failures = vec!["k=2 x=9 y=4: gcd 99 exceeds bound".into()];
    let (text, ok) = render_report(&[bad.clone()]);
    assert!(!ok);
    assert!(text.contains("FAILURES PRESENT") && text.contains("x=9 y=4"));
    fs::write(d.path().join("manifests").join("zz-synthetic.json"), serde_json::to_string(&bad).unwrap()).unwrap();
    assert_eq!(run(d.path(), &["report", "--out", summary.to_str().unwrap()]), EXIT_FAILED_CHECK);
    assert!(fs::read_to_string(&summary).unwrap().contains("gcd 99 exceeds bound"));

    fs::write(d.path().join("manifests").join("zz-garbage.json"), "{not json").unwrap();
    assert_eq!(run(d.path(), &["report"]), EXIT_USAGE);
}
