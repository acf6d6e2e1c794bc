use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::Value;
use tgc_testkit::corpus::{corpus_dir, corpus_files, fixture};

fn tgc<S: AsRef<std::ffi::OsStr>>(args: &[S]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgc")).args(args).output().unwrap()
}

fn s(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

fn corpus_arg() -> String {
    s(&corpus_dir())
}

fn with_badmon() -> Vec<String> {
    vec![corpus_arg(), s(&fixture("badmon.tg"))]
}

fn json(args: &[String]) -> (Option<i32>, Value) {
    let mut full = vec!["--format".to_string(), "json".to_string()];
    full.extend(args.iter().cloned());
    let out = tgc(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code(), v)
}

fn args(head: &[&str], tail: Vec<String>) -> Vec<String> {
    head.iter().map(|a| a.to_string()).chain(tail).collect()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn items<'a>(v: &'a Value, kind: &str) -> Vec<&'a Value> {
    v["items"].as_array().unwrap().iter().filter(|i| i["kind"] == kind).collect()
}

#[test]
fn clean_corpus_checks() {
    let out = tgc(&["check".to_string(), corpus_arg()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("summary: 0 errors"));
}

#[test]
fn badmon_and_mutated_check_fail() {
    let (code, v) = json(&args(&["check"], with_badmon()));
    assert_eq!(code, Some(1));
    let bad = items(&v, "morphism").into_iter().find(|m| m["id"] == "BadMon").unwrap();
    assert_eq!(bad["status"], "partial");
    assert_eq!(bad["diagnostics"][0]["code"], "W-PARTIAL-MORPHISM");
    let cc = items(&v, "crosscheck").into_iter().find(|c| c["id"] == "cc_struct_mutated").unwrap();
    assert_eq!(cc["status"], "failure");
    assert!(cc["details"]["locus"].to_string().contains("skeleton"), "{cc}");
    assert_eq!(v["summary"]["failures"], 1);
    assert_eq!(v["summary"]["pending"], 1);
}

#[test]
fn seeded_errors_are_reported_with_exit_1() {
    for f in ["errors/unknown_sort.tg", "errors/unmapped_symbol.tg", "errors/syntax_error.tg"] {
        let (code, v) = json(&["check".to_string(), s(&fixture(f))]);
        assert_eq!(code, Some(1), "{f}");
        assert!(v["summary"]["errors"].as_u64().unwrap() >= 1, "{f}");
    }
}

#[test]
fn missing_input_is_a_usage_error() {
    for cmd in [vec!["check", "no/such/dir"], vec!["paths", "--to", "Ring", "no/such/dir"]] {
        let out = tgc(&cmd);
        assert_eq!(out.status.code(), Some(2), "{cmd:?}");
    }
    let (code, v) = json(&["check".to_string(), "no/such/dir".to_string()]);
    assert_eq!(code, Some(2));
    assert!(v["fatal"].is_string());
    assert!(tgc(&["frobnicate"]).status.code() == Some(2));
}

#[test]
fn paths_lists_backward_reach() {
    let (code, v) = json(&args(&["paths", "--to", "Ring"], vec![corpus_arg()]));
    assert_eq!(code, Some(0));
    let ids: Vec<&str> = items(&v, "path").iter().map(|p| p["id"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 2);
    assert!(ids.iter().all(|i| i.starts_with("Monoid -> Ring")), "{ids:?}");

    let (_, v) = json(&args(&["paths", "--to", "Int", "--max-depth", "2"], vec![corpus_arg()]));
    assert!(items(&v, "path").iter().any(|p| p["id"] == "Monoid -> Int via AddMon,RingToInt"), "{v}");

    let (code, _) = json(&args(&["paths", "--to", "NoSuch"], vec![corpus_arg()]));
    assert_eq!(code, Some(2));
}

#[test]
fn transport_prints_a_theorem_and_respects_partiality() {
    let out = tgc(&args(&["transport", "Monoid.id_unique", "--via", "AddMon"], vec![corpus_arg()]));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("theorem id_unique_AddMon in Ring"), "{}", stdout(&out));

    let bad = args(&["transport", "Monoid.id_unique", "--via", "BadMon"], with_badmon());
    assert_eq!(tgc(&bad).status.code(), Some(1));
    let out = tgc(&args(&["--allow-partial"], bad));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("// flagged:"), "{}", stdout(&out));

    let out = tgc(&args(&["transport", "Monoid.nope", "--via", "AddMon"], vec![corpus_arg()]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transport_along_composite_finds_existing_theorem() {
    let (code, v) = json(&args(&["transport", "Monoid.id_unique", "--via", "AddMon,RingToInt"], vec![corpus_arg()]));
    assert_eq!(code, Some(0));
    assert_eq!(v["items"][0]["status"], "duplicate");
}

#[test]
fn crosscheck_selection() {
    let (code, v) = json(&args(&["crosscheck"], vec![corpus_arg()]));
    assert_eq!(code, Some(0));
    assert_eq!(items(&v, "crosscheck").iter().filter(|c| c["status"] == "success").count(), 4);
    let (code, _) = json(&args(&["crosscheck", "--id", "cc_struct_mutated"], with_badmon()));
    assert_eq!(code, Some(1));
    let (code, _) = json(&args(&["crosscheck", "--id", "nope"], vec![corpus_arg()]));
    assert_eq!(code, Some(2));
}

#[test]
fn json_like_is_an_alias() {
    let a = tgc(&["--format", "json", "check", &corpus_arg()]);
    let b = tgc(&["--format", "json-like", "check", &corpus_arg()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_schema_is_stable() {
    let (_, v) = json(&["check".to_string(), corpus_arg()]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["tool", "version", "command", "inputs", "input_digest", "items", "summary"] {
        assert!(keys.contains(&k), "{k} missing from {keys:?}");
    }
    assert_eq!(v["tool"], "tgc");
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    for item in v["items"].as_array().unwrap() {
        for k in ["kind", "id", "status", "diagnostics"] {
            assert!(item.get(k).is_some(), "{item}");
        }
    }
}

#[test]
fn digest_tracks_content() {
    let tmp = tempfile::tempdir().unwrap();
    for f in corpus_files() {
        std::fs::copy(&f, tmp.path().join(f.file_name().unwrap())).unwrap();
    }
    let (_, a) = json(&["check".to_string(), corpus_arg()]);
    let (_, b) = json(&["check".to_string(), s(tmp.path())]);
    assert_eq!(a["input_digest"], b["input_digest"]);
    let first: PathBuf = tmp.path().join(corpus_files()[0].file_name().unwrap());
    let mut text = std::fs::read_to_string(&first).unwrap();
    text.push_str("\n// edited\n");
    std::fs::write(&first, text).unwrap();
    let (_, c) = json(&["check".to_string(), s(tmp.path())]);
    assert_ne!(a["input_digest"], c["input_digest"]);
}

fn summary_line(text: &str) -> Vec<u64> {
    let line = text.lines().rev().find(|l| l.starts_with("summary:")).unwrap();
    line.split(|c: char| !c.is_ascii_digit())
        .filter(|w| !w.is_empty())
        .take(5)
        .map(|w| w.parse().unwrap())
        .collect()
}

fn inputs() -> impl Strategy<Value = Vec<PathBuf>> {
    let mut pool = corpus_files();
    for f in ["badmon.tg", "errors/unknown_sort.tg", "errors/unmapped_symbol.tg", "errors/syntax_error.tg"] {
        pool.push(fixture(f));
    }
    proptest::sample::subsequence(pool.clone(), 1..=pool.len())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn text_and_json_reports_agree(files in inputs(), cmd in 0usize..3) {
        let head: &[&str] = match cmd {
            0 => &["check"],
            1 => &["crosscheck"],
            _ => &["paths", "--to", "Monoid"],
        };
        let paths: Vec<String> = files.iter().map(|p| s(p)).collect();
        let text = tgc(&args(head, paths.clone()));
        let (code, v) = json(&args(head, paths));
        prop_assert_eq!(text.status.code(), code);
        prop_assert!(matches!(code, Some(0..=2)));
        if v.get("fatal").is_none() {
            let sm = &v["summary"];
            prop_assert_eq!(sm["exit_code"].as_i64().map(|c| c as i32), code);
            let counts: Vec<u64> = ["errors", "warnings", "failures", "pending", "items"]
                .iter()
                .map(|k| sm[*k].as_u64().unwrap())
                .collect();
            prop_assert_eq!(summary_line(&stdout(&text)), counts);
            let errors = sm["errors"].as_u64().unwrap() + sm["failures"].as_u64().unwrap();
            if head[0] == "check" {
                prop_assert_eq!(code == Some(0), errors == 0 && sm["pending"] == 0);
            }
        }
    }
}
