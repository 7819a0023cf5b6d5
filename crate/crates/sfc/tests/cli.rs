use std::io::Write;
use std::process::Command;

use serde_json::{json, Value};
use tempfile::NamedTempFile;

fn sfc(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_sfc")).args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    (value, code)
}

fn file(contents: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

/// Cayley table of `S3`, elements sorted as permutation vectors, with
/// `a ↦ (0 1)` and `b ↦ (0 1 2)`.
fn s3_json() -> String {
    let mut perms = vec![];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if i != j && j != k && i != k {
                    perms.push([i, j, k]);
                }
            }
        }
    }
    let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let mul: Vec<Vec<usize>> =
        perms.iter().map(|p| perms.iter().map(|q| index([q[p[0]], q[p[1]], q[p[2]]])).collect()).collect();
    json!({ "size": 6, "identity": index([0, 1, 2]), "mul": mul, "letters": { "a": index([1, 0, 2]), "b": index([1, 2, 0]) } })
        .to_string()
}

#[test]
fn membership_example() {
    let (v, code) = sfc(&["membership", "--class=mod", "--alphabet=a", "--lang", "(aa)*"]);
    assert_eq!(code, 0);
    assert_eq!(v["answer"], true);
    assert_eq!(v["monoid_size"], 2);
    let (v, code) = sfc(&["membership", "--class=st", "--alphabet=a", "--lang", "(aa)*"]);
    assert_eq!((v["answer"].clone(), code), (json!(false), 0));
    assert!(v["witness"].is_u64());
}

#[test]
fn separation_example() {
    let (v, code) = sfc(&["separate", "--class=st", "--alphabet=a", "(aa)*", "a(aa)*"]);
    assert_eq!((v["answer"].clone(), code), (json!(false), 0));
    let (v, _) = sfc(&["separate", "--class=mod", "--alphabet=a", "(aa)*", "a(aa)*"]);
    assert_eq!(v["answer"], true);
    assert!(v.get("trace").is_none());
}

#[test]
fn kernel_of_s3() {
    let f = file(&s3_json());
    let path = f.path().to_str().unwrap();
    let (v, code) = sfc(&["kernel", "--class=gr", "--morphism", path]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({ "kernel": [0] }));
    let (v, _) = sfc(&["kernel", "--class=amt", "--morphism", path]);
    assert_eq!(v["kernel"].as_array().unwrap().len(), 3);
}

#[test]
fn finite_class_from_file() {
    let eta = file(r#"{"size":2,"identity":0,"mul":[[0,1],[1,0]],"letters":{"a":1}}"#);
    let class = format!("finite:{}", eta.path().display());
    let verdict = |lang: &str| sfc(&["membership", &format!("--class={class}"), "--alphabet=a", "--lang", lang]).0["answer"].clone();
    assert_eq!(verdict("(aa)*"), true);
    assert_eq!(verdict("a(aa)*+aa"), true);
    assert_eq!(verdict("(aaa)*"), false);
    let (v, code) = sfc(&["orbits", &format!("--class={class}"), "--alphabet=a", "--lang", "(aa)*"]);
    assert_eq!(code, 0);
    assert!(!v["orbits"].as_array().unwrap().is_empty());
}

#[test]
fn cover_with_trace() {
    let (v, code) = sfc(&["cover", "--class=mod", "--alphabet=a", "--trace", "a*", "(aaa)*", "a(aaa)*", "aa(aaa)*"]);
    assert_eq!(code, 0);
    assert_eq!(v["answer"], true);
    assert_eq!(v["opt_size"].as_u64().unwrap() as usize, v["opt"].as_array().unwrap().len());
    for entry in v["trace"].as_array().unwrap() {
        assert!(["trivial", "multiplication", "sf-closure", "g-operation"].contains(&entry["rule"].as_str().unwrap()));
    }
}

#[test]
fn sd_subcommands() {
    let (v, _) = sfc(&["sd", "delay", "--alphabet=ab", "--dmax=8", "(aab)*ab"]);
    assert_eq!(v["delay"], 2);
    assert_eq!(v["witness"]["delay"], 1);
    let (v, _) = sfc(&["sd", "delay", "--alphabet=ab", "--dmax=6", "aa"]);
    assert_eq!(v["delay"], Value::Null);
    let (v, _) = sfc(&["sd", "delay", "--alphabet=ab", "a+ab"]);
    assert_eq!(v["prefix_code"], false);

    let good = file("# (ab)*\nstar(ab, d=1)\n");
    let (v, code) = sfc(&["sd", "validate", "--alphabet=ab", "--class=st", good.path().to_str().unwrap()]);
    assert_eq!((v["valid"].clone(), code), (json!(true), 0));
    assert_eq!(v["dfa"]["states"], 3);
    let bad = file("dunion(a, star(aa, d=2))");
    let (v, _) = sfc(&["sd", "validate", "--alphabet=ab", "--class=st", bad.path().to_str().unwrap()]);
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["path"], json!([1]));
    assert_eq!(v["violations"][0]["violation"]["kind"], "no-sync-delay");
}

#[test]
fn ltl_subcommands() {
    let f = file("X(a | max) & U((a -> X(b)) & (b -> X(a | max)), max)");
    let path = f.path().to_str().unwrap();
    let (v, _) = sfc(&["ltl", "eval", "--alphabet=ab", "--formula", path, "--word", "abab"]);
    assert_eq!(v["answer"], true);
    assert_eq!(v["positions"].as_array().unwrap().len(), 6);
    let (v, _) = sfc(&["ltl", "compare", "--alphabet=ab", "--formula", path, "--lang", "(ab)*", "--maxlen", "8"]);
    assert_eq!(v, json!({ "agree": true, "checked": 511, "mismatches": [] }));
    let (v, _) = sfc(&["ltl", "compare", "--alphabet=ab", "--formula", path, "--lang", "(ab)*+b", "--maxlen", "3"]);
    assert_eq!(v["mismatches"], json!(["b"]));
}

#[test]
fn exit_codes() {
    assert_eq!(sfc(&["regex", "--alphabet=ab", "(ab"]).1, 2);
    assert_eq!(sfc(&["regex", "(ab)*"]).1, 2);
    assert_eq!(sfc(&["membership", "--class=xyz", "--alphabet=a", "--lang", "a"]).1, 2);
    assert_eq!(sfc(&["nonsense"]).1, 2);
    let cfg = file("monoid_cap = 3\n");
    let (v, code) = sfc(&["membership", "--class=st", "--alphabet=a", "--config", cfg.path().to_str().unwrap(), "--lang", "(aaaaa)*"]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "resource-cap");
    let (_, code) = sfc(&["separate", "--class=st", "--alphabet=ab", "(a+b)*a(a+b)(a+b)(a+b)", "b*"]);
    assert_eq!(code, 3);
}

#[test]
fn output_is_byte_stable() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_sfc"))
            .args(["cover", "--class=st", "--alphabet=ab", "--trace", "(ab)*", "a(a+b)*", "b(a+b)*"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}
