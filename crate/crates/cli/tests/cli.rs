#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coderead_core::corpus::{LabeledDataset, LabeledEntry};
use coderead_core::Snippet;

fn coderead(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coderead"))
        .args(args)
        .env_remove("CODEREAD_LOG")
        .output()
        .expect("binary runs")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn three_files(dir: &Path) {
    fs::write(dir.join("a.py"), "def f(x):\n    # double it\n    return x * 2\n").unwrap();
    fs::write(dir.join("b.java"), "class B {\n  int g() { return 1; }\n}\n").unwrap();
    fs::write(dir.join("c.cu"), "__global__ void k(float* a) {\n  a[threadIdx.x] = 0;\n}\n").unwrap();
}

fn dataset(dir: &Path, n: usize, seed: u64) -> PathBuf {
    common::labeled_dataset(n, seed).save(dir).unwrap()
}

fn unlabeled(snippets: Vec<Snippet>, dir: &Path) -> PathBuf {
    LabeledDataset {
        entries: snippets.into_iter().map(|snippet| LabeledEntry { snippet, label: 0 }).collect(),
        provenance: String::new(),
    }
    .save(dir)
    .unwrap()
}

#[test]
fn help_lists_documented_flags() {
    let top = String::from_utf8(coderead(&["--help"]).stdout).unwrap();
    for flag in ["--config", "--seed", "--jobs", "--verbose", "--dictionary"] {
        assert!(top.contains(flag), "top-level help lacks {flag}");
    }
    for cmd in ["featurize", "train", "evaluate", "score", "compare"] {
        assert!(top.contains(cmd), "top-level help lacks {cmd}");
    }
    let expected: [(&str, &[&str]); 5] = [
        ("featurize", &["--in", "--lang", "--out", "--keep-going"]),
        ("train", &["--data", "--family", "--seed", "--lambda", "--kmax", "--out"]),
        ("evaluate", &["--data", "--family", "--folds", "--seed", "--lambda", "--kmax", "--out"]),
        ("score", &["--model", "--in", "--out"]),
        ("compare", &["--a", "--b", "--join", "--out"]),
    ];
    for (cmd, flags) in expected {
        let out = coderead(&[cmd, "--help"]);
        assert!(out.status.success());
        let help = String::from_utf8(out.stdout).unwrap();
        for flag in flags {
            assert!(help.contains(flag), "`{cmd} --help` lacks {flag}");
        }
    }
}

#[test]
fn featurize_directory() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src");
    fs::create_dir(&src).unwrap();
    three_files(&src);
    let out = dir.path().join("m.csv");
    let o = coderead(&["featurize", "--in", p(&src), "--out", p(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0].split(',').count(), 62);
    assert!(lines[1].starts_with("a.py,") && lines[3].starts_with("c.cu,"));
}

#[test]
fn featurize_empty_directory_warns() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("empty");
    fs::create_dir(&src).unwrap();
    let out = dir.path().join("m.csv");
    let o = coderead(&["featurize", "--in", p(&src), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("no source files"));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 1);
}

#[test]
fn featurize_corrupt_file() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src");
    fs::create_dir(&src).unwrap();
    three_files(&src);
    fs::write(src.join("b.java"), b"class B {\xff\xfe}").unwrap();
    let out = dir.path().join("m.csv");

    let o = coderead(&["featurize", "--in", p(&src), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("b.java"));
    assert!(!out.exists());

    let o = coderead(&["featurize", "--in", p(&src), "--out", p(&out), "--keep-going"]);
    assert_eq!(o.status.code(), Some(3));
    let text = fs::read_to_string(&out).unwrap();
    let ids: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids, ["a.py", "c.cu"]);
}

#[test]
fn featurize_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(&dir.path().join("d"), 30, 4);
    let one = dir.path().join("one.csv");
    let four = dir.path().join("four.csv");
    assert!(coderead(&["--jobs", "1", "featurize", "--in", p(&manifest), "--out", p(&one)]).status.success());
    assert!(coderead(&["--jobs", "4", "featurize", "--in", p(&manifest), "--out", p(&four)]).status.success());
    assert_eq!(fs::read(&one).unwrap(), fs::read(&four).unwrap());
}

#[test]
fn train_score_compare_flow() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(&dir.path().join("train"), 40, 2);
    let model = dir.path().join("model.json");
    let o = coderead(&["train", "--data", p(&manifest), "--family", "bwf", "--kmax", "3", "--out", p(&model)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(json["mu"].as_array().unwrap().len(), 61);
    assert!(json["provenance"]["notes"]["config"].is_string());

    let (a, b) = common::paired_corpora(20, 9);
    let ma = unlabeled(a, &dir.path().join("a"));
    let mb = unlabeled(b, &dir.path().join("b"));
    let (sa, sb) = (dir.path().join("sa.csv"), dir.path().join("sb.csv"));
    for (m, s) in [(&ma, &sa), (&mb, &sb)] {
        let o = coderead(&["score", "--model", p(&model), "--in", p(m), "--out", p(s)]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read_to_string(&sa).unwrap().lines().count(), 21);

    let report = dir.path().join("r.json");
    let o = coderead(&["compare", "--a", p(&sa), "--b", p(&sb), "--join", "id", "--format", "json", "--out", p(&report)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r["reports"][0]["win_rate_a"].as_f64().unwrap() > 0.9);
    assert!(r["reports"][0]["p_value"].as_f64().unwrap() < 0.01);
    assert!(r["config"]["seed"].is_u64());

    let o = coderead(&["compare", "--a", p(&sa), "--b", p(&sa)]);
    assert!(o.status.success());
    let table = String::from_utf8(o.stdout.clone()).unwrap();
    assert!(table.starts_with("Model/Corpus"));
    assert!(table.lines().nth(1).unwrap().contains("1.000"));
    assert!(stderr(&o).contains("no nonzero pairs"));
}

#[test]
fn compare_disjoint_ids_fails() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    fs::write(&a, "id,linear_score,probability\nx,1,0.5\n").unwrap();
    fs::write(&b, "id,linear_score,probability\ny,2,0.5\n").unwrap();
    let o = coderead(&["compare", "--a", p(&a), "--b", p(&b)]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr(&o);
    assert!(e.contains("only in A: [x]") && e.contains("only in B: [y]"), "{e}");
    let o = coderead(&["compare", "--a", p(&a), "--b", p(&b), "--join", "name"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn score_empty_corpus_and_bad_model() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(&dir.path().join("train"), 30, 5);
    let model = dir.path().join("model.json");
    assert!(coderead(&["train", "--data", p(&manifest), "--family", "pf", "--out", p(&model)]).status.success());
    let empty = dir.path().join("empty");
    fs::create_dir(&empty).unwrap();
    let out = dir.path().join("s.csv");
    let o = coderead(&["score", "--model", p(&model), "--in", p(&empty), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(&out).unwrap(), "id,linear_score,probability\n");

    let text = fs::read_to_string(&model).unwrap().replace("coderead-features-61/v1", "coderead-features-60/v0");
    let bad = dir.path().join("bad.json");
    fs::write(&bad, text).unwrap();
    let o = coderead(&["score", "--model", p(&bad), "--in", p(&empty), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("coderead-features-60/v0"));
}

#[test]
fn evaluate_is_reproducible_and_scoped() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(&dir.path().join("d"), 40, 7);
    let (r1, r2) = (dir.path().join("r1.json"), dir.path().join("r2.json"));
    for (r, jobs) in [(&r1, "1"), (&r2, "3")] {
        let o = coderead(&[
            "--jobs", jobs, "evaluate", "--data", p(&manifest), "--family", "pf", "--folds", "5", "--seed", "42",
            "--out", p(r),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let table = String::from_utf8(o.stdout).unwrap();
        assert!(table.lines().nth(1).unwrap().starts_with("PF"));
    }
    assert_eq!(fs::read(&r1).unwrap(), fs::read(&r2).unwrap());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&r1).unwrap()).unwrap();
    let row = &v["report"]["results"][0];
    assert_eq!(row["candidates"], 4);
    assert!(row["features"].as_f64().unwrap() <= 4.0);
    assert_eq!(v["config"]["seed"], 42);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(&dir.path().join("d"), 30, 3);
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "seed = 7\n[model]\nfolds = 3\nk_max = 1\n").unwrap();
    let out = dir.path().join("r.json");
    let run = |extra: &[&str]| {
        let mut args = vec!["--config", p(&cfg), "evaluate", "--data", p(&manifest), "--family", "df", "--out", p(&out)];
        args.extend_from_slice(extra);
        let o = coderead(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        serde_json::from_str::<serde_json::Value>(&fs::read_to_string(&out).unwrap()).unwrap()
    };
    let v = run(&[]);
    assert_eq!((v["config"]["seed"].as_u64(), v["report"]["folds"].as_u64()), (Some(7), Some(3)));
    assert_eq!(v["report"]["results"][0]["k_max"], 1);
    let v = run(&["--seed", "9", "--folds", "4"]);
    assert_eq!((v["config"]["seed"].as_u64(), v["report"]["folds"].as_u64()), (Some(9), Some(4)));
}

#[test]
fn usage_and_data_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dataset(&dir.path().join("d"), 20, 1);
    let out = dir.path().join("x");
    assert_eq!(coderead(&["evaluate", "--data", p(&manifest), "--family", "xyz"]).status.code(), Some(2));
    assert_eq!(coderead(&["featurize", "--bogus"]).status.code(), Some(2));
    assert_eq!(coderead(&[]).status.code(), Some(2));
    assert_eq!(coderead(&["featurize", "--in", "/nonexistent/dir", "--out", p(&out)]).status.code(), Some(3));

    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[tf.dbscan]\neps = 4.0\n").unwrap();
    let o = coderead(&["--config", p(&cfg), "featurize", "--in", p(&manifest), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(2));

    // every label rewritten to 1
    let single = dir.path().join("d/single.csv");
    let text = fs::read_to_string(&manifest).unwrap().replace(",0\n", ",1\n");
    fs::write(&single, text).unwrap();
    let o = coderead(&["train", "--data", p(&single), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("single class"));
}
