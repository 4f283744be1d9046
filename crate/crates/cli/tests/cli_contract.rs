//! End-to-end tests of the installed binary: output formats, the JSON
//! document schema, and the exit-code contract (0 ok, 1 mismatch,
//! 2 invalid input, 3 degenerate system).

use std::path::PathBuf;
use std::process::Command;

use heunfac_cli::ResultDocument;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heunfac"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("stdout utf-8"),
        String::from_utf8(out.stderr).expect("stderr utf-8"),
    )
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("heunfac_{}_{}", std::process::id(), name))
}

#[test]
fn tables_all_ids_match_reference() {
    for id in 1..=7u8 {
        let (code, stdout, stderr) = run(&["tables", "--id", &id.to_string()]);
        assert_eq!(code, 0, "table {id} stderr: {stderr}");
        assert!(
            stdout.ends_with(&format!("# table {id}: matches the reference text\n")),
            "table {id} stdout tail: {:?}",
            stdout.lines().last()
        );
    }
}

#[test]
fn factorize_json_document_roundtrips() {
    let (code, stdout, _) = run(&[
        "factorize", "--k", "1", "--lame", "--sing", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: ResultDocument = serde_json::from_str(&stdout).expect("valid document");
    assert_eq!(doc.k, 1);
    assert_eq!(doc.singularities, vec!["0", "1", "2"]);
    assert_eq!(doc.exponents, vec!["1/2", "1/2", "1/2"]);
    assert_eq!(doc.factorizations.len(), 6);
    for r in &doc.factorizations {
        assert_eq!(r.status, "ok");
        assert_eq!(r.mask.len(), 3);
        assert_eq!(r.rho.len(), 1);
        assert!(r.q.is_some(), "k=1 records carry q");
        assert!(r.operator.is_none(), "factorize omits operator coefficients");
    }
    assert_eq!(doc.engine_version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn table_and_csv_share_columns() {
    let (_, table, _) = run(&["factorize", "--k", "1", "--lame", "--sing", "2"]);
    let (_, csv, _) = run(&[
        "factorize", "--k", "1", "--lame", "--sing", "2", "--format", "csv",
    ]);
    let table_header: Vec<&str> = table.lines().next().unwrap().split('\t').collect();
    let csv_header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    assert_eq!(table_header, csv_header);
    assert_eq!(table.lines().count(), csv.lines().count());
}

#[test]
fn out_flag_writes_identical_bytes() {
    let path = temp_path("out.json");
    let (code, stdout, _) = run(&[
        "factorize", "--k", "1", "--lame", "--sing", "a", "--format", "json",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty(), "nothing on stdout when --out is given");
    let written = std::fs::read_to_string(&path).expect("file written");
    let (_, direct, _) = run(&[
        "factorize", "--k", "1", "--lame", "--sing", "a", "--format", "json",
    ]);
    assert_eq!(written, direct);
    let _ = std::fs::remove_file(&path);
}

#[test]
fn exit_codes_follow_the_contract() {
    // 0: clean factorization
    let (code, _, _) = run(&["factorize", "--k", "1", "--lame", "--sing", "a"]);
    assert_eq!(code, 0);

    // 2: singular point collides with a fixed point of the normalization
    let (code, _, stderr) = run(&["factorize", "--k", "1", "--lame", "--sing", "1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("coincide"), "stderr: {stderr}");

    // 2: malformed coefficient expression
    let (code, _, stderr) = run(&["factorize", "--k", "1", "--lame", "--sing", "1//2"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--sing"), "stderr names the flag: {stderr}");

    // 2: wrong exponent count
    let (code, _, _) = run(&[
        "factorize", "--k", "2", "--sing", "a,b", "--gamma", "1/2", "--delta", "1/2",
        "--eps", "1/2",
    ]);
    assert_eq!(code, 2);

    // 2: unknown subcommand (parser error)
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);

    // 3: symbolically coincident points make every splitting degenerate
    let (code, stdout, _) = run(&["factorize", "--k", "2", "--lame", "--sing", "a,a"]);
    assert_eq!(code, 3);
    for line in stdout.lines().skip(1) {
        assert!(line.ends_with("singular"), "row: {line}");
    }
}

#[test]
fn negative_and_symbolic_arguments_parse() {
    let (code, stdout, stderr) = run(&[
        "factorize", "--k", "2", "--lame", "--sing", "-1,-5/2",
    ]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.contains("(x + 1)"), "negative root renders as x + 1");
    assert!(stdout.contains("(x + 5/2)"));

    let (code, _, _) = run(&[
        "factorize", "--k", "1", "--sing", "a", "--gamma", "-1/2", "--delta", "2/3",
        "--eps", "1/4",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn verify_problem_file_reports_checks() {
    let path = temp_path("problem.json");
    std::fs::write(&path, r#"{"k": 1, "singularities": ["a"], "exponents": "lame"}"#).unwrap();
    let (code, stdout, _) = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("round-trip expansion ok"));
    assert!(stdout.contains("half-exponent antisymmetry ok"));
    assert!(stdout.contains("complement swap ok"));
    let summary = stdout.lines().last().unwrap();
    assert!(
        summary.starts_with("checks:") && summary.contains(" 0 failed"),
        "summary: {summary}"
    );
    let _ = std::fs::remove_file(&path);

    // generic exponents exercise the non-symmetry path
    let path = temp_path("problem_generic.json");
    std::fs::write(
        &path,
        r#"{"k": 1, "singularities": ["3"], "exponents": ["1/3", "1/2", "1/5"], "include_trivial": true}"#,
    )
    .unwrap();
    let (code, stdout, _) = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0, "stdout: {stdout}");
    let _ = std::fs::remove_file(&path);
}

#[test]
fn verify_rejects_malformed_problems() {
    let path = temp_path("empty.json");
    std::fs::write(&path, "{}").unwrap();
    let (code, _, stderr) = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 2, "stderr: {stderr}");
    let _ = std::fs::remove_file(&path);

    let path = temp_path("not_json.json");
    std::fs::write(&path, "not json at all").unwrap();
    let (code, _, stderr) = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("not valid JSON"), "stderr: {stderr}");
    let _ = std::fs::remove_file(&path);

    let (code, _, _) = run(&["verify", "/nonexistent/nowhere.json"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_document_detects_tampering() {
    let path = temp_path("doc.json");
    let (code, _, _) = run(&[
        "factorize", "--k", "1", "--lame", "--sing", "a", "--format", "json",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    // untouched: every record matches the recomputation
    let (code, stdout, _) = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0, "stdout: {stdout}");
    assert!(stdout.contains("0 mismatched"));

    // tamper with one accessory value
    let text = std::fs::read_to_string(&path).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    doc["factorizations"][0]["alpha_beta"] = serde_json::Value::String("7".into());
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();

    let (code, stdout, _) = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("differs from recomputation"));
    assert!(stdout.contains("alpha_beta: stored `7`"));
    let _ = std::fs::remove_file(&path);
}

#[test]
fn adjoint_twice_restores_original_records() {
    let (code, original, _) = run(&[
        "factorize", "--k", "1", "--lame", "--sing", "a", "--include-trivial",
        "--format", "json",
    ]);
    assert_eq!(code, 0);
    let (code, twice, _) = run(&[
        "adjoint", "--k", "1", "--lame", "--sing", "a", "--include-trivial", "--twice",
        "--format", "json",
    ]);
    assert_eq!(code, 0);

    let orig: ResultDocument = serde_json::from_str(&original).unwrap();
    let back: ResultDocument = serde_json::from_str(&twice).unwrap();
    assert_eq!(orig.exponents, back.exponents, "double adjoint restores exponents");
    assert_eq!(orig.factorizations.len(), back.factorizations.len());
    for (a, b) in orig.factorizations.iter().zip(&back.factorizations) {
        assert_eq!(a.mask, b.mask);
        assert_eq!(a.l, b.l);
        assert_eq!(a.m, b.m);
        assert_eq!(a.lbar, b.lbar);
        assert_eq!(a.mbar, b.mbar);
        assert_eq!(a.alpha_beta, b.alpha_beta);
        assert_eq!(a.rho, b.rho);
        assert_eq!(a.q, b.q);
        assert!(b.operator.is_some(), "adjoint renders operator coefficients");
    }
}

#[test]
fn adjoint_flips_exponents_and_masks() {
    let (code, stdout, _) = run(&[
        "adjoint", "--k", "1", "--lame", "--sing", "a", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let doc: ResultDocument = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc.exponents, vec!["3/2", "3/2", "3/2"]);
    // factor swap sends each mask to its complement
    let masks: Vec<&str> = doc.factorizations.iter().map(|r| r.mask.as_str()).collect();
    assert_eq!(masks, vec!["011", "101", "001", "110", "010", "100"]);
}

#[test]
fn help_lists_every_subcommand() {
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["factorize", "tables", "verify", "adjoint"] {
        assert!(stdout.contains(sub), "help mentions {sub}");
    }
}
