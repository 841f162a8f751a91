//! End-to-end tests of the varlat binary: exit codes, report shape,
//! determinism, file formats, and the cache.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn varlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varlat"))
        .args(args)
        .env_remove("VARLAT_CACHE")
        .output()
        .expect("binary runs")
}

fn varlat_cached(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varlat"))
        .args(args)
        .env("VARLAT_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn exit(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn without_timing(text: &str) -> String {
    text.lines()
        .filter(|line| !line.contains("timing_ms"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, content).expect("write test file");
    path.to_str().expect("utf8 path").to_string()
}

const EX1: &str = "commutative\nxyzq = 0\nx^3 = 0\nx^2y = y^2x\n";
const EX2: &str = "commutative\nx^5 = 0\nx^3y^2 = y^3x^2\n";
const NIL3: &str = "commutative\nx^3 = 0\n";
const PENTAGON: &str = "# pentagon\nelements: 0 a b c 1\ncover: 0 < a\ncover: a < c\n\
                        cover: c < 1\ncover: 0 < b\ncover: b < 1\n";

#[test]
fn zero_consequence_reports_a_witness() {
    let out = varlat(&[
        "decide",
        "zero-consequence",
        "--from",
        "x^2y",
        "--to",
        "x^3y^3",
    ]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: yes"), "{}", text);
    assert!(text.contains("witness: "), "{}", text);
    assert!(text.contains("remainder"), "{}", text);

    let out = varlat(&["decide", "zero-consequence", "--from", "x^2", "--to", "xyz"]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("verdict: no"));
}

#[test]
fn json_reports_have_the_fixed_field_set() {
    let out = varlat(&[
        "decide",
        "zero-consequence",
        "--from",
        "x^2y",
        "--to",
        "x^3y^3",
        "--format",
        "json",
    ]);
    assert_eq!(exit(&out), 0);
    let raw = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&raw).expect("valid json");
    let object = value.as_object().expect("top-level object");
    let mut keys: Vec<&str> = object.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        vec![
            "command",
            "confidence",
            "inputs",
            "justification",
            "timing_ms",
            "verdict",
            "witnesses"
        ]
    );
    assert_eq!(object["verdict"], "yes");
    assert_eq!(object["inputs"]["from"], "x^2y");

    // fields are emitted in a fixed order
    let offsets: Vec<usize> = [
        "\"command\"",
        "\"inputs\"",
        "\"verdict\"",
        "\"confidence\"",
        "\"justification\"",
        "\"witnesses\"",
        "\"timing_ms\"",
    ]
    .iter()
    .map(|field| raw.find(field).expect("field present"))
    .collect();
    assert!(offsets.windows(2).all(|w| w[0] < w[1]), "{}", raw);
}

#[test]
fn zr_holds_decides_identities() {
    let out = varlat(&[
        "decide",
        "zr-holds",
        "--zeros",
        "x^3",
        "--identity",
        "x^4 = x^3y",
    ]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("verdict: yes"));

    let out = varlat(&[
        "decide",
        "zr-holds",
        "--zeros",
        "x^3",
        "--identity",
        "x^3y = x^2y^2",
    ]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("verdict: no"));
}

#[test]
fn holds_in_accepts_the_variety_names() {
    let out = varlat(&[
        "decide",
        "holds-in",
        "--identity",
        "xy = yx",
        "--variety",
        "COM",
    ]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("verdict: yes"));

    let out = varlat(&["decide", "holds-in", "--identity", "x^3 = x", "--variety", "A2"]);
    assert!(stdout(&out).contains("verdict: yes"));
    let out = varlat(&["decide", "holds-in", "--identity", "x^3 = x", "--variety", "A3"]);
    assert!(stdout(&out).contains("verdict: no"));

    let out = varlat(&["decide", "holds-in", "--identity", "x = y", "--variety", "Q9"]);
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("unknown variety"));
}

#[test]
fn classify_distinguishes_definite_from_unknown() {
    let dir = tempfile::tempdir().unwrap();
    let ex2 = write(dir.path(), "ex2.bas", EX2);

    let out = varlat(&["classify", "--basis", &ex2, "--property", "lmod"]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("verdict: no"));

    let out = varlat(&["classify", "--basis", &ex2, "--property", "mod"]);
    assert_eq!(exit(&out), 2);
    assert!(stdout(&out).contains("verdict: unknown"));
}

#[test]
fn classify_all_summarizes_every_property() {
    let dir = tempfile::tempdir().unwrap();
    let nil3 = write(dir.path(), "nil3.bas", NIL3);
    let out = varlat(&["classify", "--basis", &nil3, "--property", "all"]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(
        text.contains(
            "verdict: modular=yes, lower-modular=yes, upper-modular=no, neutral=no"
        ),
        "{}",
        text
    );
}

#[test]
fn relfree_reports_class_structure() {
    let dir = tempfile::tempdir().unwrap();
    let nil3 = write(dir.path(), "nil3.bas", NIL3);
    let out = varlat(&[
        "relfree",
        "--basis",
        &nil3,
        "--generators",
        "2",
        "--show-classes",
    ]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("classes: 9"), "{}", text);
    assert!(text.contains("class 0: x\n"), "{}", text);
    assert!(text.contains("(absorbing)"), "{}", text);
}

#[test]
fn cache_entries_are_reused_and_shared_across_renamings() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let nil_x = write(dir.path(), "nx.bas", NIL3);
    let nil_y = write(dir.path(), "ny.bas", "commutative\ny^3 = 0\n");
    let args = ["relfree", "--basis", nil_x.as_str(), "--generators", "2"];

    let fresh = varlat(&args);
    let cold = varlat_cached(&args, &cache);
    let entries = || {
        fs::read_dir(&cache)
            .map(|it| it.count())
            .unwrap_or(0)
    };
    assert_eq!(entries(), 1);
    let warm = varlat_cached(&args, &cache);
    assert_eq!(entries(), 1);

    // cached results equal fresh computation, byte for byte modulo timing
    assert_eq!(without_timing(&stdout(&fresh)), without_timing(&stdout(&cold)));
    assert_eq!(without_timing(&stdout(&cold)), without_timing(&stdout(&warm)));

    // a basis differing only by a letter renaming shares the entry
    let renamed = varlat_cached(
        &["relfree", "--basis", nil_y.as_str(), "--generators", "2"],
        &cache,
    );
    assert_eq!(exit(&renamed), 0);
    assert!(stdout(&renamed).contains("classes: 9"));
    assert_eq!(entries(), 1);
}

#[test]
fn corrupt_cache_entries_fall_back_to_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let nil3 = write(dir.path(), "nil3.bas", NIL3);
    let args = ["relfree", "--basis", nil3.as_str(), "--generators", "2"];

    let first = varlat_cached(&args, &cache);
    let entry = fs::read_dir(&cache)
        .unwrap()
        .next()
        .unwrap()
        .unwrap()
        .path();
    fs::write(&entry, "{not json").unwrap();
    let second = varlat_cached(&args, &cache);
    assert_eq!(exit(&second), 0);
    assert_eq!(without_timing(&stdout(&first)), without_timing(&stdout(&second)));
}

#[test]
fn lattice_analysis_marks_the_pentagon() {
    let dir = tempfile::tempdir().unwrap();
    let n5 = write(dir.path(), "n5.lat", PENTAGON);

    let out = varlat(&["lattice", "--file", &n5, "--analyze", "modular"]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: completed"), "{}", text);
    assert!(text.contains("b: modular=no"), "{}", text);
    assert!(text.contains("witness: b is not modular: y=a, z=c"), "{}", text);
    for element in ["0:", "a:", "c:", "1:"] {
        assert!(text.contains(&format!("{} modular=yes", element)), "{}", text);
    }

    let out = varlat(&[
        "lattice", "--file", &n5, "--analyze", "modular", "--element", "b",
    ]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("verdict: no"));

    let out = varlat(&[
        "lattice", "--file", &n5, "--analyze", "upper-modular", "--element", "a",
    ]);
    assert!(stdout(&out).contains("verdict: yes"));
}

#[test]
fn lattice_files_are_validated() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.lat",
        "elements: a b\ncover: a < q\n",
    );
    let out = varlat(&["lattice", "--file", &bad]);
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("unknown element"));

    let missing = dir.path().join("absent.lat");
    let out = varlat(&["lattice", "--file", missing.to_str().unwrap()]);
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn fic_builds_the_invariant_congruence_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let nil3 = write(dir.path(), "nil3.bas", NIL3);
    let out = varlat(&["fic", "--basis", &nil3, "--generators", "1"]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("semigroup size: 3"), "{}", text);
    assert!(text.contains("fully invariant congruences: 3"), "{}", text);
    assert!(text.contains("zero-class congruences: "), "{}", text);
    assert!(!text.contains("modular=no"), "{}", text);

    // the same semigroup fed in as a raw Cayley table: nil chain x, x^2, 0
    let table = write(dir.path(), "chain.tab", "1 2 2\n2 2 2\n2 2 2\n");
    let out = varlat(&["fic", "--table", &table]);
    assert_eq!(exit(&out), 0);
    assert!(stdout(&out).contains("fully invariant congruences: 3"));

    let bad = write(dir.path(), "bad.tab", "1 1\n0 0\n");
    let out = varlat(&["fic", "--table", &bad]);
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("not associative"));

    let out = varlat(&["fic"]);
    assert_eq!(exit(&out), 1);
}

#[test]
fn prooflab_commands_expose_the_constructions() {
    let out = varlat(&[
        "prooflab",
        "proposition-words",
        "--n",
        "2",
        "--m",
        "1",
        "--variant",
        "main",
    ]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("u = xy^9z^2q"), "{}", text);
    assert!(text.contains("t = qy^6z^5x"), "{}", text);
    assert!(text.contains("u = s fails in LZ: yes"), "{}", text);

    let out = varlat(&[
        "prooflab", "gamma", "--u", "x^4y", "--s", "x^3y^2", "--bound", "6",
    ]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: audit passed"), "{}", text);
    assert!(text.contains("classes: 47"), "{}", text);

    let out = varlat(&["prooflab", "corollary", "--w1", "xy", "--w2", "yx"]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("u = x^3y"), "{}", text);
    assert!(text.contains("s = xyxy"), "{}", text);
    assert!(text.contains("u = s is unbalanced: yes"), "{}", text);

    // equal inputs violate the corollary preconditions
    let out = varlat(&["prooflab", "corollary", "--w1", "xy", "--w2", "xy"]);
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("the words are equal"));
}

#[test]
fn key_lemma_probe_and_its_preconditions() {
    let dir = tempfile::tempdir().unwrap();
    let basis = write(
        dir.path(),
        "key.bas",
        "commutative\nx^6 = 0\nx^5y^4z = x^5y^3z^2\n",
    );
    let out = varlat(&[
        "prooflab", "key-lemma", "--basis", &basis, "--u", "x^5y^4z", "--v", "x^5y^3z^2",
        "--s", "x^6y^3z", "--t", "x^7y^2z",
    ]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: no"), "{}", text);
    assert!(text.contains("neither a modular nor a lower-modular"), "{}", text);

    // a quadruple with a repeated multiplicity violates the preconditions
    let out = varlat(&[
        "prooflab", "key-lemma", "--basis", &basis, "--u", "x^2y^2z", "--v", "x^2yz^2",
        "--s", "xy^2z^2", "--t", "x^2z^2y",
    ]);
    assert_eq!(exit(&out), 1);
}

#[test]
fn audit_runs_across_basis_files() {
    let dir = tempfile::tempdir().unwrap();
    let ex1 = write(dir.path(), "ex1.bas", EX1);
    let ex2 = write(dir.path(), "ex2.bas", EX2);
    let out = varlat(&["audit", "--basis", &ex1, "--basis", &ex2]);
    assert_eq!(exit(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: consistent"), "{}", text);
    assert!(text.contains("lower-modular=no"), "{}", text);
}

#[test]
fn json_output_is_deterministic_modulo_timing() {
    let dir = tempfile::tempdir().unwrap();
    let ex2 = write(dir.path(), "ex2.bas", EX2);
    let args = [
        "classify", "--basis", ex2.as_str(), "--property", "mod", "--format", "json",
    ];
    let first = varlat(&args);
    let second = varlat(&args);
    assert_eq!(exit(&first), 2);
    assert_eq!(
        without_timing(&stdout(&first)),
        without_timing(&stdout(&second))
    );
}

#[test]
fn command_errors_exit_one() {
    let out = varlat(&["classify", "--basis", "/nonexistent.bas", "--property", "mod"]);
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("cannot read basis file"));

    let out = varlat(&["decide", "zero-consequence", "--from", "xa", "--to", "x"]);
    assert_eq!(exit(&out), 1);
    assert!(stderr(&out).contains("syntax error at position 1"));

    let out = varlat(&["no-such-command"]);
    assert_eq!(exit(&out), 1);
}
