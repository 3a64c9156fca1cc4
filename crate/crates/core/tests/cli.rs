mod common;

use std::fs;
use std::path::Path;

use common::{lpmask, stdout};

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = lpmask(dir, args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn code(dir: &Path, args: &[&str]) -> Option<i32> {
    lpmask(dir, args).status.code()
}

#[test]
fn builtin_pipeline_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = ok(
        d,
        &[
            "counterexample",
            "-o",
            "cx.json",
            "--problem-out",
            "p.json",
            "--key-out",
            "k.json",
            "--masked-out",
            "m.json",
        ],
    );
    assert!(
        text.contains("true value 0 vs recovered value 1: SUBOPTIMAL"),
        "{text}"
    );

    let solved = ok(d, &["solve", "m.json", "--form", "nonneg", "-o", "s.json"]);
    assert!(solved.contains("Optimal value 0 at (0, 1)"), "{solved}");
    let general = ok(d, &["solve", "m.json", "--form", "general"]);
    assert!(general.contains("Optimal value -1 at (-1, 2)"), "{general}");

    let dec = ok(
        d,
        &[
            "decrypt",
            "--problem",
            "p.json",
            "--key",
            "k.json",
            "--solution",
            "s.json",
            "-o",
            "x.json",
        ],
    );
    assert!(
        dec.contains("x = (1, 1)") && dec.contains("value 1"),
        "{dec}"
    );
    let rec = fs::read_to_string(d.join("x.json")).unwrap();
    assert!(rec.contains("\"kind\": \"recovered\""));

    let truth = ok(d, &["solve", "p.json"]);
    assert!(truth.contains("Optimal value 0 at (0, 2)"), "{truth}");
    ok(d, &["verify", "--problem", "p.json", "--key", "k.json"]);
}

#[test]
fn generated_pipeline_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--m", "2", "--n", "4", "--seed", "3", "--b-mode", "random", "-o", "p.json",
        ],
    );
    ok(
        d,
        &[
            "keygen",
            "--problem",
            "p.json",
            "--seed",
            "4",
            "-o",
            "k.json",
        ],
    );
    ok(
        d,
        &[
            "encrypt",
            "--problem",
            "p.json",
            "--key",
            "k.json",
            "-o",
            "m.json",
        ],
    );
    ok(d, &["solve", "m.json", "-o", "s.json"]);
    ok(
        d,
        &[
            "audit", "--m", "2", "--n", "3", "--trials", "20", "--seed", "2", "-o", "r.json",
        ],
    );
    ok(
        d,
        &[
            "verify",
            "--problem",
            "p.json",
            "--key",
            "k.json",
            "--report",
            "r.json",
        ],
    );
    let p = fs::read_to_string(d.join("p.json")).unwrap();
    assert!(p.starts_with("{\n") && p.ends_with("}\n"));
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        code(
            d,
            &["audit", "--m", "2", "--n", "4", "--trials", "0", "-o", "r.json"]
        ),
        Some(1)
    );
    let out = lpmask(d, &["gen", "--m", "4", "--n", "2", "-o", "p.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m < n"));
    assert_eq!(code(d, &["frobnicate"]), Some(1));
    assert_eq!(code(d, &["solve", "missing.json"]), Some(1));
    fs::write(d.join("junk.json"), "{ not json").unwrap();
    assert_eq!(code(d, &["solve", "junk.json"]), Some(1));
    fs::write(
        d.join("free.json"),
        r#"{"kind": "general", "n": 1, "k": 0, "p": 0, "c": ["1"], "A_eq": [], "b_eq": [], "G": [], "sign": ["free"]}"#,
    )
    .unwrap();
    assert_eq!(
        code(d, &["solve", "free.json", "--form", "nonneg"]),
        Some(1)
    );
    assert_eq!(
        code(d, &["solve", "free.json", "--form", "general"]),
        Some(0)
    );
    assert_eq!(code(d, &["--help"]), Some(0));
}

#[test]
fn invalid_content_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(
        d,
        &[
            "gen", "--m", "2", "--n", "4", "--seed", "3", "--b-mode", "random", "-o", "p.json",
        ],
    );
    ok(
        d,
        &["gen", "--m", "2", "--n", "4", "--seed", "5", "-o", "q.json"],
    );
    ok(
        d,
        &[
            "keygen",
            "--problem",
            "p.json",
            "--seed",
            "4",
            "-o",
            "k.json",
        ],
    );
    // Key fingerprint belongs to a different problem.
    assert_eq!(
        code(
            d,
            &[
                "encrypt",
                "--problem",
                "q.json",
                "--key",
                "k.json",
                "-o",
                "m.json"
            ]
        ),
        Some(2)
    );

    fs::write(
        d.join("singular.json"),
        r#"{"kind": "peculiar", "m": 1, "n": 2, "A": [["1", "1"]], "b": ["2"], "B": [["1", "1"], ["1", "1"]], "c": ["1", "0"]}"#,
    )
    .unwrap();
    assert_eq!(code(d, &["solve", "singular.json"]), Some(2));
}

#[test]
fn zero_rhs_keygen_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("zero.json"),
        r#"{"kind": "peculiar", "m": 1, "n": 2, "A": [["0", "0"]], "b": ["0"], "B": [["1", "0"], ["0", "1"]], "c": ["1", "0"]}"#,
    )
    .unwrap();
    assert_eq!(
        code(d, &["keygen", "--problem", "zero.json", "-o", "k.json"]),
        Some(3)
    );
}

#[test]
fn seeded_commands_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [a.path(), b.path()] {
        ok(
            d,
            &["gen", "--m", "2", "--n", "5", "--seed", "8", "-o", "p.json"],
        );
        ok(
            d,
            &[
                "keygen",
                "--problem",
                "p.json",
                "--seed",
                "8",
                "-o",
                "k.json",
            ],
        );
        ok(
            d,
            &[
                "audit", "--m", "1", "--n", "3", "--trials", "30", "--seed", "8", "-o", "r.json",
            ],
        );
    }
    for f in ["p.json", "k.json", "r.json"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}
