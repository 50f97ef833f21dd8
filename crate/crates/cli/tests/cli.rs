use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn spectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectra"))
        .args(args)
        .output()
        .unwrap()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let o = spectra(args);
    (
        o.status.code().unwrap(),
        String::from_utf8(o.stdout).unwrap(),
        String::from_utf8(o.stderr).unwrap(),
    )
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectrum_by_enumeration_and_grounding() {
    let f = fixture("twovar.fo");
    for method in ["enum", "ground"] {
        let (code, out, _) = run(&["spectrum", path(&f), "--max-n", "6", "--method", method]);
        assert_eq!(code, 0);
        assert!(out.contains("spectrum  {2, 3, 4, 5, 6}"), "{out}");
        let ns: Vec<&str> = out
            .lines()
            .filter_map(|l| l.split_whitespace().next())
            .filter(|w| w.parse::<usize>().is_ok())
            .collect();
        assert_eq!(ns, ["1", "2", "3", "4", "5", "6"]);
        assert!(out.lines().any(|l| l.starts_with("@time")));
    }
}

#[test]
fn spectrum_text_format_parses() {
    let (code, out, _) = run(&[
        "spectrum",
        path(&fixture("twovar.fo")),
        "--max-n",
        "3",
        "--format",
        "text",
    ]);
    assert_eq!(code, 0);
    let kv = spectra_core::text::KvTree::parse(&out).unwrap();
    let s = kv.trees("spectrum").next().unwrap();
    assert_eq!(s.scalar("members"), Some("2 3"));
}

#[test]
fn enumeration_cap_is_reported() {
    let dir = TempDir::new().unwrap();
    let f = dir.path().join("e.fo");
    std::fs::write(&f, "rel E 2;\nforall x exists y E(x,y)\n").unwrap();
    let (code, _, err) = run(&["spectrum", path(&f), "--max-n", "5", "--method", "enum"]);
    assert_eq!(code, 6);
    assert!(
        err.starts_with("error:") && err.lines().count() == 1,
        "{err}"
    );
    let (code, _, _) = run(&[
        "spectrum",
        path(&f),
        "--max-n",
        "5",
        "--method",
        "enum",
        "--enum-cap",
        "30",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn ground_writes_dimacs() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.cnf");
    let (code, table, _) = run(&[
        "ground",
        path(&fixture("allx.fo")),
        "--n",
        "4",
        "--dimacs",
        path(&out),
        "--solve",
    ]);
    assert_eq!(code, 0);
    assert!(table.contains("satisfiable  yes"), "{table}");
    let cnf = spectra_core::text::parse_dimacs(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(spectra_core::ground::cnf_satisfiable(&cnf).is_some());
    let (_, stdout, _) = run(&[
        "ground",
        path(&fixture("allx.fo")),
        "--n",
        "4",
        "--format",
        "dimacs",
    ]);
    assert_eq!(stdout, std::fs::read_to_string(&out).unwrap());
}

#[test]
fn normalize_prints_a_readable_sentence() {
    let (code, out, _) = run(&["normalize", path(&fixture("twovar.fo"))]);
    assert_eq!(code, 0);
    let doc = spectra_core::text::parse_sentence(&out).unwrap();
    assert!(doc.formula.distinct_variable_count() <= 2);
}

#[test]
fn check_evaluates_structures() {
    let dir = TempDir::new().unwrap();
    let yes = dir.path().join("yes.st");
    let no = dir.path().join("no.st");
    std::fs::write(&yes, "size 2\nP: 0\nP: 1\n").unwrap();
    std::fs::write(&no, "size 2\nP: 1\n").unwrap();
    let f = fixture("allx.fo");
    assert_eq!(run(&["check", path(&f), path(&yes)]).1, "true\n");
    assert_eq!(run(&["check", path(&f), path(&no)]).1, "false\n");
}

#[test]
fn compile_and_simulate() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("parity.fo");
    let (code, table, _) = run(&[
        "compile-tm",
        path(&fixture("parity.tm")),
        "--out",
        path(&out),
    ]);
    assert_eq!(code, 0);
    assert!(table.contains("variables measured  3"), "{table}");
    spectra_core::text::parse_sentence(&std::fs::read_to_string(&out).unwrap()).unwrap();

    let (code, out, _) = run(&["simulate-tm", path(&fixture("parity.tm")), "--n", "6"]);
    assert_eq!(code, 0);
    assert!(out.contains("outcome         accepts"), "{out}");
    let (_, out, _) = run(&["simulate-tm", path(&fixture("parity.tm")), "--n", "7"]);
    assert!(out.contains("outcome         rejects"), "{out}");
}

#[test]
fn verify_agrees_on_parity() {
    let (code, out, _) = run(&[
        "verify-tm",
        path(&fixture("parity.tm")),
        "--construction",
        "three-var",
        "--range",
        "4..6",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("agree 3/3"), "{out}");
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.fo");
    std::fs::write(&bad, "rel P 1;\nforall x Q(x)\n").unwrap();
    let missing = dir.path().join("missing.fo");
    let tm = fixture("parity.tm");
    let cases: [(&[&str], i32); 6] = [
        (&["spectrum"], 2),
        (&["verify-tm", path(&tm), "--range", "5..4"], 2),
        (&["normalize", path(&missing)], 3),
        (&["normalize", path(&bad)], 4),
        (&["compile-tm", path(&tm), "--window-cap", "10"], 6),
        (
            &[
                "compile-tm",
                path(&tm),
                "--construction",
                "two-k-plus-2",
                "--k",
                "1",
            ],
            2,
        ),
    ];
    for (args, want) in cases {
        let (code, _, err) = run(args);
        assert_eq!(code, want, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
}
