use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use morgandk::trace::parse_trace;
use morgandk_core::corpus::{build, TheoryConfig, EXAMPLES};
use morgandk_core::parser::parse_term;
use morgandk_core::rewriter::{normalize, replay};
use morgandk_core::typechecker::check_signature;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    run_env(args, None)
}

fn run_env(args: &[&str], fuel: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_morgandk"));
    c.args(args).current_dir(root()).env_remove("MORGANDK_FUEL");
    if let Some(f) = fuel {
        c.env("MORGANDK_FUEL", f);
    }
    c.output().unwrap()
}

fn out(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn err(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const FACES: [&str; 4] = [
    "theories/00-2ltt-core.dk",
    "theories/10-cubical-base.dk",
    "theories/11-cubical-interval.dk",
    "theories/13-cubical-faces.dk",
];

#[test]
fn check_exit_codes() {
    assert_eq!(code(&run(&["check"])), 0);
    assert_eq!(
        code(&run(&[
            "--flag",
            "t3",
            "--flag",
            "nat=definitional",
            "check"
        ])),
        0
    );
    let mut merged = FACES.to_vec();
    merged.push("theories/fixtures/first-attempt-facetype.dk");
    let mut args = vec!["check"];
    args.extend(merged);
    assert_eq!(code(&run(&args)), 0, "{}", err(&run(&args)));

    let dir = tempfile::tempdir().unwrap();
    let core = std::fs::read_to_string(root().join("theories/00-2ltt-core.dk")).unwrap();
    let mutated = dir.path().join("core.dk");
    std::fs::write(
        &mutated,
        core.replacen("(pair i A B a b) --> a.", "(pair i A B a b) --> b.", 1),
    )
    .unwrap();
    let o = run(&["check", mutated.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(
        err(&o).contains("core.dk:53:1: [rule-ill-typed]"),
        "{}",
        err(&o)
    );
    assert!(out(&o).is_empty());

    let bad = dir.path().join("bad.dk");
    std::fs::write(&bad, "A : Type.\nx : (A.\n").unwrap();
    let o = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(err(&o).contains("bad.dk:2:"), "{}", err(&o));
    assert_eq!(code(&run(&["check", "theories/missing.dk"])), 2);
    assert_eq!(code(&run(&["check", "--fuel", "0"])), 2);
    assert_eq!(code(&run(&["--flag", "t9", "check"])), 2);
}

#[test]
fn fuel_precedence() {
    assert_eq!(code(&run_env(&["check"], Some("3"))), 3);
    assert_eq!(code(&run_env(&["check", "--fuel", "100000"], Some("3"))), 0);
    assert_eq!(code(&run_env(&["check"], Some("0"))), 2);
    let o = run_env(&["reduce", "--no-prelude", "x"], Some("1"));
    assert_eq!(out(&o), "x\n");
    let loop_file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(
        loop_file.path(),
        "A : Type.\ndef f : A -> A.\n[x] f x --> f (f x).\n",
    )
    .unwrap();
    let o = run(&[
        "reduce",
        "--no-prelude",
        "-i",
        loop_file.path().to_str().unwrap(),
        "--fuel",
        "50",
        "f c",
    ]);
    assert_eq!(code(&o), 3);
    assert!(err(&o).contains("[fuel]"));
}

#[test]
fn reduce_prints_normal_forms() {
    let o = run(&["reduce", "sym (sym i)"]);
    assert_eq!((code(&o), out(&o)), (0, "i\n".to_string()));
    let o = run(&["reduce", "Imax (Imin i 1) 0"]);
    assert_eq!(out(&o), "i\n");
    let o = run(&["reduce", "f (x"]);
    assert_eq!(code(&o), 2);
    assert!(err(&o).starts_with("<term>:1:"), "{}", err(&o));
}

#[test]
fn traces_replay() {
    let term = "p1 l0 A B (pair l0 A B (sym (sym a)) b)";
    let ctx = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(
        ctx.path(),
        "l0 : Lev.\nA : T l0.\nB : eps l0 A -> T l0.\na : eps l0 A.\nb : eps l0 (B a).\n",
    )
    .unwrap();
    let o = run(&[
        "--trace",
        "reduce",
        term,
        "-i",
        ctx.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let steps = parse_trace(&err(&o)).unwrap();
    assert!(!steps.is_empty());

    let cfg = TheoryConfig::default().with_cubical();
    let mut ds: Vec<_> = cfg
        .files()
        .into_iter()
        .filter(|f| f.path != EXAMPLES.path)
        .flat_map(|f| f.declarations())
        .collect();
    assert!(build(&cfg).is_ok());
    ds.extend(
        morgandk_core::parser::parse_file(&std::fs::read_to_string(ctx.path()).unwrap()).unwrap(),
    );
    let sig = check_signature(&ds, 100_000).unwrap();
    let t = parse_term(term).unwrap();
    let end = replay(sig.rules(), &t, &steps, 100_000).unwrap();
    assert_eq!(format!("{end}\n"), out(&o));
    assert_eq!(end, normalize(sig.rules(), &t, 100_000).unwrap());
}

#[test]
fn oracle_queries() {
    let o = run(&["oracle", "interval", "Imax i j", "Imax j i"]);
    assert_eq!((code(&o), out(&o)), (0, "holds\n".to_string()));
    assert_eq!(
        code(&run(&["oracle", "face", "Fmin (eq0 i) (eq1 i)", "0f"])),
        0
    );
    let o = run(&["oracle", "interval", "Imax i (sym i)", "1"]);
    assert_eq!((code(&o), out(&o)), (1, "fails: i = A\n".to_string()));
    let o = run(&["oracle", "face", "Fmax (eq0 i) (eq1 i)", "1f"]);
    assert_eq!((code(&o), out(&o)), (1, "fails: i = Half\n".to_string()));
    assert_eq!(code(&run(&["oracle", "interval", "Imax i", "1"])), 2);
    assert_eq!(code(&run(&["oracle", "interval", "(", "1"])), 2);
}

#[test]
fn critical_pair_reports() {
    let o = run(&[
        "cp",
        "theories/11-cubical-interval.dk",
        "theories/13-cubical-faces.dk",
    ]);
    assert_eq!(code(&o), 0);
    assert!(out(&o).ends_with(", 0 not joinable\n"));
    let o = run(&[
        "cp",
        "theories/11-cubical-interval.dk",
        "theories/13-cubical-faces.dk",
        "theories/fixtures/first-attempt-facetype.dk",
    ]);
    assert_eq!(code(&o), 1);
    assert!(out(&o).contains("instance f := 1f: (cSig cTrue (_ => cTrue), cTrue)"));
    let empty = tempfile::NamedTempFile::new().unwrap();
    let o = run(&["cp", empty.path().to_str().unwrap()]);
    assert_eq!(
        (code(&o), out(&o)),
        (0, "0 critical pairs, 0 not joinable\n".to_string())
    );
    assert_eq!(code(&run(&["cp"])), 0);
}

#[test]
fn json_lines_records() {
    let o = run(&[
        "--format",
        "json-lines",
        "oracle",
        "interval",
        "Imax i (sym i)",
        "1",
    ]);
    let v: serde_json::Value = serde_json::from_str(out(&o).trim()).unwrap();
    assert_eq!(v["kind"], "verdict");
    assert_eq!(v["holds"], false);
    assert_eq!(v["witness"]["i"], "A");

    let o = run(&[
        "--format",
        "json-lines",
        "cp",
        "theories/11-cubical-interval.dk",
        "theories/13-cubical-faces.dk",
        "theories/fixtures/first-attempt-facetype.dk",
    ]);
    let records: Vec<serde_json::Value> = out(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let last = records.last().unwrap();
    assert_eq!(last["kind"], "summary");
    let pairs = &records[..records.len() - 1];
    assert_eq!(pairs.len() as u64, last["non_joinable"].as_u64().unwrap());
    assert!(pairs.iter().all(|p| p["kind"] == "critical-pair"));
    assert!(pairs.iter().any(|p| p["overlap"] == "faceType (Fmin 1f f)"));

    let o = run(&["--format", "json-lines", "check", "theories/missing.dk"]);
    let d: serde_json::Value = serde_json::from_str(err(&o).trim()).unwrap();
    assert_eq!(d["kind"], "diagnostic");
    assert_eq!(d["category"], "input");
}

#[test]
fn output_is_deterministic() {
    let args = [
        "--format",
        "json-lines",
        "cp",
        "theories/11-cubical-interval.dk",
        "theories/13-cubical-faces.dk",
        "theories/fixtures/first-attempt-facetype.dk",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["--trace", "reduce", "sym (Imax (sym i) (Imin j 0))"]);
    let b = run(&["--trace", "reduce", "sym (Imax (sym i) (Imin j 0))"]);
    assert_eq!((a.stdout, a.stderr), (b.stdout, b.stderr));
}
