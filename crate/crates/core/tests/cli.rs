use std::path::Path;
use std::process::Command;

use serde_json::Value;
use twosq::cli::{run_with, EXIT_CORRUPT, EXIT_NOT_FOUND, EXIT_OK, EXIT_OUT_OF_RANGE, EXIT_USAGE};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("twosq")
        .chain(args.iter().copied())
        .chain(["--limit", "1000000"]);
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(r: &Run) -> Value {
    serde_json::from_str(&r.out).unwrap_or_else(|e| panic!("{e}: {}", r.out))
}

#[test]
fn pointwise_commands() {
    let r = run(&["op", "2", "5"]);
    assert_eq!((r.code, r.out.trim()), (EXIT_OK, "9"));
    let r = run(&["member", "7"]);
    assert_eq!((r.code, r.out.trim()), (EXIT_OK, "false"));
    let r = run(&["member", "25"]);
    assert_eq!(r.out.trim(), "true");
    assert_eq!(run(&["element", "16"]).out.trim(), "32");
    assert_eq!(run(&["rank", "32"]).out.trim(), "16");
    assert_eq!(run(&["power", "2", "2"]).out.trim(), "3");
    let fp = json(&run(&["--format", "json", "fp", "2", "5", "8"]));
    assert!(fp.to_string().contains("82"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["rank", "7"]).code, EXIT_NOT_FOUND);
    assert_eq!(run(&["op", "900000", "900000"]).code, EXIT_OUT_OF_RANGE);
    assert_eq!(run(&["element", "999999999"]).code, EXIT_OUT_OF_RANGE);
    assert_eq!(run(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run(&["op", "2"]).code, EXIT_USAGE);
    let r = run(&[
        "search",
        "--family",
        "brauer",
        "--k",
        "2",
        "--coloring",
        "random:seed=1,r=2",
        "--bound",
        "5000",
        "--budget",
        "0",
    ]);
    assert_eq!(r.code, EXIT_NOT_FOUND);
    let r = run(&["--format", "json", "op", "900000", "900000"]);
    let e: Value = serde_json::from_str(r.err.lines().last().unwrap()).unwrap();
    assert_eq!(e["error"]["kind"], "out-of-range");
    assert_eq!(e["error"]["exit"], EXIT_OUT_OF_RANGE);
}

#[test]
fn search_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let witness = dir.path().join("witness.json");
    let search = |mode: &str| {
        run(&[
            "--format",
            "json",
            "search",
            "--family",
            "brauer",
            "--k",
            "2",
            "--coloring",
            "random:seed=3,r=2",
            "--bound",
            "5000",
            "--mode",
            mode,
            "--witness-out",
            witness.to_str().unwrap(),
        ])
    };
    let first = search("det");
    assert_eq!(first.code, EXIT_OK, "{}", first.err);
    // Reports are byte-identical across runs in deterministic mode.
    assert_eq!(search("det").out, first.out);
    let doc = json(&first);
    assert_eq!(doc["outcome"], "witness");
    assert_eq!(doc["seed"], 3);
    assert!(doc.get("elapsed-ms").is_none());
    std::fs::write(&report, &first.out).unwrap();

    for path in [&report, &witness] {
        let v = run(&[
            "verify",
            "--witness",
            path.to_str().unwrap(),
            "--coloring",
            "random:seed=3,r=2",
        ]);
        assert_eq!((v.code, v.out.trim()), (EXIT_OK, "verified"), "{}", v.err);
    }
    let v = run(&[
        "verify",
        "--witness",
        report.to_str().unwrap(),
        "--coloring",
        "random:seed=4,r=2",
    ]);
    assert!(v.code == EXIT_OK || v.code == EXIT_NOT_FOUND);

    let fast = search("fast");
    assert_eq!(fast.code, EXIT_OK);
    let v = run(&[
        "verify",
        "--witness",
        witness.to_str().unwrap(),
        "--coloring",
        "random:seed=3,r=2",
    ]);
    assert_eq!(v.code, EXIT_OK);

    std::fs::write(&witness, "{ not json").unwrap();
    let v = run(&[
        "verify",
        "--witness",
        witness.to_str().unwrap(),
        "--coloring",
        "random:seed=3,r=2",
    ]);
    assert_eq!(v.code, EXIT_CORRUPT);
}

#[test]
fn pattern_and_threshold() {
    let r = run(&["pattern", "--family", "fpf", "--gen", "2,5,8"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    for v in ["2", "5", "8", "9", "14", "45", "82"] {
        assert!(r.out.split_whitespace().any(|w| w == v), "{v} in {}", r.out);
    }
    let r = run(&[
        "threshold",
        "--family",
        "brauer",
        "--k",
        "1",
        "--colors",
        "2",
        "--max-bound",
        "17",
    ]);
    assert_eq!((r.code, r.out.trim()), (EXIT_OK, "16"), "{}", r.err);
    let r = run(&[
        "threshold",
        "--family",
        "brauer",
        "--k",
        "1",
        "--colors",
        "2",
        "--max-bound",
        "15",
    ]);
    assert_eq!(r.code, EXIT_NOT_FOUND);
}

#[test]
fn hales_jewett_commands() {
    let r = run(&["hj", "--q", "2", "--r", "2", "--n", "2", "--threshold"]);
    assert_eq!((r.code, r.out.trim()), (EXIT_OK, "2"), "{}", r.err);
    let r = run(&[
        "phj",
        "--q",
        "2",
        "--colors",
        "2",
        "--d",
        "1",
        "--n",
        "3",
        "--threshold",
    ]);
    assert_eq!((r.code, r.out.trim()), (EXIT_OK, "2"), "{}", r.err);
    let r = run(&["--format", "json", "hj", "--q", "2", "--r", "2", "--n", "4"]);
    assert!(r.code == EXIT_OK || r.code == EXIT_NOT_FOUND, "{}", r.err);
    json(&r);
    let r = run(&["phj", "--q", "2", "--colors", "2", "--d", "2", "--n", "2"]);
    assert!(r.code == EXIT_OK || r.code == EXIT_NOT_FOUND, "{}", r.err);
}

#[test]
fn cache_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sigma.sgt");
    let p = path.to_str().unwrap();
    let r = run(&["build-cache", "--out", p]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let r = run(&["--cache", p, "op", "2", "5"]);
    assert_eq!((r.code, r.out.trim()), (EXIT_OK, "9"));
    assert!(!r.err.contains("warning"));

    let mut bytes = std::fs::read(&path).unwrap();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 1;
    std::fs::write(&path, &bytes).unwrap();
    assert_eq!(run(&["--cache", p, "op", "2", "5"]).code, EXIT_CORRUPT);
    std::fs::write(&path, &bytes[..10]).unwrap();
    assert_eq!(run(&["--cache", p, "op", "2", "5"]).code, EXIT_CORRUPT);
    assert_eq!(
        run(&[
            "--cache",
            dir.path().join("missing").to_str().unwrap(),
            "op",
            "2",
            "5"
        ])
        .code,
        EXIT_CORRUPT
    );
}

#[test]
fn binary_exit_codes() {
    let bin = Path::new(env!("CARGO_BIN_EXE_twosq"));
    let status = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .args(["--limit", "100000"])
            .output()
            .unwrap()
    };
    let o = status(&["op", "2", "5"]);
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "9");
    assert_eq!(status(&["member", "7"]).status.code(), Some(EXIT_OK));
    assert_eq!(status(&["rank", "7"]).status.code(), Some(EXIT_NOT_FOUND));
    assert_eq!(status(&["--bogus"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(
        status(&["op", "9999", "9999"]).status.code(),
        Some(EXIT_OUT_OF_RANGE)
    );
    assert_eq!(
        status(&["--cache", "/nonexistent/x.sgt", "op", "1", "1"])
            .status
            .code(),
        Some(EXIT_CORRUPT)
    );
}
