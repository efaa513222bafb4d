use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hcolim::commands::{ClassSpec, ColimitOpts, NormalizeOpts};
use hcolim::file::ChainFile;
use hilbert_colim::chain::OmegaChain;
use hilbert_colim::normalisation::{normalize_chain, RFunction};
use hilbert_colim::Error;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcolim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_fixture(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

#[test]
fn reports_are_byte_stable() {
    let cases: Vec<Vec<String>> = vec![
        vec![
            "verify-lemma".into(),
            "--samples".into(),
            "200".into(),
            "--seed".into(),
            "7".into(),
        ],
        vec![
            "colimit".into(),
            fixture("diag_repeat.json").display().to_string(),
        ],
        vec![
            "tensor-check".into(),
            fixture("diag_repeat.json").display().to_string(),
            "--samples".into(),
            "10".into(),
        ],
        vec![
            "normalize".into(),
            fixture("doubling.json").display().to_string(),
        ],
        vec!["counterexample".into(), "scaling".into()],
        vec![
            "universal-map".into(),
            fixture("diag_repeat.json").display().to_string(),
        ],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = run(&args);
        let b = run(&args);
        assert!(!a.stdout.is_empty(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let stdout = run(&["counterexample", "embedding", "--depth", "6"]);
    let written = run(&[
        "counterexample",
        "embedding",
        "--depth",
        "6",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(written.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout.stdout);
}

#[test]
fn verify_lemma_passes() {
    let out = run(&["verify-lemma", "--samples", "500", "--max-dim", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(check(&r, "inequality_violations")["value"], 0);
}

#[test]
fn colimit_on_diagonal_chain() {
    let out = run_fixture("colimit", "diag_repeat.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let n0 = &check(&r, "norm[0]")["value"];
    assert!((n0.as_f64().unwrap() - 1.0).abs() < 1e-12);
    let z1 = check(&r, "zero_class[1]");
    assert_eq!(z1["value"], true);
}

#[test]
fn colimit_with_explicit_classes() {
    let out = run_fixture(
        "colimit",
        "scaling.json",
        &["--class", "0:1", "--class", "3:2"],
    );
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(check(&r, "norm[1]")["value"], 0.0);
    assert_eq!(r["params"]["classes"], serde_json::json!(["0:1", "3:2"]));
}

#[test]
fn colimit_through_the_library() {
    let file = ChainFile::read(&fixture("identity.json")).unwrap();
    let class: ClassSpec = "0:1,1i".parse().unwrap();
    let opts = ColimitOpts {
        depth: 64,
        window: 8,
        tol: 1e-12,
    };
    let r = hcolim::commands::colimit(&file, &[class], &opts).unwrap();
    assert!(r.passed());
    let v: Value = serde_json::from_str(&r.to_json()).unwrap();
    let norm = check(&v, "norm[0]")["value"].as_f64().unwrap();
    assert!((norm - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn bad_class_specs_are_rejected() {
    for s in ["", "1", "x:1", "0:", "0:1,,2"] {
        assert!(s.parse::<ClassSpec>().is_err(), "{s}");
    }
    let c: ClassSpec = "2:1,-0.5,1+2i".parse().unwrap();
    assert_eq!(c.index, 2);
    assert_eq!(c.entries.len(), 3);
}

#[test]
fn tensor_check_passes_on_fixtures() {
    for (name, h) in [
        ("diag_repeat.json", "2"),
        ("identity.json", "3"),
        ("scaling.json", "1"),
    ] {
        let out = run_fixture("tensor-check", name, &["--h-dim", h, "--samples", "20"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
}

#[test]
fn normalize_round_trips_through_chain_files() {
    let dir = tempfile::tempdir().unwrap();
    let chain_out = dir.path().join("normalized.json");
    let out = run_fixture(
        "normalize",
        "doubling.json",
        &["--depth", "8", "--chain-out", chain_out.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let written = ChainFile::read(&chain_out).unwrap();
    let r = report(&out);
    assert_eq!(
        r["outputs"]["normalized_chain"],
        serde_json::to_value(&written).unwrap()
    );

    let source = ChainFile::read(&fixture("doubling.json"))
        .unwrap()
        .chain()
        .unwrap();
    let expected = normalize_chain(&source, RFunction::UnitAtZero).unwrap();
    let reread = written.chain().unwrap();
    assert_same_maps(&reread, expected.chain(), 10, 1e-15);

    for row in r["outputs"]["eta"].as_array().unwrap() {
        let n = row["n"].as_u64().unwrap() as i32;
        let eta = row["eta"].as_f64().unwrap();
        assert!((eta - 2f64.powi(-n)).abs() <= 1e-15, "n = {n}");
    }
}

fn assert_same_maps(a: &OmegaChain, b: &OmegaChain, depth: usize, tol: f64) {
    for n in 0..depth {
        let d = a
            .chain_map(n)
            .sub(&b.chain_map(n))
            .unwrap()
            .frobenius_norm();
        assert!(d <= tol, "stage {n}: {d}");
    }
}

#[test]
fn normalize_both_r_functions() {
    let file = ChainFile::read(&fixture("doubling.json")).unwrap();
    for r in [RFunction::UnitAtZero, RFunction::ContinuousClamp] {
        let (report, chain) = hcolim::commands::normalize(
            &file,
            &NormalizeOpts {
                r,
                depth: 16,
                tol: 1e-10,
            },
        )
        .unwrap();
        assert!(report.passed());
        let again = ChainFile::parse(&chain.to_json()).unwrap();
        assert_eq!(again.to_json(), chain.to_json());
    }
}

#[test]
fn counterexamples_pass() {
    for args in [
        vec!["counterexample", "scaling"],
        vec!["counterexample", "scaling", "--depth", "1"],
        vec!["counterexample", "embedding"],
        vec!["counterexample", "embedding", "--depth", "2"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
    let r = report(&run(&["counterexample", "scaling"]));
    assert_eq!(check(&r, "global_bound")["value"], 524288.0);
    assert_eq!(check(&r, "colimit_zero")["value"], 0.0);
}

#[test]
fn universal_map_needs_a_bounded_cocone() {
    let good = run_fixture("universal-map", "diag_repeat.json", &[]);
    assert_eq!(good.status.code(), Some(0));
    let bad = run_fixture("universal-map", "scaling.json", &[]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(report(&bad)["verdict"], "fail");
    let emb = run_fixture("universal-map", "embedding.json", &["--depth", "8"]);
    assert_eq!(emb.status.code(), Some(1));
}

#[test]
fn universal_map_without_cocone_is_an_error() {
    let out = run_fixture("universal-map", "identity.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    };
    let missing = dir.path().join("missing.json");
    let unknown = write("unknown.json", r#"{"bad": 1}"#);
    let truncated = write("truncated.json", r#"{"category": "contraction""#);
    let shape = write(
        "shape.json",
        r#"{"category":"contraction","prefix_dims":[1,2],"prefix_maps":[[[[1,0]]]],"tail":{"kind":"identity"}}"#,
    );
    let tail = write(
        "tail.json",
        r#"{"category":"contraction","prefix_dims":[1],"prefix_maps":[],"tail":{"kind":"spiral"}}"#,
    );
    for p in [&missing, &unknown, &truncated, &shape, &tail] {
        let out = run(&["colimit", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{}", p.display());
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("hcolim: "));
    }
}

#[test]
fn non_contraction_in_contraction_file_is_rejected() {
    let text = r#"{"category":"contraction","prefix_dims":[1],"prefix_maps":[],
                   "tail":{"kind":"scalar_geometric","ratio":[2.0,0.0]}}"#;
    let err = ChainFile::parse(text).unwrap().chain().unwrap_err();
    assert!(
        matches!(err, hcolim::CliError::Core(Error::CategoryViolation { .. })),
        "{err:?}"
    );
}

#[test]
fn chain_files_round_trip() {
    for name in [
        "scaling.json",
        "diag_repeat.json",
        "identity.json",
        "doubling.json",
        "embedding.json",
    ] {
        let file = ChainFile::read(&fixture(name)).unwrap();
        let again = ChainFile::parse(&file.to_json()).unwrap();
        assert_eq!(again.to_json(), file.to_json(), "{name}");
        let chain = file.chain().unwrap();
        let rebuilt = ChainFile::from_chain(&chain).chain().unwrap();
        assert_same_maps(&chain, &rebuilt, 6, 0.0);
    }
}
