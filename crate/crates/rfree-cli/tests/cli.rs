use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn sanov() -> String {
    fixture("sanov.json").display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

/// Very proximal conjugate of diag(65536, 1/65536) by an integer matrix;
/// its eigendirections avoid every fixed point of the Sanov generators.
const STRONG: &str = "8589934591/65536,-4294967295/65536;8589934590/65536,-4294967294/65536";

/// Conjugate of diag(4, 1/4) by the same basis, used as a boost a0.
const A0: &str = "31/4,-15/4;15/2,-7/2";

#[test]
fn ball_growth_matches_the_free_group() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ball.jsonl");
    let o = run(&[
        "ball",
        "--spec",
        &sanov(),
        "--radius",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("17 elements"), "{text}");
    assert!(text.contains("length 0: 1"), "{text}");
    assert!(text.contains("length 1: 4"), "{text}");
    assert!(text.contains("length 2: 12"), "{text}");
    let lines: Vec<String> = std::fs::read_to_string(&out)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert_eq!(lines.len(), 18);
    let header: serde_json::Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(header["kind"], "ball");
    assert_eq!(header["count"], 17);
    assert_eq!(header["radius"], 2);
    let first: serde_json::Value = serde_json::from_str(&lines[1]).unwrap();
    assert_eq!(first["text"], "e");
    assert_eq!(first["displacement"]["lo"], "0");
}

#[test]
fn certify_separates_the_exit_codes() {
    // A generator is unipotent: not very proximal, exit 1.
    let o = run(&["certify", "--spec", &sanov(), "--radius", "1", "--element", "a"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("not very proximal"));

    // a*b is hyperbolic but lies in the radius-2 set: D has an exact zero
    // lower endpoint.
    let o = run(&["certify", "--spec", &sanov(), "--radius", "2", "--element", "a*b"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("D = [0, "), "{text}");
    assert!(text.contains("lies in its own coefficient set"), "{text}");
    assert!(text.contains("not certified"), "{text}");

    // Unknown generator label: input error.
    let o = run(&["certify", "--spec", &sanov(), "--radius", "1", "--element", "zz"]);
    assert_eq!(code(&o), 4);

    // A strong conjugate clears the radius-1 threshold.
    let o = run(&["certify", "--spec", &sanov(), "--radius", "1", "--element", STRONG]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: certified"));
}

#[test]
fn certificates_round_trip_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = run(&[
        "certify",
        "--spec",
        &sanov(),
        "--radius",
        "1",
        "--element",
        STRONG,
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let o = run(&["verify", "--certificate", cert.to_str().unwrap(), "--spec", &sanov()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("verified"));

    // Tampering with the verdict is caught.
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    v["certified"] = serde_json::Value::Bool(false);
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = run(&["verify", "--certificate", tampered.to_str().unwrap(), "--spec", &sanov()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("certified"), "{}", stdout(&o));

    // A different spec is rejected outright.
    let sl3 = fixture("sl3_elem.json").display().to_string();
    let o = run(&["verify", "--certificate", cert.to_str().unwrap(), "--spec", &sl3]);
    assert_eq!(code(&o), 4);
}

#[test]
fn oracle_finds_minimal_witnesses_and_refuses_oversized_budgets() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("witness.json");

    // An element of the set itself has the 2-syllable witness a*x^-1.
    let o = run(&[
        "oracle",
        "--spec",
        &sanov(),
        "--radius",
        "1",
        "--element",
        "a",
        "--max-syllables",
        "3",
        "--max-power",
        "2",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["witness"], "a*x^-1");
    assert_eq!(v["witness_syllables"], 2);
    assert_eq!(v["complete"], false);

    // The strong conjugate survives a small exhaustive budget.
    let o = run(&[
        "oracle",
        "--spec",
        &sanov(),
        "--radius",
        "1",
        "--element",
        STRONG,
        "--max-syllables",
        "3",
        "--max-power",
        "2",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("no witness"));

    // Budgets beyond the word cap are refused, not truncated.
    let o = run(&[
        "oracle",
        "--spec",
        &sanov(),
        "--radius",
        "2",
        "--element",
        "a",
        "--max-syllables",
        "10",
        "--max-power",
        "3",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn search_feeds_certify_through_an_element_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("search.json");
    let o = run(&[
        "search",
        "--spec",
        &sanov(),
        "--radius",
        "1",
        "--seed",
        "42",
        "--samples",
        "300",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(out.with_extension("trace.csv").exists());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["element"].is_array());
    assert!(v["realization"]["drift"].as_f64().unwrap() < 1e-9);

    let at = format!("@{}", out.display());
    let o = run(&["certify", "--spec", &sanov(), "--radius", "1", "--element", &at]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: certified"));

    // An empty acceptance region exhausts the budget: exit 3.
    let o = run(&[
        "search",
        "--spec",
        &sanov(),
        "--radius",
        "1",
        "--seed",
        "42",
        "--samples",
        "50",
        "--delta0",
        "0.0",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn boost_certifies_and_enforces_the_psi_floor() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("boost.json");
    let o = run(&[
        "boost",
        "--spec",
        &sanov(),
        "--radius",
        "1",
        "--element",
        "e",
        "--a0",
        A0,
        "--kappa",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["boost"]["q"], 3);
    assert_eq!(v["boost"]["exponent"], 6);
    assert_eq!(v["certified"], true);

    // The boosted certificate is itself a verify fixed point.
    let o = run(&["verify", "--certificate", out.to_str().unwrap(), "--spec", &sanov()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    // A lax rate parameter demands psi > e^(-0.5), which fails here.
    let o = run(&[
        "boost", "--spec", &sanov(), "--radius", "1", "--element", "e", "--a0", A0,
        "--kappa", "0.5",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("psi lower bound"));
}

#[test]
fn mc_verify_covers_closed_forms_and_degenerate_inputs() {
    let o = run(&[
        "mc-verify",
        "--event",
        "tubular",
        "--dim",
        "2",
        "--seed",
        "7",
        "--samples",
        "50000",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("validation: ok; closed form: ok"), "{text}");

    // Scalar h degenerates the almost-fixed event: input error.
    let o = run(&[
        "mc-verify",
        "--event",
        "almost-fixed",
        "--h",
        "1,0;0,1",
        "--seed",
        "3",
        "--samples",
        "10000",
    ]);
    assert_eq!(code(&o), 4);

    // Identity h makes every flag incident: the statistic is 0, so the
    // empirical probability is 1 at every epsilon.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mc.csv");
    let o = run(&[
        "mc-verify",
        "--event",
        "flag-pairing",
        "--h",
        "1,0,0;0,1,0;0,0,1",
        "--seed",
        "3",
        "--samples",
        "10000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    for line in csv.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[2], "1", "p_hat should be 1 in {line}");
    }
}

#[test]
fn same_seed_reruns_are_bitwise_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &Path| {
        vec![
            "search".into(),
            "--spec".into(),
            sanov(),
            "--radius".into(),
            "1".into(),
            "--seed".into(),
            "9001".into(),
            "--samples".into(),
            "250".into(),
            "--out".into(),
            out.display().to_string(),
        ]
    };
    let out1 = dir.path().join("s1.json");
    let out2 = dir.path().join("s2.json");
    let o = run(&args(&out1).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&args(&out2).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read(&out1).unwrap(), std::fs::read(&out2).unwrap());
    assert_eq!(
        std::fs::read(out1.with_extension("trace.csv")).unwrap(),
        std::fs::read(out2.with_extension("trace.csv")).unwrap()
    );

    let mc = |out: &Path, seed: &str| {
        let o = run(&[
            "mc-verify",
            "--event",
            "tubular",
            "--dim",
            "3",
            "--seed",
            seed,
            "--samples",
            "20000",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    };
    let m1 = dir.path().join("m1.csv");
    let m2 = dir.path().join("m2.csv");
    let m3 = dir.path().join("m3.csv");
    mc(&m1, "123");
    mc(&m2, "123");
    mc(&m3, "124");
    assert_eq!(std::fs::read(&m1).unwrap(), std::fs::read(&m2).unwrap());
    assert_ne!(std::fs::read(&m1).unwrap(), std::fs::read(&m3).unwrap());
}

#[test]
fn worker_count_never_changes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let mut baseline: Option<Vec<u8>> = None;
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("ball_w{workers}.jsonl"));
        let o = run(&[
            "ball",
            "--spec",
            &sanov(),
            "--radius",
            "3",
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let bytes = std::fs::read(&out).unwrap();
        match &baseline {
            None => baseline = Some(bytes),
            Some(b) => assert_eq!(b, &bytes),
        }
    }

    let mut baseline: Option<Vec<u8>> = None;
    for workers in ["1", "2"] {
        let out = dir.path().join(format!("oracle_w{workers}.json"));
        let o = run(&[
            "oracle",
            "--spec",
            &sanov(),
            "--radius",
            "1",
            "--element",
            "a*b",
            "--max-syllables",
            "4",
            "--max-power",
            "2",
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 1, "{}", stderr(&o));
        let bytes = std::fs::read(&out).unwrap();
        match &baseline {
            None => baseline = Some(bytes),
            Some(b) => assert_eq!(b, &bytes),
        }
    }
}
