//! End-to-end runs of the binary: pinned outputs, pipe composition, exit
//! codes, and byte-for-byte determinism.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run_with_stdin(args: &[&str], input: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_betti"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .expect("stdin piped")
        .write_all(input.unwrap_or_default())
        .expect("stdin accepts input");
    child.wait_with_output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_with_stdin(args, None)
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "betti {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

#[test]
fn homology_reports_the_torus_over_both_coefficient_rings() {
    let file = fixture("torus9.cplx");
    assert_eq!(
        stdout(&["homology", "--coeff", "z", &file]),
        "H_0 = Z\nH_1 = Z^2\nH_2 = Z\neuler = 0\n"
    );
    assert_eq!(
        stdout(&["homology", "--coeff", "z", "--format", "json", &file]),
        "{\"dims\":[{\"k\":0,\"betti\":1,\"torsion\":[]},{\"k\":1,\"betti\":2,\"torsion\":[]},{\"k\":2,\"betti\":1,\"torsion\":[]}],\"euler\":0}\n"
    );
    assert_eq!(
        stdout(&["homology", "--coeff", "gf2", fixture("rp2.cplx").as_str()]),
        "H_0 = GF(2)^1\nH_1 = GF(2)^1\nH_2 = GF(2)^1\neuler = 1\n"
    );
}

#[test]
fn torsion_shows_up_in_text_and_json() {
    let file = fixture("rp2.cplx");
    assert_eq!(
        stdout(&["homology", &file]),
        "H_0 = Z\nH_1 = Z/2\nH_2 = 0\neuler = 1\n"
    );
    assert!(stdout(&["homology", "--format", "json", &file]).contains("\"torsion\":[2]"));
}

#[test]
fn rips_persistence_pipeline_matches_the_square_barcode() {
    let filtration = stdout(&["rips", "--max-dim", "2", &fixture("square4.csv")]);
    let out = run_with_stdin(
        &["persistence", "--format", "text", "--hide-zero"],
        Some(filtration.as_bytes()),
    );
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.contains("dim 1: 1 pairs"),
        "one surviving loop: {text}"
    );
    assert!(
        text.contains("[1, 1.4142135623730951)"),
        "born at 1: {text}"
    );
}

#[test]
fn alpha_output_is_pinned_to_the_documented_tie_break() {
    assert_eq!(
        stdout(&["alpha", &fixture("square4.csv")]),
        "0 : 0\n1 : 0\n2 : 0\n3 : 0\n\
         0 1 : 0.5\n0 2 : 0.5\n1 3 : 0.5\n2 3 : 0.5\n\
         1 2 : 0.7071067811865476\n\
         0 1 2 : 0.7071067811865476\n1 2 3 : 0.7071067811865476\n"
    );
}

#[test]
fn cubical_persistence_finds_the_ring_hole() {
    let filtration = stdout(&["cubical", &fixture("ring3x3.pgm")]);
    let out = run_with_stdin(&["persistence", "--hide-zero"], Some(filtration.as_bytes()));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "dim 0: 1 pairs\n  [1, inf) <[0,0]x[0,0]>\ndim 1: 1 pairs\n  [1, 5) <[2,2]x[1,2]>\n"
    );
}

#[test]
fn morse_report_on_the_shipped_torus_field_is_exact() {
    assert_eq!(
        stdout(&[
            "morse",
            "--field",
            &fixture("torus9.vf"),
            &fixture("torus9.cplx")
        ]),
        "pairs: 25\ncritical:\na\na b\na d\na c d\n\
         critical counts: [1, 2, 1]\nbetti gf2: [1, 2, 1]\n\
         morse homology: [1, 2, 1]\ninequalities hold: true\n"
    );
}

#[test]
fn write_field_round_trips_the_field_file() {
    let rendered = stdout(&[
        "morse",
        "--field",
        &fixture("torus9.vf"),
        "--write-field",
        &fixture("torus9.cplx"),
    ]);
    let on_disk = std::fs::read_to_string(fixture("torus9.vf")).unwrap();
    let body: String = on_disk
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(rendered, body);
}

#[test]
fn pi1_abelianizations_match_the_known_groups() {
    assert!(stdout(&["pi1", &fixture("rp2.cplx")]).ends_with("abelianization: Z/2\n"));
    assert!(stdout(&["pi1", &fixture("torus9.cplx")]).ends_with("abelianization: Z^2\n"));
    assert!(
        stdout(&["pi1", "--root", "e", &fixture("torus9.cplx")]).ends_with("abelianization: Z^2\n")
    );
    let raw = stdout(&["pi1", "--no-simplify", &fixture("torus9.cplx")]);
    assert!(raw.starts_with(
        "generators: g1 g2 g3 g4 g5 g6 g7 g8 g9 g10 g11 g12 g13 g14 g15 g16 g17 g18 g19\n"
    ));
}

#[test]
fn mv_check_reports_the_torus_strip_decomposition() {
    assert_eq!(
        stdout(&[
            "mv-check",
            &fixture("torus9.cplx"),
            &fixture("torus9_stripx.cplx"),
            &fixture("torus9_stripy.cplx"),
        ]),
        "k=0: 1 = 1 + 1 - 2 + 1 + 0  ok\n\
         k=1: 2 = 1 + 1 - 2 + 1 + 1  ok\n\
         k=2: 1 = 0 + 0 - 0 + 0 + 1  ok\n\
         identity holds in every dimension\n"
    );
}

#[test]
fn bottleneck_between_rips_and_cech_diagrams() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = dir.path().join("rips.json");
    let d2 = dir.path().join("cech.json");
    for (cmd, path) in [("rips", &d1), ("cech", &d2)] {
        let filtration = stdout(&[cmd, &fixture("square4.csv")]);
        let out = run_with_stdin(
            &["persistence", "--format", "json"],
            Some(filtration.as_bytes()),
        );
        std::fs::write(path, out.stdout).unwrap();
    }
    let same = stdout(&["bottleneck", d1.to_str().unwrap(), d1.to_str().unwrap()]);
    assert_eq!(same, "bottleneck distance (dim 0) = 0\n");
    let cross = stdout(&[
        "bottleneck",
        "--dim",
        "0",
        d1.to_str().unwrap(),
        d2.to_str().unwrap(),
    ]);
    assert_eq!(cross, "bottleneck distance (dim 0) = 0.5\n");
}

#[test]
fn svg_output_is_wellformed_enough_to_ship() {
    let filtration = stdout(&["rips", &fixture("square4.csv")]);
    let out = run_with_stdin(
        &["persistence", "--format", "svg"],
        Some(filtration.as_bytes()),
    );
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg xmlns="));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("dim 1 [1, 1.4142135623730951)"));
}

#[test]
fn errors_use_distinct_exit_codes() {
    let missing = run(&["homology", "no_such_file.cplx"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("no_such_file.cplx"));

    let usage = run(&["frobnicate"]);
    assert_eq!(usage.status.code(), Some(2));

    let bad_flag = run(&["homology", "--coeff", "q", &fixture("s2.cplx")]);
    assert_eq!(bad_flag.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let disconnected = dir.path().join("two.cplx");
    std::fs::write(&disconnected, "a b\nx y\n").unwrap();
    let pi1 = run(&["pi1", disconnected.to_str().unwrap()]);
    assert_eq!(pi1.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&pi1.stderr).contains("unreachable"));

    let not_sub = run(&[
        "mv-check",
        &fixture("torus9.cplx"),
        &fixture("torus9_stripx.cplx"),
        &fixture("torus9_stripx.cplx"),
    ]);
    assert_eq!(not_sub.status.code(), Some(1));
}

#[test]
fn every_subcommand_is_byte_deterministic() {
    let torus = fixture("torus9.cplx");
    let square = fixture("square4.csv");
    let commands: Vec<Vec<String>> = vec![
        vec!["homology".into(), torus.clone()],
        vec![
            "homology".into(),
            "--coeff".into(),
            "gf2".into(),
            "--format".into(),
            "json".into(),
            torus.clone(),
        ],
        vec![
            "cohomology".into(),
            "--dim".into(),
            "1".into(),
            torus.clone(),
        ],
        vec!["euler".into(), torus.clone()],
        vec!["rips".into(), square.clone()],
        vec!["cech".into(), square.clone()],
        vec!["alpha".into(), square.clone()],
        vec!["cubical".into(), fixture("ring3x3.pgm")],
        vec!["morse".into(), torus.clone()],
        vec![
            "morse".into(),
            "--field".into(),
            fixture("torus9.vf"),
            torus.clone(),
        ],
        vec![
            "pi1".into(),
            "--format".into(),
            "json".into(),
            fixture("rp2.cplx"),
        ],
        vec![
            "mv-check".into(),
            torus.clone(),
            fixture("torus9_stripx.cplx"),
            fixture("torus9_stripy.cplx"),
        ],
    ];
    for argv in &commands {
        let args: Vec<&str> = argv.iter().map(String::as_str).collect();
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success(), "{argv:?}");
        assert_eq!(
            first.stdout, second.stdout,
            "{argv:?} must be deterministic"
        );
        assert!(!first.stdout.is_empty(), "{argv:?} writes something");
    }
    let filtration = stdout(&["rips", &square]);
    for format in ["text", "json", "svg"] {
        let a = run_with_stdin(
            &["persistence", "--format", format],
            Some(filtration.as_bytes()),
        );
        let b = run_with_stdin(
            &["persistence", "--format", format],
            Some(filtration.as_bytes()),
        );
        assert_eq!(a.stdout, b.stdout, "persistence {format}");
    }
}
