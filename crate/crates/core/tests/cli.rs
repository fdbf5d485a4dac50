use std::path::Path;
use std::process::{Command, Output};

fn bincover(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bincover"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn example_files(dir: &Path) {
    let o = bincover(
        &[
            "gen",
            "example",
            "-o",
            "example.txt",
            "--certificate",
            "example.cert",
        ],
        dir,
    );
    assert!(o.status.success());
}

#[test]
fn run_example_with_explicit_advice() {
    let dir = tempfile::tempdir().unwrap();
    example_files(dir.path());
    let o = bincover(
        &[
            "run",
            "example.txt",
            "--k",
            "3",
            "--m",
            "2",
            "--x",
            "4/5",
            "--certificate",
            "example.cert",
            "--csv",
            "out.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("covered:   9"), "{text}");
    assert!(text.contains("opt:       11 (exact)"));
    // the covering dump lists the two critical bins first
    assert!(
        text.contains("bin 0 [critical] load 21/20: 1/4 4/5"),
        "{text}"
    );
    let csv = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(
        csv.lines().nth(1),
        Some("example,28,3,adh,2,4,5,9,11,exact,true,9,11,")
    );
}

#[test]
fn run_dnf_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    example_files(dir.path());
    let expected = bincover::dnf_run(&bincover::generators::worked_example()).covered_count;
    let o = bincover(
        &["run", "example.txt", "--strategy", "dnf", "--quiet"],
        dir.path(),
    );
    assert!(stdout(&o).contains(&format!("covered:   {expected}\n")));
}

#[test]
fn run_empty_instance() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.txt"), "# nothing\n").unwrap();
    for strategy in ["dnf", "dh", "adh"] {
        let o = bincover(&["run", "empty.txt", "--strategy", strategy], dir.path());
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("covered:   0"));
    }
}

#[test]
fn oracle_tape_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    example_files(dir.path());
    for tape in ["advice.txt", "advice.bin"] {
        let o = bincover(
            &["oracle", "example.txt", "--k", "3", "--emit-tape", tape],
            dir.path(),
        );
        let text = stdout(&o);
        assert!(text.lines().any(|l| l == "2,9"), "{text}");
        let covered = text
            .lines()
            .find_map(|l| l.strip_prefix("covered = "))
            .unwrap()
            .to_string();
        let run = bincover(
            &["run", "example.txt", "--k", "3", "--tape", tape, "--quiet"],
            dir.path(),
        );
        assert!(stdout(&run).contains(&format!("covered:   {covered}\n")));
    }
}

#[test]
fn oracle_on_empty_instance() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.txt"), "").unwrap();
    let text = stdout(&bincover(&["oracle", "empty.txt"], dir.path()));
    assert!(text.starts_with("m = 0\nx_m = 1\ncovered = 0\n"), "{text}");
}

#[test]
fn opt_reports() {
    let dir = tempfile::tempdir().unwrap();
    example_files(dir.path());
    let o = bincover(
        &["opt", "example.txt", "--certificate", "example.cert"],
        dir.path(),
    );
    assert_eq!(
        stdout(&o).trim(),
        "OPT = 11 (certificate 11 = floor bound 11)"
    );

    std::fs::write(dir.path().join("halves.txt"), "0.5\n0.5\n0.5\n0.5\n").unwrap();
    let o = bincover(&["opt", "halves.txt", "--out", "halves.cert"], dir.path());
    assert!(stdout(&o).starts_with("OPT = 2"));
    let cert = std::fs::read_to_string(dir.path().join("halves.cert")).unwrap();
    assert_eq!(cert.lines().count(), 2);

    bincover(
        &["gen", "random", "--n", "30", "--seed", "4", "-o", "big.txt"],
        dir.path(),
    );
    let o = bincover(&["opt", "big.txt"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("bound only"));
}

#[test]
fn advice_codec_commands() {
    let dir = tempfile::tempdir().unwrap();
    let o = bincover(
        &["encode-advice", "--m", "2", "--x", "4/5", "--tape", "a.bin"],
        dir.path(),
    );
    let bits = stdout(&o).trim().to_string();
    let o = bincover(&["decode-advice", "--bits", &bits], dir.path());
    assert!(stdout(&o).starts_with("m = 2\nx_m = 4/5\n"));
    let o = bincover(&["decode-advice", "a.bin"], dir.path());
    assert!(stdout(&o).starts_with("m = 2\nx_m = 4/5\n"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "0.5\nabc\n").unwrap();
    assert_eq!(
        bincover(&["run", "bad.txt"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        bincover(&["decode-advice", "--bits", "1101"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bincover(&["run"], dir.path()).status.code(), Some(1));
    assert_eq!(bincover(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(
        bincover(&["run", "x.txt", "--m", "2"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn verify_bounds_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "verify-bounds",
        "--family",
        "random",
        "--trials",
        "20",
        "--n-max",
        "8",
        "--seed",
        "9",
    ];
    let a = bincover(&args, dir.path());
    let b = bincover(&args, dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 61);
    let stderr = String::from_utf8_lossy(&a.stderr);
    assert!(stderr.contains("0 bound violations"), "{stderr}");
}
