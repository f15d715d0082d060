use std::path::Path;
use std::process::{Command, Output};

use fpower::format::parse_numeric;
use fpower_core::interval::{power_ci, sigma_ci_equal_tail};
use fpower_core::power::{power_at_sigma, TwoSidedTSpec};

fn fpower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpower"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn power_at_zero_effect_is_alpha() {
    let out = fpower(&[
        "power", "--u", "1", "--v", "9", "--alpha", "0.05", "--delta", "0",
    ]);
    assert_eq!(stdout(&out), "0.05\n");
}

#[test]
fn power_usage_errors_exit_two() {
    assert_eq!(
        fpower(&["power", "--u", "1", "--v", "9", "--alpha", "0.05"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fpower(&["power", "--u", "1", "--v", "9", "--alpha", "1.5", "--delta", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(fpower(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn ci_from_data_file_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let data = [1.2, 0.4, 2.1, 1.7, 0.9, 1.5, 2.8, 0.1, 1.1, 1.9];
    let text: String = data.iter().map(|x| format!("{x}\n")).collect();
    let path = write(dir.path(), "obs.txt", &text);
    let out = stdout(&fpower(&[
        "ci",
        "--data-file",
        &path,
        "--mu",
        "1",
        "--mu0",
        "0",
    ]));
    let (header, rows) = parse_numeric(&out);
    assert_eq!(header, ["a", "b", "power_lo", "power_hi", "power_mle"]);

    let mean = data.iter().sum::<f64>() / 10.0;
    let q: f64 = data.iter().map(|y| (y - mean) * (y - mean)).sum();
    let spec = TwoSidedTSpec::new(10, 0.0, 1.0).unwrap();
    let design = spec.design(0.05).unwrap();
    let sigma = sigma_ci_equal_tail(q, 9.0, 0.05).unwrap();
    let power = power_ci(&sigma, &design, &spec.map()).unwrap();
    let mle = power_at_sigma(&design, &spec.map(), (q / 10.0).sqrt()).unwrap();
    let expected = [sigma.lower, sigma.upper, power.lo, power.hi, mle];
    for (got, want) in rows[0].iter().zip(expected) {
        assert!(
            (got - want).abs() <= 1e-9 * want.abs().max(1.0),
            "{got} vs {want}"
        );
    }
}

#[test]
fn ci_rejects_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "1.0\n2.0\nseven\n");
    let out = fpower(&["ci", "--data-file", &bad, "--mu", "1", "--mu0", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let empty = write(dir.path(), "empty.txt", "\n");
    assert_eq!(
        fpower(&["ci", "--data-file", &empty, "--mu", "1", "--mu0", "0"])
            .status
            .code(),
        Some(2)
    );

    let missing = dir.path().join("absent.txt");
    let out = fpower(&[
        "ci",
        "--data-file",
        missing.to_str().unwrap(),
        "--mu",
        "1",
        "--mu0",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let flat = write(dir.path(), "flat.txt", "3\n3\n3\n3\n");
    assert_eq!(
        fpower(&["ci", "--data-file", &flat, "--mu", "1", "--mu0", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn figure1_defaults_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let out = fpower(&["figure1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let (header, rows) = parse_numeric(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(header, ["effect", "power_mle", "ci_lo", "ci_hi"]);
    assert_eq!(rows.len(), 81);
    assert_eq!(rows[0][0], -2.0);
    assert_eq!(rows[40][0], 0.0);
    assert_eq!(rows[80][0], 2.0);

    let unwritable = dir.path().join("no/such/dir/curve.csv");
    assert_eq!(
        fpower(&["figure1", "--out", unwritable.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fpower(&["figure1", "--grid-steps", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn coverage_is_deterministic_across_workers() {
    let base = ["coverage", "--replicates", "5000", "--seed", "11"];
    let one = stdout(&fpower(&[&base[..], &["--workers", "1"]].concat()));
    let three = stdout(&fpower(&[&base[..], &["--workers", "3"]].concat()));
    assert_eq!(one, three);
    assert_eq!(
        one,
        stdout(&fpower(&[&base[..], &["--workers", "1"]].concat()))
    );
    let lines: Vec<&str> = one.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("sigma,equal_tail,"));
    assert!(lines[2].starts_with("power,equal_tail,"));
}

#[test]
fn minlen_reports_no_longer_than_equal_tail() {
    let out = stdout(&fpower(&[
        "minlen",
        "--q",
        "9",
        "--v",
        "9",
        "--gamma",
        "0.05",
        "--u",
        "1",
        "--alpha",
        "0.05",
        "--lambda",
        "3.1622776601683795",
    ]));
    let (header, rows) = parse_numeric(&out);
    assert_eq!(
        header,
        [
            "A",
            "B",
            "a",
            "b",
            "power_lo",
            "power_hi",
            "L",
            "L_equal_tail"
        ]
    );
    let row = &rows[0];
    assert!(row[0] < row[1] && row[2] < row[3] && row[4] < row[5]);
    assert!(row[6] <= row[7]);
    assert_eq!(
        fpower(&["minlen", "--q", "9", "--v", "9", "--u", "1", "--lambda", "0"])
            .status
            .code(),
        Some(2)
    );
}
