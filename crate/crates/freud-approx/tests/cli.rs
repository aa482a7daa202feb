//! End-to-end checks of the command-line interface: output shape,
//! round-trips, verification exits, and the documented error codes.

use std::process::Command;

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_freud-approx")
}

fn run(args: &[&str]) -> (Option<i32>, String, String) {
    let out = Command::new(exe()).args(args).output().expect("binary runs");
    (
        out.status.code(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn recurrence_closed_form_value() {
    // b_10 = 0.5 sqrt(10).
    let (code, stdout, _) = run(&["recurrence", "--alpha", "2", "--n", "10"]);
    assert_eq!(code, Some(0));
    let row = stdout
        .lines()
        .find(|l| l.starts_with("10,"))
        .expect("row for n = 10");
    let b10: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((b10 - 0.5 * 10.0_f64.sqrt()).abs() < 1e-12);
}

#[test]
fn recurrence_auto_prints_deviation() {
    let (code, _, stderr) = run(&["recurrence", "--alpha", "2", "--n", "20"]);
    assert_eq!(code, Some(0));
    assert!(
        stderr.contains("max |b_n| deviation"),
        "expected the closed-vs-stieltjes deviation note, got: {stderr}"
    );
}

#[test]
fn recurrence_empty_table_prints_mu0_header() {
    let (code, stdout, _) = run(&["recurrence", "--alpha", "3", "--n", "0"]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("# mu0,"));
    assert!(stdout.contains("n,b_n"));
    // No data rows.
    assert_eq!(stdout.lines().count(), 3);
}

#[test]
fn recurrence_csv_round_trips_through_library() {
    use freud_approx::orthopoly::RecurrenceTable;
    let (code, stdout, _) = run(&["recurrence", "--alpha", "1.5", "--n", "8"]);
    assert_eq!(code, Some(0));
    let t = RecurrenceTable::from_csv(std::io::BufReader::new(stdout.as_bytes())).unwrap();
    assert_eq!(t.alpha(), 1.5);
    assert_eq!(t.len(), 8);
}

#[test]
fn markov_alpha2_rho_constant() {
    let (code, stdout, _) = run(&["markov", "--alpha", "2", "--n", "1..50"]);
    assert_eq!(code, Some(0));
    let mut rows = 0;
    for line in stdout.lines().filter(|l| !l.starts_with('#') && !l.starts_with('n')) {
        let rho: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((rho - 2.0).abs() < 1e-8, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 50);
}

#[test]
fn classify_abs_not_rapid() {
    let (code, stdout, stderr) = run(&[
        "classify", "--alpha", "2", "--function", "abs", "--n", "80",
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("# verdict,not_rapid"), "stdout: {stdout}");
    assert!(stderr.contains("verdict: not_rapid"));
}

#[test]
fn classify_lifted_gaussian_rapid() {
    let (code, stdout, _) = run(&[
        "classify", "--alpha", "2", "--function", "x3gauss", "--n", "80",
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("# verdict,rapid"), "stdout: {stdout}");
}

#[test]
fn alpha2_verify_passes_for_gaussian_moment_function() {
    let (code, stdout, _) = run(&["alpha2-verify", "--function", "x3gauss", "--n", "60"]);
    assert_eq!(code, Some(0), "stdout: {stdout}");
    let diff_line = stdout
        .lines()
        .find(|l| l.starts_with("# max_diff,"))
        .expect("max_diff header");
    let diff: f64 = diff_line.rsplit(',').next().unwrap().parse().unwrap();
    assert!(diff <= 1e-9, "max diff {diff:.3e}");
}

#[test]
fn alpha2_verify_fails_with_impossible_tolerance() {
    let (code, _, stderr) = run(&[
        "alpha2-verify", "--function", "x3gauss", "--n", "20", "--tol", "1e-30",
    ]);
    assert_eq!(code, Some(1));
    assert!(stderr.contains("verification failed"));
}

#[test]
fn seminorms_and_coeffs_json_parse() {
    let (code, stdout, _) = run(&[
        "coeffs", "--alpha", "2", "--function", "sin", "--n", "16", "--format", "json",
    ]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 17);

    let (code, stdout, _) = run(&[
        "seminorms", "--alpha", "2", "--function", "sin", "--n", "16", "--k-max", "4",
        "--format", "json",
    ]);
    assert_eq!(code, Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["seminorms"]["values"].as_array().unwrap().len(), 5);
}

#[test]
fn jackson_csv_has_constant_header() {
    let (code, stdout, _) = run(&[
        "jackson", "--alpha", "2", "--function", "sin", "--r", "2", "--n", "1..20",
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("# c_hat,"));
    assert!(stdout.lines().any(|l| l.starts_with("20,")));
}

#[test]
fn jackson_rejects_discontinuous_function() {
    let (code, _, stderr) = run(&[
        "jackson", "--alpha", "2", "--function", "sign", "--r", "1", "--n", "1..10",
    ]);
    assert_eq!(code, Some(2));
    assert!(stderr.contains("error:"));
}

#[test]
fn functions_listing_contains_corpus() {
    let (code, stdout, _) = run(&["functions"]);
    assert_eq!(code, Some(0));
    for name in ["x0", "x8", "sin", "bump", "abs", "sign", "expx2half", "x3gauss"] {
        assert!(
            stdout.lines().any(|l| l.starts_with(&format!("{name},"))),
            "missing {name}"
        );
    }
    assert!(stdout.contains("alpha = 2"));
}

#[test]
fn output_file_writing() {
    let dir = std::env::temp_dir().join(format!("freud_cli_test_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let (code, stdout, _) = run(&[
        "recurrence", "--alpha", "2", "--n", "6",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.is_empty());
    let contents = std::fs::read_to_string(&path).unwrap();
    assert!(contents.contains("n,b_n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn distance_dual_route_output() {
    let (code, stdout, _) = run(&[
        "distance", "--alpha", "2", "--function", "sin", "--n", "20",
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.contains("n,d_subtraction,d_tail,floored"));
    // 0..=N+1 rows.
    let rows = stdout
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('n'))
        .count();
    assert_eq!(rows, 22);
}
