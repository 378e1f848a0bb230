use std::path::PathBuf;
use std::process::{Command, Output};

fn zeros_file() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/zeros_2100.txt")
}

fn ztl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ztl"))
        .args(args)
        .env_remove("ZTL_ZEROS_PATH")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn with_zeros<'a>(zeros: &'a str, limit: &'a str, rest: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec!["--zeros", zeros, "--zeros-limit", limit];
    v.extend_from_slice(rest);
    v
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&ztl(&["--help"])), 0);
    assert_eq!(code(&ztl(&["--version"])), 0);
    assert_eq!(code(&ztl(&["histogram", "--help"])), 0);
}

#[test]
fn compare_writes_one_row_per_x_and_height() {
    let z = zeros_file();
    let z = z.to_str().unwrap();
    let out = ztl(&with_zeros(
        z,
        "400",
        &["compare", "--k", "2", "--x", "1e4,1e5", "--T", "100,200,500"],
    ));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "k,x,T,n_zeros,R_direct,zero_sum,corrections,residual,envelope,ratio"
    );
    assert_eq!(lines.len(), 7);
    for row in &lines[1..] {
        let ratio: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(ratio < 1.0, "{row}");
    }
}

#[test]
fn trivial_denominator_flag_changes_only_corrections() {
    let z = zeros_file();
    let z = z.to_str().unwrap();
    let base = ["compare", "--k", "3", "--x", "1e4", "--T", "100"];
    let a = stdout(&ztl(&with_zeros(z, "100", &base)));
    let mut square = base.to_vec();
    square.extend(["--trivial-denominator", "square"]);
    let b = stdout(&ztl(&with_zeros(z, "100", &square)));
    let field = |s: &str, i: usize| s.lines().nth(1).unwrap().split(',').nth(i).unwrap().to_string();
    assert_eq!(field(&a, 5), field(&b, 5));
    assert_ne!(field(&a, 6), field(&b, 6));
}

#[test]
fn missing_zero_table_is_a_usage_error() {
    let out = ztl(&["compare", "--k", "2", "--x", "1e4", "--T", "100"]);
    assert_eq!(code(&out), 64);
    assert!(out.stdout.is_empty());
}

#[test]
fn zero_table_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ztl"))
        .args(["--zeros-limit", "50", "diagnostics", "--T", "100"])
        .env("ZTL_ZEROS_PATH", zeros_file())
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn out_of_range_orders_and_bins_are_usage_errors() {
    let z = zeros_file();
    let z = z.to_str().unwrap();
    assert_eq!(
        code(&ztl(&with_zeros(
            z,
            "50",
            &["compare", "--k", "1", "--x", "1e4", "--T", "100"]
        ))),
        64
    );
    assert_eq!(
        code(&ztl(&with_zeros(
            z,
            "50",
            &["compare", "--k", "9", "--x", "1e4", "--T", "100"]
        ))),
        64
    );
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.csv");
    let args = [
        "histogram",
        "--k",
        "2",
        "--T",
        "100",
        "--bins",
        "5",
        "--out",
        h.to_str().unwrap(),
    ];
    assert_eq!(code(&ztl(&with_zeros(z, "50", &args))), 64);
    assert!(!h.exists());
    assert_eq!(code(&ztl(&["sieve", "--n-max", "100", "--x", "1:2"])), 64);
}

#[test]
fn histogram_counts_cover_every_sample() {
    let z = zeros_file();
    let z = z.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.csv");
    let args = [
        "histogram",
        "--k",
        "2",
        "--T",
        "500",
        "--bins",
        "60",
        "--out",
        h.to_str().unwrap(),
    ];
    let out = ztl(&with_zeros(z, "300", &args));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&h).unwrap();
    let counts: Vec<u64> = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts.len(), 60);
    assert_eq!(counts.iter().sum::<u64>(), 10_000);
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("h.json")).unwrap()).unwrap();
    assert_eq!(meta["n"], 10_000);
    assert_eq!(meta["bins"], 60);
    assert!(meta["std"].as_f64().unwrap() > 0.0);
    assert_eq!(meta, serde_json::from_str::<serde_json::Value>(&stdout(&out)).unwrap());
}

#[test]
fn diagnostics_count_zeros_to_one_hundred() {
    let z = zeros_file();
    let z = z.to_str().unwrap();
    let out = ztl(&with_zeros(z, "100", &["diagnostics", "--T", "100"]));
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["zero_counts"][0]["observed"], 29);
    assert_eq!(v["zero_counts"][0]["within_bound"], true);
    assert_eq!(v["tail"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_zero_files_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing here\n").unwrap();
    let out = ztl(&["--zeros", empty.to_str().unwrap(), "diagnostics", "--T", "100"]);
    assert_eq!(code(&out), 3);
    assert!(out.stdout.is_empty());
    let shuffled = dir.path().join("shuffled.txt");
    std::fs::write(&shuffled, "21.022039639\n14.134725142\n").unwrap();
    assert_eq!(
        code(&ztl(&[
            "--zeros",
            shuffled.to_str().unwrap(),
            "diagnostics",
            "--T",
            "10"
        ])),
        3
    );
    let missing = dir.path().join("missing.txt");
    assert_eq!(
        code(&ztl(&[
            "--zeros",
            missing.to_str().unwrap(),
            "diagnostics",
            "--T",
            "100"
        ])),
        3
    );
}

#[test]
fn lost_precision_exits_two_without_output() {
    let out = ztl(&[
        "sieve",
        "--n-max",
        "10000000",
        "--k",
        "2",
        "--x",
        "1e7",
        "--precision",
        "standard",
    ]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let z = zeros_file();
    let z = z.to_str().unwrap();
    let runs = [
        with_zeros(z, "200", &["compare", "--k", "2,3", "--x", "1e3,1e4", "--T", "100,300"]),
        with_zeros(
            z,
            "200",
            &["charfn", "--k", "3", "--T", "300", "--y", "1:3000:1", "--t", "0:50:5"],
        ),
        vec!["sieve", "--n-max", "100000", "--k", "2,3"],
        vec!["perron-check", "--k", "2", "--x", "1000", "--T", "200"],
    ];
    for args in runs {
        let a = ztl(&args);
        let b = ztl(&args);
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn caches_round_trip() {
    let z = zeros_file();
    let z = z.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("zeros.csv");
    let cache = cache.to_str().unwrap();
    let args = ["compare", "--k", "2", "--x", "1e4", "--T", "150"];
    let mut cached = vec!["--cache", cache];
    cached.extend(with_zeros(z, "100", &args));
    let first = ztl(&cached);
    assert!(std::path::Path::new(cache).exists());
    let second = ztl(&cached);
    assert_eq!(code(&second), 0);
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("reading enriched zeros"));

    let sieve = dir.path().join("phi.bin");
    let sieve = sieve.to_str().unwrap();
    let a = ztl(&["--sieve-cache", sieve, "sieve", "--n-max", "50000"]);
    let b = ztl(&["--sieve-cache", sieve, "sieve", "--n-max", "20000"]);
    assert_eq!(code(&b), 0);
    assert!(stdout(&a).starts_with(&stdout(&b)));
}
