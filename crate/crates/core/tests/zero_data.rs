use num_complex::Complex64;
use ztl::zeros::{
    derivative_scan, ingest_zero_table, j_minus_one_scan, read_cache, write_cache, zero_count_check, ZeroTable,
};
use ztl::zeta::{locate_zeros, zeta};

fn data_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/zeros_2100.txt")
}

fn first_thousand() -> ZeroTable {
    let raw = ingest_zero_table(data_path(), None).unwrap();
    let n = raw.count_up_to(1000.0);
    raw.truncated(n).enrich(&[2, 3]).unwrap()
}

#[test]
fn shipped_table_counts_match_located_zeros() {
    let table = ingest_zero_table(data_path(), None).unwrap();
    assert_eq!(table.len(), 1609);
    let located = locate_zeros(0.0, 500.0).unwrap();
    for t in [50.0, 100.0, 250.0, 500.0] {
        let by_grid = located.iter().filter(|&&g| g <= t).count();
        assert_eq!(table.count_up_to(t), by_grid, "T = {t}");
        let report = zero_count_check(&table, t).unwrap();
        assert!(report.within_bound, "{report:?}");
    }
    assert_eq!(table.count_up_to(100.0), 29);
}

#[test]
fn enriched_zeros_are_certified_and_simple() {
    let table = first_thousand();
    for r in &table.records {
        let z = zeta(Complex64::new(0.5, r.gamma)).unwrap().norm();
        assert!(z <= 1e-5, "gamma = {}: |zeta| = {z:e}", r.gamma);
        assert!(r.zeta_prime().unwrap().norm() >= 1e-8);
    }
    let scan = j_minus_one_scan(&table, &[250.0, 500.0, 1000.0]).unwrap();
    assert!(scan.windows(2).all(|w| w[1].j_minus_one > w[0].j_minus_one));
    let d = derivative_scan(&table).unwrap();
    assert!(d.max_ratio_040.is_finite() && d.argmax_gamma_040 < 100.0, "{d:?}");
}

#[test]
fn cache_reload_gives_identical_zero_sums() {
    let table = first_thousand().truncated(200);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.csv");
    write_cache(&table, &path).unwrap();
    let back = read_cache(&path, &[2, 3]).unwrap();
    let a = ztl::explicit::zero_sum(&table, 2, 5.0e4, 300.0).unwrap();
    let b = ztl::explicit::zero_sum(&back, 2, 5.0e4, 300.0).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
}

#[test]
fn empty_and_malformed_files_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# nothing here\n").unwrap();
    let e = ingest_zero_table(&empty, None).unwrap_err();
    assert!(e.is_data_error(), "{e}");
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "14.1347\n21.0220\n20.0\n").unwrap();
    let e = ingest_zero_table(&bad, None).unwrap_err();
    assert!(e.is_data_error(), "{e}");
}
