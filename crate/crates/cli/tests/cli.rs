use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mfgf::textio::{fmt_real, parse_real};

fn mfgf(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfgf"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("MFGF_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path).unwrap().lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn predict_writes_region_and_contour() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfgf(dir.path(), &["predict", "--values", "1,2,3,4", "--lo", "0", "--hi", "5", "--alpha", "0.2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let p = fs::read_to_string(dir.path().join("prediction_set.txt")).unwrap();
    assert!(p.contains("# k 4\n"));
    assert!(p.contains("# region 0 4\n"));
    assert!(p.contains(&format!("# nominal_coverage {}\n", fmt_real(0.8))));
    let focal = fs::read_to_string(dir.path().join("focal_sets.txt")).unwrap();
    assert_eq!(focal.lines().count(), 5);
    let contour = csv_rows(&dir.path().join("contour.csv"));
    assert_eq!(contour.len(), 1001);
    assert_eq!(contour[0], ["0", "1"]);
    assert_eq!(contour[1000][0], "5");
}

#[test]
fn predict_full_support_when_k_is_n_plus_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfgf(dir.path(), &["predict", "--values", "0.2,0.8", "--lo", "0", "--hi", "1", "--alpha", "0.3"]);
    assert!(o.status.success());
    let p = fs::read_to_string(dir.path().join("prediction_set.txt")).unwrap();
    assert!(p.contains("# k 3\n") && p.contains("# region 0 1\n") && p.contains("# nominal_coverage 1\n"));
}

#[test]
fn empty_data_file_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("empty.txt");
    fs::write(&data, "# nothing here\n\n").unwrap();
    let o = mfgf(dir.path(), &["predict", "--data", data.to_str().unwrap(), "--lo", "0", "--hi", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert_eq!(e.lines().count(), 1);
    assert!(e.starts_with("error: EmptySample:"), "{e}");
}

#[test]
fn missing_input_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfgf(dir.path(), &["predict", "--data", dir.path().join("nope").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error: Io:"));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = mfgf(&blocker.join("sub"), &["simulate", "--replications", "2", "--n-values", "5"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn bad_flags_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["predict", "--values", "0.5", "--lo", "0", "--hi", "1", "--alpha", "1.5"],
        vec!["predict", "--values", "0.5", "--lo", "0", "--hi", "1", "--score", "median"],
        vec!["predict", "--values", "7", "--lo", "0", "--hi", "1"],
        vec!["predict", "--frobnicate"],
        vec!["risk-curve", "--values", "0.5", "--lo", "0", "--hi", "1", "--loss", "hinge"],
    ] {
        let o = mfgf(dir.path(), &args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert_eq!(stderr(&o).lines().count(), 1);
    }
}

#[test]
fn risk_curve_row_and_domain_check() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["risk-curve", "--values", "0.2,0.8", "--lo", "0", "--hi", "1"];
    let o = mfgf(dir.path(), &[&base[..], &["--theta-lo", "0", "--theta-hi", "0", "--theta-count", "1"]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("risk_curve.csv")).unwrap();
    assert!(text.starts_with("theta,empirical,upper,true\n"));
    let rows = csv_rows(&dir.path().join("risk_curve.csv"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "0");
    assert!((parse_real(&rows[0][1]).unwrap() - 0.34).abs() < 1e-12);
    assert!((parse_real(&rows[0][2]).unwrap() - 0.56).abs() < 1e-12);
    assert_eq!(rows[0][3], "");

    let o = mfgf(dir.path(), &[&base[..], &["--theta-lo", "0", "--theta-hi", "2"]].concat());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ThetaOutOfDomain"));
}

#[test]
fn constant_loss_curve_is_flat_and_true_column_present() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfgf(
        dir.path(),
        &["risk-curve", "--values", "-1,0.5,2", "--loss", "constant:2.5", "--model", "truncnorm", "--theta-count", "7"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    for row in csv_rows(&dir.path().join("risk_curve.csv")) {
        for (i, v) in row.iter().enumerate().skip(1) {
            let tol = if i == 3 { 1e-8 } else { 1e-12 };
            assert!((parse_real(v).unwrap() - 2.5).abs() < tol, "{row:?}");
        }
    }
}

#[test]
fn emitted_numbers_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfgf(
        dir.path(),
        &["risk-curve", "--values", "-1.3,0.1,0.7,2.9", "--model", "truncnorm", "--theta-count", "31"],
    );
    assert!(o.status.success());
    for row in csv_rows(&dir.path().join("risk_curve.csv")) {
        for v in row {
            assert_eq!(fmt_real(parse_real(&v).unwrap()), v);
        }
    }
}

#[test]
fn simulate_inventory_and_single_replication_bands() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfgf(dir.path(), &["simulate", "--replications", "1", "--n-values", "20,200", "--svg"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut names: Vec<String> =
        fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.iter().filter(|n| n.ends_with(".csv")).count(), 10);
    assert!(names.contains(&"meta.json".to_string()));
    assert!(names.contains(&"risk_curves.svg".to_string()));
    assert!(names.contains(&"minimizer_histograms.svg".to_string()));
    for n in [20, 200] {
        let med = fs::read(dir.path().join(format!("median_n{n}.csv"))).unwrap();
        assert_eq!(med, fs::read(dir.path().join(format!("band_lo_n{n}.csv"))).unwrap());
        assert_eq!(med, fs::read(dir.path().join(format!("band_hi_n{n}.csv"))).unwrap());
    }
    let svg = fs::read_to_string(dir.path().join("risk_curves.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("viewBox=\"0 0 820 500\"") && !svg.contains("<script"));
}

#[test]
fn verify_bounds_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfgf(
        dir.path(),
        &["verify-bounds", "--domain-lo", "-1", "--domain-hi", "1", "--replications", "200", "--alpha", "0.05"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("bound_reports.json")).unwrap()).unwrap();
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 6);
    for r in reports {
        assert_eq!(r["threshold_met"], true);
        let (n, eps, l) = (r["n"].as_f64().unwrap(), r["epsilon"].as_f64().unwrap(), r["loss_range"].as_f64().unwrap());
        let expected = 2.0 * (-2.0 * n * eps * eps / (9.0 * l * l)).exp();
        assert!((r["bound"].as_f64().unwrap() - expected).abs() <= 1e-15 * expected.max(1.0));
    }
    assert!(dir.path().join("uniform_report.json").exists());

    let o =
        mfgf(dir.path(), &["verify-bounds", "--loss", "constant:4", "--replications", "100", "--n-values", "10,50"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("bound_reports.json")).unwrap()).unwrap();
    assert!(reports.as_array().unwrap().iter().all(|r| r["empirical_violation_rate"] == 0.0));
}

#[test]
fn coverage_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = mfgf(dir.path(), &["coverage", "--n-values", "4,20", "--alphas", "0.01,0.2", "--replications", "500"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("coverage.csv")).unwrap();
    assert!(text.starts_with("n,alpha,k,nominal,empirical,reps,score\n"));
    let rows = csv_rows(&dir.path().join("coverage.csv"));
    assert_eq!(rows.len(), 8);
    for r in rows.iter().filter(|r| r[0] == "4" && r[1] == "0.01") {
        assert_eq!((r[3].as_str(), r[4].as_str()), ("1", "1"));
    }
    let n20: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "20" && r[1] == fmt_real(0.2)).collect();
    assert_eq!(n20.len(), 2);
    assert_eq!(n20[0][3], n20[1][3]);
    assert!((parse_real(&n20[0][3]).unwrap() - 17.0 / 21.0).abs() < 1e-15);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# prediction settings\nvalues = 1,2,3,4\nlo = 0\nhi = 5\nalpha = 0.5\n").unwrap();
    let out = dir.path().join("o");
    let o = mfgf(&out, &["--config", cfg.to_str().unwrap(), "predict", "--alpha", "0.2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fs::read_to_string(out.join("prediction_set.txt")).unwrap().contains("# k 4\n"));

    fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let o = mfgf(&out, &["--config", cfg.to_str().unwrap(), "predict"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: InvalidConfig:"));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let o = Command::new(env!("CARGO_BIN_EXE_mfgf"))
        .args(["predict", "--values", "0.5", "--lo", "0", "--hi", "1"])
        .env("MFGF_OUT_DIR", &target)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(target.join("contour.csv").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["coverage", "--replications", "300", "--seed", "5"];
    assert!(mfgf(a.path(), &args).status.success());
    assert!(mfgf(b.path(), &[&args[..], &["--workers", "3"]].concat()).status.success());
    assert_eq!(fs::read(a.path().join("coverage.csv")).unwrap(), fs::read(b.path().join("coverage.csv")).unwrap());
}
