use std::process::{Command, Output};

fn szego(args: &[&str], cache: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_szego"))
        .args(args)
        .env("SZEGO_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn gamma_at_zero_is_all_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(&["gamma", "--beta", "0"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["gamma_closed", "gamma_integral", "gamma_fg"] {
        assert_eq!(v[key], serde_json::json!([0.0, 0.0]), "{key}");
    }
    assert_eq!(v["max_pairwise_gap"], 0.0);
}

#[test]
fn gamma_at_one_and_at_i() {
    let dir = tempfile::tempdir().unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&szego(&["gamma", "--beta", "1"], dir.path()))).unwrap();
    assert_eq!(v["gamma_closed"][0], -0.75);
    assert!((v["gamma_integral"][0].as_f64().unwrap() + 0.75).abs() < 1e-10);
    let v: serde_json::Value = serde_json::from_str(&stdout(&szego(&["gamma", "--beta", "0,1"], dir.path()))).unwrap();
    assert!(v["gamma_closed"][1].as_f64().unwrap() != 0.0);
    assert!(v["max_pairwise_gap"].as_f64().unwrap() < 1e-10);
}

#[test]
fn forbidden_beta_is_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(&["gamma", "--beta", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("forbidden cut"));
    assert_eq!(
        szego(&["converge", "--beta", "1.5", "--dyadic", "4..5"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(szego(&["limit", "--dyadic", "9..4"], dir.path()).status.code(), Some(2));
    assert_eq!(szego(&["verify", "--suite", "nope"], dir.path()).status.code(), Some(2));
}

#[test]
fn converge_at_zero_has_zero_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(&["converge", "--beta", "0", "--dyadic", "4..7"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,n,logdet_re,logdet_im,residual_re,residual_im"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let cells: Vec<f64> = row.split(',').skip(4).map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells, vec![0.0, 0.0]);
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("max|residual|"));
}

#[test]
fn output_is_identical_with_and_without_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["converge", "--beta", "0.5,0.5", "--alpha", "0.5", "--dyadic", "4..11"];
    let cold = stdout(&szego(&args, dir.path()));
    let warm = stdout(&szego(&args, dir.path()));
    let mut uncached: Vec<&str> = args.to_vec();
    uncached.push("--no-cache");
    let fresh = stdout(&szego(&uncached, dir.path()));
    assert_eq!(cold, warm);
    assert_eq!(cold, fresh);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 8);
}

#[test]
fn limit_ratio_moves_toward_three_quarters() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("limit.csv");
    let o = szego(
        &[
            "limit",
            "--alpha",
            "0.5",
            "--dyadic",
            "4..12",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let text = std::fs::read_to_string(out).unwrap();
    let ratios: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(6).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 9);
    assert!((ratios[8] + 0.75).abs() < (ratios[0] + 0.75).abs());
}

#[test]
fn even_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(&["even", "--m", "1", "--n", "8,16", "--format", "json"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "even");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn carleman_kernel_grid_has_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(&["kernels", "--kind", "carleman", "--grid", "0.5:10:100"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 101);
    let first: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(first, vec![0.5, 0.0, 2.0, 0.0]);
    let o = szego(&["kernels", "--kind", "hankel-g", "--grid", "-1:1:3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = szego(&["verify", "--suite", "integrals"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().all(|l| l.starts_with("PASS integrals/")));
    let o = szego(&["verify", "--seed", "3"], dir.path());
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}
