use std::path::Path;
use std::process::{Command, Output};

fn arealab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_arealab"));
    cmd.args(args).env_remove("AREALAB_THREADS");
    if let Some(t) = threads {
        cmd.env("AREALAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_shows_sixteen_kinds() {
    let o = arealab(&["list"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 16);
    assert!(text.lines().any(|l| l.starts_with("disorder")));
}

#[test]
fn describe_names_the_claims() {
    let topo = stdout(&arealab(&["describe", "topo"], None));
    assert!(topo.contains("Kitaev-Preskill"));
    let xx = stdout(&arealab(&["describe", "xx-scaling"], None));
    assert!(xx.contains("1/3"));
    assert!(xx.contains("n_sites"));
    let bad = arealab(&["describe", "xy-scaling"], None);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("kind"));
}

#[test]
fn unknown_kind_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"kind": "warp-drive"}"#);
    let o = arealab(&["run", &cfg], None);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("config error at kind"), "{err}");
}

#[test]
fn bad_parameter_names_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"kind": "kg-divergence", "params": {"mass": [1, -2]}}"#);
    let o = arealab(&["run", &cfg], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("params.mass[1]"));
}

#[test]
fn constant_symbol_run_writes_unit_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let body = format!(
        r#"{{"kind": "fh-check", "params": {{"symbol": "constant"}}, "output_dir": {:?}}}"#,
        out.to_str().unwrap()
    );
    let cfg = write_config(dir.path(), &body);
    let o = arealab(&["run", &cfg], Some("2"));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("PASS C7.constant"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let csv_name = report["csv"].as_str().unwrap();
    let hash = report["provenance"]["config_hash"].as_str().unwrap();
    assert_eq!(csv_name, format!("fh-check-{hash}.csv"));
    assert_eq!(report["verdicts"].as_array().unwrap().len(), 1);

    let mut rd = csv::Reader::from_path(out.join(csv_name)).unwrap();
    let ratio = rd.headers().unwrap().iter().position(|h| h == "ratio").unwrap();
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let v: f64 = r[ratio].parse().unwrap();
        assert!((v - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn xx_defaults_cover_the_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("xx");
    let body = format!(r#"{{"kind": "xx-scaling", "params": {{}}, "output_dir": {:?}}}"#, out.to_str().unwrap());
    let o = arealab(&["run", &write_config(dir.path(), &body)], None);
    assert_eq!(o.status.code(), Some(0));
    let csv_path = std::fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|e| e == "csv"))
        .unwrap();
    let mut rd = csv::Reader::from_path(csv_path).unwrap();
    let ns: Vec<usize> = rd.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
    assert_eq!(ns.first(), Some(&16));
    assert_eq!(ns.last(), Some(&128));
    assert!(ns.windows(2).all(|w| w[1] == w[0] + 8));
}

#[test]
fn failing_verdict_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    // bulk blocks on a torus give a band near 1.36
    let body = format!(
        r#"{{"kind": "area-2d-boson", "params": {{"side": 12, "boundary": "periodic", "blocks": [2, 3, 4, 5, 6, 7, 8, 9, 10]}}, "output_dir": {:?}}}"#,
        out.to_str().unwrap()
    );
    let o = arealab(&["run", &write_config(dir.path(), &body)], None);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL C8.boson_band"));
}

#[test]
fn invalid_thread_count_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"kind": "topo"}"#);
    for bad in ["0", "two", "-1"] {
        let o = arealab(&["run", &cfg], Some(bad));
        assert_eq!(o.status.code(), Some(1));
        assert!(String::from_utf8_lossy(&o.stderr).contains("AREALAB_THREADS"));
    }
}
