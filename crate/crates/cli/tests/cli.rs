use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn zerolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerolab")).args(args).output().expect("spawn zerolab")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const HEAD: &str = r#""schema_version": 1, "seed": 5, "weight": {"kind": "log_family", "alpha": 0.5}"#;

fn config(sequence: &str, experiments: &str) -> String {
    format!(r#"{{{HEAD}, "sequence": {sequence}, "experiments": [{experiments}]}}"#)
}

#[test]
fn validate_reports_fields_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.json", &config(r#"{"kind": "iid_gaussian"}"#, r#"{"type": "zero_count_sweep", "radii": [5]}"#));
    let out = zerolab(&["validate", "--config", &ok]);
    assert_eq!(out.status.code(), Some(0));

    let gauge = write(
        dir.path(),
        "gauge.json",
        &config(
            r#"{"kind": "iid_gaussian"}"#,
            r#"{"type": "sector_equidist", "r1": 5, "r2": 10, "sectors": 4, "gauge": {"kind": "power", "c": 0.6}}"#,
        ),
    );
    let out = zerolab(&["validate", "--config", &gauge]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("c must lie in (0, 1/2)"));

    let quad = write(dir.path(), "quad.json", &config(r#"{"kind": "quadratic"}"#, ""));
    let out = zerolab(&["validate", "--config", &quad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("sequence"));

    // `run` refuses the same config with the validation exit code.
    let out = zerolab(&["run", "--config", &gauge, "--out", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_experiment_list_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "empty.json", &config(r#"{"kind": "constant"}"#, ""));
    let out_dir = dir.path().join("out");
    let out = zerolab(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!out_dir.exists());
}

#[test]
fn run_is_reproducible_and_stamped() {
    let dir = tempfile::tempdir().unwrap();
    let experiments = r#"
        {"type": "zero_count_sweep", "radii": [4, 6]},
        {"type": "sector_equidist", "r1": 4, "r2": 6, "sectors": 4, "gauge": {"kind": "sqrt_log"}},
        {"type": "local_disks", "disks": 4, "r_min": 5, "r_max": 6, "gauge": {"kind": "sqrt_log"}},
        {"type": "correlation_suite", "x": 4096, "h_max": 8},
        {"type": "spectral_suite", "model": {"kind": "empirical", "n": 256}, "grid": 16},
        {"type": "weyl_scan", "radii": [5], "thetas": 8},
        {"type": "condition_check", "model": {"kind": "thue_morse", "c0": 1}, "radius": 100, "beta_exponent": 0.1, "q": 2, "test_function": "bump"},
        {"type": "transport_check", "source": {"kind": "zeros", "coverage": 7, "cell_diameter": 0.5}, "disks": 4, "r_min": 2, "r_max": 3, "disk_radius_max": 1, "gauge": {"kind": "constant", "rho0": 1}},
        {"type": "lattice_baseline", "random": 6}"#;
    let cfg = write(dir.path(), "all.json", &config(r#"{"kind": "iid_steinhaus"}"#, experiments));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = zerolab(&["run", "--config", &cfg, "--out", d.to_str().unwrap(), "--threads", "2"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 12, "{names:?}");
    for n in &names {
        let (x, y) = (fs::read(a.join(n)).unwrap(), fs::read(b.join(n)).unwrap());
        assert_eq!(x, y, "{n:?} differs between runs");
        let text = String::from_utf8(x).unwrap();
        if n.to_str().unwrap().ends_with(".csv") {
            let head = text.lines().next().unwrap();
            assert!(head.starts_with("# zerolab ") && head.contains("config_sha256=") && head.contains("seed=5"), "{head}");
        }
    }
    let summary: serde_json::Value = serde_json::from_slice(&fs::read(a.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 5);
    assert_eq!(summary["experiments"].as_array().unwrap().len(), 9);
    assert_eq!(summary["constants_sha256"].as_str().unwrap().len(), 64);

    let c = dir.path().join("c");
    zerolab(&["run", "--config", &cfg, "--out", c.to_str().unwrap(), "--seed", "6"]);
    let head = fs::read_to_string(c.join("00_zero_count_sweep.csv")).unwrap();
    assert!(head.lines().next().unwrap().ends_with("seed=6"));
}

#[test]
fn thue_morse_correlation_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "tm.json",
        &config(r#"{"kind": "thue_morse"}"#, r#"{"type": "correlation_suite", "x": 1048576, "h_max": 64}"#),
    );
    let out_dir = dir.path().join("out");
    let out = zerolab(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(out_dir.join("00_correlation_suite.csv")).unwrap();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 65);
    assert!(rows.iter().all(|r| &r[5] == "true"));
    assert_eq!(rdr.headers().unwrap().len(), 6);
    let sigma1: f64 = rows[1][2].parse().unwrap();
    assert!((sigma1 + 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn lattice_baseline_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "lat.json",
        &config(
            r#"{"kind": "constant"}"#,
            r#"{"type": "lattice_baseline", "regions": [{"kind": "disk", "center": [0, 0], "r": 10}]}"#,
        ),
    );
    let out_dir = dir.path().join("out");
    assert_eq!(zerolab(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()]).status.code(), Some(0));
    let text = fs::read_to_string(out_dir.join("00_lattice_baseline.csv")).unwrap();
    let row = text.lines().nth(2).unwrap();
    assert!(row.starts_with("disk,0 0 10,317,"), "{row}");
}

#[test]
fn module_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let out = zerolab(&["weights", "--r", "2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse::<f64>().unwrap().round(), 3.0);

    let bin = dir.path().join("s.bin");
    let out = zerolab(&["seq", "--sequence", r#"{"kind":"grs"}"#, "--n1", "16", "--format", "binary", "--output", bin.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let buf = zerolab::sequences::SequenceBuffer::read_binary(&bin).unwrap();
    assert_eq!(buf.len(), 16);

    let out = zerolab(&["zeros", "--sequence", r#"{"kind":"iid_gaussian"}"#, "--seed", "2", "--r", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let count = rep["count"].as_u64().unwrap();
    assert!((20..=28).contains(&count), "{count}");

    let out = zerolab(&["zeros", "--seed", "2", "--r", "5", "--localize", "0.5"]);
    let zeros = zerolab::zeros::read_zeros_csv(&out.stdout[..]).unwrap();
    assert_eq!(zeros.iter().map(|z| z.multiplicity).sum::<u64>(), count);

    let out = zerolab(&["corr", "--sequence", r#"{"kind":"thue_morse"}"#, "--x", "4096", "--h-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);

    let out = zerolab(&["equidist", "--r1", "4", "--r2", "6", "--sectors", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let out = zerolab(&["equidist", "--r1", "4", "--r2", "6", "--gauge", r#"{"kind":"power","c":0.6}"#]);
    assert_eq!(out.status.code(), Some(2));
}
