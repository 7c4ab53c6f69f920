use std::path::Path;
use std::process::{Command, Output};

use graphdim::harness::{read_csv, CSV_COLUMNS};

fn graphdim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphdim")).args(args).output().unwrap()
}

fn rows(stdout: &[u8]) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(stdout);
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), CSV_COLUMNS);
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn cantor_counts_match_closed_forms() {
    let out = graphdim(&["cantor", "--n-max", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = rows(&out.stdout);
    let values: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(values, ["8.0", "8.0", "16.0", "64.0", "64.0", "160.0", "512.0", "512.0", "1792.0"]);
    assert!(rows.iter().all(|r| r[4] == "true" && r[5] == "1"));
}

#[test]
fn harmonic_liminf_near_one_half() {
    let out = graphdim(&["estimate", "--space", "harmonic", "--variant", "liminf", "--n", "4..12"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out.stdout);
    let dim = rows.iter().find(|r| r[0] == "estimate.dimension").unwrap();
    let v: f64 = dim[2].parse().unwrap();
    assert!((v - 0.5).abs() < 0.05, "{v}");
}

fn plot_slope(path: &Path, label: &str) -> f64 {
    let text = std::fs::read_to_string(path).unwrap();
    let mut pts = Vec::new();
    let mut inside = false;
    for line in text.lines() {
        if let Some(h) = line.strip_prefix("# series ") {
            inside = h.starts_with(&format!("{label} "));
            continue;
        }
        if line.starts_with('#') || line.is_empty() || !inside {
            continue;
        }
        let cols: Vec<f64> = line.split(' ').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 2);
        pts.push((cols[0], cols[1]));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn files_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let plot = dir.path().join("c.dat");
    let out = graphdim(&[
        "cantor",
        "--n-max",
        "2",
        "--fit",
        "3..6",
        "--out",
        csv.to_str().unwrap(),
        "--plot",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let table = read_csv(&csv).unwrap();
    assert!(table.iter().any(|r| r.experiment == "cantor.gap"));
    let text = std::fs::read_to_string(&plot).unwrap();
    assert!(text.starts_with("# experiment cantor\n# seed 1\n"));
    let s = plot_slope(&plot, "f");
    assert!((s - 8f64.ln() / 9f64.ln()).abs() < 0.02, "{s}");

    let plot = dir.path().join("i.dat");
    let out = graphdim(&["estimate", "--space", "interval", "--variant", "full-fit", "--plot", plot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!((plot_slope(&plot, "interval") - 1.0).abs() < 0.05);
}

#[test]
fn plot_of_non_series_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("x.dat");
    let out = graphdim(&["statement31", "--trials", "100", "--plot", plot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("scale series"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["estimate", "--bogus"],
        vec!["estimate", "--n", "7..3"],
        vec!["prevalence", "--trials", "0"],
        vec!["nosuch"],
        vec!["energy", "--min-depth", "5", "--depth", "3"],
        vec!["report", "--input", "/nonexistent/file.csv"],
    ] {
        let out = graphdim(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(graphdim(&["--help"]).status.code(), Some(0));
    assert_eq!(graphdim(&["--version"]).status.code(), Some(0));
}

#[test]
fn module_limits_surface_verbatim() {
    let out = graphdim(&["energy", "--depth", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--depth 5 is not available"), "{err}");
    // level 5 of the natural schedule needs more digits than a family may use
    let out = graphdim(&["energy", "--schedule", "natural", "--depth", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
}

#[test]
fn failing_rows_exit_one() {
    // the tolerance is impossible to meet
    let out = graphdim(&["estimate", "--space", "interval", "--n", "4..8", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL estimate.dimension"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# statement31 settings\nseed = 7\ntrials = 5000\nadversary = colliding\n").unwrap();
    let out = graphdim(&["statement31", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = rows(&out.stdout);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][5], "7");
    assert!(r[0][1].contains("\"trials\":5000") && r[0][1].contains("colliding"));

    let out = graphdim(&["statement31", "--config", cfg.to_str().unwrap(), "--seed", "8"]);
    assert_eq!(rows(&out.stdout)[0][5], "8");

    std::fs::write(&cfg, "seed 7\n").unwrap();
    assert_eq!(graphdim(&["statement31", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn report_merges_and_reflects_failures() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.csv");
    let bad = dir.path().join("bad.csv");
    let empty = dir.path().join("empty.csv");
    graphdim(&["cantor", "--n-max", "1", "--out", good.to_str().unwrap()]);
    graphdim(&["estimate", "--space", "interval", "--n", "4..8", "--tolerance", "0", "--out", bad.to_str().unwrap()]);
    std::fs::write(&empty, CSV_COLUMNS.join(",") + "\n").unwrap();

    let out = graphdim(&["report", "--input", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows(&out.stdout).len(), 3);

    let out = graphdim(&["report", "--input", &format!("{},{}", good.display(), bad.display())]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(rows(&out.stdout).len(), 3 + 6);

    let out = graphdim(&["report", "--input", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(rows(&out.stdout).is_empty());
}

#[test]
fn same_seed_same_bytes() {
    let args = ["prevalence", "--n", "5..5", "--trials", "20", "--drift", "sum", "--seed", "3"];
    let a = graphdim(&args);
    let b = graphdim(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = graphdim(&["prevalence", "--n", "5..5", "--trials", "20", "--drift", "sum", "--seed", "4"]);
    assert!(String::from_utf8_lossy(&c.stdout).contains(",4,"));
}
