//! End-to-end tests of the spreadnet binary: flag handling, output shapes,
//! error paths, and byte-level determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spreadnet"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_k4(dir: &Path) -> PathBuf {
    let path = dir.join("k4.txt");
    fs::write(&path, "a b\na c\na d\nb c\nb d\nc d\n").unwrap();
    path
}

fn write_triangle(dir: &Path) -> PathBuf {
    let path = dir.join("tri.txt");
    fs::write(&path, "x y\ny z\nz x\n").unwrap();
    path
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn stats_k4_row() {
    let tmp = tempfile::tempdir().unwrap();
    write_k4(tmp.path());
    let out = run(&["stats", "k4.txt", "--out", "o"], tmp.path());
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("o/stats_k4.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "name,nodes,edges,density,beta_prime,lambda,r_squared,mean_degree,second_moment,max_shell"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[..4], &["k4", "4", "6", "1"]);
    assert_eq!(row[9], "3"); // max shell
}

#[test]
fn malformed_file_reports_line_number() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("bad.txt"), "a b\nc d e\n").unwrap();
    let out = run(&["stats", "bad.txt"], tmp.path());
    assert!(!out.status.success());
    let msg = stderr(&out);
    assert!(msg.contains("line 2"), "missing line number: {msg}");
}

#[test]
fn missing_file_fails() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["stats", "nope.txt"], tmp.path());
    assert!(!out.status.success());
    assert!(stderr(&out).contains("nope.txt"));
}

#[test]
fn unknown_measure_lists_valid_tokens() {
    let tmp = tempfile::tempdir().unwrap();
    write_k4(tmp.path());
    let out = run(&["centrality", "k4.txt", "--measures", "katz"], tmp.path());
    assert!(!out.status.success());
    let msg = stderr(&out);
    assert!(msg.contains("katz"), "{msg}");
    assert!(msg.contains("eigenvector"), "should list valid tokens: {msg}");
}

#[test]
fn measures_all_writes_ten_csvs() {
    let tmp = tempfile::tempdir().unwrap();
    write_k4(tmp.path());
    let out = run(
        &["centrality", "k4.txt", "--measures", "all", "--out", "o"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let files: Vec<_> = fs::read_dir(tmp.path().join("o"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with("centrality_k4_"))
        .collect();
    assert_eq!(files.len(), 10, "{files:?}");
}

#[test]
fn spread_at_full_transmission_hits_component_size() {
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    let out = run(
        &[
            "spread", "tri.txt", "--beta-percent", "100", "--runs", "20", "--seed", "1",
            "--out", "o",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("o/spread_tri_bp100.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], "3");
        assert_eq!(cols[2], "0");
    }
}

#[test]
fn spread_beta_multiple_records_resolved_percent() {
    let tmp = tempfile::tempdir().unwrap();
    // star with 10 leaves: threshold = 2/9, so 1.1x = 24.44..%
    let mut text = String::new();
    for i in 1..=10 {
        text.push_str(&format!("hub leaf{i}\n"));
    }
    fs::write(tmp.path().join("star.txt"), text).unwrap();
    let out = run(
        &[
            "spread", "star.txt", "--beta-multiple", "1.1", "--runs", "10", "--seed", "2",
            "--out", "o",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("o/spread_star_bm1.1.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let pct: f64 = row[4].parse().unwrap();
    // threshold 2/9, times 1.1, in percent
    assert!((pct - 220.0 / 9.0).abs() < 1e-9, "resolved percent {pct}");
}

#[test]
fn same_seed_same_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    let args = [
        "spread", "tri.txt", "--beta-percent", "40", "--runs", "300", "--seed", "9",
    ];
    let a = run(&[&args[..], &["--out", "a"]].concat(), tmp.path());
    let b = run(&[&args[..], &["--out", "b"]].concat(), tmp.path());
    assert!(a.status.success() && b.status.success());
    let fa = fs::read(tmp.path().join("a/spread_tri_bp40.csv")).unwrap();
    let fb = fs::read(tmp.path().join("b/spread_tri_bp40.csv")).unwrap();
    assert_eq!(fa, fb);
}

#[test]
fn rerun_overwrites_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    let args = [
        "spread", "tri.txt", "--beta-percent", "40", "--runs", "100", "--seed", "5",
        "--out", "o",
    ];
    assert!(run(&args, tmp.path()).status.success());
    let first = fs::read(tmp.path().join("o/spread_tri_bp40.csv")).unwrap();
    assert!(run(&args, tmp.path()).status.success());
    let second = fs::read(tmp.path().join("o/spread_tri_bp40.csv")).unwrap();
    assert_eq!(first, second);
}

#[test]
fn oracle_triangle_at_half() {
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    let out = run(
        &["oracle", "tri.txt", "--beta-percent", "50", "--out", "o"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("o/oracle_tri_bp50.csv")).unwrap();
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[1], "2.25");
        assert_eq!(cols[3], "0"); // runs column is 0 for exact values
        rows += 1;
    }
    assert_eq!(rows, 3);
}

#[test]
fn oracle_beta_zero_gives_ones() {
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    let out = run(
        &["oracle", "tri.txt", "--beta-percent", "0", "--out", "o"],
        tmp.path(),
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(tmp.path().join("o/oracle_tri_bp0.csv")).unwrap();
    for line in csv.lines().skip(1) {
        assert_eq!(line.split(',').nth(1).unwrap(), "1");
    }
}

#[test]
fn oracle_rejects_oversized_graph() {
    let tmp = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for i in 0..30 {
        text.push_str(&format!("n{i} n{}\n", i + 1));
    }
    fs::write(tmp.path().join("big.txt"), text).unwrap();
    let out = run(&["oracle", "big.txt", "--beta-percent", "50"], tmp.path());
    assert!(!out.status.success());
    let msg = stderr(&out);
    assert!(msg.contains("24"), "should name the bound: {msg}");
}

#[test]
fn oracle_single_node_filter() {
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    let out = run(
        &[
            "oracle", "tri.txt", "--beta-percent", "50", "--node", "y", "--out", "o",
        ],
        tmp.path(),
    );
    assert!(out.status.success());
    let csv = fs::read_to_string(tmp.path().join("o/oracle_tri_bp50.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv.lines().nth(1).unwrap().starts_with("y,"));
}

#[test]
fn imprecision_zero_curve_at_full_transmission() {
    // at beta = 100% every spread equals N, so every measure's curve is 0
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    let out = run(
        &[
            "imprecision", "tri.txt", "--measures", "degree,kshell",
            "--beta-percent", "100", "--runs", "30", "--seed", "4", "--out", "o",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("o/imprecision_tri.csv")).unwrap();
    let mut data_rows = 0;
    for line in csv.lines().skip(1) {
        assert!(line.ends_with(",0"), "nonzero epsilon in: {line}");
        data_rows += 1;
    }
    assert_eq!(data_rows, 2 * 10); // two measures, default p grid 1..=10
}

#[test]
fn imprecision_two_networks_emit_average_rows() {
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    write_k4(tmp.path());
    let out = run(
        &[
            "imprecision", "tri.txt", "k4.txt", "--measures", "degree",
            "--beta-percent", "60", "--runs", "50", "--seed", "8", "--out", "o",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let avg = fs::read_to_string(tmp.path().join("o/imprecision_average.csv")).unwrap();
    let rows: Vec<&str> = avg.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.starts_with("__average__,degree,")));
}

#[test]
fn imprecision_beta_sweep_shape() {
    let tmp = tempfile::tempdir().unwrap();
    // star: threshold 2/9, multiples up to 2.0 stay below 1
    let mut text = String::new();
    for i in 1..=10 {
        text.push_str(&format!("hub leaf{i}\n"));
    }
    fs::write(tmp.path().join("star.txt"), text).unwrap();
    let out = run(
        &[
            "imprecision", "star.txt", "--measures", "degree,kshell", "--x", "beta",
            "--p", "5", "--runs", "40", "--seed", "6", "--out", "o",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("o/imprecision_star.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    // default sweep grid is ten multiples, 1.1 .. 2.0
    assert_eq!(rows.len(), 2 * 10);
    assert!(rows.iter().all(|r| r.contains(",beta_percent,")));
}

#[test]
fn imprecision_diff_rows_present() {
    let tmp = tempfile::tempdir().unwrap();
    write_k4(tmp.path());
    let out = run(
        &[
            "imprecision", "k4.txt", "--measures", "kshell,eigenvector",
            "--beta-percent", "50", "--runs", "40", "--seed", "2",
            "--diff", "kshell-eigenvector", "--out", "o",
        ],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = fs::read_to_string(tmp.path().join("o/imprecision_k4.csv")).unwrap();
    let diff_rows: Vec<&str> = csv
        .lines()
        .filter(|l| l.starts_with("__diff__,kshell-eigenvector,"))
        .collect();
    assert_eq!(diff_rows.len(), 10);
}

#[test]
fn imprecision_requires_seed() {
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    let out = run(
        &["imprecision", "tri.txt", "--beta-percent", "50"],
        tmp.path(),
    );
    assert!(!out.status.success());
    assert!(stderr(&out).contains("seed"));
}

#[test]
fn zero_runs_is_a_clean_error() {
    let tmp = tempfile::tempdir().unwrap();
    write_triangle(tmp.path());
    let out = run(
        &[
            "spread", "tri.txt", "--beta-percent", "50", "--runs", "0", "--seed", "1",
        ],
        tmp.path(),
    );
    assert!(!out.status.success());
    assert!(stderr(&out).contains("runs"));
}

#[test]
fn config_file_round_trips_through_dump() {
    let tmp = tempfile::tempdir().unwrap();
    write_k4(tmp.path());
    fs::write(
        tmp.path().join("exp.cfg"),
        "networks = k4.txt\nmeasures = degree,kshell\nruns = 77\nseed = 13\nout = o\n",
    )
    .unwrap();
    let out = run(
        &["stats", "--config", "exp.cfg", "--dump-config", "dump1.cfg"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(
        &["stats", "--config", "dump1.cfg", "--dump-config", "dump2.cfg"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let d1 = fs::read(tmp.path().join("dump1.cfg")).unwrap();
    let d2 = fs::read(tmp.path().join("dump2.cfg")).unwrap();
    assert_eq!(d1, d2);
}

#[test]
fn flags_override_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    write_k4(tmp.path());
    write_triangle(tmp.path());
    fs::write(tmp.path().join("exp.cfg"), "networks = k4.txt\nout = cfgdir\n").unwrap();
    let out = run(
        &["stats", "tri.txt", "--config", "exp.cfg", "--out", "flagdir"],
        tmp.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(tmp.path().join("flagdir/stats_tri.csv").exists());
    assert!(!tmp.path().join("cfgdir").exists());
}

#[test]
fn env_overrides_config_but_not_flags() {
    let tmp = tempfile::tempdir().unwrap();
    write_k4(tmp.path());
    fs::write(tmp.path().join("exp.cfg"), "networks = k4.txt\nout = cfgdir\n").unwrap();
    let out = bin()
        .args(["stats", "--config", "exp.cfg"])
        .env("SPREADNET_OUT", "envdir")
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(tmp.path().join("envdir/stats_k4.csv").exists());

    let out = bin()
        .args(["stats", "--config", "exp.cfg", "--out", "flagdir"])
        .env("SPREADNET_OUT", "envdir2")
        .current_dir(tmp.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(tmp.path().join("flagdir/stats_k4.csv").exists());
    assert!(!tmp.path().join("envdir2").exists());
}

#[test]
fn cache_is_reused_across_imprecision_runs() {
    let tmp = tempfile::tempdir().unwrap();
    write_k4(tmp.path());
    let args = [
        "imprecision", "k4.txt", "--measures", "degree", "--beta-percent", "50",
        "--runs", "60", "--seed", "21", "--out", "o",
    ];
    assert!(run(&args, tmp.path()).status.success());
    let cache_dir = tmp.path().join("o/cache");
    let entries: Vec<_> = fs::read_dir(&cache_dir).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let first = fs::read_to_string(tmp.path().join("o/imprecision_k4.csv")).unwrap();
    let cache_mtime = fs::metadata(entries[0].as_ref().unwrap().path())
        .unwrap()
        .modified()
        .unwrap();

    assert!(run(&args, tmp.path()).status.success());
    let second = fs::read_to_string(tmp.path().join("o/imprecision_k4.csv")).unwrap();
    assert_eq!(first, second);
    let cache_mtime_after = fs::metadata(entries[0].as_ref().unwrap().path())
        .unwrap()
        .modified()
        .unwrap();
    assert_eq!(cache_mtime, cache_mtime_after, "cache entry was recomputed");
}
