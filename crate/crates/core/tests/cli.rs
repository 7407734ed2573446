use std::path::Path;
use std::process::Command;

fn vqkan(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_vqkan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("experiment.toml");
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn oracle_square_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[graph]\nkind = \"square\"\nt = [0.0]\n");
    let out = vqkan(&["oracle", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read(&dir.path().join("out"), "oracle.csv"), "sample,path,length\n0,0-1-2-3-0,2.82842712474619\n");
}

#[test]
fn oracle_random_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[graph]\nkind = \"random\"\nseed = 42\nsites = 5\nsteps = 3\n");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(vqkan(&["oracle", "-c", &cfg, "-o", a.to_str().unwrap()]).status.success());
    assert!(vqkan(&["oracle", "-c", &cfg, "-o", b.to_str().unwrap()]).status.success());
    let text = read(&a, "oracle.csv");
    assert_eq!(text, read(&b, "oracle.csv"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn nine_site_file_hits_size_guard() {
    let dir = tempfile::tempdir().unwrap();
    let g = vqkan::TimedGraph::from_fn(9, 1, |j, k, _| (j + k) as f64).unwrap();
    g.store(dir.path().join("big.txt")).unwrap();
    let cfg = write_config(dir.path(), "[graph]\nkind = \"file\"\npath = \"big.txt\"\n");
    let out = vqkan(&["oracle", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size error"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[graph]\nkind = \"square\"\n[optimizer]\nseeds = []\n");
    let out = vqkan(&["run", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("optimizer.seeds"));

    let cfg = write_config(dir.path(), "[graph]\nkind = \"square\"\ncolour = \"red\"\n");
    let out = vqkan(&["run", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    assert_eq!(vqkan(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn malformed_graph_file_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("g.txt"), "3 1\n0 1 1\n1 0 1 5\n1 1 0\n").unwrap();
    let cfg = write_config(dir.path(), "[graph]\nkind = \"file\"\npath = \"g.txt\"\n");
    let out = vqkan(&["oracle", "-c", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn square_run_writes_six_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[graph]\nkind = \"square\"\n[optimizer]\nbudget = 50\n");
    let out = vqkan(&["run", "-c", &cfg]);
    assert!(out.status.success());
    let results = read(&dir.path().join("out"), "results.csv");
    let mut lines = results.lines();
    assert_eq!(lines.next(), Some("seed,sample,decode_mode,path,derived_length,oracle_length,gap"));
    assert_eq!(lines.count(), 6);
    let trials = read(&dir.path().join("out"), "trials.csv");
    assert!(trials.starts_with("seed,trial,loss,best_so_far\n"));
    assert_eq!(trials.lines().count(), 51);
}

#[test]
fn hexagon_gap_is_relative_to_ring() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[graph]\nkind = \"hexagon6\"\n[optimizer]\nbudget = 300\n");
    assert!(vqkan(&["run", "-c", &cfg]).status.success());
    let results = read(&dir.path().join("out"), "results.csv");
    let rows: Vec<&str> = results.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let cols: Vec<&str> = rows[0].split(',').collect();
    let derived: f64 = cols[4].parse().unwrap();
    assert_eq!(cols[5], "3");
    let gap: f64 = cols[6].parse().unwrap();
    assert!((gap - (derived - 3.0)).abs() < 1e-12);
    assert!(gap >= -1e-9);
}

#[test]
fn per_sample_mode_writes_one_trial_file_per_sample() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[graph]\nkind = \"random\"\nseed = 1\nsites = 4\nsteps = 2\n[loss]\njoint = false\n[optimizer]\nbudget = 30\nseeds = [3, 4]\n",
    );
    assert!(vqkan(&["run", "-c", &cfg]).status.success());
    let out = dir.path().join("out");
    for m in 0..2 {
        let t = read(&out, &format!("trials_sample{m}.csv"));
        assert_eq!(t.lines().count(), 1 + 2 * 30);
    }
    assert!(!out.join("trials.csv").exists());
}

#[test]
fn compare_rejects_six_sites() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[graph]\nkind = \"hexagon6\"\n");
    assert_eq!(vqkan(&["compare", "-c", &cfg]).status.code(), Some(3));
}
