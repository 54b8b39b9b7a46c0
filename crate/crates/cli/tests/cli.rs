use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn abqaoa(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abqaoa"))
        .current_dir(dir)
        .env_remove("ABQAOA_OUT_DIR")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn graph_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> =
        fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|x| x == "graph")).collect();
    v.sort();
    v
}

fn edge_lines(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().skip(2).filter(|l| !l.trim().is_empty()).count()
}

#[test]
fn gen_writes_weighted_ensemble() {
    let dir = tempfile::tempdir().unwrap();
    let out = abqaoa(dir.path(), &["gen", "--n", "8", "--count", "40", "--weighted", "--seed", "3"]);
    ok(&out);
    let files = graph_files(dir.path());
    assert_eq!(files.len(), 40);
    for f in &files {
        assert_eq!(edge_lines(f), 12, "{}", f.display());
        for line in fs::read_to_string(f).unwrap().lines().skip(2) {
            let w: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
            assert!(w > 0.0 && w <= 1.0);
        }
    }
    assert!(dir.path().join("gen.manifest.toml").exists());
}

#[test]
fn gen_nonisomorphic_cubic_graphs_on_eight_vertices() {
    let dir = tempfile::tempdir().unwrap();
    ok(&abqaoa(dir.path(), &["gen", "--n", "8", "--nonisomorphic"]));
    assert_eq!(graph_files(dir.path()).len(), 5);
}

#[test]
fn impossible_graph_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = abqaoa(dir.path(), &["gen", "--n", "7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(graph_files(dir.path()).is_empty());
}

fn small_sweep(dir: &Path, mode: &str) -> Vec<u8> {
    ok(&abqaoa(dir, &["gen", "--n", "6", "--count", "2", "--weighted", "--seed", "9"]));
    let mut args = vec!["sweep", "--mode", mode, "--target-p", "2", "--restarts", "2", "--seed", "5"];
    let files: Vec<String> = graph_files(dir).iter().map(|p| p.display().to_string()).collect();
    args.extend(files.iter().map(String::as_str));
    ok(&abqaoa(dir, &args));
    fs::read(dir.join(format!("results-{mode}.csv"))).unwrap()
}

#[test]
fn sweeps_are_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(small_sweep(a.path(), "adaptive"), small_sweep(b.path(), "adaptive"));
}

#[test]
fn standard_rows_carry_zero_bias() {
    let dir = tempfile::tempdir().unwrap();
    let text = String::from_utf8(small_sweep(dir.path(), "standard")).unwrap();
    let rows: Vec<&str> = text.lines().skip(2).collect();
    assert_eq!(rows.len(), 4);
    for row in rows {
        let h = row.rsplit(',').next().unwrap();
        assert!(h.split_whitespace().all(|x| x.parse::<f64>().unwrap() == 0.0), "{row}");
    }
}

#[test]
fn rerun_reproduces_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let first = small_sweep(dir.path(), "adaptive");
    let replay = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("results-adaptive.manifest.toml");
    ok(&abqaoa(replay.path(), &["rerun", manifest.to_str().unwrap()]));
    assert_eq!(fs::read(replay.path().join("results-adaptive.csv")).unwrap(), first);
}

#[test]
fn out_dir_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("nested");
    let out = Command::new(env!("CARGO_BIN_EXE_abqaoa"))
        .current_dir(dir.path())
        .env("ABQAOA_OUT_DIR", &target)
        .args(["gen", "--n", "4", "--count", "2"])
        .output()
        .unwrap();
    ok(&out);
    assert_eq!(graph_files(&target).len(), 2);
    assert!(graph_files(dir.path()).is_empty());
}

#[test]
fn config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    ok(&abqaoa(dir.path(), &["gen", "--n", "4"]));
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "restarts = 2\nalpha = 0.5\nrestartz = 3\n").unwrap();
    let graph = graph_files(dir.path())[0].display().to_string();
    let out = abqaoa(dir.path(), &["sweep", "--config", cfg.to_str().unwrap(), &graph]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

fn synthetic_results(path: &Path, schema: &str) {
    let mut text = format!("# schema={schema}\ngraph_id,n,mode,level,e_best,e_opt,e_max,r,f,n_ite_mean,seed,h\n");
    for id in ["a", "b"] {
        for p in 2..=8 {
            let miss = (-(p as f64) / 2.0 + 1.0).exp();
            text.push_str(&format!("{id},4,standard,{p},-1,-2,2,{},{},10,0,0 0 0 0\n", 1.0 - miss, 1.0 - miss));
        }
    }
    fs::write(path, text).unwrap();
}

#[test]
fn report_recovers_a_known_decay() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("results.csv");
    synthetic_results(&results, "abqaoa-results/1");
    ok(&abqaoa(dir.path(), &["report", results.to_str().unwrap()]));
    let fits = fs::read_to_string(dir.path().join("fits.csv")).unwrap();
    let row = fits.lines().find(|l| l.starts_with("4,standard,accuracy,exp-linear")).expect(&fits);
    let cols: Vec<f64> = row.split(',').skip(4).map(|x| x.parse().unwrap()).collect();
    assert!((cols[0] - 2.0).abs() < 1e-9 && (cols[1] - 1.0).abs() < 1e-9, "{row}");
    assert!(dir.path().join("curves.csv").exists() && dir.path().join("p_star.csv").exists());
}

#[test]
fn report_rejects_a_foreign_schema() {
    let dir = tempfile::tempdir().unwrap();
    let results = dir.path().join("results.csv");
    synthetic_results(&results, "abqaoa-results/0");
    let out = abqaoa(dir.path(), &["report", results.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn landscape_writes_a_grid() {
    let dir = tempfile::tempdir().unwrap();
    ok(&abqaoa(dir.path(), &["gen", "--n", "4", "--seed", "1"]));
    let graph = graph_files(dir.path())[0].clone();
    let id = graph.file_stem().unwrap().to_str().unwrap().to_string();
    ok(&abqaoa(dir.path(), &["landscape", graph.to_str().unwrap(), "--resolution", "8", "--bias", "0.5"]));
    let text = fs::read_to_string(dir.path().join(format!("landscape-{id}.csv"))).unwrap();
    assert_eq!(text.lines().count(), 1 + 9 * 9);
}
