//! End-to-end runs of the command-line entry point: exit codes, file formats
//! and manifest hashes.

use std::fs;
use std::path::Path;

use elliptic_sync::cli::run;

fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let out = dir.to_str().unwrap();
    let mut v = vec!["elliptic-sync", "--out", out];
    v.extend_from_slice(args);
    run(v)
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

fn manifest_hash(dir: &Path) -> String {
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    m["sha256"].as_str().unwrap().to_string()
}

#[test]
fn analytic_points_writes_stamped_csv() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run_in(tmp.path(), &["analytic-points", "--preset", "table1"]), 0);
    let hash = manifest_hash(tmp.path());
    assert_eq!(hash.len(), 64);
    let csv = tmp.path().join("analytic_points.csv");
    assert_eq!(first_line(&csv), format!("# manifest_sha256={hash}"));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["manifest_sha256"], hash.as_str());

    let text = fs::read_to_string(&csv).unwrap();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().clone();
    let r_col = header.iter().position(|h| h == "r").unwrap();
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert!(!rows.is_empty());
    for row in &rows {
        let r = &row[r_col];
        // Seventeen significant digits in scientific notation.
        assert_eq!(r.split('e').next().unwrap().replace(['-', '.'], "").len(), 17, "{r}");
    }
}

#[test]
fn reproduce_table_passes_and_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run_in(a.path(), &["reproduce", "table2"]), 0);
    assert_eq!(run_in(b.path(), &["reproduce", "table2"]), 0);
    assert_eq!(manifest_hash(a.path()), manifest_hash(b.path()));
    assert_eq!(
        fs::read(a.path().join("report.csv")).unwrap(),
        fs::read(b.path().join("report.csv")).unwrap()
    );
}

#[test]
fn seeded_simulation_is_reproducible() {
    let args = [
        "simulate", "--preset", "fig3", "--seed", "5", "--set", "integrator.t_end=20",
        "--set", "integrator.sample_dt=0.5",
    ];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(run_in(a.path(), &args), 0);
    assert_eq!(run_in(b.path(), &args), 0);
    let ta = fs::read_to_string(a.path().join("trajectory.csv")).unwrap();
    assert_eq!(ta, fs::read_to_string(b.path().join("trajectory.csv")).unwrap());
    assert_eq!(ta.lines().nth(1).unwrap(), "t,x_1,y_1,u_1,x_2,y_2,u_2,d_12");
    assert_eq!(ta.lines().count(), 2 + 41);

    let c = tempfile::tempdir().unwrap();
    let mut other = args;
    other[4] = "6";
    assert_eq!(run_in(c.path(), &other), 0);
    assert_ne!(manifest_hash(a.path()), manifest_hash(c.path()));
}

#[test]
fn config_file_and_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("s.cfg");
    fs::write(&cfg, "# pair at the slower rate\npreset = fig4\nmodel.eta = 0.01   # trailing\n").unwrap();
    let out = tmp.path().join("out");
    let code = run([
        "elliptic-sync", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
        "--set", "integrator.t_end=5", "simulate",
    ]);
    assert_eq!(code, 0);
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["model.eta"], "0.01");
    assert_eq!(m["config"]["coupling.kappa2"], "-0.2");
    assert_eq!(m["config"]["integrator.t_end"], "5.0");
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path();
    assert_eq!(run_in(p, &["simulate", "--set", "model.nope=1"]), 2);
    assert_eq!(run_in(p, &["simulate", "--set", "integrator.t_end=0"]), 2);
    assert_eq!(run_in(p, &["simulate", "--set", "model.sigma=abc"]), 2);
    assert_eq!(run_in(p, &["reproduce", "fig99"]), 2);
    assert_eq!(run_in(p, &["simulate", "--preset", "nope"]), 2);
    assert_eq!(run_in(p, &["no-such-command"]), 2);
    assert_eq!(
        run_in(p, &["simulate", "--set", "integrator.noise_amplitude=0", "--set", "integrator.max_steps=10"]),
        3
    );
    let missing = p.join("missing.cfg");
    assert_eq!(run(["elliptic-sync", "--config", missing.to_str().unwrap(), "simulate"]), 2);
}
