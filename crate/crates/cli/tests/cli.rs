use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use serde_json::Value;

fn fpc_lab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpc-lab"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_graph_writes_carpet_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = fpc_lab(dir.path(), &["build-graph", "--b", "3", "--c", "1", "--level", "1", "--out", "g.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let g = json(&dir.path().join("g.json"));
    assert_eq!(g["vertices"].as_array().unwrap().len(), 16);
    assert!(dir.path().join("g.json.manifest.json").exists());

    let o = fpc_lab(dir.path(), &["build-graph", "--b", "3", "--c", "1", "--level", "0", "--out", "unit.json"]);
    assert!(o.status.success());
    let g = json(&dir.path().join("unit.json"));
    assert_eq!(g["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(g["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn odd_difference_is_an_argument_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = fpc_lab(dir.path(), &["build-graph", "--b", "4", "--c", "1", "--out", "g.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("must be even"), "{}", stderr(&o));
}

#[test]
fn malformed_flags_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(fpc_lab(dir.path(), &["barrier", "--b", "three"]).status.code(), Some(2));
    assert_eq!(fpc_lab(dir.path(), &["no-such-command"]).status.code(), Some(2));
}

#[test]
fn code_params_closed_forms() {
    let dir = tempfile::tempdir().unwrap();
    for (b, c, l, n) in [("14", "12", "0", 33u64), ("14", "12", "1", 37_856), ("3", "1", "4", 143_857_216)] {
        let o = fpc_lab(
            dir.path(),
            &["code-params", "--b", b, "--c", c, "--level", l, "--formula-only", "--out", "p.json"],
        );
        assert!(o.status.success());
        assert_eq!(json(&dir.path().join("p.json"))["n"], n);
    }
}

#[test]
fn code_params_checks_ranks_and_gates_size() {
    let dir = tempfile::tempdir().unwrap();
    let o = fpc_lab(dir.path(), &["code-params", "--b", "3", "--c", "1", "--level", "1", "--out", "p.json"]);
    assert!(o.status.success());
    let p = json(&dir.path().join("p.json"));
    assert_eq!(p["k_ranks"], 2);
    assert_eq!(p["agree"], true);

    let o = fpc_lab(dir.path(), &["code-params", "--b", "3", "--c", "1", "--level", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("--force"));
}

#[test]
fn verify_passes_and_names_a_corrupted_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let o = fpc_lab(dir.path(), &["verify", "--b", "3", "--c", "1", "--level", "0"]);
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));

    let o = fpc_lab(dir.path(), &["verify", "--b", "3", "--c", "1", "--level", "1"]);
    assert!(o.status.success(), "{}", stdout(&o));

    let o = fpc_lab(
        dir.path(),
        &["code-params", "--b", "3", "--c", "1", "--level", "1", "--export-matrix", "code"],
    );
    assert!(o.status.success());
    let o = fpc_lab(dir.path(), &["verify", "--code-dir", "code"]);
    assert!(o.status.success(), "{}", stdout(&o));

    // Add one entry to the first X row so it overlaps some Z row oddly.
    let hx = dir.path().join("code/hx.txt");
    let text = fs::read_to_string(&hx).unwrap();
    let mut lines = text.lines();
    let header: Vec<usize> = lines.next().unwrap().split(' ').map(|t| t.parse().unwrap()).collect();
    let mut entries: Vec<(usize, usize)> = lines
        .map(|l| {
            let (a, b) = l.split_once(' ').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    let free = (0..header[1]).find(|&c| !entries.contains(&(0, c))).unwrap();
    entries.push((0, free));
    entries.sort_unstable();
    let mut out = format!("{} {} {}\n", header[0], header[1], entries.len());
    for (a, b) in entries {
        out.push_str(&format!("{a} {b}\n"));
    }
    fs::write(&hx, out).unwrap();
    let o = fpc_lab(dir.path(), &["verify", "--code-dir", "code"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL stabilizers commute"), "{}", stdout(&o));
}

#[test]
fn dualize_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cycle = r#"{"spins":4,"interactions":[
        {"support":[0,1],"k":0.3},{"support":[1,2],"k":0.3},
        {"support":[2,3],"k":0.3},{"support":[0,3],"k":0.3}]}"#;
    fs::write(dir.path().join("cycle.json"), cycle).unwrap();
    let o = fpc_lab(dir.path(), &["dualize", "--model", "cycle.json", "--out", "d.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let d = json(&dir.path().join("d.json"));
    assert!(d["identity"]["relative_error"].as_f64().unwrap() <= 1e-9);
    assert_eq!(d["phi"].as_array().unwrap().len(), 4);

    let zero = r#"{"spins":2,"interactions":[{"support":[0,1],"k":0.0}]}"#;
    fs::write(dir.path().join("zero.json"), zero).unwrap();
    let o = fpc_lab(dir.path(), &["dualize", "--model", "zero.json", "--out", "z.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("strictly positive"));

    let o = fpc_lab(dir.path(), &["sector", "--b", "3", "--c", "1", "--level", "1", "--out", "fpcz.json"]);
    assert!(o.status.success());
    let o = fpc_lab(dir.path(), &["dualize", "--model", "fpcz.json", "--out", "fpcz-dual.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let d = json(&dir.path().join("fpcz-dual.json"));
    assert_eq!(d["max_arity"], 2);
    assert_eq!(d["n_s_star"], 1);
}

#[test]
fn sector_counts_cubes() {
    let dir = tempfile::tempdir().unwrap();
    let o = fpc_lab(dir.path(), &["sector", "--b", "3", "--c", "1", "--level", "0", "--sector", "x", "--out", "x.json"]);
    assert!(o.status.success());
    let m = json(&dir.path().join("x.json"));
    assert_eq!(m["spins"], 33);
    assert!(m.get("constraints").is_none());
}

#[test]
fn simulate_is_deterministic_and_uses_the_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec!["simulate", "--carpet", "3,1,3", "--sweeps", "320", "--burn-in", "10", "--seed", "7", "--out", out]
    };
    let o = fpc_lab(dir.path(), &args("a.csv"));
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(fpc_lab(dir.path(), &args("b.csv")).status.success());
    let a = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read_to_string(dir.path().join("b.csv")).unwrap());
    assert!(a.starts_with("beta,abs_m,m2,m4,energy,susceptibility,binder,err_abs_m,err_binder\n"));
    assert_eq!(a.lines().count(), 27);
    assert!(dir.path().join("a.r0.csv").exists());

    // Worker count does not change the output.
    let o = Command::new(env!("CARGO_BIN_EXE_fpc-lab"))
        .current_dir(dir.path())
        .args(args("c.csv"))
        .env("FPC_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(a, fs::read_to_string(dir.path().join("c.csv")).unwrap());
}

#[test]
fn simulate_rejects_a_bad_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let o = fpc_lab(dir.path(), &["simulate", "--square", "4", "--sweeps", "10", "--out", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fpc_lab(dir.path(), &["simulate", "--square", "4", "--carpet", "3,1,1", "--out", "x.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn barrier_examples() {
    let dir = tempfile::tempdir().unwrap();
    for (l, n) in [("3", 16), ("0", 2)] {
        let o = fpc_lab(dir.path(), &["barrier", "--b", "3", "--c", "1", "--level", l, "--out", "b.json"]);
        assert!(o.status.success());
        let b = json(&dir.path().join("b.json"));
        assert_eq!(b["central_cut"], n);
        assert_eq!(b["closed_form"], n);
        assert_eq!(b["heuristic"], false);
    }
    let o = fpc_lab(dir.path(), &["barrier", "--b", "4", "--c", "2", "--level", "2", "--out", "e.json"]);
    assert!(o.status.success());
    let b = json(&dir.path().join("e.json"));
    assert_eq!(b["heuristic"], true);
    assert!(b["closed_form"].is_null());
}

#[test]
fn replay_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let o = fpc_lab(dir.path(), &["barrier", "--b", "3", "--c", "1", "--level", "2", "--out", "b.json"]);
    assert!(o.status.success());
    let o = fpc_lab(dir.path(), &["replay", "--manifest", "b.json.manifest.json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("MATCH"));

    let m = dir.path().join("b.json.manifest.json");
    let mut doc = json(&m);
    doc["outputs"][0]["sha256"] = Value::from("00".repeat(32));
    fs::write(&m, doc.to_string()).unwrap();
    let o = fpc_lab(dir.path(), &["replay", "--manifest", "b.json.manifest.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("DIFFER"));
}
