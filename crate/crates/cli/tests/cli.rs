use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn interdep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interdep"))
        .args(args)
        .env("INTERDEP_OUT", dir)
        .output()
        .expect("binary runs")
}

fn ok(out: &Output) -> String {
    assert!(
        out.status.success(),
        "status {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn simulate(dir: &Path, kind: &str, n: usize, seed: u64) -> PathBuf {
    let out = interdep(
        dir,
        &[
            "simulate",
            "--kind",
            kind,
            "--n",
            &n.to_string(),
            "--seed",
            &seed.to_string(),
        ],
    );
    PathBuf::from(ok(&out).trim())
}

fn diagnostic(out: &Output) -> String {
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    err
}

#[test]
fn simulate_writes_data_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    let csv = simulate(dir.path(), "w_of_xyz", 1000, 7);
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "X,Y,Z,W,U,V");
    assert_eq!(lines.len(), 1001);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 6));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(csv.with_extension("json")).unwrap()).unwrap();
    assert_eq!(meta["provenance"]["seed"], 7);
    assert_eq!(meta["provenance"]["config"]["kind"], "w_of_xyz");
    assert!(meta["provenance"]["version"].is_string());

    let small = simulate(dir.path(), "independent", 10, 0);
    assert_eq!(fs::read_to_string(small).unwrap().lines().count(), 11);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = interdep(dir.path(), &["simulate", "--n", "10"]);
    assert_eq!(out.status.code(), Some(1));
    diagnostic(&out);

    let csv = simulate(dir.path(), "w_of_xy", 100, 1);
    let out = interdep(dir.path(), &["measures", csv.to_str().unwrap(), "--sigma", "7"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(diagnostic(&out).contains("sigma"));

    let out = interdep(dir.path(), &["infer", csv.to_str().unwrap(), "--quantile", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    diagnostic(&out);
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "a,b\n0,1\n1\n").unwrap();
    let out = interdep(dir.path(), &["measures", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(diagnostic(&out).contains("ragged"));

    let out = interdep(
        dir.path(),
        &["baseline", dir.path().join("missing.csv").to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
    diagnostic(&out);
}

#[test]
fn measures_tables() {
    let dir = tempfile::tempdir().unwrap();
    let csv = simulate(dir.path(), "w_of_xy", 800, 3);
    let path = csv.to_str().unwrap();
    let text = ok(&interdep(dir.path(), &["measures", path, "--sigma", "3"]));
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split('\t').collect())
        .collect();
    assert_eq!(rows.len(), 15 + 20);
    let strongest = rows
        .iter()
        .filter(|r| r[1] == "3")
        .max_by(|a, b| {
            let x: f64 = a[3].parse().unwrap();
            let y: f64 = b[3].parse().unwrap();
            x.abs().total_cmp(&y.abs())
        })
        .unwrap();
    assert_eq!(strongest[0], "X,Y,W");

    let text = ok(&interdep(
        dir.path(),
        &["measures", path, "--target", "W", "--format", "tsv"],
    ));
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "subset\tsize\ttarget\tdelta\tsymmetric_delta");
    assert_eq!(body.len() - 1, 10);

    let text = ok(&interdep(
        dir.path(),
        &["measures", path, "--sigma", "2", "--format", "jsonl"],
    ));
    let mut lines = text.lines();
    let head: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(head["provenance"]["command"], "measures");
    assert_eq!(lines.count(), 15);
}

#[test]
fn constant_column_measures_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let mut text = String::from("a,b,c\n");
    for i in 0..40 {
        text.push_str(&format!("{},{},0\n", i % 4, (i / 4) % 3));
    }
    fs::write(&csv, text).unwrap();
    let out = ok(&interdep(
        dir.path(),
        &["measures", csv.to_str().unwrap(), "--format", "jsonl"],
    ));
    for line in out.lines().skip(1) {
        let r: serde_json::Value = serde_json::from_str(line).unwrap();
        let members: Vec<u64> = r["subset"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap())
            .collect();
        if members.contains(&2) {
            assert!(r["interaction_info"].as_f64().unwrap().abs() < 1e-12, "{line}");
            assert!(r["symmetric_delta"].as_f64().unwrap().abs() < 1e-12, "{line}");
        }
    }
}

#[test]
fn infer_finds_the_four_edge_and_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let csv = simulate(dir.path(), "w_of_xyz", 1000, 7);
    let path = csv.to_str().unwrap();
    let run = |threads: &str, name: &str| {
        ok(&interdep(
            dir.path(),
            &[
                "infer",
                path,
                "--sigma",
                "4",
                "--n-perm",
                "200",
                "--quantile",
                "0.99",
                "--seed",
                "5",
                "--threads",
                threads,
                "--name",
                name,
            ],
        ));
        fs::read(dir.path().join(format!("{name}.hypergraph.json"))).unwrap()
    };
    let a = run("1", "a");
    let b = run("4", "b");
    let c = run("4", "c");
    assert_eq!(a, b);
    assert_eq!(b, c);

    let hg: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let quads: Vec<&serde_json::Value> = hg["edges"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["members"].as_array().unwrap().len() == 4)
        .collect();
    assert_eq!(quads.len(), 1);
    assert_eq!(quads[0]["members"], serde_json::json!([0, 1, 2, 3]));
    assert_eq!(hg["meta"]["seed"], 5);
    assert_eq!(hg["meta"]["n_perm"], 200);

    let dot = fs::read_to_string(dir.path().join("a.hypergraph.dot")).unwrap();
    assert!(dot.starts_with("graph hypergraph {"));
    assert_eq!(
        dot.matches("shape=point").count(),
        hg["edges"].as_array().unwrap().len()
    );
}

#[test]
fn infer_with_fixed_threshold_and_phi() {
    let dir = tempfile::tempdir().unwrap();
    let csv = simulate(dir.path(), "w_of_xy", 500, 2);
    let out = ok(&interdep(
        dir.path(),
        &[
            "infer",
            csv.to_str().unwrap(),
            "--threshold",
            "0.5",
            "--measure",
            "phi",
            "--format",
            "json",
            "--name",
            "fixed",
        ],
    ));
    assert!(out.contains("X,Y,W"));
    let hg: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("fixed.hypergraph.json")).unwrap()).unwrap();
    assert_eq!(hg["meta"]["absolute_threshold"], 0.5);
    assert!(hg["meta"]["n_perm"].is_null());
    assert!(hg["edges"].as_array().unwrap().iter().all(|e| e["measure"] == "phi"));
    assert!(!dir.path().join("fixed.hypergraph.dot").exists());
}

#[test]
fn complexity_and_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let csv = simulate(dir.path(), "w_of_xyz", 1000, 7);
    let path = csv.to_str().unwrap();
    let text = ok(&interdep(dir.path(), &["complexity", path, "--sigma", "2"]));
    let psi_line = text.lines().find(|l| l.starts_with("psi\t")).unwrap();
    let psi: f64 = psi_line[4..].parse().unwrap();
    assert!(psi > 0.0);

    let json = ok(&interdep(
        dir.path(),
        &["complexity", path, "--sigma", "3", "--format", "json", "--top-k", "3"],
    ));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["top"].as_array().unwrap().len(), 3);
    assert_eq!(v["n_components"], 35);

    let table = ok(&interdep(dir.path(), &["baseline", path]));
    let rows: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 15);
    for row in rows {
        let f: Vec<&str> = row.split('\t').collect();
        assert!(f[2].parse::<f64>().unwrap().abs() < 0.2, "{row}");
        assert!(f[3].parse::<f64>().unwrap().abs() < 0.2, "{row}");
    }
}

#[test]
fn experiments_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(&interdep(
        dir.path(),
        &[
            "experiment",
            "partition",
            "--n",
            "2000",
            "--sizes",
            "500,1000",
            "--seed",
            "4",
        ],
    ));
    assert!(out.starts_with("size\tn_subsets"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("experiment_partition.json")).unwrap()).unwrap();
    assert_eq!(report["report"][0]["n_subsets"], 4);
    assert_eq!(report["provenance"]["seed"], 4);

    ok(&interdep(
        dir.path(),
        &[
            "experiment",
            "incremental",
            "--n",
            "1000",
            "--step",
            "250",
            "--count",
            "4",
        ],
    ));
    let tsv = fs::read_to_string(dir.path().join("experiment_incremental.tsv")).unwrap();
    assert_eq!(tsv.lines().count(), 5);

    ok(&interdep(
        dir.path(),
        &[
            "experiment",
            "noise",
            "--n",
            "200",
            "--levels",
            "4",
            "--replicates",
            "3",
            "--step",
            "50",
        ],
    ));
    let noise: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("experiment_noise.json")).unwrap()).unwrap();
    let levels = noise["report"]["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 4);
    assert_eq!(levels[0]["n_differences"], 3 * 19 * 3);
    assert_eq!(noise["report"]["rng"], "chacha8");

    let bad = interdep(dir.path(), &["experiment", "partition", "--n", "100", "--sizes", "500"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn alternating_sign_flips_triplets() {
    let dir = tempfile::tempdir().unwrap();
    let csv = simulate(dir.path(), "w_of_xy", 500, 8);
    let path = csv.to_str().unwrap();
    let plain = ok(&interdep(dir.path(), &["measures", path, "--sigma", "3"]));
    let flipped = ok(&interdep(
        dir.path(),
        &["measures", path, "--sigma", "3", "--alternating-sign"],
    ));
    let pick = |text: &str| -> f64 {
        let row = text.lines().find(|l| l.starts_with("X,Y,W\t")).unwrap();
        row.split('\t').nth(3).unwrap().parse().unwrap()
    };
    assert!(pick(&plain) < 0.0);
    assert_eq!(pick(&plain), -pick(&flipped));
}
