use std::path::Path;
use std::process::{Command, Output};

fn greedyq(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greedyq"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(summary: &str, key: &str) -> f64 {
    let tok = summary
        .split_whitespace()
        .find_map(|t| t.strip_prefix(&format!("{key}=")))
        .expect("key in summary");
    tok.parse().unwrap()
}

#[test]
fn build_writes_sequence_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = greedyq(
        &[
            "build",
            "--dist",
            "uniform:0,1",
            "--n",
            "100",
            "--out",
            "seq.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("seq.json")).unwrap();
    let file = greedyq_core::io::SequenceFile::from_json(&text).unwrap();
    assert_eq!(file.schema, 1);
    assert_eq!(file.points_in_insertion_order.len(), 100);
    assert_eq!(file.to_sequence().unwrap().len(), 100);
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn build_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let o = greedyq(
            &[
                "--deterministic",
                "build",
                "--dist",
                "exp:1",
                "--n",
                "50",
                "--out",
                name,
            ],
            dir.path(),
        );
        assert!(o.status.success());
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    assert!(String::from_utf8(a).unwrap().starts_with("k,a_k,e2\n"));

    let o = greedyq(
        &["build", "--dist", "exp:1", "--n", "5", "--out", "c.csv"],
        dir.path(),
    );
    assert!(o.status.success());
    let c = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert!(c.starts_with("# generated "));
}

#[test]
fn disc_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let xs = [0.1, 0.35, 0.5, 0.9, 0.72];
    let body: String = std::iter::once("x\n".to_string())
        .chain(xs.iter().map(|x| format!("{x}\n")))
        .collect();
    std::fs::write(dir.path().join("points.csv"), body).unwrap();
    let o = greedyq(
        &[
            "disc",
            "--in",
            "points.csv",
            "--d",
            "1",
            "--method",
            "formula",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let lib =
        greedyq_core::discrepancy::star_disc_1d(&greedyq_core::PointSet::from_1d(&xs).unwrap());
    assert_eq!(field(&stdout(&o), "D"), lib);

    let o = greedyq(
        &[
            "disc",
            "--in",
            "points.csv",
            "--d",
            "1",
            "--method",
            "brute",
        ],
        dir.path(),
    );
    assert!((field(&stdout(&o), "D") - lib).abs() <= 1e-12);
}

#[test]
fn disc_rejects_bad_rows() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p.csv"), "0.1,0.2\n0.3,zz\n").unwrap();
    let o = greedyq(&["disc", "--in", "p.csv", "--d", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(dir.path().join("q.csv"), "0.1,0.2\n0.3\n").unwrap();
    let o = greedyq(&["disc", "--in", "q.csv", "--d", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn price_call_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = greedyq(
        &[
            "price",
            "--instrument",
            "call1d",
            "--method",
            "greedy",
            "--n",
            "1000",
            "--out",
            "p.csv",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&stdout(&o), "price") - 1.5429).abs() <= 1e-2);
    let csv = std::fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "n,price,abs_error_vs_reference"));
    assert!(csv.lines().last().unwrap().starts_with("1000,"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 6] = [
        &["build", "--dist", "normal", "--n", "ten"],
        &["build", "--dist", "normal", "--n", "10", "--colour", "red"],
        &["build", "--dist", "cauchy", "--n", "10"],
        &["frobnicate"],
        &[
            "diagnose", "--dist", "normal", "--suite", "mismatch", "--n", "10", "--s", "4",
        ],
        &["grid", "--d", "5", "--n", "10", "--method", "boxmuller"],
    ];
    for args in cases {
        assert_eq!(greedyq(args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn internal_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let o = greedyq(
        &[
            "build",
            "--dist",
            "normal",
            "--n",
            "3",
            "--out",
            "missing/dir/seq.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn integrate_recursive_and_full_agree() {
    let dir = tempfile::tempdir().unwrap();
    for mode in ["full", "recursive"] {
        let out = format!("{mode}.csv");
        let args = [
            "--deterministic",
            "integrate",
            "--dist",
            "laplace:0,1",
            "--fn",
            "sin",
            "--n",
            "60",
            "--mode",
            mode,
            "--out",
            &out,
        ];
        assert!(greedyq(&args, dir.path()).status.success());
    }
    let read = |f: &str| -> Vec<f64> {
        std::fs::read_to_string(dir.path().join(f))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect()
    };
    let (full, rec) = (read("full.csv"), read("recursive.csv"));
    assert_eq!(full.len(), 60);
    for (a, b) in full.iter().zip(&rec) {
        assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
    }
}

#[test]
fn grid_writes_marginal_references() {
    let dir = tempfile::tempdir().unwrap();
    let o = greedyq(
        &[
            "grid",
            "--law",
            "normal",
            "--d",
            "3",
            "--n",
            "200",
            "--method",
            "product",
            "--out",
            "grid.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    let file = greedyq_core::io::GridFile::from_json(
        &std::fs::read_to_string(dir.path().join("grid.json")).unwrap(),
    )
    .unwrap();
    let seqs: Vec<_> = file
        .marginals
        .iter()
        .map(|m| {
            let text = std::fs::read_to_string(dir.path().join(m)).unwrap();
            greedyq_core::io::SequenceFile::from_json(&text)
                .unwrap()
                .to_sequence()
                .unwrap()
        })
        .collect();
    let g = file.to_grid(seqs).unwrap();
    assert!(g.len() >= 200);
    assert_eq!(field(&stdout(&o), "size") as usize, g.len());

    let o = greedyq(
        &[
            "grid",
            "--d",
            "2",
            "--n",
            "64",
            "--method",
            "boxmuller",
            "--out",
            "bm.json",
        ],
        dir.path(),
    );
    assert!(o.status.success());
    assert!(dir.path().join("bm.m1.json").exists());
}

#[test]
fn diagnose_suites_run() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["rate", "mismatch", "weights", "stationarity", "quasi"] {
        let out = format!("{suite}.csv");
        let o = greedyq(
            &[
                "diagnose",
                "--dist",
                "normal:0,1",
                "--suite",
                suite,
                "--n",
                "31",
                "--out",
                &out,
            ],
            dir.path(),
        );
        assert!(
            o.status.success(),
            "{suite}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(dir.path().join(&out).exists());
    }
}

#[test]
fn basket_mc_is_seed_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str| {
        let o = greedyq(
            &[
                "--seed",
                seed,
                "price",
                "--instrument",
                "basket3d",
                "--method",
                "mc",
                "--n",
                "20000",
            ],
            dir.path(),
        );
        assert!(o.status.success());
        field(&stdout(&o), "price")
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}
