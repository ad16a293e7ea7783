use std::fs;
use std::path::Path;
use std::process::Command;

use qperc_core::bounds::num_hyperplanes;
use qperc_core::data::{load_dataset_csv, make_hard_dataset, margin, sample_hyperplanes, write_dataset_csv};
use qperc_core::experiments::{run_fig1, Fig1Config, SweepVar};
use qperc_core::perceptron::{hybrid_quantum, QuantumOptions, RUN_CSV_HEADER};
use qperc_core::rng::derive_seed;

fn qperc(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["qperc".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qperc_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_hard_matches_library_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let (code, _, err) = qperc(&["dataset", "gen-hard", "--n", "40", "--out", s(&path)]);
    assert_eq!(code, 0, "{err}");
    let mut golden = Vec::new();
    write_dataset_csv(&make_hard_dataset(40).unwrap(), &mut golden).unwrap();
    assert_eq!(fs::read(&path).unwrap(), golden);
}

#[test]
fn run_hybrid_matches_library_call() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("hard200.csv");
    let ds = make_hard_dataset(200).unwrap();
    let mut buf = Vec::new();
    write_dataset_csv(&ds, &mut buf).unwrap();
    fs::write(&data, buf).unwrap();

    let (code, out, err) = qperc(&[
        "--out-dir", s(dir.path()), "--seed", "7", "run", "hybrid", "--file", s(&data), "--epsilon", "0.05",
    ]);
    assert_eq!(code, 0, "{err}");

    let loaded = load_dataset_csv(&data).unwrap();
    let gamma = margin(&loaded).gamma;
    let k = num_hyperplanes(gamma, 0.05).unwrap() as usize;
    let hs = sample_hyperplanes(k, loaded.dim(), derive_seed(7, "run/hyperplanes", 0)).unwrap();
    let mut r = hybrid_quantum(&loaded, &hs, 0.05, &QuantumOptions::default(), 7).unwrap();
    r.gamma = Some(gamma);
    assert_eq!(out, format!("{RUN_CSV_HEADER}\n{}\n", r.csv_row()));
    assert_eq!(fs::read_to_string(dir.path().join("run_hybrid.csv")).unwrap(), out);
    let meta = fs::read_to_string(dir.path().join("run_hybrid.meta")).unwrap();
    assert!(meta.contains("epsilon=0.05"));
    assert!(meta.contains("master_seed=7"));
}

#[test]
fn bounds_sweep_matches_library() {
    let (code, out, _) = qperc(&[
        "bounds", "sweep", "--curve", "all", "--var", "inv_gamma", "--from", "10", "--to", "1000", "--points", "5",
        "--n", "1000",
    ]);
    assert_eq!(code, 0);
    let cfg = Fig1Config {
        vars: vec![SweepVar::InvGamma],
        inv_gamma_from: 10.0,
        inv_gamma_to: 1000.0,
        inv_gamma_points: 5,
        n_fixed: 1000,
        ..Fig1Config::default()
    };
    let report = run_fig1(&cfg).unwrap();
    let mut golden = String::from("curve,x_var,x,value\n");
    for r in &report.rows {
        golden.push_str(&format!("{},{},{},{}\n", r.curve.as_str(), r.x_var.as_str(), r.x, r.value));
    }
    assert_eq!(out, golden);
}

#[test]
fn hard_steps_prints_paper_count() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = qperc(&["experiment", "hard-steps", "--n", "1000", "--train-fraction", "0.5", "--out-dir", s(dir.path())]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "250500");
    assert!(dir.path().join("hard_steps.meta").exists());
}

#[test]
fn runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("hard.csv");
    assert_eq!(qperc(&["dataset", "gen-hard", "--n", "300", "--out", s(&data)]).0, 0);
    let mut outputs = Vec::new();
    for i in 0..2 {
        let od = dir.path().join(format!("o{i}"));
        let (code, out, _) = qperc(&["--out-dir", s(&od), "--seed", "7", "run", "hybrid", "--file", s(&data)]);
        assert_eq!(code, 0);
        outputs.push((out, fs::read(od.join("run_hybrid.csv")).unwrap(), fs::read(od.join("run_hybrid.meta")).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);

    let f1: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let od = dir.path().join(format!("f{i}"));
            assert_eq!(qperc(&["--out-dir", s(&od), "experiment", "fig1"]).0, 0);
            fs::read(od.join("fig1.csv")).unwrap()
        })
        .collect();
    assert_eq!(f1[0], f1[1]);
}

#[test]
fn exit_codes() {
    let (code, _, err) = qperc(&["run", "hybrid", "--epsilon", "1.5"]);
    assert_eq!(code, 1);
    assert_eq!(err.trim(), "error: epsilon must be in (0,1)");

    let (code, _, err) = qperc(&["frobnicate"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: "));

    let (code, _, err) = qperc(&["run", "online", "--nonsense", "3"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error: "));

    let (code, _, _) = qperc(&["experiment", "fig1", "--no-such-param", "1"]);
    assert_eq!(code, 1);

    let (code, _, err) = qperc(&["dataset", "margin", "--file", "/nonexistent/data.csv"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: "));
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn plot_is_deterministic_and_rejects_empty_csv() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qperc(&["--out-dir", s(dir.path()), "experiment", "fig1"]).0, 0);
    let csv = dir.path().join("fig1.csv");
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    assert_eq!(qperc(&["plot", "--csv", s(&csv), "--out", s(&a)]).0, 0);
    assert_eq!(qperc(&["plot", "--csv", s(&csv), "--out", s(&b)]).0, 0);
    let svg = fs::read_to_string(&a).unwrap();
    assert_eq!(svg, fs::read_to_string(&b).unwrap());
    assert!(svg.contains(r#"version="1.1""#));
    assert_eq!(svg.matches("<polyline").count(), 3);

    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    let (code, _, err) = qperc(&["plot", "--csv", s(&empty), "--out", s(&dir.path().join("e.svg"))]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: "));
}

#[test]
fn fig3_noise_free_curve_ends_above_noisy_curves() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = qperc(&["--out-dir", s(dir.path()), "experiment", "fig3", "--trials", "2000"]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(dir.path().join("fig3.csv")).unwrap();
    let last = |kind: &str| -> f64 {
        text.lines()
            .rfind(|l| l.starts_with(&format!("{kind},")))
            .unwrap()
            .split(',')
            .nth(2)
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!(last("none") > last("bit_flip"));
    assert!(last("none") > last("depolarizing"));
    let out = dir.path().join("fig3.svg");
    assert_eq!(qperc(&["plot", "--csv", s(&dir.path().join("fig3.csv")), "--out", s(&out)]).0, 0);
    assert_eq!(fs::read_to_string(out).unwrap().matches("<polyline").count(), 3);
}

#[test]
fn config_file_sits_below_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let data = dir.path().join("hard.csv");
    assert_eq!(qperc(&["dataset", "gen-hard", "--n", "200", "--out", s(&data)]).0, 0);
    fs::write(&cfg, format!("seed=3\nepsilon=0.2\nout_dir={}\n", s(dir.path()))).unwrap();

    let (code, out, err) = qperc(&["--config", s(&cfg), "--seed", "5", "run", "online", "--file", s(&data)]);
    assert_eq!(code, 0, "{err}");
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[4], "0.2");
    assert_eq!(row[8], "5");
    assert!(dir.path().join("run_online.meta").exists());
}

#[test]
fn out_dir_env_overrides_default() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_qperc"))
        .args(["experiment", "hard-steps", "--n", "20"])
        .env(qperc_cli::OUT_DIR_ENV, dir.path())
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(dir.path().join("hard_steps.csv").exists());

    let explicit = dir.path().join("explicit");
    let status = Command::new(env!("CARGO_BIN_EXE_qperc"))
        .args(["--out-dir", s(&explicit), "experiment", "hard-steps", "--n", "20"])
        .env(qperc_cli::OUT_DIR_ENV, dir.path().join("ignored"))
        .output()
        .unwrap();
    assert!(status.status.success());
    assert!(explicit.join("hard_steps.csv").exists());
    assert!(!dir.path().join("ignored").exists());
}

#[test]
fn binary_exit_status_matches_library() {
    let out = Command::new(env!("CARGO_BIN_EXE_qperc")).args(["run", "hybrid", "--epsilon", "1.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "error: epsilon must be in (0,1)");
}
