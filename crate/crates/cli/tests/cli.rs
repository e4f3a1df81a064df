//! End-to-end checks of the command-line surface: exit codes, file formats,
//! determinism, and agreement between the CLI outputs and the library.

use boundkde_cli::model::ModelFile;
use boundkde_cli::run_with_threads;
use std::fs;
use std::path::{Path, PathBuf};

fn run(args: &[&str]) -> i32 {
    run_with_threads(args.iter().map(|s| s.to_string()), None)
}

fn write_uniform_sample(path: &Path, n: usize, seed: u64) {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    for _ in 0..n {
        text.push_str(&format!("{}\n", rng.gen::<f64>()));
    }
    fs::write(path, text).unwrap();
}

struct Workdir {
    _tmp: tempfile::TempDir,
    root: PathBuf,
}

impl Workdir {
    fn new() -> Self {
        let tmp = tempfile::tempdir().unwrap();
        let root = tmp.path().to_path_buf();
        Workdir { _tmp: tmp, root }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }
}

#[test]
fn kernels_table_has_expected_shape_and_values() {
    let w = Workdir::new();
    let out = w.arg("kern.csv");
    assert_eq!(
        run(&["boundkde", "kernels", "--order", "2", "--samples", "10", "--out", &out]),
        0
    );
    let text = fs::read_to_string(w.path("kern.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,w");
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[1], "0,9");
    let kernel = boundkde::OrderedKernel::of_order(2).unwrap();
    for line in &lines[1..] {
        let mut it = line.split(',');
        let u: f64 = it.next().unwrap().parse().unwrap();
        let v: f64 = it.next().unwrap().parse().unwrap();
        assert_eq!(v, kernel.eval(u));
    }
}

#[test]
fn family_empty_set_exits_with_code_4() {
    assert_eq!(
        run(&["boundkde", "family", "--n", "100", "--d", "2", "--c", "1", "--mode", "ani"]),
        4
    );
}

#[test]
fn usage_errors_exit_with_code_2() {
    assert_eq!(run(&["boundkde", "family", "--n", "100"]), 2);
    assert_eq!(run(&["boundkde", "nonsense"]), 2);
    let w = Workdir::new();
    write_uniform_sample(&w.path("d.csv"), 50, 1);
    // tau must be positive
    assert_eq!(
        run(&[
            "boundkde", "fit", "--input", &w.arg("d.csv"), "--tau", "-1",
            "--out", &w.arg("m.json")
        ]),
        2
    );
}

#[test]
fn data_errors_exit_with_code_3() {
    let w = Workdir::new();
    assert_eq!(
        run(&["boundkde", "fit", "--input", &w.arg("missing.csv"), "--out", &w.arg("m.json")]),
        3
    );
    fs::write(w.path("bad.csv"), "1.5\n").unwrap();
    assert_eq!(
        run(&["boundkde", "fit", "--input", &w.arg("bad.csv"), "--out", &w.arg("m.json")]),
        3
    );
}

#[test]
fn fit_on_the_singleton_family_chooses_level_3() {
    let w = Workdir::new();
    write_uniform_sample(&w.path("data.csv"), 100, 42);
    assert_eq!(
        run(&[
            "boundkde", "fit", "--input", &w.arg("data.csv"), "--out", &w.arg("model.json")
        ]),
        0
    );
    let model = ModelFile::load(&w.path("model.json")).unwrap();
    assert_eq!(model.chosen, boundkde::FamilyIndex::Iso(3));
    assert_eq!(model.n, 100);
    assert_eq!(model.trace.records.len(), 1);
}

#[test]
fn eval_matches_the_library_estimate() {
    let w = Workdir::new();
    write_uniform_sample(&w.path("data.csv"), 120, 7);
    assert_eq!(
        run(&["boundkde", "fit", "--input", &w.arg("data.csv"), "--out", &w.arg("model.json")]),
        0
    );
    assert_eq!(
        run(&[
            "boundkde", "eval", "--model", &w.arg("model.json"), "--grid-res", "11",
            "--out", &w.arg("est.csv")
        ]),
        0
    );
    let model = ModelFile::load(&w.path("model.json")).unwrap();
    let spec = boundkde::ProductKernelSpec::new(model.kernels.clone(), model.bandwidth.clone())
        .unwrap();
    let sample = boundkde::SampleSet::from_rows(&model.sample).unwrap();
    let text = fs::read_to_string(w.path("est.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t_1,fhat");
    assert_eq!(lines.len(), 12);
    for (i, line) in lines[1..].iter().enumerate() {
        let mut it = line.split(',');
        let t: f64 = it.next().unwrap().parse().unwrap();
        let v: f64 = it.next().unwrap().parse().unwrap();
        assert_eq!(t, i as f64 / 10.0);
        let direct = spec.estimate(&sample, &[t]).unwrap();
        assert!((v - direct).abs() <= 1e-14 * direct.abs().max(1.0));
    }
}

#[test]
fn clip_negative_renormalizes_for_presentation() {
    let w = Workdir::new();
    write_uniform_sample(&w.path("data.csv"), 100, 3);
    run(&["boundkde", "fit", "--input", &w.arg("data.csv"), "--out", &w.arg("model.json")]);
    assert_eq!(
        run(&[
            "boundkde", "eval", "--model", &w.arg("model.json"), "--grid-res", "101",
            "--clip-negative", "--out", &w.arg("est.csv")
        ]),
        0
    );
    let text = fs::read_to_string(w.path("est.csv")).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(values.iter().all(|&v| v >= 0.0));
    // trapezoidal mass back to 1
    let step = 1.0 / 100.0;
    let mass: f64 = values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let w = if i == 0 || i == 100 { 0.5 } else { 1.0 };
            w * step * v
        })
        .sum();
    assert!((mass - 1.0).abs() < 1e-12, "mass {mass}");
}

#[test]
fn simulate_bias_table_reports_both_columns() {
    let w = Workdir::new();
    assert_eq!(
        run(&[
            "boundkde", "simulate", "bias", "--p", "2", "--h-list", "0.05,0.1",
            "--out", &w.arg("bias.csv")
        ]),
        0
    );
    let text = fs::read_to_string(w.path("bias.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "h,bias_naive,bias_boundary");
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        let cols: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!(cols[1] > 0.0);
        assert!(cols[2] < 1e-9);
    }
}

#[test]
fn simulate_risk_accepts_a_json_config() {
    let w = Workdir::new();
    let cfg = serde_json::json!({
        "density": "uniform",
        "mode": "iso",
        "n_list": [200, 400],
        "reps": 4,
        "seed": 9,
        "fixed_ell": [3],
        "out": w.arg("risk.csv"),
    });
    fs::write(w.path("risk.json"), cfg.to_string()).unwrap();
    assert_eq!(
        run(&["boundkde", "simulate", "risk", "--config", &w.arg("risk.json")]),
        0
    );
    let text = fs::read_to_string(w.path("risk.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,replicates,risk,stderr,slope");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("200,4,"));
}

#[test]
fn simulate_oracle_emits_per_replicate_rows() {
    let w = Workdir::new();
    assert_eq!(
        run(&[
            "boundkde", "simulate", "oracle", "--n", "300", "--reps", "3", "--seed", "1",
            "--out", &w.arg("oracle.csv")
        ]),
        0
    );
    let text = fs::read_to_string(w.path("oracle.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "replicate,selected,best,selected_err,best_err,ratio");
    assert_eq!(lines.len(), 4);
    for (k, line) in lines[1..].iter().enumerate() {
        assert!(line.starts_with(&format!("{k},")));
    }
}

#[test]
fn outputs_are_byte_identical_across_runs_and_thread_counts() {
    let w = Workdir::new();
    write_uniform_sample(&w.path("data.csv"), 400, 2024);
    let fit_args = |out: &str| {
        vec![
            "boundkde".to_string(),
            "fit".into(),
            "--input".into(),
            w.arg("data.csv"),
            "--out".into(),
            w.arg(out),
        ]
    };
    assert_eq!(run_with_threads(fit_args("m1.json"), Some(1)), 0);
    assert_eq!(run_with_threads(fit_args("m2.json"), Some(4)), 0);
    assert_eq!(run_with_threads(fit_args("m3.json"), Some(1)), 0);
    let a = fs::read(w.path("m1.json")).unwrap();
    let b = fs::read(w.path("m2.json")).unwrap();
    let c = fs::read(w.path("m3.json")).unwrap();
    assert_eq!(a, b, "thread count changed the model bytes");
    assert_eq!(a, c, "repeated run changed the model bytes");

    let risk_args = |out: &str| {
        vec![
            "boundkde".to_string(),
            "simulate".into(),
            "risk".into(),
            "--n-list".into(),
            "200,400".into(),
            "--reps".into(),
            "6".into(),
            "--seed".into(),
            "5".into(),
            "--fixed-ell".into(),
            "3".into(),
            "--out".into(),
            w.arg(out),
        ]
    };
    assert_eq!(run_with_threads(risk_args("r1.csv"), Some(1)), 0);
    assert_eq!(run_with_threads(risk_args("r2.csv"), Some(4)), 0);
    assert_eq!(
        fs::read(w.path("r1.csv")).unwrap(),
        fs::read(w.path("r2.csv")).unwrap()
    );
}

#[test]
fn model_file_round_trips_exactly() {
    let w = Workdir::new();
    write_uniform_sample(&w.path("data.csv"), 150, 77);
    run(&["boundkde", "fit", "--input", &w.arg("data.csv"), "--out", &w.arg("model.json")]);
    let text = fs::read_to_string(w.path("model.json")).unwrap();
    let model = ModelFile::from_json(&text).unwrap();
    assert_eq!(model.to_json(), text);
}
