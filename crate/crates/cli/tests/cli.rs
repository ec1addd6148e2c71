use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lcsvm::{EXIT_CONFIG, EXIT_INCOMPLETE, EXIT_PARSE, EXIT_TRAINING};

const SMALL: &str = "synth_width = 24\nsynth_height = 12\nsynth_train = 20\nsynth_reference = 20\nc_grid = 1, 10\ngamma_grid = 0.5, 1\nfolds = 3\n";

fn lcsvm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcsvm"))
        .arg("--config")
        .arg(dir.join("run.cfg"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn setup(extra: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), format!("{SMALL}{extra}")).unwrap();
    let out = lcsvm(dir.path(), &["synth"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    dir
}

fn files_with_prefix(dir: &Path, prefix: &str) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.starts_with(prefix))
        .collect();
    names.sort();
    names
}

#[test]
fn train_writes_one_model_per_kernel_and_strategy() {
    let dir = setup("");
    let out = lcsvm(dir.path(), &["train"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(files_with_prefix(dir.path(), "model_").len(), 8);

    let one = setup("strategies = 1a1\n");
    assert!(lcsvm(one.path(), &["train"]).status.success());
    assert_eq!(
        files_with_prefix(one.path(), "model_"),
        vec![
            "model_1a1_linear.lcm",
            "model_1a1_polynomial.lcm",
            "model_1a1_quadratic.lcm",
            "model_1a1_rbf.lcm"
        ]
    );
}

#[test]
fn full_pipeline_writes_maps_and_reports() {
    let dir = setup("kernels = linear, rbf\n");
    for step in ["train", "classify", "assess", "compare"] {
        let out = lcsvm(dir.path(), &[step]);
        assert!(out.status.success(), "{step}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(files_with_prefix(dir.path(), "map_").len(), 8, "4 images + 4 legends");
    let ppm = fs::read(dir.path().join("map_1aa_rbf.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n24 12\n255\n"));
    let csv = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("Unclassified Pixels") && report.contains("Significance"));
    let tally = fs::read_to_string(dir.path().join("tally_1a1_linear.txt")).unwrap();
    assert!(tally.ends_with("mixed 0\n"), "{tally}");
}

#[test]
fn winner_take_all_never_reports_mixed_pixels() {
    let dir = setup("kernels = linear\nsynth_separation = 1\n");
    let out = lcsvm(dir.path(), &["--strict-1aa", "false", "run"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let tally = fs::read_to_string(dir.path().join("tally_1aa_linear.txt")).unwrap();
    assert!(tally.contains("unclassified 0\nmixed 0\n"), "{tally}");
}

#[test]
fn missing_raster_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), SMALL).unwrap();
    let out = lcsvm(dir.path(), &["train"]);
    assert_eq!(out.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&out.stderr).contains("raster"));
    assert!(files_with_prefix(dir.path(), "model_").is_empty());
}

#[test]
fn bad_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "kernels = sigmoid\n").unwrap();
    assert_eq!(lcsvm(dir.path(), &["synth"]).status.code(), Some(EXIT_CONFIG));
    fs::write(dir.path().join("run.cfg"), "folds = 1\n").unwrap();
    assert_eq!(lcsvm(dir.path(), &["synth"]).status.code(), Some(EXIT_CONFIG));
}

#[test]
fn corrupt_inputs_are_parse_errors() {
    let dir = setup("kernels = linear\n");
    assert!(lcsvm(dir.path(), &["train"]).status.success());
    let model = dir.path().join("model_1aa_linear.lcm");
    let text = fs::read_to_string(&model).unwrap();
    fs::write(&model, text.replace("bias", "bais")).unwrap();
    let out = lcsvm(dir.path(), &["classify"]);
    assert_eq!(out.status.code(), Some(EXIT_PARSE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("model_1aa_linear.lcm"));

    let scene = dir.path().join("scene.lcr");
    let bytes = fs::read(&scene).unwrap();
    fs::write(&scene, &bytes[..bytes.len() - 1]).unwrap();
    assert_eq!(lcsvm(dir.path(), &["train"]).status.code(), Some(EXIT_PARSE));
}

#[test]
fn solver_failure_is_a_training_error() {
    let dir = setup("kernels = rbf\nsynth_separation = 1\ntolerance = 1e-300\nmax_passes = 1\n");
    let out = lcsvm(dir.path(), &["train"]);
    assert_eq!(
        out.status.code(),
        Some(EXIT_TRAINING),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn compare_lists_missing_cells() {
    let dir = setup("kernels = linear, rbf\n");
    for step in ["train", "classify", "assess"] {
        assert!(lcsvm(dir.path(), &["--strategies", "1a1", step]).status.success());
    }
    let out = lcsvm(dir.path(), &["compare"]);
    assert_eq!(out.status.code(), Some(EXIT_INCOMPLETE));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("1aa linear") && err.contains("1aa rbf"), "{err}");
    assert!(!dir.path().join("report.txt").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let a = setup("kernels = quadratic, rbf\n");
    let b = setup("kernels = quadratic, rbf\n");
    for dir in [&a, &b] {
        assert!(lcsvm(dir.path(), &["run"]).status.success());
    }
    let names = files_with_prefix(a.path(), "");
    assert!(names.len() > 20);
    for name in names.iter().filter(|n| n.as_str() != "run.cfg") {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name} differs"
        );
    }
}
