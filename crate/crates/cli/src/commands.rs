//! Subcommand implementations. Each works on the files of one output
//! directory so the steps can be run separately or chained by `run`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use landcover_svm::assessment::{
    build_confusion, compare_report, kappa, resolve_reference, CellResult, ComparisonReport,
};
use landcover_svm::binary_svm::Candidate;
use landcover_svm::kernels::{KernelKind, KernelSpec};
use landcover_svm::multiclass::{self, classify_raster, tune_parameters, ClassSamples, Strategy, TallySummary};
use landcover_svm::persist::{load_model, save_model, AssessmentRecord, LabelFile};
use landcover_svm::raster_io::{
    export_map, gen_synthetic, load_positions, load_raster, load_samples, save_positions, save_raster, write_atomic,
    LandCoverMap, RasterImage, SyntheticScene, ValueType,
};
use landcover_svm::Error;
use rayon::prelude::*;

use crate::config::{RunConfig, REFERENCE_FILE, SCENE_FILE, TRAINING_FILE};
use crate::CliError;

pub const REPORT_TEXT: &str = "report.txt";
pub const REPORT_CSV: &str = "report.csv";

/// `<prefix>_<strategy>_<kernel>.<ext>`
pub fn cell_file(prefix: &str, strategy: Strategy, kernel: KernelKind, ext: &str) -> String {
    format!("{prefix}_{}_{}.{ext}", strategy.name(), kernel.name())
}

fn cells(cfg: &RunConfig) -> Vec<(KernelKind, Strategy)> {
    cfg.kernels
        .iter()
        .flat_map(|&k| cfg.strategies.iter().map(move |&s| (k, s)))
        .collect()
}

fn with_context(context: String) -> impl FnOnce(Error) -> Error {
    move |source| Error::Training {
        context,
        source: Box::new(source),
    }
}

fn ensure_out_dir(cfg: &RunConfig) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| CliError::file(&cfg.out_dir)(Error::Io(e)))
}

fn require_file(path: &Path, what: &str) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{what} file {} not found", path.display())))
    }
}

fn read_raster(path: &Path) -> Result<RasterImage, CliError> {
    load_raster(path).map_err(CliError::file(path))
}

/// Writes a synthetic scene plus training and reference samples.
pub fn cmd_synth(cfg: &RunConfig) -> Result<SyntheticScene, CliError> {
    let scene = gen_synthetic(&cfg.synth_spec())?;
    ensure_out_dir(cfg)?;
    let out = |name: &str| cfg.out_dir.join(name);
    save_raster(out(SCENE_FILE), &scene.raster, ValueType::F64).map_err(CliError::file(out(SCENE_FILE)))?;
    save_positions(out(TRAINING_FILE), &scene.training).map_err(CliError::file(out(TRAINING_FILE)))?;
    save_positions(out(REFERENCE_FILE), &scene.reference).map_err(CliError::file(out(REFERENCE_FILE)))?;
    Ok(scene)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub kernel: KernelKind,
    pub strategy: Strategy,
    pub path: PathBuf,
    pub selected: Candidate,
    pub cv_accuracy: f64,
}

/// Parameter candidates for one kernel, C varying slowest.
pub fn candidate_grid(cfg: &RunConfig, kind: KernelKind, bands: usize) -> Vec<Candidate> {
    let kernels: Vec<KernelSpec> = match kind {
        KernelKind::Linear => vec![KernelSpec::linear()],
        KernelKind::Quadratic => vec![KernelSpec::quadratic(cfg.coef0)],
        KernelKind::Polynomial => vec![KernelSpec::polynomial(cfg.degree, cfg.coef0)],
        KernelKind::Rbf => cfg
            .gamma_grid
            .iter()
            .map(|g| KernelSpec::rbf(g / bands as f64))
            .collect(),
    };
    cfg.c_grid
        .iter()
        .flat_map(|&c| {
            kernels.iter().map(move |k| Candidate {
                kernel: *k,
                config: cfg.train_config(c),
            })
        })
        .collect()
}

/// Tunes each kernel by cross-validation, then trains every configured
/// strategy with the selected parameters.
pub fn cmd_train(cfg: &RunConfig) -> Result<Vec<TrainedModel>, CliError> {
    cfg.validate()?;
    let raster_path = cfg.raster_path();
    let samples_path = cfg.samples_path();
    require_file(&raster_path, "raster")?;
    require_file(&samples_path, "samples")?;
    let raster = read_raster(&raster_path)?;
    let samples = load_samples(&samples_path, &raster).map_err(CliError::file(&samples_path))?;
    let data = samples.to_class_samples(None)?;
    let tuning = if cfg.standardize {
        data.standardized()?.0
    } else {
        data.clone()
    };
    ensure_out_dir(cfg)?;

    let per_kernel: Vec<Result<Vec<TrainedModel>, CliError>> = cfg
        .kernels
        .par_iter()
        .map(|&kind| train_kernel(cfg, kind, &data, &tuning, raster.bands()))
        .collect();
    let mut out = Vec::new();
    for r in per_kernel {
        out.extend(r?);
    }
    Ok(out)
}

fn train_kernel(
    cfg: &RunConfig,
    kind: KernelKind,
    data: &ClassSamples,
    tuning: &ClassSamples,
    bands: usize,
) -> Result<Vec<TrainedModel>, CliError> {
    let grid = candidate_grid(cfg, kind, bands);
    let outcome = tune_parameters(tuning, kind, &grid, cfg.folds).map_err(with_context(format!("kernel {kind}")))?;
    let cv_accuracy = outcome.accuracies[outcome.best_index];
    let best = outcome.best;
    let mut trained = Vec::new();
    for &strategy in &cfg.strategies {
        let mut model = multiclass::train(strategy, data, &best.kernel, &best.config, cfg.standardize)
            .map_err(with_context(format!("{strategy} {kind}")))?;
        model.metadata = vec![
            ("cv_accuracy".into(), format!("{cv_accuracy:?}")),
            ("folds".into(), cfg.folds.to_string()),
            ("seed".into(), cfg.seed.to_string()),
            ("training_pixels".into(), data.total().to_string()),
        ];
        let path = cfg.out_dir.join(cell_file("model", strategy, kind, "lcm"));
        save_model(&path, &model).map_err(CliError::file(&path))?;
        trained.push(TrainedModel {
            kernel: kind,
            strategy,
            path,
            selected: best,
            cv_accuracy,
        });
    }
    Ok(trained)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedCell {
    pub kernel: KernelKind,
    pub strategy: Strategy,
    pub tally: TallySummary,
}

pub fn tally_text(classes: &[String], tally: &TallySummary) -> String {
    let mut s = String::new();
    for (name, count) in classes.iter().zip(&tally.per_class) {
        let _ = writeln!(s, "{name} {count}");
    }
    let _ = writeln!(s, "unclassified {}", tally.unclassified);
    let _ = writeln!(s, "mixed {}", tally.mixed);
    s
}

/// Classifies the raster with every trained model and writes label grids,
/// maps with legends, and per-class tallies.
pub fn cmd_classify(cfg: &RunConfig) -> Result<Vec<ClassifiedCell>, CliError> {
    cfg.validate()?;
    let raster_path = cfg.raster_path();
    require_file(&raster_path, "raster")?;
    let raster = read_raster(&raster_path)?;
    ensure_out_dir(cfg)?;
    cells(cfg)
        .par_iter()
        .map(|&(kernel, strategy)| {
            let model_path = cfg.out_dir.join(cell_file("model", strategy, kernel, "lcm"));
            let model = load_model(&model_path).map_err(CliError::file(&model_path))?;
            if model.strategy() != strategy || model.kernel.kind != kernel {
                return Err(CliError::file(&model_path)(Error::Input(format!(
                    "file holds a {} {} model",
                    model.strategy(),
                    model.kernel.kind
                ))));
            }
            let (grid, tally) = classify_raster(&model, &raster, cfg.rule())?;
            let names = model.classes.names().to_vec();
            let out = |prefix: &str, ext: &str| cfg.out_dir.join(cell_file(prefix, strategy, kernel, ext));

            let tally_path = out("tally", "txt");
            write_atomic(&tally_path, tally_text(&names, &tally).as_bytes()).map_err(CliError::file(&tally_path))?;
            let map_path = out("map", "ppm");
            let map = LandCoverMap::new(grid.clone(), names)?;
            export_map(&map, &map_path).map_err(CliError::file(&map_path))?;
            let labels_path = out("labels", "lcg");
            LabelFile {
                kernel,
                strategy,
                classes: model.classes.clone(),
                grid,
            }
            .save(&labels_path)
            .map_err(CliError::file(&labels_path))?;
            Ok(ClassifiedCell {
                kernel,
                strategy,
                tally,
            })
        })
        .collect()
}

/// Builds the confusion matrix of every label grid against the reference
/// pixels.
pub fn cmd_assess(cfg: &RunConfig) -> Result<Vec<AssessmentRecord>, CliError> {
    cfg.validate()?;
    let reference_path = cfg.reference_path();
    require_file(&reference_path, "reference")?;
    let positions = load_positions(&reference_path).map_err(CliError::file(&reference_path))?;
    cells(cfg)
        .into_iter()
        .map(|(kernel, strategy)| {
            let labels_path = cfg.out_dir.join(cell_file("labels", strategy, kernel, "lcg"));
            let file = LabelFile::load(&labels_path).map_err(CliError::file(&labels_path))?;
            let n = file.classes.len();
            let reference = resolve_reference(&positions, &file.classes).map_err(CliError::file(&reference_path))?;
            let confusion = build_confusion(&file.grid, n, &reference).map_err(CliError::file(&reference_path))?;
            let record = AssessmentRecord {
                kernel,
                strategy,
                classes: file.classes,
                tally: TallySummary::from_labels(n, &file.grid.labels),
                confusion,
            };
            let path = cfg.out_dir.join(cell_file("assess", strategy, kernel, "txt"));
            record.save(&path).map_err(CliError::file(&path))?;
            Ok(record)
        })
        .collect()
}

/// Pairs the 1A1 and 1AA assessments of each configured kernel and writes
/// `report.txt` and `report.csv`.
pub fn cmd_compare(cfg: &RunConfig) -> Result<ComparisonReport, CliError> {
    cfg.validate()?;
    let mut gaps = Vec::new();
    let mut records = Vec::new();
    for &kernel in &cfg.kernels {
        for strategy in Strategy::ALL {
            let path = cfg.out_dir.join(cell_file("assess", strategy, kernel, "txt"));
            if path.is_file() {
                records.push(AssessmentRecord::load(&path).map_err(CliError::file(&path))?);
            } else {
                gaps.push(format!("{strategy} {kernel}"));
            }
        }
    }
    if !gaps.is_empty() {
        return Err(Error::IncompleteGrid(gaps).into());
    }
    for pair in records.chunks(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let columns = |r: &AssessmentRecord| {
            (0..r.confusion.classes())
                .map(|c| r.confusion.col_total(c))
                .collect::<Vec<_>>()
        };
        if a.classes != b.classes || columns(a) != columns(b) {
            return Err(Error::Input(format!(
                "{} assessments of the two strategies used different reference data",
                a.kernel
            ))
            .into());
        }
    }
    let results = records
        .iter()
        .map(|r| {
            let k = kappa(&r.confusion).map_err(with_context(format!("{} {}", r.strategy, r.kernel)))?;
            Ok(CellResult {
                kernel: r.kernel,
                strategy: r.strategy,
                tally: r.tally.clone(),
                kappa: k,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let report = compare_report(&results)?;
    ensure_out_dir(cfg)?;
    for (name, text) in [(REPORT_TEXT, report.to_text()), (REPORT_CSV, report.to_csv())] {
        let path = cfg.out_dir.join(name);
        write_atomic(&path, text.as_bytes()).map_err(CliError::file(&path))?;
    }
    Ok(report)
}

/// Train, classify, assess and compare in one go.
pub fn cmd_run(cfg: &RunConfig) -> Result<ComparisonReport, CliError> {
    cmd_train(cfg)?;
    cmd_classify(cfg)?;
    cmd_assess(cfg)?;
    cmd_compare(cfg)
}
