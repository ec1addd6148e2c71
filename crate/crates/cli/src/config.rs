//! Run configuration: a flat `key = value` file with `#` comments,
//! overridden by command-line flags.
//!
//! ```text
//! raster = scene.lcr
//! kernels = linear, rbf
//! c_grid = 0.1, 1, 10, 100
//! strict_1aa = true
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use landcover_svm::binary_svm::TrainConfig;
use landcover_svm::kernels::KernelKind;
use landcover_svm::multiclass::{OneVsAllRule, Strategy};
use landcover_svm::raster_io::SyntheticSpec;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub raster: Option<PathBuf>,
    pub samples: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    pub kernels: Vec<KernelKind>,
    pub strategies: Vec<Strategy>,
    pub c_grid: Vec<f64>,
    /// RBF gamma candidates as multiples of `1/bands`.
    pub gamma_grid: Vec<f64>,
    pub degree: u32,
    pub coef0: f64,
    pub folds: usize,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub strict_1aa: bool,
    pub standardize: bool,
    pub tolerance: f64,
    pub max_passes: usize,
    pub synth: SyntheticSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            raster: None,
            samples: None,
            reference: None,
            kernels: KernelKind::ALL.to_vec(),
            strategies: Strategy::ALL.to_vec(),
            c_grid: vec![0.1, 1.0, 10.0, 100.0],
            gamma_grid: vec![0.01, 0.1, 1.0, 10.0],
            degree: 3,
            coef0: 1.0,
            folds: 5,
            out_dir: PathBuf::from("out"),
            seed: 42,
            strict_1aa: true,
            standardize: true,
            tolerance: 1e-3,
            max_passes: 10,
            synth: SyntheticSpec::default(),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub strict_1aa: Option<bool>,
    pub raster: Option<PathBuf>,
    pub samples: Option<PathBuf>,
    pub reference: Option<PathBuf>,
    pub kernels: Option<String>,
    pub strategies: Option<String>,
}

impl RunConfig {
    /// Parses config text. `base` anchors relative paths.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config_error(line_no, format!("expected 'key = value', got '{line}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(config_error(line_no, format!("duplicate key '{key}'")));
            }
            cfg.set(key, value, base).map_err(|m| config_error(line_no, m))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), String> {
        let path = || -> Result<PathBuf, String> {
            if value.is_empty() {
                return Err(format!("{key} needs a path"));
            }
            Ok(base.join(value))
        };
        match key {
            "raster" => self.raster = Some(path()?),
            "samples" => self.samples = Some(path()?),
            "reference" => self.reference = Some(path()?),
            "out_dir" => self.out_dir = path()?,
            "kernels" => self.kernels = parse_kernels(value)?,
            "strategies" => self.strategies = parse_strategies(value)?,
            "c_grid" => self.c_grid = parse_list(key, value)?,
            "gamma_grid" => self.gamma_grid = parse_list(key, value)?,
            "degree" => self.degree = scalar(key, value)?,
            "coef0" => self.coef0 = scalar(key, value)?,
            "folds" => self.folds = scalar(key, value)?,
            "seed" => self.seed = scalar(key, value)?,
            "strict_1aa" => self.strict_1aa = scalar(key, value)?,
            "standardize" => self.standardize = scalar(key, value)?,
            "tolerance" => self.tolerance = scalar(key, value)?,
            "max_passes" => self.max_passes = scalar(key, value)?,
            "synth_classes" => {
                let n: usize = scalar(key, value)?;
                self.synth.class_names = landcover_svm::raster_io::default_class_names(n);
            }
            "synth_bands" => self.synth.bands = scalar(key, value)?,
            "synth_width" => self.synth.width = scalar(key, value)?,
            "synth_height" => self.synth.height = scalar(key, value)?,
            "synth_separation" => self.synth.separation = scalar(key, value)?,
            "synth_sigma" => self.synth.sigma = scalar(key, value)?,
            "synth_train" => self.synth.train_per_class = scalar(key, value)?,
            "synth_reference" => self.synth.reference_per_class = scalar(key, value)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), CliError> {
        if let Some(d) = &o.out_dir {
            self.out_dir = d.clone();
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        if let Some(s) = o.strict_1aa {
            self.strict_1aa = s;
        }
        if let Some(p) = &o.raster {
            self.raster = Some(p.clone());
        }
        if let Some(p) = &o.samples {
            self.samples = Some(p.clone());
        }
        if let Some(p) = &o.reference {
            self.reference = Some(p.clone());
        }
        if let Some(k) = &o.kernels {
            self.kernels = parse_kernels(k).map_err(CliError::Config)?;
        }
        if let Some(s) = &o.strategies {
            self.strategies = parse_strategies(s).map_err(CliError::Config)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Config(m));
        if self.kernels.is_empty() {
            return fail("kernel list is empty".into());
        }
        if self.strategies.is_empty() {
            return fail("strategy list is empty".into());
        }
        if self.folds < 2 {
            return fail(format!("folds must be at least 2, got {}", self.folds));
        }
        if self.c_grid.is_empty() || self.c_grid.iter().any(|c| !(c.is_finite() && *c > 0.0)) {
            return fail("c_grid needs positive finite values".into());
        }
        if self.kernels.contains(&KernelKind::Rbf)
            && (self.gamma_grid.is_empty() || self.gamma_grid.iter().any(|g| !(g.is_finite() && *g > 0.0)))
        {
            return fail("gamma_grid needs positive finite values".into());
        }
        if self.degree == 0 {
            return fail("degree must be at least 1".into());
        }
        if !(self.coef0.is_finite() && self.coef0 >= 0.0) {
            return fail("coef0 must be non-negative".into());
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return fail("tolerance must be positive".into());
        }
        if self.max_passes == 0 {
            return fail("max_passes must be at least 1".into());
        }
        Ok(())
    }

    pub fn rule(&self) -> OneVsAllRule {
        if self.strict_1aa {
            OneVsAllRule::Strict
        } else {
            OneVsAllRule::WinnerTakeAll
        }
    }

    pub fn train_config(&self, c: f64) -> TrainConfig {
        TrainConfig {
            c,
            tolerance: self.tolerance,
            max_passes: self.max_passes,
            ..TrainConfig::default()
        }
    }

    /// Synthetic scene settings with the run seed applied.
    pub fn synth_spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            seed: self.seed,
            ..self.synth.clone()
        }
    }

    pub fn raster_path(&self) -> PathBuf {
        self.raster.clone().unwrap_or_else(|| self.out_dir.join(SCENE_FILE))
    }

    pub fn samples_path(&self) -> PathBuf {
        self.samples.clone().unwrap_or_else(|| self.out_dir.join(TRAINING_FILE))
    }

    pub fn reference_path(&self) -> PathBuf {
        self.reference
            .clone()
            .unwrap_or_else(|| self.out_dir.join(REFERENCE_FILE))
    }
}

/// Default locations, also where `synth` writes its scene.
pub const SCENE_FILE: &str = "scene.lcr";
pub const TRAINING_FILE: &str = "training.csv";
pub const REFERENCE_FILE: &str = "reference.csv";

fn config_error(line: usize, message: String) -> CliError {
    CliError::Config(format!("line {line}: {message}"))
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("invalid value '{value}' for {key}"))
}

fn items(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, String> {
    items(value).map(|v| scalar(key, v)).collect()
}

fn dedup<T: PartialEq + Copy>(v: Vec<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(v.len());
    for x in v {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn parse_kernels(value: &str) -> Result<Vec<KernelKind>, String> {
    let v = items(value)
        .map(|k| k.parse().map_err(|_| format!("unknown kernel '{k}'")))
        .collect::<Result<Vec<KernelKind>, String>>()?;
    Ok(dedup(v))
}

pub fn parse_strategies(value: &str) -> Result<Vec<Strategy>, String> {
    let v = items(value)
        .map(|s| s.parse().map_err(|_| format!("unknown strategy '{s}'")))
        .collect::<Result<Vec<Strategy>, String>>()?;
    Ok(dedup(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_keys_and_comments() {
        let text = "# run\nraster = data/scene.lcr\nkernels = rbf, linear # two\nc_grid = 1, 10\nstrict_1aa = false\nfolds = 3\n";
        let cfg = RunConfig::parse(text, Path::new("/cfg")).unwrap();
        assert_eq!(cfg.raster, Some(PathBuf::from("/cfg/data/scene.lcr")));
        assert_eq!(cfg.kernels, vec![KernelKind::Rbf, KernelKind::Linear]);
        assert_eq!(cfg.c_grid, vec![1.0, 10.0]);
        assert!(!cfg.strict_1aa);
        assert_eq!(cfg.folds, 3);
        assert_eq!(cfg.rule(), OneVsAllRule::WinnerTakeAll);
    }

    #[test]
    fn rejects_unknown_and_duplicate_keys() {
        let err = RunConfig::parse("kernal = rbf\n", Path::new("")).unwrap_err();
        assert!(err.to_string().contains("line 1"), "{err}");
        assert!(RunConfig::parse("seed = 1\nseed = 2\n", Path::new("")).is_err());
        assert!(RunConfig::parse("kernels = sigmoid\n", Path::new("")).is_err());
        assert!(RunConfig::parse("just text\n", Path::new("")).is_err());
        assert!(RunConfig::parse("folds = -1\n", Path::new("")).is_err());
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut cfg = RunConfig::default();
        cfg.validate().unwrap();
        cfg.folds = 1;
        assert!(cfg.validate().is_err());
        let cfg = RunConfig {
            c_grid: vec![0.0],
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn overrides_win() {
        let mut cfg = RunConfig::parse("seed = 1\nstrategies = 1aa\n", Path::new("")).unwrap();
        cfg.apply(&Overrides {
            seed: Some(9),
            strategies: Some("1a1,1a1".into()),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.strategies, vec![Strategy::OneVsOne]);
        assert_eq!(cfg.synth_spec().seed, 9);
    }

    #[test]
    fn default_inputs_live_in_the_output_directory() {
        let cfg = RunConfig {
            out_dir: PathBuf::from("/tmp/run"),
            ..Default::default()
        };
        assert_eq!(cfg.raster_path(), PathBuf::from("/tmp/run/scene.lcr"));
        assert_eq!(cfg.reference_path(), PathBuf::from("/tmp/run/reference.csv"));
    }
}
