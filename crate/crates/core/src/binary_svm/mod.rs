//! Two-class soft-margin SVM.
//!
//! [`train_binary`] solves the dual problem
//!
//! ```text
//! max  Σ αᵢ − ½ Σᵢ Σⱼ αᵢ αⱼ yᵢ yⱼ k(xᵢ, xⱼ)
//! s.t. 0 ≤ αᵢ ≤ C,  Σ αᵢ yᵢ = 0
//! ```
//!
//! with sequential minimal optimization. [`brute_force_qp`] solves the same
//! problem by dense projected-gradient ascent and serves as a test oracle.

mod cv;
mod oracle;
mod smo;

pub(crate) use cv::{check_folds, collect_scores, cross_validate, select_best};
pub use cv::{grid_search_cv, Candidate, CvOutcome};
pub use oracle::{brute_force_qp, ORACLE_MAX_SAMPLES};

use crate::kernels::{check_dimensions, KernelSpec};
use crate::{Error, Result};

/// Dual coefficients below this value are dropped from stored models.
pub const SUPPORT_VECTOR_THRESHOLD: f64 = 1e-8;

/// Labelled feature vectors for one binary problem. Labels are ±1.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    samples: Vec<Vec<f64>>,
    labels: Vec<f64>,
}

impl TrainingSet {
    pub fn new(samples: Vec<Vec<f64>>, labels: Vec<f64>) -> Result<Self> {
        if samples.len() != labels.len() {
            return Err(Error::input(format!(
                "{} samples but {} labels",
                samples.len(),
                labels.len()
            )));
        }
        check_dimensions(&samples)?;
        if let Some(bad) = labels.iter().find(|&&y| y != 1.0 && y != -1.0) {
            return Err(Error::input(format!("label must be -1 or +1, got {bad}")));
        }
        if samples.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::input("feature values must be finite"));
        }
        Ok(TrainingSet { samples, labels })
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples[0].len()
    }

    /// Number of (positive, negative) samples.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&y| y > 0.0).count();
        (pos, self.labels.len() - pos)
    }

    /// Same samples with every label negated.
    pub fn negated(&self) -> Self {
        TrainingSet {
            samples: self.samples.clone(),
            labels: self.labels.iter().map(|y| -y).collect(),
        }
    }

    pub(crate) fn subset(&self, idx: &[usize]) -> Self {
        TrainingSet {
            samples: idx.iter().map(|&i| self.samples[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub(crate) fn ensure_both_signs(&self) -> Result<()> {
        match self.class_counts() {
            (0, _) => Err(Error::DegenerateTraining(
                "no positive samples; both classes are required".into(),
            )),
            (_, 0) => Err(Error::DegenerateTraining(
                "no negative samples; both classes are required".into(),
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// Soft-margin penalty.
    pub c: f64,
    /// Allowed slack in the KKT conditions at termination.
    pub tolerance: f64,
    /// Consecutive stalled updates tolerated before the solver gives up
    /// making progress and checks the KKT conditions.
    pub max_passes: usize,
    /// Hard cap on solver work, in sweeps of `n` pair updates.
    pub max_sweeps: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            c: 1.0,
            tolerance: 1e-3,
            max_passes: 10,
            max_sweeps: 10_000,
        }
    }
}

impl TrainConfig {
    pub fn with_c(c: f64) -> Self {
        TrainConfig {
            c,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::input(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::input(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_passes == 0 || self.max_sweeps == 0 {
            return Err(Error::input("max_passes and max_sweeps must be positive"));
        }
        Ok(())
    }
}

/// A trained two-class machine. `dual_coefs[i]` is `αᵢ·yᵢ` of the i-th
/// support vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryModel {
    pub kernel: KernelSpec,
    pub support_vectors: Vec<Vec<f64>>,
    pub dual_coefs: Vec<f64>,
    pub bias: f64,
    pub c: f64,
}

impl BinaryModel {
    pub fn dim(&self) -> Option<usize> {
        self.support_vectors.first().map(Vec::len)
    }

    #[inline]
    pub(crate) fn decision_unchecked(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.dual_coefs)
            .map(|(sv, coef)| coef * self.kernel.eval_unchecked(sv, x))
            .sum::<f64>()
            + self.bias
    }

    /// `f(x) = Σ coefᵢ·k(svᵢ, x) + b`.
    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if let Some(d) = self.dim() {
            if d != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: x.len(),
                });
            }
        }
        Ok(self.decision_unchecked(x))
    }

    /// Predicted label, +1 when `f(x) > 0` and −1 otherwise.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(if self.decision_value(x)? > 0.0 { 1.0 } else { -1.0 })
    }

    pub(crate) fn negate(&mut self) {
        for c in &mut self.dual_coefs {
            *c = -*c;
        }
        self.bias = -self.bias;
    }
}

/// Full solver output: the stored model plus the dual variables for every
/// training point.
#[derive(Debug, Clone)]
pub struct BinaryFit {
    pub model: BinaryModel,
    pub alphas: Vec<f64>,
    pub objective: f64,
    pub iterations: usize,
}

/// Trains a machine and keeps the per-sample dual variables.
pub fn fit_binary(data: &TrainingSet, kernel: &KernelSpec, config: &TrainConfig) -> Result<BinaryFit> {
    kernel.validate()?;
    config.validate()?;
    data.ensure_both_signs()?;
    // The solver is run with the first label positive so that negating all
    // labels yields exactly the negated model.
    if data.labels[0] < 0.0 {
        let mut fit = smo::solve(&data.negated(), kernel, config)?;
        fit.model.negate();
        return Ok(fit);
    }
    smo::solve(data, kernel, config)
}

/// Trains a two-class soft-margin SVM.
pub fn train_binary(data: &TrainingSet, kernel: &KernelSpec, config: &TrainConfig) -> Result<BinaryModel> {
    fit_binary(data, kernel, config).map(|f| f.model)
}

/// Free-function form of [`BinaryModel::decision_value`].
pub fn decision_value(model: &BinaryModel, x: &[f64]) -> Result<f64> {
    model.decision_value(x)
}

/// Dual objective `Σα − ½ αᵀQα` with `Qᵢⱼ = yᵢyⱼk(xᵢ,xⱼ)`.
pub fn dual_objective(data: &TrainingSet, kernel: &KernelSpec, alphas: &[f64]) -> f64 {
    let (x, y) = (&data.samples, &data.labels);
    let mut quad = 0.0;
    for i in 0..x.len() {
        if alphas[i] == 0.0 {
            continue;
        }
        for j in 0..x.len() {
            quad += alphas[i] * alphas[j] * y[i] * y[j] * kernel.eval_unchecked(&x[i], &x[j]);
        }
    }
    alphas.iter().sum::<f64>() - 0.5 * quad
}

/// Largest violation of the soft-margin KKT conditions over the training
/// set, measured on `y·f(x)`:
///
/// - `α = 0`      requires `y·f(x) ≥ 1`
/// - `0 < α < C`  requires `y·f(x) = 1`
/// - `α = C`      requires `y·f(x) ≤ 1`
///
/// Dual values below [`SUPPORT_VECTOR_THRESHOLD`] count as zero.
pub fn kkt_violation(data: &TrainingSet, alphas: &[f64], model: &BinaryModel) -> f64 {
    let c = model.c;
    data.samples
        .iter()
        .zip(&data.labels)
        .zip(alphas)
        .map(|((x, y), &a)| {
            let margin = y * model.decision_unchecked(x);
            if a < SUPPORT_VECTOR_THRESHOLD {
                (1.0 - margin).max(0.0)
            } else if a >= c {
                (margin - 1.0).max(0.0)
            } else {
                (margin - 1.0).abs()
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn two_point() -> TrainingSet {
        TrainingSet::new(vec![vec![-1.0], vec![1.0]], vec![-1.0, 1.0]).unwrap()
    }

    #[test]
    fn two_point_problem_has_analytic_solution() {
        let fit = fit_binary(&two_point(), &KernelSpec::linear(), &TrainConfig::with_c(10.0)).unwrap();
        assert_abs_diff_eq!(fit.alphas[0], 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.alphas[1], 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.model.bias, 0.0, epsilon = 1e-9);
        let m = &fit.model;
        assert_abs_diff_eq!(m.decision_value(&[1.0]).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(m.decision_value(&[0.0]).unwrap(), 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(m.decision_value(&[-1.0]).unwrap(), -1.0, epsilon = 1e-9);
    }

    #[test]
    fn xor_with_rbf_uses_every_point() {
        let data = TrainingSet::new(
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            vec![-1.0, -1.0, 1.0, 1.0],
        )
        .unwrap();
        let fit = fit_binary(&data, &KernelSpec::rbf(1.0), &TrainConfig::with_c(10.0)).unwrap();
        assert_eq!(fit.model.support_vectors.len(), 4);
        for (x, y) in data.samples().iter().zip(data.labels()) {
            assert_eq!(fit.model.predict(x).unwrap(), *y);
        }
        // symmetric solution: α = 1/(1 − e⁻¹)²
        let expected = 1.0 / (1.0 - (-1.0f64).exp()).powi(2);
        for a in &fit.alphas {
            assert_abs_diff_eq!(*a, expected, epsilon = 1e-2);
        }
    }

    #[test]
    fn single_class_is_degenerate() {
        let data = TrainingSet::new(vec![vec![0.0], vec![1.0]], vec![1.0, 1.0]).unwrap();
        let err = train_binary(&data, &KernelSpec::linear(), &TrainConfig::default()).unwrap_err();
        assert!(matches!(err, Error::DegenerateTraining(_)));
    }

    #[test]
    fn invalid_training_sets_are_rejected() {
        assert!(TrainingSet::new(vec![vec![0.0]], vec![1.0, -1.0]).is_err());
        assert!(TrainingSet::new(vec![vec![0.0], vec![1.0]], vec![1.0, 0.0]).is_err());
        assert!(TrainingSet::new(vec![vec![0.0], vec![1.0, 2.0]], vec![1.0, -1.0]).is_err());
        assert!(TrainingSet::new(vec![vec![f64::NAN], vec![1.0]], vec![1.0, -1.0]).is_err());
    }

    #[test]
    fn invalid_config_is_rejected() {
        let bad = TrainConfig {
            c: 0.0,
            ..Default::default()
        };
        assert!(train_binary(&two_point(), &KernelSpec::linear(), &bad).is_err());
        let bad = TrainConfig {
            tolerance: -1.0,
            ..Default::default()
        };
        assert!(train_binary(&two_point(), &KernelSpec::linear(), &bad).is_err());
    }

    #[test]
    fn decision_value_checks_dimension() {
        let m = train_binary(&two_point(), &KernelSpec::linear(), &TrainConfig::default()).unwrap();
        assert!(matches!(
            m.decision_value(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn small_c_bounds_coefficients() {
        let data = TrainingSet::new(
            vec![vec![0.0], vec![0.1], vec![0.2], vec![0.15], vec![0.05]],
            vec![-1.0, 1.0, -1.0, 1.0, -1.0],
        )
        .unwrap();
        let fit = fit_binary(&data, &KernelSpec::linear(), &TrainConfig::with_c(0.5)).unwrap();
        assert!(fit.model.dual_coefs.iter().all(|c| c.abs() <= 0.5));
        let eq: f64 = fit.alphas.iter().zip(data.labels()).map(|(a, y)| a * y).sum();
        assert!(eq.abs() <= 1e-6);
        assert!(kkt_violation(&data, &fit.alphas, &fit.model) <= 1e-3);
    }
}
