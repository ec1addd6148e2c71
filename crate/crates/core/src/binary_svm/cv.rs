use rayon::prelude::*;

use super::{train_binary, TrainConfig, TrainingSet};
use crate::kernels::{KernelKind, KernelSpec};
use crate::{Error, Result};

/// One point of a parameter grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    pub kernel: KernelSpec,
    pub config: TrainConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CvOutcome {
    pub best: Candidate,
    pub best_index: usize,
    /// Mean held-out accuracy of every candidate, in grid order. NaN marks
    /// a candidate whose solver hit the iteration cap on some fold.
    pub accuracies: Vec<f64>,
}

/// Stratified fold assignment: the k-th positive sample goes to fold
/// `k % folds`, and likewise for negatives.
pub(crate) fn stratified_folds(labels: &[f64], folds: usize) -> Vec<usize> {
    let (mut pos, mut neg) = (0usize, 0usize);
    labels
        .iter()
        .map(|&y| {
            let counter = if y > 0.0 { &mut pos } else { &mut neg };
            let f = *counter % folds;
            *counter += 1;
            f
        })
        .collect()
}

/// Mean held-out accuracy of one candidate across stratified folds.
pub(crate) fn cross_validate(data: &TrainingSet, candidate: &Candidate, folds: usize) -> Result<f64> {
    let assignment = stratified_folds(data.labels(), folds);
    let mut total = 0.0;
    for fold in 0..folds {
        let (train_idx, test_idx): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| assignment[i] != fold);
        let model = train_binary(&data.subset(&train_idx), &candidate.kernel, &candidate.config)?;
        let correct = test_idx
            .iter()
            .filter(|&&i| {
                let f = model.decision_unchecked(&data.samples()[i]);
                (f > 0.0) == (data.labels()[i] > 0.0)
            })
            .count();
        total += correct as f64 / test_idx.len() as f64;
    }
    Ok(total / folds as f64)
}

pub(crate) fn check_folds(data: &TrainingSet, folds: usize) -> Result<()> {
    let (pos, neg) = data.class_counts();
    let minority = pos.min(neg);
    if folds < 2 {
        return Err(Error::input(format!("need at least 2 folds, got {folds}")));
    }
    if folds > minority {
        return Err(Error::input(format!(
            "{folds} folds requested but the minority class has only {minority} samples"
        )));
    }
    Ok(())
}

/// Index of the best accuracy; ties go to the smallest C, then to the
/// earliest grid position. NaN scores are never selected unless all are NaN.
pub(crate) fn select_best(grid: &[Candidate], accuracies: &[f64]) -> usize {
    let mut best = accuracies.iter().position(|a| !a.is_nan()).unwrap_or(0);
    for i in best + 1..grid.len() {
        let (a, b) = (accuracies[i], accuracies[best]);
        if a > b || (a == b && grid[i].config.c < grid[best].config.c) {
            best = i;
        }
    }
    best
}

/// Turns per-candidate results into scores. Candidates that failed to
/// converge score NaN; any other error aborts, and so does a grid where
/// nothing converged.
pub(crate) fn collect_scores(results: Vec<Result<f64>>) -> Result<Vec<f64>> {
    let mut first_failure = None;
    let mut scores = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(a) => scores.push(a),
            Err(e) if matches!(e.root(), Error::Convergence { .. }) => {
                first_failure.get_or_insert(e);
                scores.push(f64::NAN);
            }
            Err(e) => return Err(e),
        }
    }
    match first_failure {
        Some(e) if scores.iter().all(|a| a.is_nan()) => Err(e),
        _ => Ok(scores),
    }
}

/// Stratified k-fold grid search. Every candidate must use `kind`.
/// Candidates that hit the solver's iteration cap score NaN and are
/// skipped; the search fails only if none converges.
pub fn grid_search_cv(data: &TrainingSet, kind: KernelKind, grid: &[Candidate], folds: usize) -> Result<CvOutcome> {
    if grid.is_empty() {
        return Err(Error::input("parameter grid is empty"));
    }
    if let Some(c) = grid.iter().find(|c| c.kernel.kind != kind) {
        return Err(Error::input(format!(
            "grid candidate uses kernel {} but {kind} was requested",
            c.kernel.kind
        )));
    }
    check_folds(data, folds)?;
    let accuracies = collect_scores(
        grid.par_iter()
            .map(|cand| {
                cross_validate(data, cand, folds)
                    .map_err(|e| Error::training(format!("candidate {} C={}", cand.kernel, cand.config.c), e))
            })
            .collect(),
    )?;
    let best_index = select_best(grid, &accuracies);
    Ok(CvOutcome {
        best: grid[best_index],
        best_index,
        accuracies,
    })
}
