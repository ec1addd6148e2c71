//! One-against-all and one-against-one decomposition of an N-class problem
//! into binary machines.
//!
//! One-against-all trains N machines, class k against the union of the
//! others. A pixel claimed by exactly one machine gets that class, a pixel
//! claimed by none is [`PixelLabel::Unclassified`] and a pixel claimed by
//! several is [`PixelLabel::Mixed`].
//!
//! One-against-one trains N(N−1)/2 machines, one per class pair. Each
//! machine casts one vote and the pixel goes to the unique vote maximum; a
//! tied maximum leaves it unclassified. Voting never produces a mixed pixel.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::binary_svm::{
    self, check_folds, collect_scores, cross_validate, select_best, BinaryModel, Candidate, CvOutcome, TrainConfig,
    TrainingSet,
};
use crate::kernels::{KernelKind, KernelSpec, Standardizer};
use crate::raster_io::RasterImage;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    OneVsOne,
    OneVsAll,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::OneVsOne, Strategy::OneVsAll];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::OneVsOne => "1a1",
            Strategy::OneVsAll => "1aa",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Strategy::OneVsOne => "1A1",
            Strategy::OneVsAll => "1AA",
        }
    }

    /// Machines needed for `n` classes.
    pub fn machine_count(self, n: usize) -> usize {
        match self {
            Strategy::OneVsAll => n,
            Strategy::OneVsOne => n * n.saturating_sub(1) / 2,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1a1" | "ovo" | "one-vs-one" => Ok(Strategy::OneVsOne),
            "1aa" | "ova" | "ovr" | "one-vs-all" => Ok(Strategy::OneVsAll),
            other => Err(Error::input(format!(
                "unknown strategy '{other}' (expected 1a1 or 1aa)"
            ))),
        }
    }
}

/// Ordered, unique class names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSet {
    names: Vec<String>,
}

impl ClassSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::input(format!(
                "at least 2 classes are required, got {}",
                names.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            validate_class_name(name)?;
            if !seen.insert(name.as_str()) {
                return Err(Error::input(format!("duplicate class name '{name}'")));
            }
        }
        Ok(ClassSet { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Class names must be non-empty, trimmed, and free of commas and control
/// characters so they survive every text format.
pub(crate) fn validate_class_name(name: &str) -> Result<()> {
    if name.is_empty() || name.trim() != name {
        return Err(Error::input(format!("invalid class name '{name}'")));
    }
    if name.chars().any(|c| c == ',' || c == '#' || c.is_control()) {
        return Err(Error::input(format!(
            "class name '{name}' contains a reserved character"
        )));
    }
    Ok(())
}

/// Training samples grouped by class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSamples {
    classes: ClassSet,
    samples: Vec<Vec<Vec<f64>>>,
}

impl ClassSamples {
    pub fn new(classes: ClassSet, samples: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if samples.len() != classes.len() {
            return Err(Error::input(format!(
                "{} classes but {} sample groups",
                classes.len(),
                samples.len()
            )));
        }
        for (k, group) in samples.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::input(format!("class '{}' has no samples", classes.name(k))));
            }
        }
        let dim = samples[0][0].len();
        if dim == 0 {
            return Err(Error::input("feature vectors must have at least one band"));
        }
        if let Some(bad) = samples.iter().flatten().find(|s| s.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(ClassSamples { classes, samples })
    }

    pub fn classes(&self) -> &ClassSet {
        &self.classes
    }

    pub fn class_samples(&self, k: usize) -> &[Vec<f64>] {
        &self.samples[k]
    }

    pub fn dim(&self) -> usize {
        self.samples[0][0].len()
    }

    pub fn total(&self) -> usize {
        self.samples.iter().map(Vec::len).sum()
    }

    /// Fits a per-band standardizer on all samples and returns the
    /// transformed copy.
    pub fn standardized(&self) -> Result<(ClassSamples, Standardizer)> {
        let st = Standardizer::fit(self.samples.iter().flatten().map(Vec::as_slice))?;
        let samples = self
            .samples
            .iter()
            .map(|g| g.iter().map(|s| st.apply(s)).collect())
            .collect();
        Ok((
            ClassSamples {
                classes: self.classes.clone(),
                samples,
            },
            st,
        ))
    }

    /// Class `k` as +1 against every other class as −1.
    pub fn one_vs_rest(&self, k: usize) -> Result<TrainingSet> {
        let mut x = Vec::with_capacity(self.total());
        let mut y = Vec::with_capacity(self.total());
        for (c, group) in self.samples.iter().enumerate() {
            let label = if c == k { 1.0 } else { -1.0 };
            x.extend(group.iter().cloned());
            y.extend(std::iter::repeat_n(label, group.len()));
        }
        TrainingSet::new(x, y)
    }

    /// Class `i` as +1 against class `j` as −1.
    pub fn pair(&self, i: usize, j: usize) -> Result<TrainingSet> {
        let (a, b) = (&self.samples[i], &self.samples[j]);
        let x = a.iter().chain(b).cloned().collect();
        let y = std::iter::repeat_n(1.0, a.len())
            .chain(std::iter::repeat_n(-1.0, b.len()))
            .collect();
        TrainingSet::new(x, y)
    }
}

/// A pairwise machine; positive decisions vote for `positive`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMachine {
    pub positive: usize,
    pub negative: usize,
    pub model: BinaryModel,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Machines {
    /// Machine k separates class k from the rest.
    OneVsAll(Vec<BinaryModel>),
    /// One machine per pair (i, j), i < j, in lexicographic order.
    OneVsOne(Vec<PairMachine>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MulticlassModel {
    pub classes: ClassSet,
    pub kernel: KernelSpec,
    pub config: TrainConfig,
    /// Applied to raw pixels before any kernel evaluation.
    pub standardizer: Option<Standardizer>,
    pub machines: Machines,
    /// Free-form training metadata, persisted with the model.
    pub metadata: Vec<(String, String)>,
}

impl MulticlassModel {
    pub fn strategy(&self) -> Strategy {
        match self.machines {
            Machines::OneVsAll(_) => Strategy::OneVsAll,
            Machines::OneVsOne(_) => Strategy::OneVsOne,
        }
    }

    pub fn machine_count(&self) -> usize {
        match &self.machines {
            Machines::OneVsAll(m) => m.len(),
            Machines::OneVsOne(m) => m.len(),
        }
    }

    fn binary_models(&self) -> Box<dyn Iterator<Item = &BinaryModel> + '_> {
        match &self.machines {
            Machines::OneVsAll(m) => Box::new(m.iter()),
            Machines::OneVsOne(m) => Box::new(m.iter().map(|p| &p.model)),
        }
    }

    /// Input dimension, taken from the standardizer or the first support
    /// vector found.
    pub fn dim(&self) -> Option<usize> {
        self.standardizer
            .as_ref()
            .map(Standardizer::bands)
            .or_else(|| self.binary_models().find_map(BinaryModel::dim))
    }

    /// Checks machine counts, class indices and kernel consistency.
    pub fn validate(&self) -> Result<()> {
        let n = self.classes.len();
        let expected = self.strategy().machine_count(n);
        if self.machine_count() != expected {
            return Err(Error::input(format!(
                "{} model for {n} classes needs {expected} machines, found {}",
                self.strategy(),
                self.machine_count()
            )));
        }
        if let Machines::OneVsOne(m) = &self.machines {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            for (p, (i, j)) in m.iter().zip(pairs) {
                if (p.positive, p.negative) != (i, j) {
                    return Err(Error::input(format!(
                        "pair machine ({}, {}) out of order, expected ({i}, {j})",
                        p.positive, p.negative
                    )));
                }
            }
        }
        if self.binary_models().any(|m| m.kernel != self.kernel) {
            return Err(Error::input("machines use differing kernel specs"));
        }
        let dim = self.dim();
        for m in self.binary_models() {
            if m.support_vectors.len() != m.dual_coefs.len() {
                return Err(Error::input("support vector and coefficient counts differ"));
            }
            if m.support_vectors.iter().any(|sv| Some(sv.len()) != dim) {
                return Err(Error::input("support vectors have inconsistent dimension"));
            }
        }
        Ok(())
    }

    fn prepare(&self, x: &[f64]) -> Result<Vec<f64>> {
        if let Some(d) = self.dim() {
            if d != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: x.len(),
                });
            }
        }
        Ok(match &self.standardizer {
            Some(st) => st.apply(x),
            None => x.to_vec(),
        })
    }

    /// Labels one raw feature vector.
    pub fn classify(&self, x: &[f64], rule: OneVsAllRule) -> Result<PixelLabel> {
        let z = self.prepare(x)?;
        Ok(self.classify_prepared(&z, rule))
    }

    fn classify_prepared(&self, z: &[f64], rule: OneVsAllRule) -> PixelLabel {
        match &self.machines {
            Machines::OneVsAll(models) => {
                let decisions: Vec<f64> = models.iter().map(|m| m.decision_unchecked(z)).collect();
                label_from_decisions(&decisions, rule)
            }
            Machines::OneVsOne(pairs) => {
                let mut votes = vec![0u32; self.classes.len()];
                for p in pairs {
                    votes[pair_winner(p.positive, p.negative, p.model.decision_unchecked(z))] += 1;
                }
                label_from_votes(&votes)
            }
        }
    }
}

/// How a one-against-all model resolves zero or several claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OneVsAllRule {
    /// Unclaimed pixels are unclassified and multiply claimed pixels mixed.
    #[default]
    Strict,
    /// Always pick the largest decision value (lowest index on ties).
    WinnerTakeAll,
}

/// Outcome of classifying one pixel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PixelLabel {
    Class(usize),
    Unclassified,
    /// Classes claiming the pixel, ascending, at least two.
    Mixed(Vec<usize>),
}

impl fmt::Display for PixelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PixelLabel::Class(k) => write!(f, "{k}"),
            PixelLabel::Unclassified => f.write_str("U"),
            PixelLabel::Mixed(set) => {
                f.write_str("M")?;
                for (i, k) in set.iter().enumerate() {
                    write!(f, "{}{k}", if i == 0 { ':' } else { '+' })?;
                }
                Ok(())
            }
        }
    }
}

/// Applies the one-against-all rule to per-class decision values. A value
/// of exactly zero does not claim the pixel.
pub fn label_from_decisions(decisions: &[f64], rule: OneVsAllRule) -> PixelLabel {
    match rule {
        OneVsAllRule::Strict => {
            let claims: Vec<usize> = (0..decisions.len()).filter(|&k| decisions[k] > 0.0).collect();
            match claims.len() {
                0 => PixelLabel::Unclassified,
                1 => PixelLabel::Class(claims[0]),
                _ => PixelLabel::Mixed(claims),
            }
        }
        OneVsAllRule::WinnerTakeAll => {
            let mut best = 0;
            for k in 1..decisions.len() {
                if decisions[k] > decisions[best] {
                    best = k;
                }
            }
            PixelLabel::Class(best)
        }
    }
}

/// Class receiving the vote of pair machine (`positive`, `negative`); an
/// exact zero votes for `negative`.
#[inline]
pub fn pair_winner(positive: usize, negative: usize, decision: f64) -> usize {
    if decision > 0.0 {
        positive
    } else {
        negative
    }
}

/// Unique vote maximum, or unclassified on a tie.
pub fn label_from_votes(votes: &[u32]) -> PixelLabel {
    let Some(&top) = votes.iter().max() else {
        return PixelLabel::Unclassified;
    };
    let mut winners = votes.iter().enumerate().filter(|(_, &v)| v == top);
    match (winners.next(), winners.next()) {
        (Some((k, _)), None) => PixelLabel::Class(k),
        _ => PixelLabel::Unclassified,
    }
}

fn ensure_trainable(kernel: &KernelSpec, config: &TrainConfig) -> Result<()> {
    kernel.validate()?;
    config.validate()
}

/// Trains N machines, class k (+1) against all other classes (−1).
pub fn train_one_vs_all(data: &ClassSamples, kernel: &KernelSpec, config: &TrainConfig) -> Result<MulticlassModel> {
    ensure_trainable(kernel, config)?;
    let n = data.classes().len();
    let models = (0..n)
        .into_par_iter()
        .map(|k| {
            data.one_vs_rest(k)
                .and_then(|set| binary_svm::train_binary(&set, kernel, config))
                .map_err(|e| Error::training(format!("class '{}' vs rest", data.classes().name(k)), e))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MulticlassModel {
        classes: data.classes().clone(),
        kernel: *kernel,
        config: *config,
        standardizer: None,
        machines: Machines::OneVsAll(models),
        metadata: Vec::new(),
    })
}

/// Trains one machine per class pair (i, j), i < j, with class i as +1.
pub fn train_one_vs_one(data: &ClassSamples, kernel: &KernelSpec, config: &TrainConfig) -> Result<MulticlassModel> {
    ensure_trainable(kernel, config)?;
    let n = data.classes().len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let machines = pairs
        .into_par_iter()
        .map(|(i, j)| {
            data.pair(i, j)
                .and_then(|set| binary_svm::train_binary(&set, kernel, config))
                .map(|model| PairMachine {
                    positive: i,
                    negative: j,
                    model,
                })
                .map_err(|e| {
                    Error::training(
                        format!("class '{}' vs '{}'", data.classes().name(i), data.classes().name(j)),
                        e,
                    )
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MulticlassModel {
        classes: data.classes().clone(),
        kernel: *kernel,
        config: *config,
        standardizer: None,
        machines: Machines::OneVsOne(machines),
        metadata: Vec::new(),
    })
}

/// Trains with either strategy, optionally standardizing the bands first
/// and storing the standardizer in the model.
pub fn train(
    strategy: Strategy,
    data: &ClassSamples,
    kernel: &KernelSpec,
    config: &TrainConfig,
    standardize: bool,
) -> Result<MulticlassModel> {
    let (prepared, standardizer) = if standardize {
        let (d, st) = data.standardized()?;
        (d, Some(st))
    } else {
        (data.clone(), None)
    };
    let mut model = match strategy {
        Strategy::OneVsAll => train_one_vs_all(&prepared, kernel, config)?,
        Strategy::OneVsOne => train_one_vs_one(&prepared, kernel, config)?,
    };
    model.standardizer = standardizer;
    Ok(model)
}

fn require(model: &MulticlassModel, strategy: Strategy) -> Result<()> {
    if model.strategy() != strategy {
        return Err(Error::input(format!(
            "expected a {strategy} model, got {}",
            model.strategy()
        )));
    }
    Ok(())
}

pub fn classify_one_vs_all(model: &MulticlassModel, x: &[f64], rule: OneVsAllRule) -> Result<PixelLabel> {
    require(model, Strategy::OneVsAll)?;
    model.classify(x, rule)
}

pub fn classify_one_vs_one(model: &MulticlassModel, x: &[f64]) -> Result<PixelLabel> {
    require(model, Strategy::OneVsOne)?;
    model.classify(x, OneVsAllRule::Strict)
}

/// Row-major grid of pixel labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelGrid {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<PixelLabel>,
}

impl LabelGrid {
    pub fn get(&self, x: usize, y: usize) -> Option<&PixelLabel> {
        if x < self.width && y < self.height {
            self.labels.get(y * self.width + x)
        } else {
            None
        }
    }
}

/// Per-class, unclassified and mixed pixel counts of a label grid.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TallySummary {
    pub per_class: Vec<u64>,
    pub unclassified: u64,
    pub mixed: u64,
}

impl TallySummary {
    pub fn new(classes: usize) -> Self {
        TallySummary {
            per_class: vec![0; classes],
            unclassified: 0,
            mixed: 0,
        }
    }

    pub fn add(&mut self, label: &PixelLabel) {
        match label {
            PixelLabel::Class(k) => self.per_class[*k] += 1,
            PixelLabel::Unclassified => self.unclassified += 1,
            PixelLabel::Mixed(_) => self.mixed += 1,
        }
    }

    pub fn merge(mut self, other: &TallySummary) -> Self {
        for (a, b) in self.per_class.iter_mut().zip(&other.per_class) {
            *a += b;
        }
        self.unclassified += other.unclassified;
        self.mixed += other.mixed;
        self
    }

    pub fn from_labels<'a>(classes: usize, labels: impl IntoIterator<Item = &'a PixelLabel>) -> Self {
        let mut t = TallySummary::new(classes);
        for l in labels {
            t.add(l);
        }
        t
    }

    pub fn total(&self) -> u64 {
        self.per_class.iter().sum::<u64>() + self.unclassified + self.mixed
    }
}

/// Classifies every pixel of `raster`. Rows are processed in parallel; the
/// result does not depend on the number of worker threads.
pub fn classify_raster(
    model: &MulticlassModel,
    raster: &RasterImage,
    rule: OneVsAllRule,
) -> Result<(LabelGrid, TallySummary)> {
    if let Some(d) = model.dim() {
        if d != raster.bands() {
            return Err(Error::input(format!(
                "raster has {} bands but the model expects {d}",
                raster.bands()
            )));
        }
    }
    let (w, h) = (raster.width(), raster.height());
    let n = model.classes.len();
    let rows: Vec<(Vec<PixelLabel>, TallySummary)> = (0..h)
        .into_par_iter()
        .map(|y| {
            let mut tally = TallySummary::new(n);
            let row = (0..w)
                .map(|x| {
                    let px = raster.pixel(x, y);
                    let z = match &model.standardizer {
                        Some(st) => st.apply(&px),
                        None => px,
                    };
                    let label = model.classify_prepared(&z, rule);
                    tally.add(&label);
                    label
                })
                .collect();
            (row, tally)
        })
        .collect();
    let mut labels = Vec::with_capacity(w * h);
    let mut tally = TallySummary::new(n);
    for (row, t) in rows {
        labels.extend(row);
        tally = tally.merge(&t);
    }
    Ok((
        LabelGrid {
            width: w,
            height: h,
            labels,
        },
        tally,
    ))
}

/// Selects kernel parameters for a multiclass problem by stratified k-fold
/// cross-validation of every one-vs-rest binary problem. A candidate's score
/// is its mean accuracy over those problems; ties follow
/// [`binary_svm::grid_search_cv`], as does the handling of candidates that
/// fail to converge.
pub fn tune_parameters(data: &ClassSamples, kind: KernelKind, grid: &[Candidate], folds: usize) -> Result<CvOutcome> {
    if grid.is_empty() {
        return Err(Error::input("parameter grid is empty"));
    }
    if grid.iter().any(|c| c.kernel.kind != kind) {
        return Err(Error::input(format!("grid contains kernels other than {kind}")));
    }
    let n = data.classes().len();
    let problems = (0..n).map(|k| data.one_vs_rest(k)).collect::<Result<Vec<_>>>()?;
    for p in &problems {
        check_folds(p, folds)?;
    }
    let jobs: Vec<(usize, usize)> = (0..grid.len()).flat_map(|c| (0..n).map(move |k| (c, k))).collect();
    let scores = jobs
        .into_par_iter()
        .map(|(c, k)| {
            cross_validate(&problems[k], &grid[c], folds).map_err(|e| {
                Error::training(
                    format!(
                        "cross-validation of {} C={} on class '{}'",
                        grid[c].kernel,
                        grid[c].config.c,
                        data.classes().name(k)
                    ),
                    e,
                )
            })
        })
        .collect::<Vec<Result<f64>>>();
    // a candidate fails as a whole if any of its problems failed
    let mut per_candidate: Vec<Result<f64>> = Vec::with_capacity(grid.len());
    let mut it = scores.into_iter();
    for _ in 0..grid.len() {
        let mut sum = Ok(0.0);
        for r in it.by_ref().take(n) {
            sum = match (sum, r) {
                (Ok(t), Ok(a)) => Ok(t + a),
                (Err(e), _) | (Ok(_), Err(e)) => Err(e),
            };
        }
        per_candidate.push(sum.map(|t| t / n as f64));
    }
    let accuracies = collect_scores(per_candidate)?;
    let best_index = select_best(grid, &accuracies);
    Ok(CvOutcome {
        best: grid[best_index],
        best_index,
        accuracies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tight blobs on the vertices of a regular polygon, so every class is
    /// linearly separable from the rest.
    fn blobs(n: usize) -> ClassSamples {
        let names: Vec<String> = (0..n).map(|k| format!("c{k}")).collect();
        let samples = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                let (cx, cy) = (10.0 * t.cos(), 10.0 * t.sin());
                (0..6)
                    .map(|i| vec![cx + 0.1 * (i % 2) as f64, cy + 0.1 * (i / 2) as f64])
                    .collect()
            })
            .collect();
        ClassSamples::new(ClassSet::new(names).unwrap(), samples).unwrap()
    }

    #[test]
    fn one_vs_all_decision_rule() {
        let rule = OneVsAllRule::Strict;
        assert_eq!(label_from_decisions(&[2.1, -1.0, -3.0], rule), PixelLabel::Class(0));
        assert_eq!(
            label_from_decisions(&[-1.0, -2.0, -0.5], rule),
            PixelLabel::Unclassified
        );
        assert_eq!(
            label_from_decisions(&[1.0, 0.5, -1.0], rule),
            PixelLabel::Mixed(vec![0, 1])
        );
        assert_eq!(label_from_decisions(&[0.0, 0.0, -1.0], rule), PixelLabel::Unclassified);
        assert_eq!(label_from_decisions(&[0.0, 0.5], rule), PixelLabel::Class(1));
    }

    #[test]
    fn winner_take_all_never_abstains() {
        let rule = OneVsAllRule::WinnerTakeAll;
        assert_eq!(label_from_decisions(&[-1.0, -2.0, -0.5], rule), PixelLabel::Class(2));
        assert_eq!(label_from_decisions(&[1.0, 0.5, -1.0], rule), PixelLabel::Class(0));
        assert_eq!(label_from_decisions(&[1.0, 1.0], rule), PixelLabel::Class(0));
    }

    #[test]
    fn voting_rule() {
        // 0>1, 0>2, 1>2
        let mut votes = [0u32; 3];
        for (i, j, f) in [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)] {
            votes[pair_winner(i, j, f)] += 1;
        }
        assert_eq!(votes, [2, 1, 0]);
        assert_eq!(label_from_votes(&votes), PixelLabel::Class(0));
        // cyclic: 0>1, 1>2, 2>0
        let mut votes = [0u32; 3];
        for (i, j, f) in [(0, 1, 1.0), (1, 2, 1.0), (0, 2, -1.0)] {
            votes[pair_winner(i, j, f)] += 1;
        }
        assert_eq!(votes, [1, 1, 1]);
        assert_eq!(label_from_votes(&votes), PixelLabel::Unclassified);
        assert_eq!(pair_winner(0, 1, 0.0), 1);
        assert_eq!(pair_winner(0, 1, 0.3), 0);
    }

    #[test]
    fn machine_counts() {
        for n in 2..=6 {
            let data = blobs(n);
            let cfg = TrainConfig::with_c(10.0);
            let ova = train_one_vs_all(&data, &KernelSpec::linear(), &cfg).unwrap();
            let ovo = train_one_vs_one(&data, &KernelSpec::linear(), &cfg).unwrap();
            assert_eq!(ova.machine_count(), n);
            assert_eq!(ovo.machine_count(), n * (n - 1) / 2);
            ova.validate().unwrap();
            ovo.validate().unwrap();
        }
    }

    #[test]
    fn two_class_pair_decides() {
        let data = blobs(2);
        let m = train_one_vs_one(&data, &KernelSpec::linear(), &TrainConfig::with_c(10.0)).unwrap();
        assert_eq!(m.machine_count(), 1);
        assert_eq!(classify_one_vs_one(&m, &[10.0, 0.0]).unwrap(), PixelLabel::Class(0));
        assert_eq!(classify_one_vs_one(&m, &[-10.0, 0.0]).unwrap(), PixelLabel::Class(1));
        assert!(classify_one_vs_all(&m, &[0.0, 0.0], OneVsAllRule::Strict).is_err());
    }

    #[test]
    fn empty_class_is_rejected() {
        let classes = ClassSet::new(["a", "b"]).unwrap();
        let err = ClassSamples::new(classes, vec![vec![vec![1.0]], vec![]]).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn class_set_validation() {
        assert!(ClassSet::new(["water"]).is_err());
        assert!(ClassSet::new(["water", "water"]).is_err());
        assert!(ClassSet::new(["water", "a,b"]).is_err());
        assert!(ClassSet::new(["water", " x"]).is_err());
        assert!(ClassSet::new(["water", "built-up area"]).is_ok());
    }

    #[test]
    fn training_failure_names_the_class() {
        let classes = ClassSet::new(["a", "b"]).unwrap();
        let a: Vec<Vec<f64>> = (0..20).map(|i| vec![(i as f64 * 0.37).fract()]).collect();
        let b: Vec<Vec<f64>> = (0..20).map(|i| vec![(i as f64 * 0.61).fract()]).collect();
        let data = ClassSamples::new(classes, vec![a, b]).unwrap();
        let starved = TrainConfig {
            c: 100.0,
            tolerance: 1e-300,
            max_passes: 10,
            max_sweeps: 1,
        };
        let err = train_one_vs_all(&data, &KernelSpec::rbf(10.0), &starved).unwrap_err();
        assert!(err.to_string().contains("class 'a' vs rest"), "{err}");
        assert!(matches!(err.root(), Error::Convergence { .. }));
        assert!(train_one_vs_all(&data, &KernelSpec::rbf(-1.0), &TrainConfig::default()).is_err());
    }

    #[test]
    fn strategy_names() {
        assert_eq!("1A1".parse::<Strategy>().unwrap(), Strategy::OneVsOne);
        assert_eq!("1aa".parse::<Strategy>().unwrap(), Strategy::OneVsAll);
        assert!("dag".parse::<Strategy>().is_err());
        assert_eq!(Strategy::OneVsOne.machine_count(5), 10);
    }

    #[test]
    fn pixel_label_display() {
        assert_eq!(PixelLabel::Class(3).to_string(), "3");
        assert_eq!(PixelLabel::Unclassified.to_string(), "U");
        assert_eq!(PixelLabel::Mixed(vec![0, 2]).to_string(), "M:0+2");
    }

    #[test]
    fn tuning_prefers_small_c_on_separable_data() {
        let data = blobs(3);
        let grid: Vec<Candidate> = [10.0, 1.0, 0.1]
            .iter()
            .map(|&c| Candidate {
                kernel: KernelSpec::linear(),
                config: TrainConfig::with_c(c),
            })
            .collect();
        let out = tune_parameters(&data, KernelKind::Linear, &grid, 3).unwrap();
        assert_eq!(out.accuracies, vec![1.0; 3]);
        assert_eq!(out.best.config.c, 0.1);
    }
}
