//! Accuracy assessment and strategy comparison.
//!
//! The confusion matrix has one row per mapped class plus two extra rows for
//! unclassified and mixed pixels, and one column per reference class. The
//! extra rows are never credited to any class: they count as disagreement in
//! the observed agreement and only enter the chance agreement through the
//! total. Kappa variance uses the delta-method approximation common in
//! remote-sensing accuracy assessment:
//!
//! ```text
//! θ1 = Σ nᵢᵢ/n          θ2 = Σ nᵢ₊n₊ᵢ/n²
//! θ3 = Σ nᵢᵢ(nᵢ₊+n₊ᵢ)/n²    θ4 = Σᵢⱼ nᵢⱼ(nⱼ₊+n₊ᵢ)²/n³
//! var = 1/n · [ θ1(1−θ1)/(1−θ2)² + 2(1−θ1)(2θ1θ2−θ3)/(1−θ2)³
//!              + (1−θ1)²(θ4−4θ2²)/(1−θ2)⁴ ]
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::kernels::KernelKind;
use crate::multiclass::{ClassSet, LabelGrid, PixelLabel, Strategy, TallySummary};
use crate::raster_io::LabeledPosition;
use crate::{Error, Result};

/// Two-sided 95% critical value; a difference is significant when |Z|
/// strictly exceeds it.
pub const Z_CRITICAL: f64 = 1.96;

/// A reference pixel with its true class index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferencePixel {
    pub x: usize,
    pub y: usize,
    pub class: usize,
}

/// Maps named reference positions onto class indices.
pub fn resolve_reference(positions: &[LabeledPosition], classes: &ClassSet) -> Result<Vec<ReferencePixel>> {
    positions
        .iter()
        .map(|p| {
            classes
                .index_of(&p.class)
                .map(|class| ReferencePixel { x: p.x, y: p.y, class })
                .ok_or_else(|| Error::input(format!("reference class '{}' is not a model class", p.class)))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: usize,
    /// `(classes + 2) × classes`, row-major.
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(classes: usize) -> Self {
        ConfusionMatrix {
            classes,
            counts: vec![0; (classes + 2) * classes],
        }
    }

    /// Builds a matrix from `classes + 2` rows of `classes` counts.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let classes = rows.first().map_or(0, Vec::len);
        if classes == 0 || rows.len() != classes + 2 || rows.iter().any(|r| r.len() != classes) {
            return Err(Error::input(
                "confusion matrix needs N+2 rows (classes, unclassified, mixed) of N columns",
            ));
        }
        let counts = rows.iter().flatten().copied().collect();
        Ok(ConfusionMatrix { classes, counts })
    }

    /// Builds from an N×N class block with empty unclassified/mixed rows.
    pub fn from_class_block(block: &[Vec<u64>]) -> Result<Self> {
        let n = block.len();
        let mut rows = block.to_vec();
        rows.push(vec![0; n]);
        rows.push(vec![0; n]);
        Self::from_rows(&rows)
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn unclassified_row(&self) -> usize {
        self.classes
    }

    pub fn mixed_row(&self) -> usize {
        self.classes + 1
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.classes + col]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.classes).map(<[u64]>::to_vec).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn add(&mut self, mapped: &PixelLabel, reference: usize) {
        let row = match mapped {
            PixelLabel::Class(k) => *k,
            PixelLabel::Unclassified => self.unclassified_row(),
            PixelLabel::Mixed(_) => self.mixed_row(),
        };
        self.counts[row * self.classes + reference] += 1;
    }

    pub fn row_total(&self, row: usize) -> u64 {
        (0..self.classes).map(|c| self.get(row, c)).sum()
    }

    pub fn col_total(&self, col: usize) -> u64 {
        (0..self.classes + 2).map(|r| self.get(r, col)).sum()
    }

    pub fn overall_accuracy(&self) -> Option<f64> {
        let n = self.total();
        (n > 0).then(|| (0..self.classes).map(|k| self.get(k, k)).sum::<u64>() as f64 / n as f64)
    }
}

/// Tallies mapped labels against reference classes.
pub fn build_confusion(labels: &LabelGrid, classes: usize, reference: &[ReferencePixel]) -> Result<ConfusionMatrix> {
    let mut cm = ConfusionMatrix::new(classes);
    for r in reference {
        let label = labels.get(r.x, r.y).ok_or_else(|| {
            Error::input(format!(
                "reference pixel ({}, {}) lies outside the {}x{} grid",
                r.x, r.y, labels.width, labels.height
            ))
        })?;
        if r.class >= classes {
            return Err(Error::input(format!("reference class index {} out of range", r.class)));
        }
        if let PixelLabel::Class(k) = label {
            if *k >= classes {
                return Err(Error::input(format!("mapped class index {k} out of range")));
            }
        }
        cm.add(label, r.class);
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaResult {
    pub kappa: f64,
    pub variance: f64,
    pub n: u64,
}

/// Cohen's kappa and its delta-method variance.
pub fn kappa(cm: &ConfusionMatrix) -> Result<KappaResult> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::input("cannot compute kappa of an empty confusion matrix"));
    }
    let n = total as f64;
    let k = cm.classes();
    let rows = k + 2;
    let row_t: Vec<f64> = (0..rows).map(|r| cm.row_total(r) as f64).collect();
    // reference columns for the unclassified/mixed rows are always empty
    let col_t: Vec<f64> = (0..rows)
        .map(|c| if c < k { cm.col_total(c) as f64 } else { 0.0 })
        .collect();

    let mut diag = 0.0;
    let mut chance = 0.0;
    let mut t3 = 0.0;
    for i in 0..k {
        let nii = cm.get(i, i) as f64;
        diag += nii;
        chance += row_t[i] * col_t[i];
        t3 += nii * (row_t[i] + col_t[i]);
    }
    let mut t4 = 0.0;
    for (i, ct) in col_t.iter().enumerate() {
        for (j, rt) in row_t.iter().take(k).enumerate() {
            let nij = cm.get(i, j) as f64;
            if nij > 0.0 {
                let s = rt + ct;
                t4 += nij * s * s;
            }
        }
    }
    let t1 = diag / n;
    let t2 = chance / (n * n);
    let t3 = t3 / (n * n);
    let t4 = t4 / (n * n * n);
    if t2 >= 1.0 {
        return Err(Error::UndefinedKappa);
    }
    let kappa = (t1 - t2) / (1.0 - t2);
    let q = 1.0 - t2;
    let a = t1 * (1.0 - t1) / (q * q);
    let b = 2.0 * (1.0 - t1) * (2.0 * t1 * t2 - t3) / (q * q * q);
    let c = (1.0 - t1) * (1.0 - t1) * (t4 - 4.0 * t2 * t2) / (q * q * q * q);
    // rounding can leave a tiny negative residue at perfect agreement
    let variance = ((a + b + c) / n).max(0.0);
    Ok(KappaResult {
        kappa,
        variance,
        n: total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZTest {
    pub z: f64,
    pub significant: bool,
}

pub fn is_significant(z: f64) -> bool {
    z.abs() > Z_CRITICAL
}

/// `Z = (κa − κb)/√(var_a + var_b)`.
pub fn z_statistic(a: &KappaResult, b: &KappaResult) -> Result<ZTest> {
    if !(a.variance.is_finite() && b.variance.is_finite()) {
        return Err(Error::input("kappa variances must be finite"));
    }
    let diff = a.kappa - b.kappa;
    let var = a.variance + b.variance;
    if var <= 0.0 {
        if diff == 0.0 {
            return Ok(ZTest {
                z: 0.0,
                significant: false,
            });
        }
        return Err(Error::DegenerateVariance { a: a.kappa, b: b.kappa });
    }
    let z = diff / var.sqrt();
    Ok(ZTest {
        z,
        significant: is_significant(z),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NoDifference,
    Insignificant,
    Significant,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NoDifference => "No difference",
            Verdict::Insignificant => "Difference insignificant",
            Verdict::Significant => "Difference significant",
        }
    }
}

/// Results of one kernel × strategy run.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub kernel: KernelKind,
    pub strategy: Strategy,
    pub tally: TallySummary,
    pub kappa: KappaResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelComparison {
    pub kernel: KernelKind,
    pub one_vs_one: CellResult,
    pub one_vs_all: CellResult,
    /// Z of the 1A1 kappa against the 1AA kappa.
    pub z: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<KernelComparison>,
}

/// Pairs the two strategies per kernel. Every kernel present must have
/// both strategies.
pub fn compare_report(cells: &[CellResult]) -> Result<ComparisonReport> {
    if cells.is_empty() {
        return Err(Error::input("no results to compare"));
    }
    let mut grid: BTreeMap<KernelKind, [Option<&CellResult>; 2]> = BTreeMap::new();
    for cell in cells {
        let slot = &mut grid.entry(cell.kernel).or_default()[strategy_slot(cell.strategy)];
        if slot.is_some() {
            return Err(Error::input(format!(
                "duplicate result for {} {}",
                cell.strategy, cell.kernel
            )));
        }
        *slot = Some(cell);
    }
    let missing: Vec<String> = grid
        .iter()
        .flat_map(|(kernel, slots)| {
            Strategy::ALL
                .iter()
                .filter(|s| slots[strategy_slot(**s)].is_none())
                .map(move |s| format!("{s} {kernel}"))
        })
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteGrid(missing));
    }
    let mut rows = Vec::with_capacity(grid.len());
    for (kernel, slots) in grid {
        let ovo = slots[0].expect("checked above");
        let ova = slots[1].expect("checked above");
        let test = z_statistic(&ovo.kappa, &ova.kappa)?;
        let verdict = if ovo.kappa.kappa.to_bits() == ova.kappa.kappa.to_bits() {
            Verdict::NoDifference
        } else if test.significant {
            Verdict::Significant
        } else {
            Verdict::Insignificant
        };
        rows.push(KernelComparison {
            kernel,
            one_vs_one: ovo.clone(),
            one_vs_all: ova.clone(),
            z: test.z,
            verdict,
        });
    }
    Ok(ComparisonReport { rows })
}

fn strategy_slot(s: Strategy) -> usize {
    match s {
        Strategy::OneVsOne => 0,
        Strategy::OneVsAll => 1,
    }
}

impl ComparisonReport {
    /// Two plain-text tables: unclassified/mixed counts and kappa with Z.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("Table 1: Unclassified and mixed pixels\n\n");
        let _ = writeln!(s, "{:<12}{:<22}{:>10}{:>10}", "Classifier", "Type", "1A1", "1AA");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<12}{:<22}{:>10}{:>10}",
                r.kernel.title(),
                "Unclassified Pixels",
                r.one_vs_one.tally.unclassified,
                r.one_vs_all.tally.unclassified
            );
            let _ = writeln!(
                s,
                "{:<12}{:<22}{:>10}{:>10}",
                "", "Mixed Pixels", r.one_vs_one.tally.mixed, r.one_vs_all.tally.mixed
            );
        }
        s.push_str("\nTable 2: Kappa values\n\n");
        let _ = writeln!(s, "{:<12}{:>8}{:>8}{:>9}  Significance", "SVM", "1A1", "1AA", "Z");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<12}{:>8.4}{:>8.4}{:>9.4}  {}",
                r.kernel.title(),
                r.one_vs_one.kappa.kappa,
                r.one_vs_all.kappa.kappa,
                r.z,
                r.verdict.as_str()
            );
        }
        s
    }

    /// One row per kernel × strategy.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("kernel,strategy,unclassified,mixed,kappa,variance,z,verdict\n");
        for r in &self.rows {
            for cell in [&r.one_vs_one, &r.one_vs_all] {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{:?},{:?},{:?},{}",
                    r.kernel,
                    cell.strategy,
                    cell.tally.unclassified,
                    cell.tally.mixed,
                    cell.kappa.kappa,
                    cell.kappa.variance,
                    r.z,
                    r.verdict.as_str()
                );
            }
        }
        s
    }
}
