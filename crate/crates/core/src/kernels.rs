//! Kernel functions and Gram matrices.
//!
//! Four kernels are supported: linear, quadratic (polynomial of degree 2),
//! polynomial of arbitrary degree and the Gaussian radial basis function.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::{Error, Result};

/// Offset used by the polynomial and quadratic kernels unless overridden.
pub const DEFAULT_COEF0: f64 = 1.0;
/// Polynomial degree used unless overridden.
pub const DEFAULT_DEGREE: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelKind {
    Linear,
    Quadratic,
    Polynomial,
    Rbf,
}

impl KernelKind {
    pub const ALL: [KernelKind; 4] = [
        KernelKind::Linear,
        KernelKind::Quadratic,
        KernelKind::Polynomial,
        KernelKind::Rbf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Linear => "linear",
            KernelKind::Quadratic => "quadratic",
            KernelKind::Polynomial => "polynomial",
            KernelKind::Rbf => "rbf",
        }
    }

    /// Display label used in report tables.
    pub fn title(self) -> &'static str {
        match self {
            KernelKind::Linear => "Linear",
            KernelKind::Quadratic => "Quadratic",
            KernelKind::Polynomial => "Polynomial",
            KernelKind::Rbf => "RBF",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "linear" => Ok(KernelKind::Linear),
            "quadratic" => Ok(KernelKind::Quadratic),
            "polynomial" | "poly" => Ok(KernelKind::Polynomial),
            "rbf" | "gaussian" => Ok(KernelKind::Rbf),
            other => Err(Error::input(format!(
                "unknown kernel '{other}' (expected linear, quadratic, polynomial or rbf)"
            ))),
        }
    }
}

/// A kernel function together with its parameters.
///
/// `degree` is only read for [`KernelKind::Polynomial`]; the quadratic kernel
/// always uses degree 2. `gamma` is only read for [`KernelKind::Rbf`] and
/// `coef0` only for the polynomial family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub degree: u32,
    pub gamma: f64,
    pub coef0: f64,
}

impl KernelSpec {
    pub fn linear() -> Self {
        KernelSpec {
            kind: KernelKind::Linear,
            degree: DEFAULT_DEGREE,
            gamma: 1.0,
            coef0: DEFAULT_COEF0,
        }
    }

    pub fn quadratic(coef0: f64) -> Self {
        KernelSpec {
            kind: KernelKind::Quadratic,
            degree: 2,
            coef0,
            ..Self::linear()
        }
    }

    pub fn polynomial(degree: u32, coef0: f64) -> Self {
        KernelSpec {
            kind: KernelKind::Polynomial,
            degree,
            coef0,
            ..Self::linear()
        }
    }

    pub fn rbf(gamma: f64) -> Self {
        KernelSpec {
            kind: KernelKind::Rbf,
            gamma,
            ..Self::linear()
        }
    }

    /// Default parameters for `kind` on data with `bands` features:
    /// gamma = 1/bands, coef0 = 1, polynomial degree 3.
    pub fn with_defaults(kind: KernelKind, bands: usize) -> Self {
        let gamma = 1.0 / bands.max(1) as f64;
        match kind {
            KernelKind::Linear => Self::linear(),
            KernelKind::Quadratic => Self::quadratic(DEFAULT_COEF0),
            KernelKind::Polynomial => Self::polynomial(DEFAULT_DEGREE, DEFAULT_COEF0),
            KernelKind::Rbf => Self::rbf(gamma),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            KernelKind::Rbf if !(self.gamma.is_finite() && self.gamma > 0.0) => Err(Error::input(format!(
                "rbf gamma must be positive and finite, got {}",
                self.gamma
            ))),
            KernelKind::Polynomial if self.degree < 1 => Err(Error::input("polynomial degree must be at least 1")),
            KernelKind::Polynomial | KernelKind::Quadratic if !self.coef0.is_finite() => {
                Err(Error::input("coef0 must be finite"))
            }
            _ => Ok(()),
        }
    }

    /// Effective polynomial degree (2 for quadratic).
    pub fn effective_degree(&self) -> u32 {
        match self.kind {
            KernelKind::Quadratic => 2,
            _ => self.degree,
        }
    }

    /// Kernel value without dimension or parameter checks.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.kind {
            KernelKind::Linear => dot(x, y),
            KernelKind::Quadratic => {
                let t = dot(x, y) + self.coef0;
                t * t
            }
            KernelKind::Polynomial => (dot(x, y) + self.coef0).powi(self.degree as i32),
            KernelKind::Rbf => {
                let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                (-self.gamma * d2).exp()
            }
        }
    }

    /// Evaluates `k(x, y)`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::input("feature vectors must have at least one band"));
        }
        self.validate()?;
        Ok(self.eval_unchecked(x, y))
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            KernelKind::Linear => write!(f, "linear"),
            KernelKind::Quadratic => write!(f, "quadratic(coef0={})", self.coef0),
            KernelKind::Polynomial => {
                write!(f, "polynomial(degree={}, coef0={})", self.degree, self.coef0)
            }
            KernelKind::Rbf => write!(f, "rbf(gamma={})", self.gamma),
        }
    }
}

#[inline]
fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Free-function form of [`KernelSpec::eval`].
pub fn eval_kernel(spec: &KernelSpec, x: &[f64], y: &[f64]) -> Result<f64> {
    spec.eval(x, y)
}

/// Dense symmetric kernel matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    n: usize,
    data: Vec<f64>,
}

impl GramMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }
}

pub(crate) fn check_dimensions(points: &[Vec<f64>]) -> Result<usize> {
    let dim = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::input("point list is empty"))?;
    if dim == 0 {
        return Err(Error::input("feature vectors must have at least one band"));
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    Ok(dim)
}

/// Builds `G[i][j] = k(points[i], points[j])`. Rows are filled in parallel;
/// the upper triangle is mirrored so the result is exactly symmetric.
pub fn gram_matrix(spec: &KernelSpec, points: &[Vec<f64>]) -> Result<GramMatrix> {
    check_dimensions(points)?;
    spec.validate()?;
    let n = points.len();
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        for (j, v) in row.iter_mut().enumerate().skip(i) {
            *v = spec.eval_unchecked(&points[i], &points[j]);
        }
    });
    for i in 0..n {
        for j in 0..i {
            data[i * n + j] = data[j * n + i];
        }
    }
    Ok(GramMatrix { n, data })
}

/// Per-band affine scaling to zero mean and unit variance, fitted on
/// training samples and then applied to every pixel.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    /// Fits band means and population standard deviations. Bands with
    /// (near) zero spread keep a scale of 1.
    pub fn fit<'a, I>(samples: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut count = 0usize;
        let mut sum: Vec<f64> = Vec::new();
        let mut sum_sq: Vec<f64> = Vec::new();
        let mut rows: Vec<&[f64]> = Vec::new();
        for s in samples {
            if count == 0 {
                if s.is_empty() {
                    return Err(Error::input("feature vectors must have at least one band"));
                }
                sum = vec![0.0; s.len()];
                sum_sq = vec![0.0; s.len()];
            } else if s.len() != sum.len() {
                return Err(Error::DimensionMismatch {
                    expected: sum.len(),
                    found: s.len(),
                });
            }
            for (acc, v) in sum.iter_mut().zip(s) {
                *acc += v;
            }
            rows.push(s);
            count += 1;
        }
        if count == 0 {
            return Err(Error::input("cannot fit a standardizer on zero samples"));
        }
        let n = count as f64;
        let mean: Vec<f64> = sum.iter().map(|s| s / n).collect();
        // two-pass variance
        for s in &rows {
            for ((acc, v), m) in sum_sq.iter_mut().zip(s.iter()).zip(&mean) {
                *acc += (v - m) * (v - m);
            }
        }
        let scale = sum_sq
            .iter()
            .map(|ss| {
                let sd = (ss / n).sqrt();
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Ok(Standardizer { mean, scale })
    }

    pub fn bands(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(v, (m, s))| (v - m) / s)
            .collect()
    }
}
