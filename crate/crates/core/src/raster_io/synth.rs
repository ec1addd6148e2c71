//! Seeded synthetic scenes: Gaussian class blobs laid out as vertical
//! stripes.
//!
//! Randomness comes from ChaCha8 seeded with `seed`; normal deviates use
//! `rand_distr::StandardNormal`. For a fixed seed and crate versions the
//! output is bit-identical across runs and platforms.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{LabeledPosition, RasterImage};
use crate::multiclass::ClassSet;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub class_names: Vec<String>,
    pub bands: usize,
    pub width: usize,
    pub height: usize,
    /// Pairwise distance between class means, in units of `sigma`.
    pub separation: f64,
    /// Per-band standard deviation of every blob.
    pub sigma: f64,
    /// Offset added to every band value.
    pub base: f64,
    pub train_per_class: usize,
    pub reference_per_class: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            class_names: default_class_names(3),
            bands: 6,
            width: 64,
            height: 64,
            separation: 10.0,
            sigma: 5.0,
            base: 50.0,
            train_per_class: 100,
            reference_per_class: 100,
            seed: 42,
        }
    }
}

pub fn default_class_names(n: usize) -> Vec<String> {
    const NAMES: [&str; 3] = ["water", "vegetation", "built-up"];
    (0..n)
        .map(|k| NAMES.get(k).map_or_else(|| format!("class{k}"), |s| s.to_string()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScene {
    pub classes: ClassSet,
    pub raster: RasterImage,
    pub training: Vec<LabeledPosition>,
    pub reference: Vec<LabeledPosition>,
    /// True class of every pixel, row-major.
    pub truth: Vec<usize>,
    /// Mean vector of each class.
    pub means: Vec<Vec<f64>>,
}

impl SyntheticSpec {
    /// Class means with every pairwise distance equal to
    /// `separation·sigma` when there are at least as many bands as classes,
    /// otherwise spaced `separation·sigma` apart along band 0.
    pub fn class_means(&self) -> Vec<Vec<f64>> {
        let n = self.class_names.len();
        let gap = self.separation * self.sigma;
        (0..n)
            .map(|k| {
                let mut m = vec![self.base; self.bands];
                if self.bands >= n {
                    m[k] += gap / std::f64::consts::SQRT_2;
                } else {
                    m[0] += gap * k as f64;
                }
                m
            })
            .collect()
    }

    /// Class owning column `x`: the image is split into equal vertical
    /// stripes, one per class.
    pub fn class_at(&self, x: usize) -> usize {
        let n = self.class_names.len();
        (x * n / self.width).min(n - 1)
    }
}

pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<SyntheticScene> {
    let classes = ClassSet::new(spec.class_names.clone())?;
    let n = classes.len();
    if !(spec.sigma.is_finite() && spec.sigma > 0.0) {
        return Err(Error::input(format!("sigma must be positive, got {}", spec.sigma)));
    }
    if !(spec.separation.is_finite() && spec.separation >= 0.0) {
        return Err(Error::input("separation must be non-negative"));
    }
    if spec.bands == 0 || spec.width == 0 || spec.height == 0 {
        return Err(Error::input("bands, width and height must be positive"));
    }
    if spec.train_per_class == 0 {
        return Err(Error::input("each class needs at least one training pixel"));
    }
    if spec.width < n {
        return Err(Error::input(format!(
            "width {} cannot hold {n} class stripes",
            spec.width
        )));
    }

    let means = spec.class_means();
    let (w, h) = (spec.width, spec.height);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut truth = Vec::with_capacity(w * h);
    let mut values = vec![0.0; w * h * spec.bands];
    let plane = w * h;
    for y in 0..h {
        for x in 0..w {
            let k = spec.class_at(x);
            truth.push(k);
            for b in 0..spec.bands {
                let z: f64 = StandardNormal.sample(&mut rng);
                values[b * plane + y * w + x] = means[k][b] + spec.sigma * z;
            }
        }
    }
    let raster = RasterImage::new(w, h, spec.bands, values)?;

    let mut training = Vec::new();
    let mut reference = Vec::new();
    let need = spec.train_per_class + spec.reference_per_class;
    for k in 0..n {
        let mut region: Vec<usize> = (0..plane).filter(|&i| truth[i] == k).collect();
        if region.len() < need {
            return Err(Error::input(format!(
                "class '{}' covers {} pixels but {need} are needed",
                classes.name(k),
                region.len()
            )));
        }
        region.shuffle(&mut rng);
        let at = |i: usize| LabeledPosition {
            x: i % w,
            y: i / w,
            class: classes.name(k).to_string(),
        };
        training.extend(region[..spec.train_per_class].iter().map(|&i| at(i)));
        reference.extend(region[spec.train_per_class..need].iter().map(|&i| at(i)));
    }

    Ok(SyntheticScene {
        classes,
        raster,
        training,
        reference,
        truth,
        means,
    })
}
