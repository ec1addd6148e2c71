//! Dense projected-gradient solver for the SVM dual, used to check SMO.
//!
//! Accelerated projected gradient ascent with adaptive restart. The
//! projection onto `{0 ≤ α ≤ C, yᵀα = 0}` is found by bisection on the
//! multiplier of the equality constraint.

use super::TrainingSet;
use crate::kernels::KernelSpec;
use crate::{Error, Result};

/// Largest problem the dense oracle accepts.
pub const ORACLE_MAX_SAMPLES: usize = 30;

const MAX_ITER: usize = 500_000;
const WINDOW: usize = 50;

/// Maximises the soft-margin dual for at most [`ORACLE_MAX_SAMPLES`]
/// samples. The returned multipliers are feasible.
pub fn brute_force_qp(data: &TrainingSet, kernel: &KernelSpec, c: f64) -> Result<Vec<f64>> {
    if data.len() > ORACLE_MAX_SAMPLES {
        return Err(Error::input(format!(
            "oracle accepts at most {ORACLE_MAX_SAMPLES} samples, got {}",
            data.len()
        )));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::input(format!("C must be positive, got {c}")));
    }
    kernel.validate()?;
    data.ensure_both_signs()?;

    let n = data.len();
    let x = data.samples();
    let y = data.labels();
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            q[i * n + j] = y[i] * y[j] * kernel.eval_unchecked(&x[i], &x[j]);
        }
    }
    let lipschitz = spectral_bound(&q, n);
    let step = 1.0 / lipschitz;

    let objective = |a: &[f64]| -> f64 {
        let mut quad = 0.0;
        for i in 0..n {
            let row = &q[i * n..(i + 1) * n];
            quad += a[i] * row.iter().zip(a).map(|(qij, aj)| qij * aj).sum::<f64>();
        }
        a.iter().sum::<f64>() - 0.5 * quad
    };
    let ascent_point = |z: &[f64], out: &mut Vec<f64>| {
        out.clear();
        for i in 0..n {
            let row = &q[i * n..(i + 1) * n];
            let g = 1.0 - row.iter().zip(z).map(|(qij, zj)| qij * zj).sum::<f64>();
            out.push(z[i] + step * g);
        }
    };

    let mut alpha = vec![0.0; n];
    let mut z = alpha.clone();
    let mut t = 1.0f64;
    let mut buf = Vec::with_capacity(n);
    let mut current = objective(&alpha);
    let mut history = vec![current];
    for _ in 0..MAX_ITER {
        ascent_point(&z, &mut buf);
        let next = project(&buf, y, c);
        let next_obj = objective(&next);
        if next_obj < current {
            // a plain step of size 1/L never descends, so failing right
            // after a restart means only rounding is left
            if t == 1.0 {
                break;
            }
            // restart momentum from the last iterate
            t = 1.0;
            z.clone_from(&alpha);
            continue;
        }
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        let beta = (t - 1.0) / t_next;
        for i in 0..n {
            z[i] = (next[i] + beta * (next[i] - alpha[i])).clamp(0.0, c);
        }
        t = t_next;
        alpha = next;
        current = next_obj;
        history.push(current);
        if history.len() > WINDOW {
            let old = history[history.len() - 1 - WINDOW];
            if (current - old).abs() <= 1e-13 * current.abs().max(1.0) {
                break;
            }
        }
    }
    Ok(alpha)
}

/// Upper bound on the largest eigenvalue of the PSD matrix `q` by power
/// iteration, padded by 10% and capped by the Frobenius norm.
fn spectral_bound(q: &[f64], n: usize) -> f64 {
    let frob = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut lambda = 0.0;
    for _ in 0..200 {
        let w: Vec<f64> = (0..n)
            .map(|i| q[i * n..(i + 1) * n].iter().zip(&v).map(|(a, b)| a * b).sum())
            .collect();
        let norm = w.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm <= f64::MIN_POSITIVE {
            break;
        }
        lambda = norm;
        v = w.into_iter().map(|a| a / norm).collect();
    }
    (1.1 * lambda).min(frob).max(1e-12)
}

/// Euclidean projection onto `{0 ≤ α ≤ c, Σ yᵢαᵢ = 0}`.
fn project(z: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let eval = |lambda: f64| -> f64 {
        z.iter()
            .zip(y)
            .map(|(zi, yi)| yi * (zi - lambda * yi).clamp(0.0, c))
            .sum()
    };
    // eval is non-increasing in lambda
    let span = z.iter().fold(0.0f64, |m, v| m.max(v.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-span, span);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    z.iter()
        .zip(y)
        .map(|(zi, yi)| (zi - lambda * yi).clamp(0.0, c))
        .collect()
}
