//! Sequential minimal optimization with maximal-violating-pair selection
//! and second-order choice of the partner variable.
//!
//! The solver minimises `½ αᵀQα − Σα` and keeps the gradient
//! `G = Qα − 1` up to date. With `vᵢ = −yᵢGᵢ`, optimality holds when
//! `max{vᵢ : i ∈ I_up} ≤ min{vᵢ : i ∈ I_low}`; the gap between the two is
//! the largest KKT violation and bounds `|y·f(x) − 1|` for any bias chosen
//! inside it.

use super::{dual_objective, BinaryFit, BinaryModel, TrainConfig, TrainingSet, SUPPORT_VECTOR_THRESHOLD};
use crate::kernels::{gram_matrix, KernelSpec};
use crate::{Error, Result};

const TAU: f64 = 1e-12;

/// The solver stops once the violating-pair gap drops below this fraction
/// of the configured tolerance.
const STOP_FRACTION: f64 = 0.1;

pub(super) fn solve(data: &TrainingSet, kernel: &KernelSpec, config: &TrainConfig) -> Result<BinaryFit> {
    let n = data.len();
    let y = data.labels();
    let k = gram_matrix(kernel, data.samples())?;
    let c = config.c;
    let eps = config.tolerance * STOP_FRACTION;

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let max_iter = config.max_sweeps.saturating_mul(n.max(1));
    let mut stalled = 0usize;
    let mut iter = 0usize;

    let in_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let in_low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    loop {
        // first index: most violating in I_up
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = usize::MAX;
        for t in 0..n {
            if in_up(alpha[t], y[t]) {
                let v = -y[t] * grad[t];
                if v >= gmax {
                    gmax = v;
                    i_sel = t;
                }
            }
        }
        // partner: largest second-order decrease among violators in I_low
        let mut gmin = f64::INFINITY;
        let mut j_sel = usize::MAX;
        let mut best = f64::INFINITY;
        if i_sel != usize::MAX {
            let ki = k.row(i_sel);
            for t in 0..n {
                if !in_low(alpha[t], y[t]) {
                    continue;
                }
                let v = -y[t] * grad[t];
                gmin = gmin.min(v);
                let diff = gmax - v;
                if diff > 0.0 {
                    let quad = (ki[i_sel] + k.get(t, t) - 2.0 * ki[t]).max(TAU);
                    let obj = -(diff * diff) / quad;
                    if obj <= best {
                        best = obj;
                        j_sel = t;
                    }
                }
            }
        }
        let gap = gmax - gmin;
        if i_sel == usize::MAX || j_sel == usize::MAX || gap < eps {
            break;
        }
        if iter >= max_iter || stalled >= config.max_passes {
            if gap > config.tolerance {
                return Err(Error::Convergence {
                    iterations: iter,
                    violation: gap,
                });
            }
            break;
        }
        iter += 1;

        let (i, j) = (i_sel, j_sel);
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let quad = (k.get(i, i) + k.get(j, j) - 2.0 * k.get(i, j)).max(TAU);
        if y[i] != y[j] {
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        if di.abs() + dj.abs() <= 1e-15 * c.max(1.0) {
            stalled += 1;
        } else {
            stalled = 0;
        }
        let (ki, kj) = (k.row(i), k.row(j));
        for t in 0..n {
            grad[t] += y[t] * (y[i] * ki[t] * di + y[j] * kj[t] * dj);
        }
    }

    let bias = compute_bias(&alpha, &grad, y, c);
    let mut support_vectors = Vec::new();
    let mut dual_coefs = Vec::new();
    for t in 0..n {
        if alpha[t] >= SUPPORT_VECTOR_THRESHOLD {
            support_vectors.push(data.samples()[t].clone());
            dual_coefs.push(alpha[t] * y[t]);
        }
    }
    let objective = dual_objective(data, kernel, &alpha);
    Ok(BinaryFit {
        model: BinaryModel {
            kernel: *kernel,
            support_vectors,
            dual_coefs,
            bias,
            c,
        },
        alphas: alpha,
        objective,
        iterations: iter,
    })
}

/// Average of `vᵢ` over free support vectors, or the midpoint of the
/// feasible bias interval when none are free.
fn compute_bias(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut up_max = f64::NEG_INFINITY;
    let mut low_min = f64::INFINITY;
    for t in 0..alpha.len() {
        let v = -y[t] * grad[t];
        if alpha[t] > 0.0 && alpha[t] < c {
            free_sum += v;
            free_count += 1;
        }
        let at_lower = alpha[t] <= 0.0;
        // I_up bounds b from below, I_low from above
        if (y[t] > 0.0 && at_lower) || (y[t] < 0.0 && !at_lower) {
            up_max = up_max.max(v);
        }
        if (y[t] > 0.0 && !at_lower) || (y[t] < 0.0 && at_lower) {
            low_min = low_min.min(v);
        }
    }
    if free_count > 0 {
        return free_sum / free_count as f64;
    }
    match (up_max.is_finite(), low_min.is_finite()) {
        (true, true) => 0.5 * (up_max + low_min),
        (true, false) => up_max,
        (false, true) => low_min,
        (false, false) => 0.0,
    }
}
