//! Soft-margin kernel SVM solved by sequential minimal optimization with
//! second-order working-set selection, plus a sigmoid calibration of the
//! decision value.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Kernel {
    Rbf { gamma: f64 },
    Linear,
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            Kernel::Rbf { gamma } => {
                let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                (-gamma * d2).exp()
            }
            Kernel::Linear => a.iter().zip(b).map(|(x, y)| x * y).sum(),
        }
    }
}

/// RBF width from the median pairwise squared distance:
/// `1 / (dims * median)`.
pub fn median_gamma(points: &[Vec<f64>]) -> Result<f64> {
    let dims = points.first().map_or(0, Vec::len);
    let mut d2 = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d2.push(
                points[i]
                    .iter()
                    .zip(&points[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>(),
            );
        }
    }
    if d2.is_empty() || dims == 0 {
        return Err(Error::Training("need at least two points to set the kernel width".into()));
    }
    d2.sort_by(f64::total_cmp);
    let m = d2.len();
    let median = if m % 2 == 1 { d2[m / 2] } else { 0.5 * (d2[m / 2 - 1] + d2[m / 2]) };
    if !(median > 0.0) {
        return Err(Error::Training("median pairwise distance is zero".into()));
    }
    Ok(1.0 / (dims as f64 * median))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub cost: f64,
    /// Stop when the maximal KKT violation drops below this.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            cost: 1.0,
            tolerance: 1e-3,
            max_iter: 10_000_000,
        }
    }
}

/// Dual solution: `f(x) = sum_i coef_i K(sv_i, x) - rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelMachine {
    pub kernel: Kernel,
    pub support_vectors: Vec<Vec<f64>>,
    /// `alpha_i * y_i` for each support vector.
    pub coef: Vec<f64>,
    pub rho: f64,
    pub iterations: usize,
}

impl KernelMachine {
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coef)
            .map(|(sv, c)| c * self.kernel.eval(sv, x))
            .sum::<f64>()
            - self.rho
    }
}

/// Full solver output, kept for inspecting optimality.
#[derive(Debug, Clone)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    pub rho: f64,
    pub iterations: usize,
    /// `max_{I_up} -y G - min_{I_low} -y G` at exit.
    pub kkt_gap: f64,
}

pub fn solve_dual(points: &[Vec<f64>], labels: &[bool], kernel: Kernel, opts: &SolverOptions) -> Result<DualSolution> {
    let n = points.len();
    if n != labels.len() {
        return Err(Error::Training("points and labels differ in length".into()));
    }
    let npos = labels.iter().filter(|&&l| l).count();
    if npos < 2 || n - npos < 2 {
        return Err(Error::Training(format!(
            "need at least two examples of each class, got {npos} signal and {} noise",
            n - npos
        )));
    }
    if !(opts.cost > 0.0) || !(opts.tolerance > 0.0) {
        return Err(Error::Training("cost and tolerance must be positive".into()));
    }
    let y: Vec<f64> = labels.iter().map(|&l| if l { 1.0 } else { -1.0 }).collect();
    let mut k = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = kernel.eval(&points[i], &points[j]);
            k[i * n + j] = v;
            k[j * n + i] = v;
        }
    }
    let q = |i: usize, j: usize| y[i] * y[j] * k[i * n + j];
    let c = opts.cost;
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let upper = |a: f64| a >= c;
    let lower = |a: f64| a <= 0.0;

    let mut iter = 0;
    let mut gap;
    loop {
        // i: maximal violating index in I_up
        let mut gmax = f64::NEG_INFINITY;
        let mut gmax2 = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            if y[t] > 0.0 {
                if !upper(alpha[t]) && -grad[t] >= gmax {
                    gmax = -grad[t];
                    i_sel = Some(t);
                }
            } else if !lower(alpha[t]) && grad[t] >= gmax {
                gmax = grad[t];
                i_sel = Some(t);
            }
        }
        let mut j_sel = None;
        let mut obj_min = f64::INFINITY;
        if let Some(i) = i_sel {
            for t in 0..n {
                let (grad_diff, quad) = if y[t] > 0.0 {
                    if lower(alpha[t]) {
                        continue;
                    }
                    gmax2 = gmax2.max(grad[t]);
                    (gmax + grad[t], q(i, i) + q(t, t) - 2.0 * y[i] * q(i, t))
                } else {
                    if upper(alpha[t]) {
                        continue;
                    }
                    gmax2 = gmax2.max(-grad[t]);
                    (gmax - grad[t], q(i, i) + q(t, t) + 2.0 * y[i] * q(i, t))
                };
                if grad_diff > 0.0 {
                    let obj = -(grad_diff * grad_diff) / if quad > 0.0 { quad } else { TAU };
                    if obj <= obj_min {
                        obj_min = obj;
                        j_sel = Some(t);
                    }
                }
            }
        }
        gap = gmax + gmax2;
        let (Some(i), Some(j)) = (i_sel, j_sel) else { break };
        if gap < opts.tolerance {
            break;
        }
        if iter >= opts.max_iter {
            log::warn!("SMO stopped at the iteration limit with KKT gap {gap:.3e}");
            break;
        }
        iter += 1;

        let (old_ai, old_aj) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let quad = (q(i, i) + q(j, j) + 2.0 * q(i, j)).max(TAU);
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
            let quad = (q(i, i) + q(j, j) - 2.0 * q(i, j)).max(TAU);
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
        let (di, dj) = (alpha[i] - old_ai, alpha[j] - old_aj);
        for t in 0..n {
            grad[t] += q(i, t) * di + q(j, t) * dj;
        }
    }

    // rho: average over free variables, else the midpoint of the feasible range
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut sum_free, mut n_free) = (0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if upper(alpha[t]) {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if lower(alpha[t]) {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            sum_free += yg;
        }
    }
    let rho = if n_free > 0 { sum_free / n_free as f64 } else { 0.5 * (ub + lb) };
    Ok(DualSolution {
        alpha,
        rho,
        iterations: iter,
        kkt_gap: gap,
    })
}

pub fn train_machine(points: &[Vec<f64>], labels: &[bool], kernel: Kernel, opts: &SolverOptions) -> Result<KernelMachine> {
    let sol = solve_dual(points, labels, kernel, opts)?;
    let mut support_vectors = Vec::new();
    let mut coef = Vec::new();
    for ((p, &l), &a) in points.iter().zip(labels).zip(&sol.alpha) {
        if a > 0.0 {
            support_vectors.push(p.clone());
            coef.push(if l { a } else { -a });
        }
    }
    Ok(KernelMachine {
        kernel,
        support_vectors,
        coef,
        rho: sol.rho,
        iterations: sol.iterations,
    })
}

/// `P(signal | f) = 1 / (1 + exp(a f + b))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sigmoid {
    pub a: f64,
    pub b: f64,
}

impl Sigmoid {
    pub fn apply(&self, f: f64) -> f64 {
        let z = self.a * f + self.b;
        if z >= 0.0 {
            let e = (-z).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + z.exp())
        }
    }
}

/// Maximum-likelihood sigmoid fit with regularized targets, by Newton's
/// method with backtracking.
pub fn fit_sigmoid(decisions: &[f64], labels: &[bool]) -> Result<Sigmoid> {
    let prior1 = labels.iter().filter(|&&l| l).count() as f64;
    let prior0 = labels.len() as f64 - prior1;
    if prior1 == 0.0 || prior0 == 0.0 {
        return Err(Error::Training("calibration needs both classes".into()));
    }
    let hi = (prior1 + 1.0) / (prior1 + 2.0);
    let lo = 1.0 / (prior0 + 2.0);
    let t: Vec<f64> = labels.iter().map(|&l| if l { hi } else { lo }).collect();
    let objective = |a: f64, b: f64| -> f64 {
        decisions
            .iter()
            .zip(&t)
            .map(|(&f, &ti)| {
                let z = f * a + b;
                if z >= 0.0 {
                    ti * z + (-z).exp().ln_1p()
                } else {
                    (ti - 1.0) * z + z.exp().ln_1p()
                }
            })
            .sum()
    };
    let (mut a, mut b) = (0.0, ((prior0 + 1.0) / (prior1 + 1.0)).ln());
    let mut fval = objective(a, b);
    const SIGMA: f64 = 1e-12;
    const EPS: f64 = 1e-5;
    const MIN_STEP: f64 = 1e-10;
    for _ in 0..100 {
        let (mut h11, mut h22, mut h21, mut g1, mut g2) = (SIGMA, SIGMA, 0.0, 0.0, 0.0);
        for (&f, &ti) in decisions.iter().zip(&t) {
            let z = f * a + b;
            let (p, q) = if z >= 0.0 {
                let e = (-z).exp();
                (e / (1.0 + e), 1.0 / (1.0 + e))
            } else {
                let e = z.exp();
                (1.0 / (1.0 + e), e / (1.0 + e))
            };
            let d2 = p * q;
            h11 += f * f * d2;
            h22 += d2;
            h21 += f * d2;
            let d1 = ti - p;
            g1 += f * d1;
            g2 += d1;
        }
        if g1.abs() < EPS && g2.abs() < EPS {
            break;
        }
        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;
        let mut step = 1.0;
        while step >= MIN_STEP {
            let (na, nb) = (a + step * da, b + step * db);
            let nf = objective(na, nb);
            if nf < fval + 1e-4 * step * gd {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if step < MIN_STEP {
            log::debug!("sigmoid line search stopped early");
            break;
        }
    }
    Ok(Sigmoid { a, b })
}
