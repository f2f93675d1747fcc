//! Unconstrained maximization of `Tol` by Shor's r-algorithm.
//!
//! The method minimizes `−Tol` with a subgradient step taken in a space
//! that is repeatedly dilated along the difference of successive
//! subgradients, which is what makes it effective on the ridges of a
//! piecewise-linear function. The step size adapts during a forward line
//! search: it grows every few steps while the directional derivative stays
//! negative and shrinks when the first step already overshoots.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{check_len, IntervalMatrix, IntervalVector, Matrix};
use crate::rohn::rohn_feasible;
use crate::tolerance::{default_eps, tol_eval, tol_evaluate};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Space dilation coefficient, `> 1`.
    pub dilation: f64,
    pub initial_step: f64,
    /// Step multiplier applied every `grow_every` line-search steps.
    pub step_grow: f64,
    /// Step multiplier applied when a line search takes a single step.
    pub step_shrink: f64,
    pub grow_every: usize,
    /// Stop when the best value improves by less than this over `stall_window` iterations.
    pub tol_f: f64,
    /// Stop when a whole line search moves less than this (∞-norm).
    pub tol_x: f64,
    pub stall_window: usize,
    pub max_iter: usize,
    /// Extra runs from random initial points around `x0`.
    pub restarts: usize,
    /// Warm restarts from the best point with the metric reset.
    pub refinements: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dilation: 3.0,
            initial_step: 1.0,
            step_grow: 1.1,
            step_shrink: 0.8,
            grow_every: 3,
            tol_f: 1e-12,
            tol_x: 1e-12,
            stall_window: 50,
            max_iter: 5000,
            restarts: 0,
            refinements: 3,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.initial_step, self.tol_f, self.tol_x, self.step_shrink, self.step_grow];
        let ok = self.dilation > 1.0
            && positive.iter().all(|v| v.is_finite() && *v > 0.0)
            && self.step_shrink < 1.0
            && self.step_grow >= 1.0
            && self.max_iter >= 1
            && self.grow_every >= 1
            && self.stall_window >= 1;
        if ok {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    IterLimit,
    Stalled,
}

/// Solvability of the tolerance problem read off `T = max Tol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    NonemptyInterior,
    Nonempty,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certification {
    pub certificate: Certificate,
    /// `Empty` was claimed from the sign of `T` alone, without LP confirmation.
    pub empty_heuristic: bool,
    /// `T < −eps` but the LP found the set nonempty: the maximizer stopped short.
    pub lp_disagrees: bool,
}

/// Classify `T` with threshold `eps`. `Empty` is confirmed only when
/// `lp_feasible` is `Some(false)`.
pub fn certify(value: f64, eps: f64, lp_feasible: Option<bool>) -> Certification {
    let plain = |c| Certification { certificate: c, empty_heuristic: false, lp_disagrees: false };
    if value > eps {
        plain(Certificate::NonemptyInterior)
    } else if value >= -eps {
        plain(Certificate::Nonempty)
    } else {
        match lp_feasible {
            Some(false) => plain(Certificate::Empty),
            Some(true) => Certification { certificate: Certificate::Nonempty, empty_heuristic: false, lp_disagrees: true },
            None => Certification { certificate: Certificate::Empty, empty_heuristic: true, lp_disagrees: false },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TolMaxReport {
    pub best_x: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    pub certification: Certification,
    pub eps: f64,
    /// Best value reached by each run (primary run first).
    pub run_values: Vec<f64>,
    /// Best-so-far value after every iteration of the primary run.
    pub history: Vec<f64>,
}

impl TolMaxReport {
    pub fn certificate(&self) -> Certificate {
        self.certification.certificate
    }
}

struct Run {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
    status: SolveStatus,
}

/// The midpoint solution when `mid A` is square and nonsingular, else zero.
pub fn default_start(a: &IntervalMatrix, b: &IntervalVector) -> Vec<f64> {
    let mid: Matrix = a.mid();
    if mid.is_square() {
        if let Ok(y) = mid.solve(&b.mid()) {
            if y.iter().all(|v| v.is_finite()) {
                return y;
            }
        }
    }
    vec![0.0; a.cols()]
}

fn norm2(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// `Bᵀ·v` for row-major `n×n` B.
fn bt_mul(b: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
    (0..n).map(|j| (0..n).map(|i| b[i * n + j] * v[i]).sum()).collect()
}

fn b_mul(b: &[f64], n: usize, v: &[f64]) -> Vec<f64> {
    (0..n).map(|i| (0..n).map(|j| b[i * n + j] * v[j]).sum()).collect()
}

/// One r-algorithm run minimizing `f = −Tol`.
fn ralg(
    a: &IntervalMatrix,
    b: &IntervalVector,
    cfg: &SolverConfig,
    x0: &[f64],
    mut history: Option<&mut Vec<f64>>,
) -> Result<Run> {
    let n = x0.len();
    let eval = |x: &[f64]| -> Result<(f64, Vec<f64>)> {
        let e = tol_evaluate(x, a, b)?;
        Ok((-e.value, e.supergradient.iter().map(|g| -g).collect()))
    };
    let mut x = x0.to_vec();
    let (f0, mut g) = eval(&x)?;
    let mut best_x = x.clone();
    let mut best_f = f0;
    let mut bmat = vec![0.0; n * n];
    for i in 0..n {
        bmat[i * n + i] = 1.0;
    }
    let w = 1.0 / cfg.dilation - 1.0;
    let mut h = cfg.initial_step;
    let mut reference = best_f;
    let mut last_improvement = 0;
    let mut status = SolveStatus::IterLimit;
    let mut iterations = 0;

    for itn in 1..=cfg.max_iter {
        iterations = itn;
        let g1 = bt_mul(&bmat, n, &g);
        let gn = norm2(&g1);
        if gn == 0.0 || !gn.is_finite() {
            // zero subgradient in the dilated metric: x is optimal
            status = if gn == 0.0 { SolveStatus::Converged } else { SolveStatus::Stalled };
            break;
        }
        let dir: Vec<f64> = b_mul(&bmat, n, &g1.iter().map(|v| v / gn).collect::<Vec<_>>());
        let dir_norm = dir.iter().fold(0.0f64, |m, v| m.max(v.abs()));

        let mut steps = 0;
        let mut travelled = 0.0;
        let mut g_new;
        loop {
            for (xi, di) in x.iter_mut().zip(&dir) {
                *xi -= h * di;
            }
            travelled += h * dir_norm;
            let (f, gg) = eval(&x)?;
            g_new = gg;
            if f < best_f {
                best_f = f;
                best_x.clone_from(&x);
            }
            steps += 1;
            if steps % cfg.grow_every == 0 {
                h *= cfg.step_grow;
            }
            let slope: f64 = dir.iter().zip(&g_new).map(|(d, gi)| d * gi).sum();
            if slope <= 0.0 || steps > 500 {
                break;
            }
        }
        if let Some(hist) = history.as_deref_mut() {
            hist.push(-best_f);
        }
        if steps > 500 {
            status = SolveStatus::Stalled;
            break;
        }
        if steps == 1 {
            h *= cfg.step_shrink;
        }
        if travelled < cfg.tol_x {
            status = SolveStatus::Converged;
            break;
        }
        if best_f < reference - cfg.tol_f {
            reference = best_f;
            last_improvement = itn;
        } else if itn - last_improvement >= cfg.stall_window {
            status = SolveStatus::Converged;
            break;
        }

        let dg: Vec<f64> = g_new.iter().zip(&g).map(|(p, q)| p - q).collect();
        let r = bt_mul(&bmat, n, &dg);
        let rn = norm2(&r);
        if rn > 0.0 && rn.is_finite() {
            let xi: Vec<f64> = r.iter().map(|v| v / rn).collect();
            let bxi = b_mul(&bmat, n, &xi);
            for i in 0..n {
                for j in 0..n {
                    bmat[i * n + j] += w * bxi[i] * xi[j];
                }
            }
        }
        g = g_new;
    }
    Ok(Run { x: best_x, value: -best_f, iterations, status })
}

/// A run followed by warm restarts from its best point.
fn refined_run(
    a: &IntervalMatrix,
    b: &IntervalVector,
    cfg: &SolverConfig,
    x0: &[f64],
    history: Option<&mut Vec<f64>>,
) -> Result<Run> {
    let mut run = ralg(a, b, cfg, x0, history)?;
    for _ in 0..cfg.refinements {
        let next = ralg(a, b, cfg, &run.x, None)?;
        let gained = next.value - run.value;
        let iterations = run.iterations + next.iterations;
        if next.value > run.value {
            run = Run { iterations, ..next };
        } else {
            run.iterations = iterations;
        }
        if gained <= cfg.tol_f {
            break;
        }
    }
    Ok(run)
}

/// Maximize `Tol(·, A, b)` over `ℝⁿ`.
pub fn maximize_tol(
    a: &IntervalMatrix,
    b: &IntervalVector,
    cfg: &SolverConfig,
    x0: Option<&[f64]>,
) -> Result<TolMaxReport> {
    check_len(a.rows(), b.len())?;
    cfg.validate()?;
    let finite = a.entries().iter().all(|e| e.lo().is_finite() && e.hi().is_finite())
        && b.iter().all(|e| e.lo().is_finite() && e.hi().is_finite());
    if !finite {
        return Err(Error::NonFinite);
    }
    let start = match x0 {
        Some(x) => {
            check_len(a.cols(), x.len())?;
            if !x.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFinite);
            }
            x.to_vec()
        }
        None => default_start(a, b),
    };

    let mut history = Vec::new();
    let primary = refined_run(a, b, cfg, &start, Some(&mut history))?;
    let mut run_values = vec![primary.value];
    let mut best = primary;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let radius = start.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for _ in 0..cfg.restarts {
        let x: Vec<f64> = start.iter().map(|v| v + rng.random_range(-radius..=radius)).collect();
        let run = refined_run(a, b, cfg, &x, None)?;
        run_values.push(run.value);
        // strict improvement only, so ties keep the lowest run index
        if run.value > best.value {
            let iterations = best.iterations + run.iterations;
            best = Run { iterations, ..run };
        } else {
            best.iterations += run.iterations;
        }
    }

    let eps = default_eps(b);
    let value = tol_eval(&best.x, a, b)?;
    let lp = if value < -eps { Some(rohn_feasible(a, b)?.feasible) } else { None };
    Ok(TolMaxReport {
        best_x: best.x,
        best_value: value,
        iterations: best.iterations,
        status: best.status,
        certification: certify(value, eps, lp),
        eps,
        run_values,
        history,
    })
}
