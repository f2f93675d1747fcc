//! Formal (algebraic) solutions of square interval systems in Kaucher
//! arithmetic, and the pseudo-solution built from them.
//!
//! `A·x = b` is solved for `x` in the endpoint embedding
//! `(lo_1..lo_n, hi_1..hi_n)` by a damped subdifferential Newton method:
//! every endpoint of `A·x` is a sum of single endpoint products, so the
//! product is piecewise linear in the embedding and its selection matrix
//! plays the role of the Jacobian.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, FormalFailure, Result};
use crate::interval::{End, Interval, KInterval, Term};
use crate::linalg::{check_len, IntervalMatrix, IntervalVector, Lu, Matrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormalConfig {
    pub max_iter: usize,
    /// Smallest damping factor tried before the step is taken anyway.
    pub min_damping: f64,
    /// Residual tolerance relative to `1 + max(mag A, mag b)`.
    pub tol: f64,
    /// Extra Newton steps after convergence, kept only while they help.
    pub polish_steps: usize,
}

impl Default for FormalConfig {
    fn default() -> Self {
        FormalConfig { max_iter: 200, min_damping: 1.0 / 64.0, tol: 1e-10, polish_steps: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalSolution {
    pub x_star: Vec<KInterval>,
    pub proper_mask: Vec<bool>,
    /// Max endpoint deviation of `A·x*` from `b`.
    pub residual: f64,
    /// `mid x*`.
    pub pseudo: Vec<f64>,
    /// Smallest `t >= 0` making `x* + t·[-1, 1]` proper in every component.
    pub t_star: f64,
    pub iterations: usize,
}

impl FormalSolution {
    pub fn is_proper(&self) -> bool {
        self.proper_mask.iter().all(|&p| p)
    }
}

/// `A·x` in Kaucher arithmetic.
pub fn kaucher_matvec(a: &IntervalMatrix, x: &[KInterval]) -> Result<Vec<KInterval>> {
    check_len(a.cols(), x.len())?;
    Ok((0..a.rows())
        .map(|i| {
            a.row(i).iter().zip(x).fold(KInterval::point(0.0), |acc, (e, xj)| acc + e.to_kaucher() * *xj)
        })
        .collect())
}

fn residual_vector(a: &IntervalMatrix, b: &IntervalVector, x: &[KInterval]) -> Vec<f64> {
    let m = a.rows();
    let ax = kaucher_matvec(a, x).expect("sizes checked");
    let mut r = vec![0.0; 2 * m];
    for i in 0..m {
        r[i] = ax[i].lo - b[i].lo();
        r[m + i] = ax[i].hi - b[i].hi();
    }
    r
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Max endpoint deviation `‖A·x − b‖∞` over both endpoints.
pub fn formal_residual(a: &IntervalMatrix, b: &IntervalVector, x: &[KInterval]) -> Result<f64> {
    check_len(a.rows(), b.len())?;
    check_len(a.cols(), x.len())?;
    Ok(max_abs(&residual_vector(a, b, x)))
}

fn selection_matrix(a: &IntervalMatrix, x: &[KInterval]) -> Matrix {
    let n = a.cols();
    let mut d = Matrix::zeros(2 * n, 2 * n);
    let col = |e: End, j: usize| match e {
        End::Lo => j,
        End::Hi => n + j,
    };
    for i in 0..n {
        for (j, xj) in x.iter().enumerate() {
            let aij = a.get(i, j).to_kaucher();
            let (tlo, thi) = aij.mul_selection(*xj);
            for (r, t) in [(i, tlo), (n + i, thi)] {
                if let Term::Prod(ea, ex) = t {
                    let coef = match ea {
                        End::Lo => aij.lo,
                        End::Hi => aij.hi,
                    };
                    d[(r, col(ex, j))] += coef;
                }
            }
        }
    }
    d
}

fn embed(x: &[KInterval]) -> Vec<f64> {
    x.iter().map(|v| v.lo).chain(x.iter().map(|v| v.hi)).collect()
}

fn unembed(y: &[f64]) -> Vec<KInterval> {
    let n = y.len() / 2;
    (0..n).map(|j| KInterval::new(y[j], y[n + j])).collect()
}

fn newton_direction(a: &IntervalMatrix, x: &[KInterval], r: &[f64]) -> Result<Vec<f64>> {
    let d = selection_matrix(a, x);
    let lu = Lu::factor(&d).map_err(|_| Error::NoFormalSolution(FormalFailure::SingularSelection))?;
    lu.solve(r)
}

/// Formal solution of a square system, started from `mid(A)⁻¹·mid(b)`.
pub fn formal_solve(a: &IntervalMatrix, b: &IntervalVector, cfg: &FormalConfig) -> Result<FormalSolution> {
    if a.rows() != a.cols() {
        return Err(Error::FormalUnsupported { rows: a.rows(), cols: a.cols() });
    }
    check_len(a.rows(), b.len())?;
    let n = a.cols();
    let tol = cfg.tol * (1.0 + a.max_mag().max(b.max_mag()));

    let start = a.mid().solve(&b.mid()).unwrap_or_else(|_| vec![0.0; n]);
    let mut x: Vec<KInterval> = start.iter().map(|&v| KInterval::point(v)).collect();
    let mut r = residual_vector(a, b, &x);
    let mut res = max_abs(&r);
    let mut iterations = 0;

    while res > tol {
        if iterations == cfg.max_iter {
            return Err(Error::NoFormalSolution(FormalFailure::NoConvergence));
        }
        iterations += 1;
        let dir = newton_direction(a, &x, &r)?;
        let y = embed(&x);
        let mut tau = 1.0;
        loop {
            let cand = unembed(&y.iter().zip(&dir).map(|(v, d)| v - tau * d).collect::<Vec<_>>());
            let rc = residual_vector(a, b, &cand);
            let rc_norm = max_abs(&rc);
            if rc_norm < res || tau <= cfg.min_damping {
                x = cand;
                r = rc;
                res = rc_norm;
                break;
            }
            tau *= 0.5;
        }
    }

    for _ in 0..cfg.polish_steps {
        if res == 0.0 {
            break;
        }
        let Ok(dir) = newton_direction(a, &x, &r) else { break };
        let y = embed(&x);
        let cand = unembed(&y.iter().zip(&dir).map(|(v, d)| v - d).collect::<Vec<_>>());
        let rc = residual_vector(a, b, &cand);
        let rc_norm = max_abs(&rc);
        if rc_norm >= res {
            break;
        }
        x = cand;
        r = rc;
        res = rc_norm;
    }

    let proper_mask: Vec<bool> = x.iter().map(|v| v.is_proper()).collect();
    let pseudo = x.iter().map(|v| v.mid()).collect();
    let t_star = x.iter().fold(0.0f64, |t, v| t.max(0.5 * (v.lo - v.hi)));
    Ok(FormalSolution { x_star: x, proper_mask, residual: res, pseudo, t_star, iterations })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerCheck {
    /// `A·x* ⊆ b` in classical arithmetic: `x*` is an inner box of the tolerable set.
    Holds,
    Fails,
    /// Some component of `x*` is improper.
    NotProper,
}

/// Check that a proper formal solution is an inner estimate, i.e.
/// `A·x* ⊆ b`, allowing `slack` on each endpoint.
pub fn inner_estimate_check(x_star: &[KInterval], a: &IntervalMatrix, b: &IntervalVector, slack: f64) -> Result<InnerCheck> {
    check_len(a.cols(), x_star.len())?;
    check_len(a.rows(), b.len())?;
    if !x_star.iter().all(|v| v.is_proper()) {
        return Ok(InnerCheck::NotProper);
    }
    let boxed = IntervalVector::new(x_star.iter().map(|v| v.pro()).collect())?;
    let ax = a.mul_interval_vector(&boxed)?;
    let ok = ax.iter().zip(b.iter()).all(|(p, q)| p.lo() >= q.lo() - slack && p.hi() <= q.hi() + slack);
    Ok(if ok { InnerCheck::Holds } else { InnerCheck::Fails })
}

/// Right-hand side `b + t*·(A·e)`, `e = [-1, 1]ⁿ`, at which `mid x*` is a
/// tolerable solution, returned together with `mid x*`.
pub fn widen_for_proper(a: &IntervalMatrix, b: &IntervalVector, sol: &FormalSolution) -> Result<(IntervalVector, Vec<f64>)> {
    check_len(a.rows(), b.len())?;
    let ae = a.mul_interval_vector(&IntervalVector::unit_balanced(a.cols())?)?;
    let widened = b.add(&IntervalVector::new(ae.iter().map(|v| v.scale(sol.t_star)).collect())?)?;
    Ok((widened, sol.pseudo.clone()))
}

/// Both `A` and `|A|` nonsingular.
pub fn absolutely_regular(a: &Matrix) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    Ok(Lu::factor(a).is_ok() && Lu::factor(&a.abs()).is_ok())
}

/// Proper part of a Kaucher vector, for reporting.
pub fn proper_box(x: &[KInterval]) -> Vec<Interval> {
    x.iter().map(|v| v.pro()).collect()
}
