//! Dense two-phase tableau simplex for small linear programs
//!
//! ```text
//! minimize c·z  subject to  G·z <= h,  z >= 0
//! ```
//!
//! Entering variables are chosen by most negative reduced cost; after
//! `3·(rows + cols)` pivots the rule switches to Bland's smallest-index rule
//! so the method cannot cycle. Ratio-test ties go to the smallest basic index.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::check_len;

/// Absolute feasibility tolerance on constraint residuals.
pub const FEASIBILITY_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub pivots: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>, rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        check_len(rows.len(), rhs.len())?;
        for r in &rows {
            check_len(objective.len(), r.len())?;
        }
        let finite = objective.iter().chain(rows.iter().flatten()).chain(&rhs).all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite);
        }
        Ok(LinearProgram { objective, rows, rhs })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        Tableau::build(self).run()
    }
}

struct Tableau {
    m: usize,
    nvars: usize,
    /// columns: structural, slack, artificial, then rhs
    width: usize,
    t: Vec<f64>,
    /// phase-2 reduced costs (length width, last entry = −objective)
    cost: Vec<f64>,
    /// phase-1 reduced costs
    cost1: Vec<f64>,
    basis: Vec<usize>,
    first_artificial: usize,
    pivots: usize,
    max_pivots: usize,
    bland_after: usize,
    rhs_scale: f64,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let m = lp.rows.len();
        let nvars = lp.num_vars();
        let n_art = lp.rhs.iter().filter(|&&h| h < 0.0).count();
        let first_artificial = nvars + m;
        let ncols = nvars + m + n_art;
        let width = ncols + 1;
        let mut t = vec![0.0; m * width];
        let mut basis = vec![0; m];
        let mut art = first_artificial;
        for (i, (row, &h)) in lp.rows.iter().zip(&lp.rhs).enumerate() {
            let sign = if h < 0.0 { -1.0 } else { 1.0 };
            let r = &mut t[i * width..(i + 1) * width];
            for (j, &g) in row.iter().enumerate() {
                r[j] = sign * g;
            }
            r[nvars + i] = sign;
            r[ncols] = sign * h;
            if h < 0.0 {
                r[art] = 1.0;
                basis[i] = art;
                art += 1;
            } else {
                basis[i] = nvars + i;
            }
        }
        let mut cost = vec![0.0; width];
        cost[..nvars].copy_from_slice(&lp.objective);
        let mut cost1 = vec![0.0; width];
        for c in &mut cost1[first_artificial..ncols] {
            *c = 1.0;
        }
        // price out the artificial basis
        for i in 0..m {
            if basis[i] >= first_artificial {
                for j in 0..width {
                    cost1[j] -= t[i * width + j];
                }
            }
        }
        let rhs_scale = 1.0 + lp.rhs.iter().fold(0.0f64, |a, h| a.max(h.abs()));
        Tableau {
            m,
            nvars,
            width,
            t,
            cost,
            cost1,
            basis,
            first_artificial,
            pivots: 0,
            max_pivots: 50 * (m + ncols) + 1000,
            bland_after: 3 * (m + ncols),
            rhs_scale,
        }
    }

    fn ncols(&self) -> usize {
        self.width - 1
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width + j]
    }

    fn run(mut self) -> Result<LpOutcome> {
        let has_artificial = self.first_artificial < self.ncols();
        if has_artificial {
            let limit = self.ncols();
            if !self.optimize(true, limit)? {
                // phase 1 is bounded below by zero
                return Err(Error::Unbounded);
            }
            let infeasibility = -self.cost1[self.ncols()];
            if infeasibility > FEASIBILITY_TOL * self.rhs_scale {
                return Ok(LpOutcome::Infeasible);
            }
            self.drive_out_artificials();
        }
        let limit = self.first_artificial;
        if !self.optimize(false, limit)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![0.0; self.nvars];
        for (i, &bv) in self.basis.iter().enumerate() {
            if bv < self.nvars {
                x[bv] = self.at(i, self.ncols());
            }
        }
        Ok(LpOutcome::Optimal(LpSolution { x, value: -self.cost[self.ncols()], pivots: self.pivots }))
    }

    /// Pivot until optimal; `false` means unbounded. Only columns below
    /// `limit` may enter.
    fn optimize(&mut self, phase_one: bool, limit: usize) -> Result<bool> {
        loop {
            let cost = if phase_one { &self.cost1 } else { &self.cost };
            let bland = self.pivots >= self.bland_after;
            let mut entering = None;
            let mut best = -COST_TOL;
            for (j, &c) in cost.iter().enumerate().take(limit) {
                if c < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = c;
                }
            }
            let Some(e) = entering else { return Ok(true) };

            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, e);
                if a <= PIVOT_TOL {
                    continue;
                }
                let ratio = self.at(i, self.ncols()) / a;
                leaving = match leaving {
                    None => Some((i, ratio)),
                    Some((k, r)) => {
                        let tie = (ratio - r).abs() <= 1e-12 * (1.0 + r.abs());
                        if ratio < r && !tie || tie && self.basis[i] < self.basis[k] {
                            Some((i, ratio))
                        } else {
                            Some((k, r))
                        }
                    }
                };
            }
            let Some((l, _)) = leaving else { return Ok(false) };
            self.pivot(l, e);
            if self.pivots > self.max_pivots {
                return Err(Error::SimplexStalled(self.max_pivots));
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.t[row * w + col];
        for j in 0..w {
            self.t[row * w + j] /= p;
        }
        self.t[row * w + col] = 1.0;
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let f = self.t[i * w + col];
            if f != 0.0 {
                for j in 0..w {
                    self.t[i * w + j] -= f * self.t[row * w + j];
                }
                self.t[i * w + col] = 0.0;
            }
        }
        for cost in [&mut self.cost, &mut self.cost1] {
            let f = cost[col];
            if f != 0.0 {
                for (c, t) in cost.iter_mut().zip(&self.t[row * w..(row + 1) * w]) {
                    *c -= f * t;
                }
                cost[col] = 0.0;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Replace zero-level artificial basics by structural or slack columns
    /// where the row allows it; rows that do not are redundant.
    fn drive_out_artificials(&mut self) {
        for i in 0..self.m {
            if self.basis[i] < self.first_artificial {
                continue;
            }
            let candidate = (0..self.first_artificial)
                .filter(|&j| self.at(i, j).abs() > 1e-9)
                .max_by(|&a, &b| self.at(i, a).abs().total_cmp(&self.at(i, b).abs()));
            if let Some(j) = candidate {
                self.pivot(i, j);
            }
        }
    }
}
