//! Linear-inequality characterization of the tolerable solution set.
//!
//! `x` is tolerable iff `x = x' − x''` for some `x', x'' >= 0` with
//!
//! ```text
//!  ovA·x' − unA·x'' <=  ov b
//! −unA·x' + ovA·x'' <= −un b
//! ```
//!
//! Widening the right-hand side by a free `t` turns feasibility into an LP
//! whose optimum is `−max Tol`, which gives an exact oracle for the
//! maximizer in [`crate::maximize`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{check_len, IntervalMatrix, IntervalVector, Matrix};
use crate::lp::{LinearProgram, LpOutcome};

/// `coeff·(x', x'') <= rhs`, `x', x'' >= 0`, of size `2m × 2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySystem {
    pub coeff: Matrix,
    pub rhs: Vec<f64>,
}

impl InequalitySystem {
    pub fn num_unknowns(&self) -> usize {
        self.coeff.cols() / 2
    }

    /// Recover `x = x' − x''` from a stacked `(x', x'')`.
    pub fn decode(&self, stacked: &[f64]) -> Vec<f64> {
        let n = self.num_unknowns();
        (0..n).map(|j| stacked[j] - stacked[n + j]).collect()
    }
}

pub fn build_rohn_system(a: &IntervalMatrix, b: &IntervalVector) -> Result<InequalitySystem> {
    check_len(a.rows(), b.len())?;
    let (m, n) = (a.rows(), a.cols());
    let mut coeff = Matrix::zeros(2 * m, 2 * n);
    let mut rhs = vec![0.0; 2 * m];
    for i in 0..m {
        for j in 0..n {
            let e = a.get(i, j);
            coeff[(i, j)] = e.hi();
            coeff[(i, n + j)] = -e.lo();
            coeff[(m + i, j)] = -e.lo();
            coeff[(m + i, n + j)] = e.hi();
        }
        rhs[i] = b[i].hi();
        rhs[m + i] = -b[i].lo();
    }
    Ok(InequalitySystem { coeff, rhs })
}

/// Result of the Rohn feasibility test.
#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    pub witness: Option<Vec<f64>>,
}

/// Decide whether the tolerable solution set is nonempty.
pub fn rohn_feasible(a: &IntervalMatrix, b: &IntervalVector) -> Result<Feasibility> {
    let sys = build_rohn_system(a, b)?;
    let nv = sys.coeff.cols();
    let lp = LinearProgram::new(vec![0.0; nv], sys.coeff.to_rows(), sys.rhs.clone())?;
    match lp.solve()? {
        LpOutcome::Optimal(s) => Ok(Feasibility { feasible: true, witness: Some(sys.decode(&s.x)) }),
        LpOutcome::Infeasible => Ok(Feasibility { feasible: false, witness: None }),
        LpOutcome::Unbounded => Err(Error::Unbounded),
    }
}

/// Exact maximum of `Tol` and a maximizer, via the uniformly widened LP
///
/// ```text
/// minimize t  st  ovA·x' − unA·x'' − t <= ov b,  −unA·x' + ovA·x'' − t <= −un b
/// ```
///
/// with `t` free (split as `t⁺ − t⁻`). Returns `(−t*, x' − x'')`.
pub fn lp_max_tol(a: &IntervalMatrix, b: &IntervalVector) -> Result<(f64, Vec<f64>)> {
    let sys = build_rohn_system(a, b)?;
    let nv = sys.coeff.cols();
    let rows = sys
        .coeff
        .to_rows()
        .into_iter()
        .map(|mut r| {
            r.push(-1.0);
            r.push(1.0);
            r
        })
        .collect();
    let mut objective = vec![0.0; nv + 2];
    objective[nv] = 1.0;
    objective[nv + 1] = -1.0;
    let lp = LinearProgram::new(objective, rows, sys.rhs.clone())?;
    match lp.solve()? {
        LpOutcome::Optimal(s) => Ok((-s.value, sys.decode(&s.x[..nv]))),
        // t large enough is always feasible, and Tol has a finite maximum
        LpOutcome::Infeasible | LpOutcome::Unbounded => Err(Error::Unbounded),
    }
}
