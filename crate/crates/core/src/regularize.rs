//! Interval regularization of a point system `A·x = b`: inflate `A` to
//! `A + θ·E` (every entry widened by `θ`), then take as pseudo-solution
//! the maximizer of `Tol` or the midpoint of a formal solution.
//!
//! Also the Lavrentiev baseline `(A + θI)·x = b` and condition diagnostics.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formal::{formal_solve, FormalConfig, FormalSolution};
use crate::linalg::{check_len, intervalize, singular_values, IntervalMatrix, IntervalVector, Matrix};
use crate::maximize::{certify, maximize_tol, Certification, SolverConfig};
use crate::rohn::rohn_feasible;
use crate::tolerance::{default_eps, tol_eval};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-14;

/// Default cap on `m·n` for corner scans.
pub const DEFAULT_CORNER_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    TolMax,
    Formal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rhs {
    Point(Vec<f64>),
    Interval(IntervalVector),
}

impl Rhs {
    pub fn len(&self) -> usize {
        match self {
            Rhs::Point(v) => v.len(),
            Rhs::Interval(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lift to intervals and widen every component by `c` about its midpoint.
    pub fn to_intervals(&self, c: f64) -> Result<IntervalVector> {
        let v = match self {
            Rhs::Point(p) => IntervalVector::from_points(p)?,
            Rhs::Interval(v) => v.clone(),
        };
        if c == 0.0 {
            Ok(v)
        } else {
            v.widen(c)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizeConfig {
    pub solver: SolverConfig,
    pub formal: FormalConfig,
    /// Uniform right-hand side widening `C`.
    pub widen: f64,
    pub corner_limit: usize,
}

impl Default for RegularizeConfig {
    fn default() -> Self {
        RegularizeConfig {
            solver: SolverConfig::default(),
            formal: FormalConfig::default(),
            widen: 0.0,
            corner_limit: DEFAULT_CORNER_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionSummary {
    /// `cond₂(A)`, `None` for a zero matrix.
    pub cond_point: Option<f64>,
    /// Best corner condition of the inflated matrix, when the scan is within limits.
    pub min_corner_cond: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularizationResult {
    pub theta: f64,
    pub method: Method,
    pub pseudo_solution: Vec<f64>,
    pub tol_at_solution: f64,
    pub certification: Certification,
    pub diagnostics: ConditionSummary,
    pub matrix: IntervalMatrix,
    pub rhs: IntervalVector,
    /// Present for [`Method::Formal`].
    pub formal: Option<FormalSolution>,
}

fn min_corner(a: &IntervalMatrix, limit: usize) -> Option<f64> {
    corner_condition_scan(a, limit).ok().map(|s| s.min_cond)
}

pub fn regularize(a: &Matrix, b: &Rhs, theta: f64, method: Method, cfg: &RegularizeConfig) -> Result<RegularizationResult> {
    check_len(a.rows(), b.len())?;
    let ai = intervalize(a, theta)?;
    let bi = b.to_intervals(cfg.widen)?;
    let (pseudo, formal) = match method {
        Method::TolMax => (maximize_tol(&ai, &bi, &cfg.solver, None)?.best_x, None),
        Method::Formal => {
            let s = formal_solve(&ai, &bi, &cfg.formal)?;
            (s.pseudo.clone(), Some(s))
        }
    };
    let value = tol_eval(&pseudo, &ai, &bi)?;
    let eps = default_eps(&bi);
    let lp = if value < -eps { Some(rohn_feasible(&ai, &bi)?.feasible) } else { None };
    let diagnostics = ConditionSummary {
        cond_point: cond_spectral(a).ok(),
        min_corner_cond: min_corner(&ai, cfg.corner_limit),
    };
    Ok(RegularizationResult {
        theta,
        method,
        pseudo_solution: pseudo,
        tol_at_solution: value,
        certification: certify(value, eps, lp),
        diagnostics,
        matrix: ai,
        rhs: bi,
        formal,
    })
}

/// Solve `(A + θI)·x = b`.
pub fn lavrentiev_solve(a: &Matrix, b: &[f64], theta: f64) -> Result<Vec<f64>> {
    a.shifted(theta)?.solve(b)
}

/// `σmax / σmin`; `+∞` when `σmin < 1e-14·σmax`.
pub fn cond_spectral(a: &Matrix) -> Result<f64> {
    if a.max_abs() == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let s = singular_values(a);
    let (hi, lo) = (s[0], s[s.len() - 1]);
    if lo < RANK_THRESHOLD * hi {
        Ok(f64::INFINITY)
    } else {
        Ok(hi / lo)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CornerScan {
    pub min_cond: f64,
    pub argmin: Matrix,
    /// Condition numbers in enumeration order.
    pub all: Vec<f64>,
}

/// Condition numbers of all endpoint matrices of `a`.
///
/// Non-degenerate entries are enumerated in row-major order as the bits of a
/// counter, lowest bit first, a set bit selecting the upper endpoint. A zero
/// corner counts as `+∞`. The minimum keeps the first index on ties.
pub fn corner_condition_scan(a: &IntervalMatrix, limit: usize) -> Result<CornerScan> {
    let cells = a.rows() * a.cols();
    if cells > limit {
        return Err(Error::TooLarge {
            what: "corner scan",
            count: 1u128 << cells.min(127),
            limit: 1u128 << limit.min(127),
        });
    }
    let free: Vec<usize> = (0..cells).filter(|&k| !a.entries()[k].is_degenerate()).collect();
    let base = a.lower();
    let mut all = Vec::with_capacity(1 << free.len());
    let mut best: Option<(f64, Matrix)> = None;
    for mask in 0u64..(1u64 << free.len()) {
        let mut m = base.clone();
        for (bit, &k) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                m[(k / a.cols(), k % a.cols())] = a.entries()[k].hi();
            }
        }
        let c = match cond_spectral(&m) {
            Ok(c) => c,
            Err(Error::ZeroMatrix) => f64::INFINITY,
            Err(e) => return Err(e),
        };
        all.push(c);
        if best.as_ref().is_none_or(|(v, _)| c < *v) {
            best = Some((c, m));
        }
    }
    let (min_cond, argmin) = best.expect("at least one corner");
    Ok(CornerScan { min_cond, argmin, all })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub certification: Certification,
    pub max_tol: f64,
    pub pseudo_solution: Vec<f64>,
    /// ∞-norm distance from the `θ = 0` pseudo-solution.
    pub distance_from_reference: Option<f64>,
    pub min_corner_cond: Option<f64>,
}

/// Run [`regularize`] for each `θ` and tabulate the results.
pub fn theta_sweep(a: &Matrix, b: &Rhs, thetas: &[f64], method: Method, cfg: &RegularizeConfig) -> Result<Vec<SweepRow>> {
    if thetas.is_empty() {
        return Err(Error::Empty);
    }
    if let Some(&t) = thetas.iter().find(|t| t.is_nan() || **t < 0.0) {
        return Err(Error::NegativeTheta(t));
    }
    let results: Vec<RegularizationResult> =
        thetas.iter().map(|&t| regularize(a, b, t, method, cfg)).collect::<Result<_>>()?;
    let reference = match results.iter().find(|r| r.theta == 0.0) {
        Some(r) => Some(r.pseudo_solution.clone()),
        None => regularize(a, b, 0.0, method, cfg).ok().map(|r| r.pseudo_solution),
    };
    Ok(results
        .into_iter()
        .map(|r| SweepRow {
            theta: r.theta,
            certification: r.certification,
            max_tol: r.tol_at_solution,
            distance_from_reference: reference.as_ref().map(|y| {
                y.iter().zip(&r.pseudo_solution).fold(0.0, |m, (p, q)| f64::max(m, (p - q).abs()))
            }),
            pseudo_solution: r.pseudo_solution,
            min_corner_cond: r.diagnostics.min_corner_cond,
        })
        .collect())
}

/// Corner scan helper for the common case of an inflated point matrix.
pub fn inflated_corner_scan(a: &Matrix, theta: f64, limit: usize) -> Result<CornerScan> {
    corner_condition_scan(&intervalize(a, theta)?, limit)
}

/// `θ` values `0, step, 2·step, …, max` (inclusive within rounding).
pub fn theta_grid(max: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || max.is_nan() || max < 0.0 || !max.is_finite() {
        return Err(Error::NonFinite);
    }
    let count = libm::floor(max / step + 1e-9) as usize;
    let mut v: Vec<f64> = (0..=count).map(|k| k as f64 * step).collect();
    if v.is_empty() {
        v = vec![0.0];
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::lp::{LinearProgram, LpOutcome};
    use crate::maximize::Certificate;
    use crate::rohn::lp_max_tol;
    use crate::systems;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn example_condition_numbers() {
        let a = systems::ill_conditioned_2x2();
        assert!(rel(cond_spectral(&a).unwrap(), 3.92e4) < 0.01);
        let scan = inflated_corner_scan(&a, 1.0, DEFAULT_CORNER_LIMIT).unwrap();
        assert_eq!(scan.all.len(), 16);
        assert!(rel(scan.min_cond, 98.76) < 0.01);
        assert_eq!(scan.argmin.to_rows(), vec![vec![100.0, 99.0], vec![97.0, 100.0]]);
        let mut got = scan.all.clone();
        got.sort_by(f64::total_cmp);
        let mut table = vec![
            3.84e4, 197.02, 201.12, 1.31e4, 197.02, 98.76, 1.31e4, 195.12, 197.0, 3.92e4, 99.26, 199.02, 3.92e4,
            199.00, 199.02, 4.0e4,
        ];
        table.sort_by(f64::total_cmp);
        for (g, t) in got.iter().zip(&table) {
            assert!(rel(*g, *t) < 0.01, "{g} vs {t}");
        }
    }

    #[test]
    fn cond_edge_cases() {
        assert!((cond_spectral(&Matrix::identity(3)).unwrap() - 1.0).abs() < 1e-12);
        let s = Matrix::from_rows(&[vec![98.0, 99.0], vec![98.0, 99.0]]).unwrap();
        assert_eq!(cond_spectral(&s).unwrap(), f64::INFINITY);
        assert_eq!(cond_spectral(&Matrix::zeros(2, 2)), Err(Error::ZeroMatrix));
    }

    #[test]
    fn corner_scan_point_matrix_and_limit() {
        let a = systems::ill_conditioned_2x2();
        let scan = inflated_corner_scan(&a, 0.0, DEFAULT_CORNER_LIMIT).unwrap();
        assert_eq!(scan.all.len(), 1);
        assert_eq!(scan.argmin, a);
        let big = IntervalMatrix::from_point(&Matrix::identity(5));
        assert!(matches!(corner_condition_scan(&big, DEFAULT_CORNER_LIMIT), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn lavrentiev_examples() {
        let x = lavrentiev_solve(&Matrix::identity(2), &[1.0, 0.0], 1.0).unwrap();
        assert_eq!(x, vec![0.5, 0.0]);
        let a = systems::ill_conditioned_2x2();
        let x = lavrentiev_solve(&a, &[1.0, 1.0], 0.0).unwrap();
        assert_eq!(x, a.solve(&[1.0, 1.0]).unwrap());
    }

    fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g[(i, j)] = rng.random_range(-1.0..1.0);
            }
        }
        let mut a = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = (0..n).map(|k| g[(k, i)] * g[(k, j)]).sum();
            }
        }
        a
    }

    #[test]
    fn lavrentiev_condition_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(2..=5);
            let a = random_psd(n, &mut rng);
            // eigenvalues of a symmetric PSD matrix are its singular values
            let s = singular_values(&a);
            let (lmax, lmin) = (s[0], s[n - 1]);
            let theta = rng.random_range(0.01..2.0);
            let c = cond_spectral(&a.shifted(theta).unwrap()).unwrap();
            assert!(rel(c, (lmax + theta) / (lmin + theta)) < 1e-6);
        }
    }

    #[test]
    fn tolmax_pipeline_matches_lp() {
        let a = systems::ill_conditioned_2x2();
        let r = regularize(&a, &Rhs::Point(vec![1.0, 1.0]), 1.0, Method::TolMax, &RegularizeConfig::default()).unwrap();
        let (v, _) = lp_max_tol(&r.matrix, &r.rhs).unwrap();
        assert!((r.tol_at_solution - v).abs() <= 1e-5, "{} vs {v}", r.tol_at_solution);
        assert_eq!(tol_eval(&r.pseudo_solution, &r.matrix, &r.rhs).unwrap(), r.tol_at_solution);
        assert!(r.diagnostics.min_corner_cond.is_some());
    }

    #[test]
    fn formal_pipeline_uses_midpoint() {
        let a = Matrix::from_rows(&[vec![1.5]]).unwrap();
        let b = Rhs::Interval(IntervalVector::new(vec![Interval::new(3.0, 4.0).unwrap()]).unwrap());
        let r = regularize(&a, &b, 0.5, Method::Formal, &RegularizeConfig::default()).unwrap();
        assert_eq!(r.pseudo_solution, vec![2.5]);
        assert_eq!(r.formal.unwrap().t_star, 0.5);
        assert_eq!(r.certification.certificate, Certificate::Empty);
    }

    #[test]
    fn degenerate_pipeline_is_plain_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let n = rng.random_range(1..=4);
            let mut a = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] = rng.random_range(-1.0..1.0);
                }
                a[(i, i)] += 3.0;
            }
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let exact = a.solve(&b).unwrap();
            for method in [Method::TolMax, Method::Formal] {
                let r = regularize(&a, &Rhs::Point(b.clone()), 0.0, method, &RegularizeConfig::default()).unwrap();
                for (p, q) in r.pseudo_solution.iter().zip(&exact) {
                    assert!((p - q).abs() <= 1e-8 * (1.0 + q.abs()), "{method:?}: {p} vs {q}");
                }
                assert!(r.tol_at_solution.abs() < 1e-9);
            }
        }
    }

    /// min_x ‖Ax − b‖∞ as an LP in `(x⁺, x⁻, s)`.
    fn chebyshev_residual(a: &Matrix, b: &[f64]) -> f64 {
        let (m, n) = (a.rows(), a.cols());
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..m {
            let mut up: Vec<f64> = (0..n).map(|j| a[(i, j)]).chain((0..n).map(|j| -a[(i, j)])).collect();
            up.push(-1.0);
            let down: Vec<f64> = up.iter().take(2 * n).map(|v| -v).chain([-1.0]).collect();
            rows.push(up);
            rhs.push(b[i]);
            rows.push(down);
            rhs.push(-b[i]);
        }
        let mut c = vec![0.0; 2 * n];
        c.push(1.0);
        match LinearProgram::new(c, rows, rhs).unwrap().solve().unwrap() {
            LpOutcome::Optimal(s) => s.value,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sweep_with_singular_matrix() {
        let a = Matrix::from_rows(&[vec![98.0, 99.0], vec![98.0, 99.0]]).unwrap();
        let b = vec![1.0, 2.0];
        let rows = theta_sweep(&a, &Rhs::Point(b.clone()), &[0.0], Method::TolMax, &RegularizeConfig::default()).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert!((r.max_tol + chebyshev_residual(&a, &b)).abs() < 1e-6, "{}", r.max_tol);
        assert!((r.max_tol + 0.5).abs() < 1e-6);
        assert_eq!(r.certification.certificate, Certificate::Empty);
        assert_eq!(r.distance_from_reference, Some(0.0));
        assert_eq!(r.min_corner_cond, Some(f64::INFINITY));
    }

    #[test]
    fn sweep_table_shape() {
        let a = systems::ill_conditioned_2x2();
        let thetas = [0.0, 0.5, 1.0];
        let rows = theta_sweep(&a, &Rhs::Point(vec![1.0, 1.0]), &thetas, Method::TolMax, &RegularizeConfig::default()).unwrap();
        assert_eq!(rows.iter().map(|r| r.theta).collect::<Vec<_>>(), thetas);
        assert!(rows.iter().all(|r| r.distance_from_reference.is_some()));
        assert!(theta_sweep(&a, &Rhs::Point(vec![1.0, 1.0]), &[], Method::TolMax, &RegularizeConfig::default()).is_err());
        assert_eq!(theta_grid(1.0, 0.5).unwrap(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn interior_matrices_never_beat_best_corner() {
        let a = systems::ill_conditioned_2x2();
        let ai = intervalize(&a, 1.0).unwrap();
        let best = corner_condition_scan(&ai, DEFAULT_CORNER_LIMIT).unwrap().min_cond;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let data: Vec<f64> = ai.entries().iter().map(|e| rng.random_range(e.lo()..=e.hi())).collect();
            let m = Matrix::new(2, 2, data).unwrap();
            assert!(cond_spectral(&m).unwrap() >= best * 0.99);
        }
    }

    fn point_system() -> impl Strategy<Value = (Matrix, Vec<f64>)> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(m, n)| {
            (proptest::collection::vec(-5.0f64..5.0, m * n), proptest::collection::vec(-5.0f64..5.0, m))
                .prop_map(move |(a, b)| (Matrix::new(m, n, a).unwrap(), b))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn inflation_shrinks_max_tol((a, b) in point_system(), t1 in 0.0f64..1.0, dt in 0.0f64..1.0, c in 0.0f64..2.0) {
            let bi = Rhs::Point(b).to_intervals(c).unwrap();
            let (v1, _) = lp_max_tol(&intervalize(&a, t1).unwrap(), &bi).unwrap();
            let (v2, _) = lp_max_tol(&intervalize(&a, t1 + dt).unwrap(), &bi).unwrap();
            prop_assert!(v2 <= v1 + 1e-9);
        }
    }
}
