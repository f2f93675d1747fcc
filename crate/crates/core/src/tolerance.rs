//! The recognizing functional of the tolerable solution set.
//!
//! For an interval system `A·x = b`,
//!
//! ```text
//! Tol(x, A, b) = min_i { rad b_i − mag(mid b_i − Σ_j a_ij·x_j) }
//! ```
//!
//! is concave and piecewise linear in `x`, and `x` is a tolerable solution
//! (`A·x ⊆ b`) exactly when `Tol(x) >= 0`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{check_len, IntervalMatrix, IntervalVector};

fn check_system(a: &IntervalMatrix, b: &IntervalVector) -> Result<()> {
    check_len(a.rows(), b.len())
}

fn check_point(a: &IntervalMatrix, b: &IntervalVector, x: &[f64]) -> Result<()> {
    check_system(a, b)?;
    check_len(a.cols(), x.len())
}

/// Value of row `i` of the functional.
fn row_value(a: &IntervalMatrix, b: &IntervalVector, i: usize, x: &[f64]) -> f64 {
    let u = Interval::point(b[i].mid()) - a.row_dot(i, x);
    b[i].rad() - u.mag()
}

/// `Tol(x, A, b)`.
pub fn tol_eval(x: &[f64], a: &IntervalMatrix, b: &IntervalVector) -> Result<f64> {
    check_point(a, b, x)?;
    Ok((0..a.rows()).map(|i| row_value(a, b, i, x)).fold(f64::INFINITY, f64::min))
}

/// Value, an active row and a supergradient of `Tol` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct TolEvaluation {
    pub value: f64,
    pub active_row: usize,
    pub supergradient: Vec<f64>,
}

/// Evaluate `Tol` together with one element of its superdifferential.
///
/// Ties are broken deterministically: the lowest active row wins, `x_j = 0`
/// is treated as `x_j >= 0`, and when both endpoints of the residual
/// interval attain the magnitude the upper one is used.
pub fn tol_evaluate(x: &[f64], a: &IntervalMatrix, b: &IntervalVector) -> Result<TolEvaluation> {
    check_point(a, b, x)?;
    let mut value = f64::INFINITY;
    let mut active_row = 0;
    for i in 0..a.rows() {
        let v = row_value(a, b, i, x);
        if v < value {
            value = v;
            active_row = i;
        }
    }
    let supergradient = row_supergradient(a, b, active_row, x);
    Ok(TolEvaluation { value, active_row, supergradient })
}

/// Supergradient of row `i`.
///
/// With `u = mid b_i − Σ a_ij x_j`, `mag u = max(u.hi, −u.lo)`, so the row
/// value is `rad b_i − max(u.hi, −u.lo)`.
/// If the upper endpoint dominates, the row behaves like the concave
/// `S_lo(x) = Σ min(a_ij x_j)` locally and its gradient picks `a.lo` for
/// `x_j >= 0` and `a.hi` otherwise; if the lower one dominates, the row is
/// `−S_hi(x)` and the selection flips.
fn row_supergradient(a: &IntervalMatrix, b: &IntervalVector, i: usize, x: &[f64]) -> Vec<f64> {
    let u = Interval::point(b[i].mid()) - a.row_dot(i, x);
    let upper_dominates = u.hi() >= -u.lo();
    a.row(i)
        .iter()
        .zip(x)
        .map(|(aij, &xj)| {
            let nonneg = xj >= 0.0;
            if upper_dominates {
                if nonneg { aij.lo() } else { aij.hi() }
            } else if nonneg {
                -aij.hi()
            } else {
                -aij.lo()
            }
        })
        .collect()
}

/// Three-way membership in the tolerable solution set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Outside,
    Boundary,
    Interior,
}

/// Full membership verdict with the raw inclusion test alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub class: Membership,
    pub tol: f64,
    pub eps: f64,
    /// `A·x ⊆ b` evaluated entrywise in interval arithmetic.
    pub inclusion: bool,
    /// Whether every row has a nonzero matrix entry or a right-hand side
    /// without zero endpoints. Without it, an interior point may still have
    /// `Tol = 0`, so `Boundary` does not rule out interiority.
    pub interior_criterion_applies: bool,
}

/// Default boundary tolerance `1e-9·(1 + max_i mag b_i)`.
pub fn default_eps(b: &IntervalVector) -> f64 {
    1e-9 * (1.0 + b.max_mag())
}

/// `A·x ⊆ b` entrywise.
pub fn inclusion_holds(x: &[f64], a: &IntervalMatrix, b: &IntervalVector) -> Result<bool> {
    check_point(a, b, x)?;
    Ok(a.matvec(x)?.is_subset_of(b))
}

/// Whether the converse interiority criterion (interior point ⇒ `Tol > 0`) applies.
pub fn interior_criterion_applies(a: &IntervalMatrix, b: &IntervalVector) -> bool {
    (0..a.rows()).all(|i| {
        let nonzero_row = a.row(i).iter().any(|e| !(e.lo() == 0.0 && e.hi() == 0.0));
        nonzero_row || (b[i].lo() != 0.0 && b[i].hi() != 0.0)
    })
}

pub fn classify(value: f64, eps: f64) -> Membership {
    if value > eps {
        Membership::Interior
    } else if value.abs() <= eps {
        Membership::Boundary
    } else {
        Membership::Outside
    }
}

pub fn member_tolerable(
    x: &[f64],
    a: &IntervalMatrix,
    b: &IntervalVector,
    eps: f64,
) -> Result<MembershipReport> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::NonFinite);
    }
    let tol = tol_eval(x, a, b)?;
    Ok(MembershipReport {
        class: classify(tol, eps),
        tol,
        eps,
        inclusion: inclusion_holds(x, a, b)?,
        interior_criterion_applies: interior_criterion_applies(a, b),
    })
}

/// `Tol(x, A, b + C·e)`; equals `Tol(x, A, b) + C`.
pub fn tol_shift_check(x: &[f64], a: &IntervalMatrix, b: &IntervalVector, c: f64) -> Result<f64> {
    tol_eval(x, a, &b.widen(c)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems;
    use alloc::vec;
    use proptest::prelude::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn one_d() -> (IntervalMatrix, IntervalVector) {
        (
            IntervalMatrix::from_rows(&[vec![iv(1.0, 2.0)]]).unwrap(),
            IntervalVector::new(vec![iv(3.0, 4.0)]).unwrap(),
        )
    }

    /// Grid search over [-10, 10] with step 1e-6, refined around the best cell.
    fn grid_max_1d(a: &IntervalMatrix, b: &IntervalVector) -> (f64, f64) {
        let mut best = (f64::NEG_INFINITY, 0.0);
        let coarse = 1e-3;
        let mut k = 0;
        while k <= 20_000 {
            let x = -10.0 + k as f64 * coarse;
            let v = tol_eval(&[x], a, b).unwrap();
            if v > best.0 {
                best = (v, x);
            }
            k += 1;
        }
        let centre = best.1;
        for k in -1000..=1000 {
            let x = centre + k as f64 * 1e-6;
            let v = tol_eval(&[x], a, b).unwrap();
            if v > best.0 {
                best = (v, x);
            }
        }
        best
    }

    #[test]
    fn tol_examples() {
        let (a12, b12) = systems::inner_box_3x3();
        assert_eq!(tol_eval(&[0.0; 3], &a12, &b12).unwrap(), 1.0);

        let (a, b) = one_d();
        let v = tol_eval(&[7.0 / 3.0], &a, &b).unwrap();
        assert!((v + 2.0 / 3.0).abs() < 1e-15);
        let (gmax, gx) = grid_max_1d(&a, &b);
        assert!((gmax + 2.0 / 3.0).abs() < 1e-6);
        assert!((gx - 7.0 / 3.0).abs() < 1e-5);

        let (a13, b13) = systems::tol_graph_4x2();
        let v = tol_eval(&[-0.21294, 0.0], &a13, &b13).unwrap();
        assert!((v + 1.0).abs() < 1e-4, "{v}");
    }

    #[test]
    fn dimension_mismatch() {
        let (a, b) = one_d();
        assert_eq!(tol_eval(&[1.0, 2.0], &a, &b), Err(Error::DimensionMismatch { expected: 1, found: 2 }));
        let b2 = IntervalVector::new(vec![iv(0.0, 1.0); 2]).unwrap();
        assert!(tol_eval(&[1.0], &a, &b2).is_err());
    }

    fn central_difference(x: &[f64], a: &IntervalMatrix, b: &IntervalVector, h: f64) -> Vec<f64> {
        (0..x.len())
            .map(|j| {
                let mut p = x.to_vec();
                let mut q = x.to_vec();
                p[j] += h;
                q[j] -= h;
                (tol_eval(&p, a, b).unwrap() - tol_eval(&q, a, b).unwrap()) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn supergradient_point_system() {
        let a = IntervalMatrix::from_rows(&[vec![iv(1.0, 1.0)]]).unwrap();
        let b = IntervalVector::new(vec![iv(0.0, 0.0)]).unwrap();
        let g = tol_evaluate(&[2.0], &a, &b).unwrap().supergradient;
        let fd = central_difference(&[2.0], &a, &b, 1e-6);
        assert_eq!(g, vec![-1.0]);
        assert!((g[0] - fd[0]).abs() < 1e-6);
    }

    #[test]
    fn supergradient_at_kink_is_in_superdifferential() {
        let a = IntervalMatrix::from_rows(&[vec![iv(-1.0, 1.0)]]).unwrap();
        let b = IntervalVector::new(vec![iv(-1.0, 1.0)]).unwrap();
        let g = tol_evaluate(&[0.0], &a, &b).unwrap().supergradient;
        assert!(g[0].abs() <= 1.0);
        // supergradient inequality on both sides of the kink
        let t0 = tol_eval(&[0.0], &a, &b).unwrap();
        for y in [-2.0, -0.5, 0.5, 2.0] {
            assert!(tol_eval(&[y], &a, &b).unwrap() <= t0 + g[0] * y + 1e-15);
        }
    }

    #[test]
    fn membership_examples() {
        let (a12, b12) = systems::inner_box_3x3();
        let r = member_tolerable(&[0.0; 3], &a12, &b12, 0.0).unwrap();
        assert_eq!(r.class, Membership::Interior);
        assert!(r.inclusion);
        let c = 0.147059;
        let r = member_tolerable(&[c; 3], &a12, &b12, 1e-4).unwrap();
        assert_eq!(r.class, Membership::Boundary);

        let (a, b) = one_d();
        for x in [-3.0, 0.0, 2.0, 7.0 / 3.0, 2.5, 3.0, 4.0] {
            let r = member_tolerable(&[x], &a, &b, default_eps(&b)).unwrap();
            assert_eq!(r.class, Membership::Outside);
            assert!(!r.inclusion);
        }
    }

    #[test]
    fn interior_criterion_flag() {
        let a = IntervalMatrix::from_rows(&[vec![iv(0.0, 0.0)], vec![iv(1.0, 1.0)]]).unwrap();
        let b = IntervalVector::new(vec![iv(0.0, 1.0), iv(-1.0, 1.0)]).unwrap();
        assert!(!interior_criterion_applies(&a, &b));
        // x = 0 is interior (every x near 0 is tolerable) yet Tol(0) = 0
        assert_eq!(tol_eval(&[0.0], &a, &b).unwrap(), 0.0);
        let r = member_tolerable(&[0.0], &a, &b, 0.0).unwrap();
        assert_eq!(r.class, Membership::Boundary);
        assert!(!r.interior_criterion_applies);
    }

    #[test]
    fn shift_examples() {
        let (a13, b13) = systems::tol_graph_4x2();
        let v = tol_shift_check(&[-0.21294, 0.0], &a13, &b13, 1.0).unwrap();
        assert!(v.abs() < 1e-4);
        let (a, b) = one_d();
        let v = tol_shift_check(&[7.0 / 3.0], &a, &b, 2.0 / 3.0).unwrap();
        assert!(v.abs() < 1e-15);
        assert_eq!(tol_shift_check(&[1.0], &a, &b, 0.0).unwrap(), tol_eval(&[1.0], &a, &b).unwrap());
    }

    fn system(m: usize, n: usize) -> impl Strategy<Value = (IntervalMatrix, IntervalVector)> {
        let entry = (-5.0f64..5.0, -5.0f64..5.0).prop_map(|(p, q)| iv(p.min(q), p.max(q)));
        (
            proptest::collection::vec(entry.clone(), m * n),
            proptest::collection::vec(entry, m),
        )
            .prop_map(move |(ad, bd)| {
                (IntervalMatrix::new(m, n, ad).unwrap(), IntervalVector::new(bd).unwrap())
            })
    }

    fn point(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-3.0f64..3.0, n)
    }

    proptest! {
        #[test]
        fn concavity((a, b) in system(3, 2), x in point(2), y in point(2), lam in 0.0f64..1.0) {
            let z: Vec<f64> = x.iter().zip(&y).map(|(p, q)| lam * p + (1.0 - lam) * q).collect();
            let lhs = tol_eval(&z, &a, &b).unwrap();
            let rhs = lam * tol_eval(&x, &a, &b).unwrap() + (1.0 - lam) * tol_eval(&y, &a, &b).unwrap();
            prop_assert!(lhs >= rhs - 1e-12);
        }

        #[test]
        fn lipschitz((a, b) in system(4, 3), x in point(3), y in point(3)) {
            let l = (0..a.rows())
                .map(|i| a.row(i).iter().map(|e| e.mag()).sum::<f64>())
                .fold(0.0, f64::max);
            let dist = x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            let diff = (tol_eval(&x, &a, &b).unwrap() - tol_eval(&y, &a, &b).unwrap()).abs();
            prop_assert!(diff <= l * dist + 1e-12);
        }

        #[test]
        fn membership_equivalence((a, b) in system(3, 2), x in point(2)) {
            let t = tol_eval(&x, &a, &b).unwrap();
            prop_assert_eq!(t >= 0.0, inclusion_holds(&x, &a, &b).unwrap());
        }

        #[test]
        fn point_system_is_chebyshev_residual(
            ad in proptest::collection::vec(-5.0f64..5.0, 6),
            bd in proptest::collection::vec(-5.0f64..5.0, 3),
            x in point(2),
        ) {
            let pm = crate::linalg::Matrix::new(3, 2, ad).unwrap();
            let a = IntervalMatrix::from_point(&pm);
            let b = IntervalVector::from_points(&bd).unwrap();
            let ax = pm.matvec(&x).unwrap();
            let cheb = ax.iter().zip(&bd).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            prop_assert!((tol_eval(&x, &a, &b).unwrap() + cheb).abs() <= 1e-12);
        }

        #[test]
        fn shift_identity((a, b) in system(3, 3), x in point(3), c in 0.0f64..4.0) {
            let lhs = tol_shift_check(&x, &a, &b, c).unwrap() - tol_eval(&x, &a, &b).unwrap() - c;
            prop_assert!(lhs.abs() <= 1e-12);
        }

        #[test]
        fn supergradient_matches_finite_differences((a, b) in system(3, 2), x in point(2)) {
            let h = 1e-6;
            let e = tol_evaluate(&x, &a, &b).unwrap();
            // smooth-point filter: the active row and every endpoint selection
            // must be unambiguous within h
            let rows: Vec<f64> = (0..a.rows()).map(|i| row_value(&a, &b, i, &x)).collect();
            let gap = rows.iter().enumerate()
                .filter(|(i, _)| *i != e.active_row)
                .map(|(_, v)| v - e.value)
                .fold(f64::INFINITY, f64::min);
            let u = Interval::point(b[e.active_row].mid()) - a.row_dot(e.active_row, &x);
            let ends_gap = (u.hi() + u.lo()).abs();
            let l = 20.0;
            prop_assume!(gap > 4.0 * l * h && ends_gap > 4.0 * l * h);
            prop_assume!(x.iter().all(|v| v.abs() > 2.0 * h));
            let fd = central_difference(&x, &a, &b, h);
            for (g, d) in e.supergradient.iter().zip(&fd) {
                prop_assert!((g - d).abs() <= 1e-5 * (1.0 + g.abs()), "g={} fd={}", g, d);
            }
        }

        #[test]
        fn supergradient_inequality((a, b) in system(3, 2), x in point(2), y in point(2)) {
            let e = tol_evaluate(&x, &a, &b).unwrap();
            let lin: f64 = e.value + e.supergradient.iter().zip(y.iter().zip(&x)).map(|(g, (p, q))| g * (p - q)).sum::<f64>();
            prop_assert!(tol_eval(&y, &a, &b).unwrap() <= lin + 1e-10);
        }
    }
}
