//! Interval vectors and matrices, dense point matrices, LU and singular values.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// A nonempty vector of proper intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(entries: Vec<Interval>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        Ok(IntervalVector(entries))
    }

    /// Zero-radius lift of a point vector.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        IntervalVector::new(points.iter().map(|&p| Interval::point(p)).collect())
    }

    /// `(lo, hi)` pairs; fails on an improper pair.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let entries = pairs
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        IntervalVector::new(entries)
    }

    /// `n` copies of `[-1, 1]`.
    pub fn unit_balanced(n: usize) -> Result<Self> {
        IntervalVector::new(vec![Interval::new(-1.0, 1.0)?; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Interval> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.0
    }

    pub fn mid(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.mid()).collect()
    }

    pub fn rad(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.rad()).collect()
    }

    pub fn lo(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.lo()).collect()
    }

    pub fn hi(&self) -> Vec<f64> {
        self.0.iter().map(|x| x.hi()).collect()
    }

    pub fn max_mag(&self) -> f64 {
        self.0.iter().map(|x| x.mag()).fold(0.0, f64::max)
    }

    pub fn is_degenerate(&self) -> bool {
        self.0.iter().all(|x| x.is_degenerate())
    }

    /// Entrywise inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &IntervalVector) -> bool {
        self.len() == other.len() && self.iter().zip(other.iter()).all(|(a, b)| a.is_subset_of(*b))
    }

    /// Midpoint-preserving widening `b + C·e`: every radius grows by `c`.
    pub fn widen(&self, c: f64) -> Result<Self> {
        let entries = self
            .0
            .iter()
            .map(|b| {
                let r = b.rad() + c;
                if r < 0.0 {
                    return Err(Error::ImproperWidening(c));
                }
                Interval::from_mid_rad(b.mid(), r).map_err(|_| Error::ImproperWidening(c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalVector(entries))
    }

    /// Entrywise interval sum.
    pub fn add(&self, other: &IntervalVector) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(IntervalVector(self.iter().zip(other.iter()).map(|(a, b)| *a + *b).collect()))
    }
}

impl Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl From<IntervalVector> for Vec<Interval> {
    fn from(v: IntervalVector) -> Self {
        v.0
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Row-major dense `m×n` matrix of proper intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Interval>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        check_len(rows * cols, data.len())?;
        Ok(IntervalMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Interval>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            check_len(n, r.len())?;
            data.extend_from_slice(r);
        }
        IntervalMatrix::new(m, n, data)
    }

    /// The degenerate interval matrix equal to `a`.
    pub fn from_point(a: &Matrix) -> Self {
        IntervalMatrix {
            rows: a.rows,
            cols: a.cols,
            data: a.data.iter().map(|&v| Interval::point(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Interval] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Interval] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(Interval) -> Interval) -> Self {
        IntervalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f(a)).collect() }
    }

    pub fn lower(&self) -> Matrix {
        self.endpoint_matrix(Interval::lo)
    }

    pub fn upper(&self) -> Matrix {
        self.endpoint_matrix(Interval::hi)
    }

    pub fn mid(&self) -> Matrix {
        self.endpoint_matrix(Interval::mid)
    }

    fn endpoint_matrix(&self, f: fn(Interval) -> f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f(a)).collect() }
    }

    pub fn max_mag(&self) -> f64 {
        self.data.iter().map(|a| a.mag()).fold(0.0, f64::max)
    }

    pub fn is_degenerate(&self) -> bool {
        self.data.iter().all(|a| a.is_degenerate())
    }

    /// Whether the point matrix `a` lies in `self` entrywise.
    pub fn contains(&self, a: &Matrix) -> bool {
        self.rows == a.rows
            && self.cols == a.cols
            && self.data.iter().zip(&a.data).all(|(x, &v)| x.contains(v))
    }

    /// Interval matrix times point vector, `Σⱼ aᵢⱼ·xⱼ` in classical arithmetic.
    pub fn matvec(&self, x: &[f64]) -> Result<IntervalVector> {
        check_len(self.cols, x.len())?;
        let out = (0..self.rows).map(|i| self.row_dot(i, x)).collect();
        Ok(IntervalVector(out))
    }

    /// Interval matrix times interval vector.
    pub fn mul_interval_vector(&self, x: &IntervalVector) -> Result<IntervalVector> {
        check_len(self.cols, x.len())?;
        let out = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.iter())
                    .fold(Interval::point(0.0), |acc, (&a, &xj)| acc + a * xj)
            })
            .collect();
        Ok(IntervalVector(out))
    }

    pub(crate) fn row_dot(&self, i: usize, x: &[f64]) -> Interval {
        self.row(i)
            .iter()
            .zip(x)
            .fold(Interval::point(0.0), |acc, (&a, &xj)| acc + a.scale(xj))
    }
}

/// `A + θ·E`, where `E` is the matrix with every entry `[-1, 1]`.
pub fn intervalize(a: &Matrix, theta: f64) -> Result<IntervalMatrix> {
    if theta.is_nan() || theta < 0.0 {
        return Err(Error::NegativeTheta(theta));
    }
    let data = a
        .data
        .iter()
        .map(|&v| Interval::new(v - theta, v + theta))
        .collect::<Result<Vec<_>>>()?;
    IntervalMatrix::new(a.rows, a.cols, data)
}

/// Row-major dense real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        check_len(rows * cols, data.len())?;
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(m * n);
        for r in rows {
            check_len(n, r.len())?;
            data.extend_from_slice(r);
        }
        Matrix::new(m, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn abs(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.abs()).collect() }
    }

    /// `self + θ·I`.
    pub fn shifted(&self, theta: f64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] += theta;
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn lu(&self) -> Result<Lu> {
        Lu::factor(self)
    }

    /// Solve `self·x = b` by LU with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.lu()?.solve(b)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, `P·A = L·U` packed in place.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

/// Pivots below this fraction of the largest entry count as zero.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

impl Lu {
    pub fn factor(a: &Matrix) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
        }
        let n = a.rows;
        let scale = a.max_abs();
        if scale == 0.0 {
            return Err(Error::Singular);
        }
        let tiny = PIVOT_THRESHOLD * scale;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
                .unwrap_or(k);
            if lu[p * n + k].abs() <= tiny {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / pivot;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    lu[i * n + j] -= f * lu[k * n + j];
                }
            }
        }
        Ok(Lu { n, lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        check_len(n, b.len())?;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        Ok(x)
    }
}

/// Singular values in descending order by cyclic one-sided Jacobi.
///
/// Columns of a working copy are orthogonalized pairwise; the sweep stops
/// once every rotation in a sweep is below `1e-13` relative to the column
/// norms involved.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    // work on the orientation with at least as many rows as columns
    let (m, n, mut w) = if a.rows >= a.cols {
        (a.rows, a.cols, a.data.clone())
    } else {
        let mut t = vec![0.0; a.rows * a.cols];
        for i in 0..a.rows {
            for j in 0..a.cols {
                t[j * a.rows + i] = a.data[i * a.cols + j];
            }
        }
        (a.cols, a.rows, t)
    };
    const TOL: f64 = 1e-13;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..m {
                    let (x, y) = (w[i * n + p], w[i * n + q]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || gamma.abs() <= TOL * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (w[i * n + p], w[i * n + q]);
                    w[i * n + p] = c * x - s * y;
                    w[i * n + q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|j| libm::sqrt((0..m).map(|i| w[i * n + j] * w[i * n + j]).sum::<f64>()))
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
