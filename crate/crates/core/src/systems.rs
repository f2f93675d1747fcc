//! Small reference systems used throughout the tests and the CLI examples.

use alloc::vec;

use crate::interval::Interval;
use crate::linalg::{IntervalMatrix, IntervalVector, Matrix};

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).expect("proper literal")
}

/// `[1, 2]·x = [3, 4]`, whose tolerable set is empty.
pub fn one_dimensional() -> (IntervalMatrix, IntervalVector) {
    (
        IntervalMatrix::from_rows(&[vec![iv(1.0, 2.0)]]).expect("1x1"),
        IntervalVector::new(vec![iv(3.0, 4.0)]).expect("len 1"),
    )
}

/// Point 4×2 matrix with interval right-hand side; every row is one strip.
pub fn four_strips_2d() -> (IntervalMatrix, IntervalVector) {
    let a = Matrix::from_rows(&[
        vec![-2.0, 1.0],
        vec![1.0, 1.0],
        vec![1.0, 0.0],
        vec![-1.0, 2.0],
    ])
    .expect("4x2");
    let b = IntervalVector::new(vec![iv(-8.0, 4.0), iv(4.0, 13.0), iv(1.0, 7.0), iv(-1.0, 19.0)])
        .expect("len 4");
    (IntervalMatrix::from_point(&a), b)
}

/// 3×3 system with diagonal 2.8, off-diagonal `[0, 2]` and right-hand side `[-1, 1]`.
pub fn inner_box_3x3() -> (IntervalMatrix, IntervalVector) {
    let d = Interval::point(2.8);
    let o = iv(0.0, 2.0);
    (
        IntervalMatrix::from_rows(&[vec![d, o, o], vec![o, d, o], vec![o, o, d]]).expect("3x3"),
        IntervalVector::new(vec![iv(-1.0, 1.0); 3]).expect("len 3"),
    )
}

/// 4×2 interval system whose recognizing functional peaks at −1 on a plateau.
pub fn tol_graph_4x2() -> (IntervalMatrix, IntervalVector) {
    (
        IntervalMatrix::from_rows(&[
            vec![iv(-2.0, 0.0), iv(-4.0, 2.0)],
            vec![iv(-3.0, 2.0), iv(2.0, 3.0)],
            vec![iv(3.0, 4.0), iv(4.0, 5.0)],
            vec![iv(3.0, 5.0), iv(-2.0, 2.0)],
        ])
        .expect("4x2"),
        IntervalVector::new(vec![iv(1.0, 2.0), iv(-2.0, 0.0), iv(0.0, 4.0), iv(-2.0, 3.0)])
            .expect("len 4"),
    )
}

/// The ill-conditioned matrix `[[99, 100], [98, 99]]`.
pub fn ill_conditioned_2x2() -> Matrix {
    Matrix::from_rows(&[vec![99.0, 100.0], vec![98.0, 99.0]]).expect("2x2")
}
