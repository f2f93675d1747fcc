//! Classical intervals and Kaucher generalized intervals.
//!
//! Endpoints are plain `f64` with round-to-nearest; nothing here rounds
//! outward. Degenerate intervals `[a, a]` are ordinary values.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A proper closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::NonFinite);
        }
        if lo > hi {
            return Err(Error::ImproperInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// The degenerate interval `[a, a]`.
    pub const fn point(a: f64) -> Self {
        Interval { lo: a, hi: a }
    }

    /// `[-r, r]`; `r` must be nonnegative.
    pub fn balanced(r: f64) -> Result<Self> {
        Interval::new(-r, r)
    }

    pub fn from_mid_rad(mid: f64, rad: f64) -> Result<Self> {
        Interval::new(mid - rad, mid + rad)
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn rad(self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// Magnitude `max(|lo|, |hi|)`, the interval analogue of `|x|`.
    #[inline]
    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn is_degenerate(self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Scalar multiple `c·self`.
    pub fn scale(self, c: f64) -> Self {
        let (a, b) = (c * self.lo, c * self.hi);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn checked_div(self, rhs: Interval) -> Result<Self> {
        if rhs.contains(0.0) {
            return Err(Error::DivisionByZero);
        }
        Ok(self * Interval { lo: 1.0 / rhs.hi, hi: 1.0 / rhs.lo })
    }

    pub fn to_kaucher(self) -> KInterval {
        KInterval::new(self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<f64> for Interval {
    fn from(a: f64) -> Self {
        Interval::point(a)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: self.lo + rhs.lo, hi: self.hi + rhs.hi }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: self.lo - rhs.hi, hi: self.hi - rhs.lo }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

/// A generalized interval of Kaucher arithmetic; `lo > hi` is allowed
/// and marks an improper interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KInterval {
    pub lo: f64,
    pub hi: f64,
}

/// The four Kaucher multiplication classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KClass {
    /// `lo >= 0, hi >= 0`
    Positive,
    /// `lo <= 0, hi <= 0`
    Negative,
    /// `lo <= 0 <= hi`
    ZeroProper,
    /// `lo >= 0 >= hi`
    ZeroImproper,
}

/// Which endpoint of an operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum End {
    Lo,
    Hi,
}

/// One endpoint of a Kaucher product: either `x[e1]·y[e2]` or exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Term {
    Prod(End, End),
    Zero,
}

impl KInterval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        KInterval { lo, hi }
    }

    pub const fn point(a: f64) -> Self {
        KInterval { lo: a, hi: a }
    }

    pub fn is_proper(self) -> bool {
        self.lo <= self.hi
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Swap the endpoints.
    pub fn dual(self) -> Self {
        KInterval { lo: self.hi, hi: self.lo }
    }

    /// The proper projection `[min(lo,hi), max(lo,hi)]`.
    pub fn pro(self) -> Interval {
        Interval { lo: self.lo.min(self.hi), hi: self.lo.max(self.hi) }
    }

    /// Algebraic opposite, `self + opp(self) = 0`.
    pub fn opp(self) -> Self {
        KInterval { lo: -self.lo, hi: -self.hi }
    }

    /// Classification with ties resolved in the order
    /// `Positive`, `Negative`, `ZeroProper`, `ZeroImproper`.
    pub fn class(self) -> KClass {
        if self.lo >= 0.0 && self.hi >= 0.0 {
            KClass::Positive
        } else if self.lo <= 0.0 && self.hi <= 0.0 {
            KClass::Negative
        } else if self.lo <= 0.0 && self.hi >= 0.0 {
            KClass::ZeroProper
        } else {
            KClass::ZeroImproper
        }
    }

    fn end(self, e: End) -> f64 {
        match e {
            End::Lo => self.lo,
            End::Hi => self.hi,
        }
    }

    /// Endpoint selection of the Kaucher product `self · rhs`.
    ///
    /// Every endpoint of the product is a single endpoint product (or zero),
    /// which makes the product piecewise bilinear in the endpoints. The
    /// formal solver differentiates through this selection.
    pub fn mul_selection(self, rhs: KInterval) -> (Term, Term) {
        use End::{Hi, Lo};
        use KClass::*;
        use Term::{Prod, Zero};
        let (x, y) = (self, rhs);
        match (x.class(), y.class()) {
            (Positive, Positive) => (Prod(Lo, Lo), Prod(Hi, Hi)),
            (Positive, ZeroProper) => (Prod(Hi, Lo), Prod(Hi, Hi)),
            (Positive, Negative) => (Prod(Hi, Lo), Prod(Lo, Hi)),
            (Positive, ZeroImproper) => (Prod(Lo, Lo), Prod(Lo, Hi)),

            (ZeroProper, Positive) => (Prod(Lo, Hi), Prod(Hi, Hi)),
            (ZeroProper, ZeroProper) => {
                let lo = if x.lo * y.hi <= x.hi * y.lo { Prod(Lo, Hi) } else { Prod(Hi, Lo) };
                let hi = if x.lo * y.lo >= x.hi * y.hi { Prod(Lo, Lo) } else { Prod(Hi, Hi) };
                (lo, hi)
            }
            (ZeroProper, Negative) => (Prod(Hi, Lo), Prod(Lo, Lo)),
            (ZeroProper, ZeroImproper) => (Zero, Zero),

            (Negative, Positive) => (Prod(Lo, Hi), Prod(Hi, Lo)),
            (Negative, ZeroProper) => (Prod(Lo, Hi), Prod(Lo, Lo)),
            (Negative, Negative) => (Prod(Hi, Hi), Prod(Lo, Lo)),
            (Negative, ZeroImproper) => (Prod(Hi, Hi), Prod(Hi, Lo)),

            (ZeroImproper, Positive) => (Prod(Lo, Lo), Prod(Hi, Lo)),
            (ZeroImproper, ZeroProper) => (Zero, Zero),
            (ZeroImproper, Negative) => (Prod(Hi, Hi), Prod(Lo, Hi)),
            (ZeroImproper, ZeroImproper) => {
                let lo = if x.lo * y.lo >= x.hi * y.hi { Prod(Lo, Lo) } else { Prod(Hi, Hi) };
                let hi = if x.lo * y.hi <= x.hi * y.lo { Prod(Lo, Hi) } else { Prod(Hi, Lo) };
                (lo, hi)
            }
        }
    }

    pub(crate) fn eval_term(self, rhs: KInterval, t: Term) -> f64 {
        match t {
            Term::Prod(a, b) => self.end(a) * rhs.end(b),
            Term::Zero => 0.0,
        }
    }
}

impl fmt::Display for KInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl From<Interval> for KInterval {
    fn from(x: Interval) -> Self {
        x.to_kaucher()
    }
}

impl Add for KInterval {
    type Output = KInterval;
    fn add(self, rhs: KInterval) -> KInterval {
        KInterval { lo: self.lo + rhs.lo, hi: self.hi + rhs.hi }
    }
}

impl Mul for KInterval {
    type Output = KInterval;
    fn mul(self, rhs: KInterval) -> KInterval {
        let (lo, hi) = self.mul_selection(rhs);
        KInterval { lo: self.eval_term(rhs, lo), hi: self.eval_term(rhs, hi) }
    }
}
