//! The tolerable solution set as an intersection of hyperstrips.
//!
//! For each row `i` and each vertex `a` of the interval row vector `A_i:`,
//! the strip `{x : b_i.lo <= a·x <= b_i.hi}` contains the tolerable set, and
//! the intersection of all of them is exactly that set. Degenerate entries
//! have a single vertex, so a row with `k` non-degenerate entries contributes
//! `2^k` strips.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::linalg::{check_len, IntervalMatrix, IntervalVector};

/// Default cap on the number of unknowns for strip enumeration.
pub const DEFAULT_STRIP_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperstrip {
    pub row: usize,
    pub normal: Vec<f64>,
    pub bounds: Interval,
}

impl Hyperstrip {
    pub fn contains(&self, x: &[f64], slack: f64) -> bool {
        let s: f64 = self.normal.iter().zip(x).map(|(a, v)| a * v).sum();
        self.bounds.lo() - slack <= s && s <= self.bounds.hi() + slack
    }
}

/// All strips, row by row, vertices in binary reflected Gray-code order
/// over the non-degenerate entries of each row. Exact duplicates are dropped.
pub fn enumerate_strips(a: &IntervalMatrix, b: &IntervalVector, limit: usize) -> Result<Vec<Hyperstrip>> {
    check_len(a.rows(), b.len())?;
    let n = a.cols();
    if n > limit {
        return Err(Error::TooLarge {
            what: "strip enumeration",
            count: (a.rows() as u128) << n.min(127),
            limit: (a.rows() as u128) << limit.min(127),
        });
    }
    let mut seen = BTreeSet::new();
    let mut strips = Vec::new();
    for i in 0..a.rows() {
        let row = a.row(i);
        let free: Vec<usize> = (0..n).filter(|&j| !row[j].is_degenerate()).collect();
        for k in 0u64..(1u64 << free.len()) {
            let gray = k ^ (k >> 1);
            let mut normal: Vec<f64> = row.iter().map(|e| e.lo()).collect();
            for (bit, &j) in free.iter().enumerate() {
                if gray >> bit & 1 == 1 {
                    normal[j] = row[j].hi();
                }
            }
            let mut key: Vec<u64> = normal.iter().map(|v| v.to_bits()).collect();
            key.push(b[i].lo().to_bits());
            key.push(b[i].hi().to_bits());
            if seen.insert(key) {
                strips.push(Hyperstrip { row: i, normal, bounds: b[i] });
            }
        }
    }
    Ok(strips)
}

/// Membership by strips; agrees with `Tol(x) >= 0`.
pub fn member_by_strips(x: &[f64], a: &IntervalMatrix, b: &IntervalVector) -> Result<bool> {
    check_len(a.cols(), x.len())?;
    Ok(enumerate_strips(a, b, DEFAULT_STRIP_LIMIT)?.iter().all(|s| s.contains(x, 0.0)))
}

/// Tolerable set of a system in two unknowns, clipped to a large box.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    /// Counterclockwise; empty when the set misses the box.
    pub vertices: Vec<[f64; 2]>,
    /// The set reaches the bounding box, so it is (likely) unbounded.
    pub truncated: bool,
    pub box_half_width: f64,
}

fn data_scale(a: &IntervalMatrix, b: &IntervalVector) -> f64 {
    1.0f64.max(a.max_mag()).max(b.max_mag())
}

type Line = ([f64; 2], f64);

fn meet(l1: &Line, l2: &Line) -> [f64; 2] {
    let ((n1, c1), (n2, c2)) = (l1, l2);
    let det = n1[0] * n2[1] - n1[1] * n2[0];
    [(c1 * n2[1] - c2 * n1[1]) / det, (n1[0] * c2 - n2[0] * c1) / det]
}

/// Vertex `k` starts edge `k`, so it lies on edges `k − 1` and `k`.
fn vertices_of(edges: &[Line]) -> Vec<[f64; 2]> {
    let k = edges.len();
    (0..k).map(|i| meet(&edges[(i + k - 1) % k], &edges[i])).collect()
}

/// Keep the part of a convex polygon, given by its edge lines, with `n·p <= c`.
fn clip(edges: Vec<Line>, n: [f64; 2], c: f64, tol: f64) -> Vec<Line> {
    let v = vertices_of(&edges);
    let inside: Vec<bool> = v.iter().map(|p| n[0] * p[0] + n[1] * p[1] - c <= tol).collect();
    if inside.iter().all(|&t| t) {
        return edges;
    }
    if !inside.iter().any(|&t| t) {
        return Vec::new();
    }
    let k = edges.len();
    let mut out = Vec::with_capacity(k + 1);
    for i in 0..k {
        let (p_in, q_in) = (inside[i], inside[(i + 1) % k]);
        if p_in || q_in {
            out.push(edges[i]);
        }
        if p_in && !q_in {
            out.push((n, c));
        }
    }
    out
}

/// Drop repeated and collinear vertices.
fn simplify(poly: Vec<[f64; 2]>, tol: f64) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(poly.len());
    for p in poly {
        if pts.last().is_none_or(|l: &[f64; 2]| (l[0] - p[0]).abs() > tol || (l[1] - p[1]).abs() > tol) {
            pts.push(p);
        }
    }
    while pts.len() > 1 {
        let (f, l) = (pts[0], pts[pts.len() - 1]);
        if (f[0] - l[0]).abs() <= tol && (f[1] - l[1]).abs() <= tol {
            pts.pop();
        } else {
            break;
        }
    }
    let mut changed = true;
    while changed && pts.len() > 2 {
        changed = false;
        for k in 0..pts.len() {
            let p = pts[(k + pts.len() - 1) % pts.len()];
            let q = pts[k];
            let r = pts[(k + 1) % pts.len()];
            let (u, v) = ([q[0] - p[0], q[1] - p[1]], [r[0] - q[0], r[1] - q[1]]);
            let cross = u[0] * v[1] - u[1] * v[0];
            let len = libm::hypot(u[0], u[1]) * libm::hypot(v[0], v[1]);
            if cross.abs() <= 1e-12 * len {
                pts.remove(k);
                changed = true;
                break;
            }
        }
    }
    pts
}

/// Intersect all strips of a 2-unknown system by convex clipping, starting
/// from the square of half-width `1e6·scale` where `scale` is the largest
/// data magnitude (at least 1).
pub fn polygon2d(a: &IntervalMatrix, b: &IntervalVector) -> Result<Polygon> {
    if a.cols() != 2 {
        return Err(Error::NotPlanar(a.cols()));
    }
    let strips = enumerate_strips(a, b, DEFAULT_STRIP_LIMIT)?;
    let scale = data_scale(a, b);
    let r = 1e6 * scale;
    let tol = 1e-12 * scale;
    let mut edges: Vec<Line> = vec![([0.0, -1.0], r), ([1.0, 0.0], r), ([0.0, 1.0], r), ([-1.0, 0.0], r)];
    for s in &strips {
        let n = [s.normal[0], s.normal[1]];
        if n[0] == 0.0 && n[1] == 0.0 {
            if s.bounds.contains(0.0) {
                continue;
            }
            edges.clear();
            break;
        }
        let norm = libm::hypot(n[0], n[1]);
        edges = clip(edges, n, s.bounds.hi(), tol * norm);
        if !edges.is_empty() {
            edges = clip(edges, [-n[0], -n[1]], -s.bounds.lo(), tol * norm);
        }
        if edges.is_empty() {
            break;
        }
    }
    let poly = if edges.is_empty() { Vec::new() } else { vertices_of(&edges) };
    let vertices = simplify(poly, tol);
    let edge = r * (1.0 - 1e-9);
    let truncated = vertices.iter().any(|v| v[0].abs() >= edge || v[1].abs() >= edge);
    Ok(Polygon { vertices, truncated, box_half_width: r })
}
