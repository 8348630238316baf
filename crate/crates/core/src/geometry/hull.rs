//! Exact convex hulls of small vertex sets, by facet enumeration.
//!
//! Facets of a full-dimensional hull are exactly the hyperplanes spanned by
//! `d` vertices that leave every vertex on one closed side. Enumerating those
//! costs `O(V^(d+1))`, fine for the desk-scale bodies used here (d <= 4).
//! Lower-dimensional hulls are handled by projecting onto an affine frame and
//! recursing.

use std::collections::HashSet;

use num::{One, Zero};

use super::{side, span_hyperplane, Hyperplane, Point, Scalar, Sign};
use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};

/// Where a point sits relative to a hull.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Outside,
    /// Interior (relative interior for lower-dimensional hulls).
    Interior,
    /// Boundary (relative boundary for lower-dimensional hulls).
    Boundary,
}

#[derive(Clone, Debug)]
enum Shape {
    Point(Point),
    /// Facet hyperplanes with the sign the interior takes.
    Full(Vec<(Hyperplane, Sign)>),
    Lower(Box<Frame>),
}

#[derive(Clone, Debug)]
struct Frame {
    base: Point,
    /// `d x k` direction matrix, column-major by direction.
    dirs: Vec<Vec<Scalar>>,
    /// Rows of `dirs` forming an invertible `k x k` block, and its inverse.
    pivot_rows: Vec<usize>,
    inv: Vec<Vec<Scalar>>,
    body: ConvexHull,
}

/// Convex hull of a finite vertex set.
#[derive(Clone, Debug)]
pub struct ConvexHull {
    dim: usize,
    affine_dim: usize,
    shape: Shape,
}

fn sub(a: &Point, b: &Point) -> Vec<Scalar> {
    a.coords().iter().zip(b.coords()).map(|(x, y)| x - y).collect()
}

/// Gaussian elimination over the rationals: indices of a maximal independent
/// subset of `vecs`, in input order.
fn independent_subset(vecs: &[Vec<Scalar>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<Scalar>)> = Vec::new(); // (pivot col, reduced row)
    let mut chosen = Vec::new();
    for (i, v) in vecs.iter().enumerate() {
        let mut r = v.clone();
        for (pc, b) in &basis {
            if !r[*pc].is_zero() {
                let f = &r[*pc] / &b[*pc];
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pc) = r.iter().position(|x| !x.is_zero()) {
            basis.push((pc, r));
            chosen.push(i);
        }
    }
    chosen
}

/// Inverse of a square rational matrix, `None` if singular.
pub(crate) fn invert(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x /= &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let row_c = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&row_c) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl ConvexHull {
    pub fn new(vertices: &[Point]) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidInput("hull of an empty set".into()));
        };
        let d = first.dim();
        super::check_dims(d, vertices)?;
        let diffs: Vec<Vec<Scalar>> = vertices[1..].iter().map(|v| sub(v, first)).collect();
        let indep = independent_subset(&diffs);
        let k = indep.len();
        if k == 0 {
            return Ok(ConvexHull { dim: d, affine_dim: 0, shape: Shape::Point(first.clone()) });
        }
        if k == d {
            return Ok(ConvexHull { dim: d, affine_dim: d, shape: Shape::Full(full_facets(vertices, d)?) });
        }
        let dirs: Vec<Vec<Scalar>> = indep.iter().map(|&i| diffs[i].clone()).collect();
        // Rows of the d x k matrix; pick k independent ones.
        let rows: Vec<Vec<Scalar>> = (0..d).map(|r| dirs.iter().map(|u| u[r].clone()).collect()).collect();
        let pivot_rows = independent_subset(&rows);
        debug_assert_eq!(pivot_rows.len(), k);
        let block: Vec<Vec<Scalar>> = pivot_rows.iter().map(|&r| rows[r].clone()).collect();
        let inv = invert(&block).expect("independent rows");
        let mut frame = Frame { base: first.clone(), dirs, pivot_rows, inv, body: ConvexHull::placeholder() };
        let projected: Vec<Point> = vertices
            .iter()
            .map(|v| frame.coordinates(v).expect("vertex lies in its own affine hull"))
            .collect();
        frame.body = ConvexHull::new(&projected)?;
        Ok(ConvexHull { dim: d, affine_dim: k, shape: Shape::Lower(Box::new(frame)) })
    }

    fn placeholder() -> Self {
        ConvexHull { dim: 0, affine_dim: 0, shape: Shape::Full(Vec::new()) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    /// Facets with inward sign; empty unless full-dimensional.
    pub fn facets(&self) -> &[(Hyperplane, Sign)] {
        match &self.shape {
            Shape::Full(f) => f,
            _ => &[],
        }
    }

    /// Exact location relative to the (relative) interior and boundary.
    pub fn locate(&self, x: &Point) -> Result<Location> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.dim() });
        }
        Ok(match &self.shape {
            Shape::Point(p) => {
                if p == x {
                    Location::Interior
                } else {
                    Location::Outside
                }
            }
            Shape::Full(facets) => {
                let mut on = false;
                for (h, s) in facets {
                    let sg = side(h, x)?;
                    if sg == 0 {
                        on = true;
                    } else if sg != *s {
                        return Ok(Location::Outside);
                    }
                }
                if on {
                    Location::Boundary
                } else {
                    Location::Interior
                }
            }
            Shape::Lower(frame) => match frame.coordinates(x) {
                None => Location::Outside,
                Some(t) => frame.body.locate(&t)?,
            },
        })
    }

    /// In the closed hull.
    pub fn contains(&self, x: &Point) -> Result<bool> {
        Ok(self.locate(x)? != Location::Outside)
    }

    /// In the topological interior of `R^d` (never true for degenerate hulls).
    pub fn interior_contains(&self, x: &Point) -> Result<bool> {
        Ok(self.is_full_dimensional() && self.locate(x)? == Location::Interior)
    }
}

impl Frame {
    /// Frame coordinates of `x`, or `None` if `x` is off the affine hull.
    fn coordinates(&self, x: &Point) -> Option<Point> {
        let diff = sub(x, &self.base);
        let k = self.dirs.len();
        let rhs: Vec<&Scalar> = self.pivot_rows.iter().map(|&r| &diff[r]).collect();
        let t: Vec<Scalar> = (0..k).map(|i| (0..k).map(|j| &self.inv[i][j] * rhs[j]).sum()).collect();
        for (r, target) in diff.iter().enumerate() {
            let v: Scalar = self.dirs.iter().zip(&t).map(|(u, ti)| &u[r] * ti).sum();
            if &v != target {
                return None;
            }
        }
        Point::new(t).ok()
    }
}

fn full_facets(vertices: &[Point], d: usize) -> Result<Vec<(Hyperplane, Sign)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut err = None;
    for_each_combination(vertices.len(), d, |c| {
        let pts: Vec<&Point> = c.iter().map(|&i| &vertices[i]).collect();
        let h = match span_hyperplane(&pts) {
            Ok(h) => h,
            Err(Error::AffinelyDependent) => return true,
            Err(e) => {
                err = Some(e);
                return false;
            }
        };
        if seen.contains(&h) {
            return true;
        }
        let mut sign = 0;
        for v in vertices {
            let s = side(&h, v).expect("dims checked");
            if s == 0 {
                continue;
            }
            if sign == 0 {
                sign = s;
            } else if s != sign {
                return true;
            }
        }
        if sign != 0 {
            seen.insert(h.clone());
            out.push((h, sign));
        }
        true
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// A subset of `points` with the same convex hull: the exact hull vertices
/// for `d <= 2`, and all points otherwise.
pub fn hull_vertices(points: &[Point]) -> Vec<Point> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    match first.dim() {
        1 => {
            let lo = points.iter().min().unwrap().clone();
            let hi = points.iter().max().unwrap().clone();
            if lo == hi {
                vec![lo]
            } else {
                vec![lo, hi]
            }
        }
        2 if points.len() > 3 => monotone_chain(points),
        _ => points.to_vec(),
    }
}

/// Andrew's monotone chain with exact orientation; drops collinear points.
fn monotone_chain(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<&Point> = points.iter().collect();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts.into_iter().cloned().collect();
    }
    let turn = |a: &Point, b: &Point, c: &Point| super::orient(&[a, b, c]).expect("2d");
    let mut lower: Vec<&Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().cloned().collect()
}
