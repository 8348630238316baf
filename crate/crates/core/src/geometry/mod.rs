//! Exact rational geometry: points, hyperplanes, families and the predicates
//! every other module is built on.
//!
//! Coordinates are arbitrary-precision rationals. Each [`Point`] and
//! [`Hyperplane`] also carries an integer homogenisation (row scaled by the
//! positive lcm of its denominators) so that orientation and side tests reduce
//! to integer determinants and dot products. Those run in checked `i128`
//! arithmetic and fall back to `BigInt` on overflow; no predicate ever touches
//! floating point.

mod family;
pub mod hull;
mod predicates;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use family::{verify_general_position, verify_general_position_naive, Family, GeneralPosition, GpViolation};
pub use predicates::{hull_meets_hyperplane, orient, side, span_hyperplane, Sign};

pub(crate) use predicates::{orient_rows, RawForm};

/// Exact rational scalar. `BigRational` is always kept in reduced form with a
/// positive denominator.
pub type Scalar = BigRational;

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(t).map_err(|_| bad())?)),
    }
}

/// Formats a scalar as `"p/q"`, or `"p"` for integers.
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Display-only float rendering.
pub fn scalar_to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Integer vector with a cached `i64` copy when every entry fits.
#[derive(Clone, Debug)]
pub(crate) struct IntVec {
    pub(crate) big: Vec<BigInt>,
    pub(crate) small: Option<Vec<i64>>,
}

impl IntVec {
    pub(crate) fn new(big: Vec<BigInt>) -> Self {
        // Keep a margin below i64::MAX so that sums of a few products stay
        // representable in i128.
        const LIMIT: i64 = 1 << 62;
        let small = big
            .iter()
            .map(|b| b.to_i64().filter(|v| v.abs() < LIMIT))
            .collect::<Option<Vec<_>>>();
        IntVec { big, small }
    }
}

fn lcm_of_denominators<'a>(xs: impl Iterator<Item = &'a Scalar>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// A point of `R^d` with exact rational coordinates.
#[derive(Clone)]
pub struct Point {
    coords: Vec<Scalar>,
    hom: IntVec,
}

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("a point needs at least one coordinate".into()));
        }
        let w = lcm_of_denominators(coords.iter());
        let mut big = Vec::with_capacity(coords.len() + 1);
        big.push(w.clone());
        for c in &coords {
            big.push((c * BigRational::from_integer(w.clone())).to_integer());
        }
        Ok(Point { coords, hom: IntVec::new(big) })
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| int(c)).collect()).expect("nonempty coordinates")
    }

    pub fn parse(coords: &[&str]) -> Result<Self> {
        Point::new(coords.iter().map(|c| parse_scalar(c)).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &Scalar {
        &self.coords[i]
    }

    pub(crate) fn hom(&self) -> &IntVec {
        &self.hom
    }

    pub fn translate(&self, t: &[Scalar]) -> Result<Point> {
        if t.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: t.len() });
        }
        Point::new(self.coords.iter().zip(t).map(|(a, b)| a + b).collect())
    }

    /// Sup-norm distance, exact.
    pub fn sup_distance(&self, other: &Point) -> Scalar {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(scalar_to_f64).collect()
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coords.hash(state)
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The hyperplane `{x : <normal, x> = offset}`.
///
/// Always stored in canonical form: the first nonzero normal coordinate is
/// exactly `1`. Two hyperplanes are equal as sets iff they are structurally
/// equal.
#[derive(Clone)]
pub struct Hyperplane {
    normal: Vec<Scalar>,
    offset: Scalar,
    /// Primitive integer vector `(-offset, normal) * L` for the least positive `L`.
    hom: IntVec,
}

impl Hyperplane {
    pub fn new(normal: Vec<Scalar>, offset: Scalar) -> Result<Self> {
        let Some(lead) = normal.iter().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::InvalidInput("hyperplane normal is the zero vector".into()));
        };
        let normal: Vec<Scalar> = normal.into_iter().map(|c| c / &lead).collect();
        let offset = offset / &lead;
        Ok(Self::from_canonical(normal, offset))
    }

    fn from_canonical(normal: Vec<Scalar>, offset: Scalar) -> Self {
        let l = lcm_of_denominators(normal.iter().chain(std::iter::once(&offset)));
        let lr = BigRational::from_integer(l);
        let mut big = Vec::with_capacity(normal.len() + 1);
        big.push(-(&offset * &lr).to_integer());
        for c in &normal {
            big.push((c * &lr).to_integer());
        }
        Hyperplane { normal, offset, hom: IntVec::new(big) }
    }

    /// Builds from an integer affine form `c0 + sum c_j x_j`.
    pub(crate) fn from_affine_ints(c: &[BigInt]) -> Option<Self> {
        let normal: Vec<Scalar> = c[1..].iter().map(|v| BigRational::from_integer(v.clone())).collect();
        let offset = -BigRational::from_integer(c[0].clone());
        Hyperplane::new(normal, offset).ok()
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal(&self) -> &[Scalar] {
        &self.normal
    }

    pub fn offset(&self) -> &Scalar {
        &self.offset
    }

    pub(crate) fn hom(&self) -> &IntVec {
        &self.hom
    }

    /// `<normal, p> - offset`, exact.
    pub fn eval(&self, p: &Point) -> Scalar {
        self.normal.iter().zip(p.coords()).map(|(a, b)| a * b).sum::<Scalar>() - &self.offset
    }

    /// The coordinate hyperplane `{x_axis = value}`.
    pub fn axis(dim: usize, axis: usize, value: Scalar) -> Self {
        let mut n = vec![Scalar::zero(); dim];
        n[axis] = Scalar::one();
        Hyperplane::new(n, value).expect("unit normal")
    }

    /// `|<n, p> - b| / |n|_1`: the largest sup-norm perturbation of `p` that
    /// cannot move it across this hyperplane (strict inequality).
    pub fn sup_norm_clearance(&self, p: &Point) -> Scalar {
        let l1: Scalar = self.normal.iter().map(|c| c.abs()).sum();
        self.eval(p).abs() / l1
    }
}

impl PartialEq for Hyperplane {
    fn eq(&self, other: &Self) -> bool {
        self.normal == other.normal && self.offset == other.offset
    }
}

impl Eq for Hyperplane {}

impl Hash for Hyperplane {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.normal.hash(state);
        self.offset.hash(state);
    }
}

impl fmt::Debug for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hyperplane(")?;
        for (i, c) in self.normal.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*x{i}")?;
        }
        write!(f, " = {})", self.offset)
    }
}

/// An ordered set of pairwise-distinct points of a common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    pub label: String,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(label: impl Into<String>, points: Vec<Point>) -> Result<Self> {
        if let Some(first) = points.first() {
            let d = first.dim();
            if let Some(p) = points.iter().find(|p| p.dim() != d) {
                return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(points.len());
        for p in &points {
            if !seen.insert(p) {
                return Err(Error::InvalidInput(format!("duplicate point {p:?} in set")));
            }
        }
        Ok(PointSet { label: label.into(), points })
    }

    pub fn from_ints(label: impl Into<String>, pts: &[&[i64]]) -> Result<Self> {
        PointSet::new(label, pts.iter().map(|p| Point::from_ints(p)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.points.first().map(Point::dim)
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Subset by indices, preserving the given order.
    pub fn subset(&self, idx: &[usize]) -> PointSet {
        PointSet { label: self.label.clone(), points: idx.iter().map(|&i| self.points[i].clone()).collect() }
    }

    pub fn position(&self, p: &Point) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }
}

pub(crate) fn check_dims<'a>(d: usize, pts: impl IntoIterator<Item = &'a Point>) -> Result<()> {
    for p in pts {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
    }
    Ok(())
}

/// `C(n, k)` as u128 (saturating is never needed at desk scale).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
