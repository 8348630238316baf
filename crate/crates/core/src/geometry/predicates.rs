use std::borrow::Borrow;

use num::bigint::BigInt;
use num::{Integer, Signed, Zero};

use super::{check_dims, Hyperplane, IntVec, Point, PointSet};
use crate::error::{Error, Result};

/// Orientation / side sign: `-1`, `0` or `+1`.
pub type Sign = i8;

fn signum_big(x: &BigInt) -> Sign {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Fraction-free (Bareiss) elimination in checked i128. `None` on overflow.
fn bareiss_i128(m: &mut [i128], n: usize) -> Option<i128> {
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if m[k * n + k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r * n + k] != 0) else {
                return Some(0);
            };
            for j in 0..n {
                m.swap(k * n + j, r * n + j);
            }
            sign = -sign;
        }
        let pivot = m[k * n + k];
        for i in k + 1..n {
            let lead = m[i * n + k];
            for j in k + 1..n {
                let v = m[i * n + j].checked_mul(pivot)?.checked_sub(lead.checked_mul(m[k * n + j])?)?;
                m[i * n + j] = v / prev;
            }
        }
        prev = pivot;
    }
    Some(sign * m[n * n - 1])
}

fn bareiss_big(m: &mut [BigInt], n: usize) -> BigInt {
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n.saturating_sub(1) {
        if m[k * n + k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                m.swap(k * n + j, r * n + j);
            }
            negate = !negate;
        }
        let pivot = m[k * n + k].clone();
        for i in k + 1..n {
            let lead = m[i * n + k].clone();
            for j in k + 1..n {
                let v = &m[i * n + j] * &pivot - &lead * &m[k * n + j];
                m[i * n + j] = v / &prev;
            }
        }
        prev = pivot;
    }
    let d = m[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Determinant of the square integer matrix whose rows are given, selecting
/// the columns in `cols`. Exact.
fn det_cols(rows: &[&IntVec], cols: &[usize]) -> BigInt {
    let n = rows.len();
    debug_assert_eq!(cols.len(), n);
    if rows.iter().all(|r| r.small.is_some()) {
        let mut m: Vec<i128> = Vec::with_capacity(n * n);
        for r in rows {
            let s = r.small.as_ref().unwrap();
            m.extend(cols.iter().map(|&c| s[c] as i128));
        }
        if let Some(v) = bareiss_i128(&mut m, n) {
            return BigInt::from(v);
        }
    }
    let mut m: Vec<BigInt> = Vec::with_capacity(n * n);
    for r in rows {
        m.extend(cols.iter().map(|&c| r.big[c].clone()));
    }
    bareiss_big(&mut m, n)
}

/// Sign of the determinant of a square integer matrix given by rows.
pub(crate) fn det_sign_int(rows: &[&IntVec]) -> Sign {
    let n = rows.len();
    if rows.iter().all(|r| r.small.is_some()) {
        let mut m: Vec<i128> = Vec::with_capacity(n * n);
        for r in rows {
            m.extend(r.small.as_ref().unwrap().iter().map(|&v| v as i128));
        }
        if let Some(v) = bareiss_i128(&mut m, n) {
            return v.signum() as Sign;
        }
    }
    let mut m: Vec<BigInt> = Vec::with_capacity(n * n);
    for r in rows {
        m.extend(r.big.iter().cloned());
    }
    signum_big(&bareiss_big(&mut m, n))
}

/// Orientation of homogenised rows `(w, w p)`; equal to the sign of the
/// `(1, p)` determinant because every `w` is positive.
pub(crate) fn orient_rows(rows: &[&IntVec]) -> Sign {
    det_sign_int(rows)
}

pub(crate) fn dot_sign(a: &IntVec, b: &IntVec) -> Sign {
    if let (Some(x), Some(y)) = (&a.small, &b.small) {
        let mut acc: i128 = 0;
        let mut ok = true;
        for (u, v) in x.iter().zip(y) {
            match acc.checked_add(*u as i128 * *v as i128) {
                Some(s) => acc = s,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return acc.signum() as Sign;
        }
    }
    let acc: BigInt = a.big.iter().zip(&b.big).map(|(u, v)| u * v).sum();
    signum_big(&acc)
}

/// Sign of `det[(1, p_0); ...; (1, p_d)]` for `d + 1` points of `R^d`.
pub fn orient<P: Borrow<Point>>(pts: &[P]) -> Result<Sign> {
    let Some(first) = pts.first() else {
        return Err(Error::WrongPointCount { expected: 2, found: 0 });
    };
    let d = first.borrow().dim();
    if pts.len() != d + 1 {
        return Err(Error::WrongPointCount { expected: d + 1, found: pts.len() });
    }
    check_dims(d, pts.iter().map(|p| p.borrow()))?;
    let rows: Vec<&IntVec> = pts.iter().map(|p| p.borrow().hom()).collect();
    Ok(orient_rows(&rows))
}

/// Sign of `<normal, p> - offset`.
pub fn side(h: &Hyperplane, p: &Point) -> Result<Sign> {
    if h.dim() != p.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: p.dim() });
    }
    Ok(dot_sign(h.hom(), p.hom()))
}

/// Primitive integer affine form `c0 + sum c_j x_j` vanishing on the `d`
/// given homogenised points, with first nonzero `c_j` (j >= 1) positive.
/// `None` when the points are affinely dependent.
pub(crate) fn affine_form_through(rows: &[&IntVec]) -> Option<Vec<BigInt>> {
    let d = rows.len();
    let mut c = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let cols: Vec<usize> = (0..=d).filter(|&k| k != j).collect();
        let m = det_cols(rows, &cols);
        c.push(if j % 2 == 1 { -m } else { m });
    }
    let lead = c[1..].iter().find(|v| !v.is_zero())?.clone();
    let g = c.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let g = if lead.is_negative() { -g } else { g };
    Some(c.into_iter().map(|v| v / &g).collect())
}

fn det_cols_i128(rows: &[&IntVec], cols: &[usize]) -> Option<i128> {
    let n = rows.len();
    let mut m: Vec<i128> = Vec::with_capacity(n * n);
    for r in rows {
        let s = r.small.as_ref()?;
        m.extend(cols.iter().map(|&c| s[c] as i128));
    }
    bareiss_i128(&mut m, n)
}

/// Unnormalised affine form through `d` homogenised points, for hot loops
/// that only need side signs. Build a [`Hyperplane`] from it on success.
#[derive(Clone, Debug)]
pub(crate) enum RawForm {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl RawForm {
    pub(crate) fn through(rows: &[&IntVec]) -> Option<RawForm> {
        let d = rows.len();
        let mut small = Vec::with_capacity(d + 1);
        let mut ok = true;
        for j in 0..=d {
            let cols: Vec<usize> = (0..=d).filter(|&k| k != j).collect();
            match det_cols_i128(rows, &cols) {
                Some(m) => small.push(if j % 2 == 1 { -m } else { m }),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            if small[1..].iter().all(|&v| v == 0) {
                return None;
            }
            return Some(RawForm::Small(small));
        }
        let mut big = Vec::with_capacity(d + 1);
        for j in 0..=d {
            let cols: Vec<usize> = (0..=d).filter(|&k| k != j).collect();
            let m = det_cols(rows, &cols);
            big.push(if j % 2 == 1 { -m } else { m });
        }
        if big[1..].iter().all(|v| v.is_zero()) {
            return None;
        }
        Some(RawForm::Big(big))
    }

    pub(crate) fn side(&self, p: &IntVec) -> Sign {
        if let (RawForm::Small(c), Some(x)) = (self, &p.small) {
            let mut acc: i128 = 0;
            for (u, v) in c.iter().zip(x) {
                match u.checked_mul(*v as i128).and_then(|t| acc.checked_add(t)) {
                    Some(s) => acc = s,
                    None => return self.side_big(p),
                }
            }
            return acc.signum() as Sign;
        }
        self.side_big(p)
    }

    fn side_big(&self, p: &IntVec) -> Sign {
        let acc: BigInt = match self {
            RawForm::Small(c) => c.iter().zip(&p.big).map(|(u, v)| BigInt::from(*u) * v).sum(),
            RawForm::Big(c) => c.iter().zip(&p.big).map(|(u, v)| u * v).sum(),
        };
        signum_big(&acc)
    }

    pub(crate) fn meets_hull(&self, pts: &[Point]) -> bool {
        let mut seen = 0;
        for p in pts {
            let sg = self.side(p.hom());
            if sg == 0 || (seen != 0 && sg != seen) {
                return true;
            }
            seen = sg;
        }
        false
    }

    pub(crate) fn to_hyperplane(&self) -> Hyperplane {
        let big: Vec<BigInt> = match self {
            RawForm::Small(c) => c.iter().map(|&v| BigInt::from(v)).collect(),
            RawForm::Big(c) => c.clone(),
        };
        Hyperplane::from_affine_ints(&big).expect("nonzero normal")
    }
}

/// The unique hyperplane through `d` affinely independent points of `R^d`,
/// normalised so its first nonzero normal coordinate is `1`.
pub fn span_hyperplane<P: Borrow<Point>>(pts: &[P]) -> Result<Hyperplane> {
    let Some(first) = pts.first() else {
        return Err(Error::WrongPointCount { expected: 1, found: 0 });
    };
    let d = first.borrow().dim();
    if pts.len() != d {
        return Err(Error::WrongPointCount { expected: d, found: pts.len() });
    }
    check_dims(d, pts.iter().map(|p| p.borrow()))?;
    let rows: Vec<&IntVec> = pts.iter().map(|p| p.borrow().hom()).collect();
    let form = affine_form_through(&rows).ok_or(Error::AffinelyDependent)?;
    Ok(Hyperplane::from_affine_ints(&form).expect("nonzero normal"))
}

/// Whether `conv(s)` meets `h`: false iff every point is strictly on the same
/// side.
pub fn hull_meets_hyperplane(s: &PointSet, h: &Hyperplane) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::InvalidInput("hull_meets_hyperplane needs a nonempty set".into()));
    }
    let mut seen = 0;
    for p in s.points() {
        let sg = side(h, p)?;
        if sg == 0 {
            return Ok(true);
        }
        if seen != 0 && sg != seen {
            return Ok(true);
        }
        seen = sg;
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{int, ratio};

    fn p(c: &[i64]) -> Point {
        Point::from_ints(c)
    }

    #[test]
    fn orient_examples() {
        assert_eq!(orient(&[p(&[0, 0]), p(&[1, 0]), p(&[0, 1])]).unwrap(), 1);
        assert_eq!(orient(&[p(&[1, 0]), p(&[0, 0]), p(&[0, 1])]).unwrap(), -1);
        assert_eq!(orient(&[p(&[0, 0]), p(&[1, 1]), p(&[2, 2])]).unwrap(), 0);
    }

    #[test]
    fn orient_errors() {
        assert!(matches!(orient(&[p(&[0, 0]), p(&[1, 0])]), Err(Error::WrongPointCount { .. })));
        assert!(matches!(
            orient(&[p(&[0, 0]), p(&[1, 0]), p(&[0, 1, 2])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn side_examples() {
        let h = Hyperplane::new(vec![int(0), int(1)], int(0)).unwrap();
        assert_eq!(side(&h, &p(&[3, 1])).unwrap(), 1);
        assert_eq!(side(&h, &p(&[5, 0])).unwrap(), 0);
        assert_eq!(side(&h, &p(&[-2, -7])).unwrap(), -1);
        assert!(side(&h, &p(&[1, 2, 3])).is_err());
    }

    #[test]
    fn span_examples() {
        let h = span_hyperplane(&[p(&[0, 0]), p(&[1, 0])]).unwrap();
        assert_eq!(h.normal(), &[int(0), int(1)]);
        assert_eq!(h.offset(), &int(0));
        assert!(matches!(span_hyperplane(&[p(&[0, 0]), p(&[0, 0])]), Err(Error::AffinelyDependent)));

        let pts = [p(&[1, 0, 0]), p(&[0, 1, 0]), p(&[0, 0, 1])];
        let h = span_hyperplane(&pts).unwrap();
        assert_eq!(h.normal(), &[int(1), int(1), int(1)]);
        assert_eq!(h.offset(), &int(1));
        for q in &pts {
            assert_eq!(side(&h, q).unwrap(), 0);
        }
    }

    #[test]
    fn span_with_fractions() {
        let a = Point::new(vec![ratio(1, 3), ratio(-2, 7)]).unwrap();
        let b = Point::new(vec![ratio(5, 2), ratio(9, 4)]).unwrap();
        let h = span_hyperplane(&[&a, &b]).unwrap();
        assert!(h.eval(&a).is_zero());
        assert!(h.eval(&b).is_zero());
        assert_eq!(h.normal()[0], int(1));
    }

    #[test]
    fn hull_meets_examples() {
        let h = Hyperplane::new(vec![int(0), int(1)], int(0)).unwrap();
        let crossing = PointSet::from_ints("a", &[&[0, -1], &[0, 1]]).unwrap();
        let above = PointSet::from_ints("b", &[&[0, 1], &[1, 2]]).unwrap();
        let inside = PointSet::from_ints("c", &[&[0, 0], &[1, 0]]).unwrap();
        assert!(hull_meets_hyperplane(&crossing, &h).unwrap());
        assert!(!hull_meets_hyperplane(&above, &h).unwrap());
        assert!(hull_meets_hyperplane(&inside, &h).unwrap());
    }

    #[test]
    fn big_coordinates_fall_back_to_bigint() {
        let big = (1i64 << 62) + 5;
        let a = p(&[big, 0]);
        let b = p(&[0, big]);
        let c = p(&[big - 1, 1]);
        // c = a + (b - a) / big is on the segment ab.
        assert_eq!(orient(&[&a, &b, &c]).unwrap(), 0);
        let c2 = p(&[big - 1, 2]);
        assert_eq!(orient(&[&a, &b, &c2]).unwrap(), -1);
        assert!(a.hom().small.is_none());
    }
}
