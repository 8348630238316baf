use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::geometry::{Point, Scalar, Sign};

/// Multivariate polynomial with exact rational coefficients. Zero
/// coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        MultiPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut p = MultiPoly::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate function `x_k`.
    pub fn variable(dim: usize, k: usize) -> Self {
        let mut e = vec![0; dim];
        e[k] = 1;
        MultiPoly::from_terms(dim, [(e, Scalar::one())])
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>) -> Self {
        let mut p = MultiPoly::zero(dim);
        for (e, c) in terms {
            assert_eq!(e.len(), dim, "exponent length must match dimension");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `0` for constants and for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut p = MultiPoly::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    pub fn scale(&self, s: &Scalar) -> MultiPoly {
        MultiPoly::from_terms(self.dim, self.terms.iter().map(|(e, c)| (e.clone(), c * s)))
    }

    pub fn eval(&self, p: &Point) -> Scalar {
        assert_eq!(p.dim(), self.dim, "dimension mismatch");
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (x, &k) in p.coords().iter().zip(e) {
                    for _ in 0..k {
                        v *= x;
                    }
                }
                v
            })
            .sum()
    }

    pub fn sign_at(&self, p: &Point) -> Sign {
        let v = self.eval(p);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Divides by the coefficient of the leading monomial (highest degree,
    /// first in graded-lexicographic order), making it `1`.
    pub fn monic(&self) -> MultiPoly {
        let deg = self.degree();
        let lead = monomials_of_degree(self.dim, deg).into_iter().find_map(|e| self.terms.get(&e).cloned());
        match lead {
            Some(c) => self.scale(&(Scalar::one() / c)),
            None => self.clone(),
        }
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (k, &p) in e.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "*x{k}")?,
                    _ => write!(f, "*x{k}^{p}")?,
                }
            }
        }
        Ok(())
    }
}

/// Exponent vectors of total degree exactly `deg` in `d` variables, in
/// descending lexicographic order (`x^2, xy, y^2` for `d = 2`).
pub fn monomials_of_degree(d: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(d: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == d {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=deg).rev() {
            prefix.push(k);
            rec(d, deg - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(d, deg, &mut Vec::with_capacity(d), &mut out);
    }
    out
}

/// Monomials of degree `1..=max_deg` in graded-lexicographic order: degree
/// ascending, descending lexicographic within a degree.
pub fn monomials(d: usize, max_deg: u32) -> Vec<Vec<u32>> {
    (1..=max_deg).flat_map(|k| monomials_of_degree(d, k)).collect()
}

/// All monomials of degree `1..=D` of `p`, in the order of [`monomials`].
/// The output dimension is `C(D + d, d) - 1`.
pub fn veronese_lift(p: &Point, max_deg: u32) -> Point {
    let coords = monomials(p.dim(), max_deg)
        .iter()
        .map(|e| {
            let mut v = Scalar::one();
            for (x, &k) in p.coords().iter().zip(e) {
                for _ in 0..k {
                    v *= x;
                }
            }
            v
        })
        .collect();
    Point::new(coords).expect("at least one monomial")
}
