//! Polynomial partitioning by iterated bisection of sign cells.

mod ham_sandwich;
mod poly;

use std::collections::BTreeMap;

pub use ham_sandwich::{bisects, ham_sandwich_poly, ham_sandwich_poly_seeded, lifted_dim};
pub use poly::{monomials, monomials_of_degree, veronese_lift, MultiPoly};

use crate::error::{Error, Result};
use crate::geometry::{PointSet, Sign};
use crate::rng;

/// Signs of the partitioning polynomials at a point, one per polynomial.
pub type SignVector = Vec<Sign>;

/// One bisection round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stage {
    /// Degree allowed at this round, `floor(d 2^{j/d}) + 1`.
    pub budget: u32,
    pub degree: u32,
    /// Nonempty full-sign cells bisected at this round.
    pub cells_in: usize,
}

#[derive(Clone, Debug)]
pub struct Partition {
    pub dim: usize,
    pub n: usize,
    pub polys: Vec<MultiPoly>,
    /// Full-sign cells; only nonempty cells are stored.
    pub cells: BTreeMap<SignVector, Vec<usize>>,
    /// Points on some zero set, with their signs up to and including the
    /// first zero.
    pub on_surface: BTreeMap<usize, SignVector>,
    pub stages: Vec<Stage>,
}

impl Partition {
    pub fn total_degree(&self) -> u32 {
        self.polys.iter().map(MultiPoly::degree).sum()
    }

    pub fn max_cell(&self) -> usize {
        self.cells.values().map(Vec::len).max().unwrap_or(0)
    }
}

/// Largest `D` with `D - 1 <= d 2^{j/d}`, i.e. `(D - 1)^d <= d^d 2^j`.
pub fn degree_budget(d: usize, j: usize) -> u32 {
    let limit = (d as u128).pow(d as u32) << j;
    let mut k: u128 = 0;
    while (k + 1).pow(d as u32) <= limit {
        k += 1;
    }
    k as u32 + 1
}

/// Whether `total^d <= (3 d^2)^d 2^J`, the bound on the product degree.
pub fn total_degree_within(d: usize, j: usize, total: u32) -> bool {
    let lhs = (total as u128).pow(d as u32);
    let rhs = (3 * (d * d) as u128).pow(d as u32) << j;
    lhs <= rhs
}

pub fn build_partition(x: &PointSet, j: usize) -> Result<Partition> {
    build_partition_seeded(x, j, 0)
}

/// Applies `j` rounds of simultaneous bisection. Every full-sign cell ends
/// with at most `n / 2^j` points.
pub fn build_partition_seeded(x: &PointSet, j: usize, seed: u64) -> Result<Partition> {
    if j == 0 {
        return Err(Error::InvalidInput("J must be at least 1".into()));
    }
    if j > 60 {
        return Err(Error::InvalidInput("J must be at most 60".into()));
    }
    let d = x.dim().unwrap_or(0);
    let n = x.len();
    let mut cells: BTreeMap<SignVector, Vec<usize>> = BTreeMap::new();
    if n > 0 {
        cells.insert(Vec::new(), (0..n).collect());
    }
    let mut on_surface: BTreeMap<usize, SignVector> = BTreeMap::new();
    let mut polys = Vec::with_capacity(j);
    let mut stages = Vec::with_capacity(j);
    for round in 0..j {
        let budget = degree_budget(d.max(1), round);
        let sets: Vec<PointSet> = cells.values().map(|idx| x.subset(idx)).collect();
        let f = if n == 0 {
            MultiPoly::constant(d, num::One::one())
        } else {
            ham_sandwich_poly_seeded(&sets, budget, rng::derive(seed, round as u64))?
        };
        if f.degree() > budget {
            return Err(Error::AssertionFailed(format!("round {round}: degree {} above budget {budget}", f.degree())));
        }
        stages.push(Stage { budget, degree: f.degree(), cells_in: cells.len() });
        let mut next: BTreeMap<SignVector, Vec<usize>> = BTreeMap::new();
        for (sv, idx) in cells {
            for i in idx {
                let s = f.sign_at(&x.points()[i]);
                let mut v = sv.clone();
                v.push(s);
                if s == 0 {
                    on_surface.insert(i, v);
                } else {
                    next.entry(v).or_default().push(i);
                }
            }
        }
        cells = next;
        let cap = n >> (round + 1);
        if let Some((sv, c)) = cells.iter().find(|(_, c)| c.len() > cap) {
            return Err(Error::AssertionFailed(format!("cell {sv:?} holds {} > {cap} points", c.len())));
        }
        polys.push(f);
    }
    let part = Partition { dim: d, n, polys, cells, on_surface, stages };
    check_ledger(&part)?;
    Ok(part)
}

/// Degree ledger and the cell/surface bookkeeping of a finished partition.
pub fn check_ledger(p: &Partition) -> Result<()> {
    let d = p.dim.max(1);
    for (round, st) in p.stages.iter().enumerate() {
        if st.degree > degree_budget(d, round) {
            return Err(Error::AssertionFailed(format!("round {round}: degree {} too high", st.degree)));
        }
    }
    if !total_degree_within(d, p.polys.len(), p.total_degree()) {
        return Err(Error::AssertionFailed(format!("total degree {} too high", p.total_degree())));
    }
    let mut seen = vec![false; p.n];
    for i in p.cells.values().flatten().chain(p.on_surface.keys()) {
        if std::mem::replace(&mut seen[*i], true) {
            return Err(Error::AssertionFailed(format!("point {i} assigned twice")));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::AssertionFailed("some point is unassigned".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WarrenReport {
    pub total_degree: u32,
    pub realized: usize,
    /// `6 (2D)^d`.
    pub bound: u128,
}

/// Compares the number of realized full-sign vectors with the bound on the
/// number of components of the complement of a degree-`D` surface.
pub fn warren_audit(p: &Partition) -> Result<WarrenReport> {
    let total_degree = p.total_degree();
    let realized = p.cells.len();
    let bound = 6 * (2 * total_degree as u128).pow(p.dim as u32);
    let r = WarrenReport { total_degree, realized, bound };
    if realized as u128 > bound {
        return Err(Error::AssertionFailed(format!("{realized} realized sign vectors exceed {bound}")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::rng::{point_near, seeded};

    fn random_set(n: usize, seed: u64) -> PointSet {
        let mut r = seeded(seed);
        let c = vec![crate::geometry::int(0); 2];
        let mut pts: Vec<Point> = Vec::new();
        while pts.len() < n {
            let p = point_near(&mut r, &c, 1000, 7);
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        PointSet::new("X", pts).unwrap()
    }

    #[test]
    fn budgets() {
        assert_eq!(degree_budget(2, 0), 3);
        assert_eq!(degree_budget(2, 1), 3);
        assert_eq!(degree_budget(2, 2), 5);
        assert_eq!(degree_budget(2, 3), 6);
        assert_eq!(degree_budget(1, 4), 17);
        for d in 1..=4 {
            for j in 0..12 {
                assert!(lifted_dim(d, degree_budget(d, j)) >= 1 << j);
            }
        }
        assert!(total_degree_within(2, 3, 33));
        assert!(!total_degree_within(2, 3, 34));
    }

    #[test]
    fn one_round_halves() {
        let x = random_set(21, 3);
        let p = build_partition(&x, 1).unwrap();
        assert!(p.max_cell() <= 10);
        assert_eq!(p.stages[0].degree, 1);
    }

    #[test]
    fn three_rounds_on_64_points() {
        let x = random_set(64, 11);
        let p = build_partition_seeded(&x, 3, 5).unwrap();
        assert!(p.cells.values().all(|c| c.len() <= 8));
        assert!(p.total_degree() <= 33);
        let w = warren_audit(&p).unwrap();
        assert!(w.realized as u128 <= w.bound);
        for (sv, idx) in &p.cells {
            for &i in idx {
                let signs: Vec<Sign> = p.polys.iter().map(|f| f.sign_at(&x.points()[i])).collect();
                assert_eq!(&signs, sv);
            }
        }
    }

    #[test]
    fn many_rounds_isolate_points() {
        let x = random_set(8, 2);
        let p = build_partition(&x, 3).unwrap();
        assert!(p.max_cell() <= 1);
    }

    #[test]
    fn empty_input() {
        let x = PointSet::new("E", vec![]).unwrap();
        let p = build_partition(&x, 2).unwrap();
        assert_eq!(warren_audit(&p).unwrap().realized, 0);
    }

    #[test]
    fn four_rounds_on_128_points() {
        let x = random_set(128, 4);
        let p = build_partition(&x, 4).unwrap();
        assert!(p.max_cell() <= 8);
        warren_audit(&p).unwrap();
    }
}
