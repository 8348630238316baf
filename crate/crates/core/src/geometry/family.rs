use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use super::predicates::affine_form_through;
use super::{orient_rows, IntVec, Point, PointSet};
use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};

/// Tri-state general-position flag carried by a [`Family`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneralPosition {
    Verified,
    Assumed,
    Violated,
}

/// Why a family fails general position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GpViolation {
    /// The same point occurs twice (in two sets, or twice in one set).
    SharedPoint { point: Point, sets: (usize, usize) },
    /// `d + 1` affinely dependent points of the union.
    Degenerate { points: Vec<Point> },
}

impl std::fmt::Display for GpViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GpViolation::SharedPoint { point, sets } => {
                write!(f, "point {point:?} appears in sets {} and {}", sets.0, sets.1)
            }
            GpViolation::Degenerate { points } => write!(f, "affinely dependent tuple {points:?}"),
        }
    }
}

/// An ordered list of point sets in a common dimension.
#[derive(Clone, Debug)]
pub struct Family {
    dim: usize,
    sets: Vec<PointSet>,
    general_position: GeneralPosition,
}

impl Family {
    /// Builds a family with `general_position = Assumed`.
    pub fn new(dim: usize, sets: Vec<PointSet>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        for s in &sets {
            if let Some(sd) = s.dim() {
                if sd != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: sd });
                }
            }
        }
        Ok(Family { dim, sets, general_position: GeneralPosition::Assumed })
    }

    /// Builds and verifies; errors if the family is not in general position.
    pub fn verified(dim: usize, sets: Vec<PointSet>) -> Result<Self> {
        let mut f = Family::new(dim, sets)?;
        f.verify().map_err(|v| Error::NotInGeneralPosition(v.to_string()))?;
        Ok(f)
    }

    pub fn verify(&mut self) -> std::result::Result<(), GpViolation> {
        let verdict = verify_general_position(self);
        self.general_position =
            if verdict.is_ok() { GeneralPosition::Verified } else { GeneralPosition::Violated };
        verdict
    }

    /// Errors unless general position holds, verifying on demand.
    pub fn ensure_verified(&self) -> Result<()> {
        match self.general_position {
            GeneralPosition::Verified => Ok(()),
            GeneralPosition::Violated => Err(Error::NotInGeneralPosition("flagged as violated".into())),
            GeneralPosition::Assumed => {
                verify_general_position(self).map_err(|v| Error::NotInGeneralPosition(v.to_string()))
            }
        }
    }

    /// Marks the family verified without checking. Only for callers that
    /// have just certified an equivalent family.
    pub(crate) fn mark_verified(mut self) -> Self {
        self.general_position = GeneralPosition::Verified;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &PointSet {
        &self.sets[i]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn general_position(&self) -> GeneralPosition {
        self.general_position
    }

    pub fn into_sets(self) -> Vec<PointSet> {
        self.sets
    }

    /// Same points, sets reordered: result set `k` is input set `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Family {
        Family {
            dim: self.dim,
            sets: perm.iter().map(|&i| self.sets[i].clone()).collect(),
            general_position: self.general_position,
        }
    }

    /// Replaces set `i`, resetting the general-position flag.
    pub fn with_set(&self, i: usize, s: PointSet) -> Result<Family> {
        let mut sets = self.sets.clone();
        sets[i] = s;
        Family::new(self.dim, sets)
    }

    pub fn total_points(&self) -> usize {
        self.sets.iter().map(PointSet::len).sum()
    }

    /// `(set index, point)` over the union, in order.
    pub fn union(&self) -> Vec<(usize, &Point)> {
        self.sets.iter().enumerate().flat_map(|(i, s)| s.points().iter().map(move |p| (i, p))).collect()
    }
}

fn shared_point(f: &Family) -> Option<GpViolation> {
    let mut owner: HashMap<&Point, usize> = HashMap::new();
    for (i, p) in f.union() {
        if let Some(&j) = owner.get(p) {
            return Some(GpViolation::SharedPoint { point: p.clone(), sets: (j, i) });
        }
        owner.insert(p, i);
    }
    None
}

fn key_of(form: &[num::BigInt]) -> u64 {
    let mut h = DefaultHasher::new();
    form.hash(&mut h);
    h.finish()
}

/// Exhaustive exact general-position check.
///
/// Every `d`-subset of the union spans a hyperplane; the union is in general
/// position iff all those subsets are affinely independent and no hyperplane
/// is spanned twice. That is equivalent to checking all `(d + 1)`-subsets for
/// zero orientation but costs `O(N^d)` hashed spans instead of `O(N^(d+1))`
/// determinants.
pub fn verify_general_position(f: &Family) -> std::result::Result<(), GpViolation> {
    if let Some(v) = shared_point(f) {
        return Err(v);
    }
    let d = f.dim();
    let all: Vec<&Point> = f.union().into_iter().map(|(_, p)| p).collect();
    let n = all.len();
    if n <= d {
        return Ok(());
    }
    let mut seen: HashMap<u64, Vec<Vec<usize>>> = HashMap::new();
    let mut violation = None;
    for_each_combination(n, d, |sub| {
        let rows: Vec<&IntVec> = sub.iter().map(|&i| all[i].hom()).collect();
        let Some(form) = affine_form_through(&rows) else {
            let extra = (0..n).find(|i| !sub.contains(i)).expect("n > d");
            let mut pts: Vec<Point> = sub.iter().map(|&i| all[i].clone()).collect();
            pts.push(all[extra].clone());
            violation = Some(GpViolation::Degenerate { points: pts });
            return false;
        };
        let bucket = seen.entry(key_of(&form)).or_default();
        for prev in bucket.iter() {
            // Same hash: confirm exactly that one new point lies on the old span.
            let extra = sub.iter().copied().find(|i| !prev.contains(i)).expect("distinct subsets");
            let mut rows: Vec<&IntVec> = prev.iter().map(|&i| all[i].hom()).collect();
            rows.push(all[extra].hom());
            if orient_rows(&rows) == 0 {
                let mut pts: Vec<Point> = prev.iter().map(|&i| all[i].clone()).collect();
                pts.push(all[extra].clone());
                violation = Some(GpViolation::Degenerate { points: pts });
                return false;
            }
        }
        bucket.push(sub.to_vec());
        true
    });
    match violation {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// Reference implementation: every `(d + 1)`-subset of the union is tested
/// for zero orientation. `O(N^(d+1))`.
pub fn verify_general_position_naive(f: &Family) -> std::result::Result<(), GpViolation> {
    if let Some(v) = shared_point(f) {
        return Err(v);
    }
    let d = f.dim();
    let all: Vec<&Point> = f.union().into_iter().map(|(_, p)| p).collect();
    let mut violation = None;
    for_each_combination(all.len(), d + 1, |sub| {
        let rows: Vec<&IntVec> = sub.iter().map(|&i| all[i].hom()).collect();
        if orient_rows(&rows) == 0 {
            violation = Some(GpViolation::Degenerate { points: sub.iter().map(|&i| all[i].clone()).collect() });
            return false;
        }
        true
    });
    match violation {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::orient;

    fn fam(sets: &[&[&[i64]]]) -> Family {
        let sets =
            sets.iter().enumerate().map(|(i, s)| PointSet::from_ints(format!("X{i}"), s).unwrap()).collect();
        Family::new(2, sets).unwrap()
    }

    #[test]
    fn three_collinear_is_violated_with_witness() {
        let f = fam(&[&[&[0, 0], &[1, 1]], &[&[2, 2], &[5, 0]]]);
        match verify_general_position(&f) {
            Err(GpViolation::Degenerate { points }) => {
                assert_eq!(points.len(), 3);
                assert_eq!(orient(&points).unwrap(), 0);
            }
            other => panic!("expected degenerate, got {other:?}"),
        }
        assert!(verify_general_position_naive(&f).is_err());
    }

    #[test]
    fn perturbed_pentagon_is_verified() {
        // Integer pentagon-ish vertices, checked against the naive oracle.
        let f = fam(&[&[&[1000, 3], &[309, 951]], &[&[-809, 588], &[-809, -587]], &[&[310, -951]]]);
        assert!(verify_general_position_naive(&f).is_ok());
        assert!(verify_general_position(&f).is_ok());
    }

    #[test]
    fn shared_point_across_sets() {
        let f = fam(&[&[&[0, 0], &[1, 5]], &[&[0, 0]]]);
        assert!(matches!(verify_general_position(&f), Err(GpViolation::SharedPoint { sets: (0, 1), .. })));
    }

    #[test]
    fn tiny_unions_are_trivially_fine() {
        let f = fam(&[&[&[0, 0]], &[&[1, 1]]]);
        assert!(verify_general_position(&f).is_ok());
    }

    #[test]
    fn verify_sets_flag() {
        let mut f = fam(&[&[&[0, 0]], &[&[1, 0]], &[&[0, 1]]]);
        assert_eq!(f.general_position(), GeneralPosition::Assumed);
        f.verify().unwrap();
        assert_eq!(f.general_position(), GeneralPosition::Verified);
        assert!(Family::verified(2, fam(&[&[&[0, 0], &[1, 1], &[2, 2]]]).into_sets()).is_err());
    }
}
