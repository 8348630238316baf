//! Same-type checking.
//!
//! Two independent deciders are provided for `d + 1` sets in general
//! position:
//!
//! - [`same_type_tuple`] scans every transversal tuple and compares
//!   orientations;
//! - [`same_type_via_transversal`] searches for a hyperplane meeting every
//!   convex hull among the finite pool of hyperplanes spanned by `d` points of
//!   the union.
//!
//! Under general position the two must agree: a transversal hyperplane exists
//! exactly when the sets are not of the same type.

mod constant;
mod planar;

use std::collections::BTreeMap;

use crate::combinatorics::{combinations, for_each_combination, for_each_product};
use crate::error::{Error, Result};
use crate::geometry::{orient_rows, Family, Hyperplane, IntVec, Point, PointSet, RawForm, Sign};

pub use constant::{c_cell_heuristic, c_exact, c_exact_with, CExactBudget, CMethod, CResult, OrientationTable};

/// Evidence that a subfamily is not of the same type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Two transversal tuples (one point per set, in set order) with opposite
    /// orientations.
    OppositeTuples { subfamily: Vec<usize>, positive: Vec<Point>, negative: Vec<Point> },
    /// A hyperplane meeting the convex hull of every set in the subfamily.
    Transversal { subfamily: Vec<usize>, hyperplane: Hyperplane },
}

impl Witness {
    pub fn subfamily(&self) -> &[usize] {
        match self {
            Witness::OppositeTuples { subfamily, .. } | Witness::Transversal { subfamily, .. } => subfamily,
        }
    }
}

/// Outcome of a same-type check.
///
/// When `holds`, `signs` maps each sorted `(d + 1)`-tuple of set indices to
/// its common orientation and `witness` is `None`. Otherwise `signs` is empty
/// and `witness` explains the failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SameTypeVerdict {
    pub holds: bool,
    pub signs: BTreeMap<Vec<usize>, Sign>,
    pub witness: Option<Witness>,
}

impl SameTypeVerdict {
    fn holds(signs: BTreeMap<Vec<usize>, Sign>) -> Self {
        SameTypeVerdict { holds: true, signs, witness: None }
    }

    fn fails(w: Witness) -> Self {
        SameTypeVerdict { holds: false, signs: BTreeMap::new(), witness: Some(w) }
    }
}

fn check_tuple_input(sets: &[&PointSet]) -> Result<usize> {
    let d = sets
        .iter()
        .find_map(|s| s.dim())
        .ok_or_else(|| Error::InvalidInput("same-type check needs nonempty sets".into()))?;
    if sets.len() != d + 1 {
        return Err(Error::WrongPointCount { expected: d + 1, found: sets.len() });
    }
    for s in sets {
        match s.dim() {
            None => return Err(Error::InvalidInput(format!("set {:?} is empty", s.label))),
            Some(sd) if sd != d => return Err(Error::DimensionMismatch { expected: d, found: sd }),
            _ => {}
        }
    }
    Ok(d)
}

/// Orientation scan over all `prod |Y_i|` transversal tuples.
///
/// A zero orientation is reported as [`Error::DegenerateTuple`]; under
/// verified general position it cannot occur.
pub fn same_type_tuple(sets: &[PointSet]) -> Result<SameTypeVerdict> {
    let refs: Vec<&PointSet> = sets.iter().collect();
    tuple_scan(&refs, &(0..sets.len()).collect::<Vec<_>>())
}

fn tuple_scan(sets: &[&PointSet], subfamily: &[usize]) -> Result<SameTypeVerdict> {
    check_tuple_input(sets)?;
    let sizes: Vec<usize> = sets.iter().map(|s| s.len()).collect();
    let mut first: Option<(Sign, Vec<usize>)> = None;
    let mut outcome: Option<Result<Vec<usize>>> = None;
    let mut rows: Vec<&IntVec> = Vec::with_capacity(sets.len());
    for_each_product(&sizes, |idx| {
        rows.clear();
        rows.extend(idx.iter().zip(sets).map(|(&i, s)| s.points()[i].hom()));
        let sg = orient_rows(&rows);
        let pts = || idx.iter().zip(sets).map(|(&i, s)| s.points()[i].clone()).collect::<Vec<_>>();
        if sg == 0 {
            outcome = Some(Err(Error::DegenerateTuple { points: pts() }));
            return false;
        }
        match &first {
            None => {
                first = Some((sg, idx.to_vec()));
                true
            }
            Some((s0, _)) if *s0 == sg => true,
            Some(_) => {
                outcome = Some(Ok(idx.to_vec()));
                false
            }
        }
    });
    let idx1 = outcome.transpose()?;
    let (s0, idx0) = first.expect("nonempty sets give at least one tuple");
    match idx1 {
        None => Ok(SameTypeVerdict::holds(BTreeMap::from([(subfamily.to_vec(), s0)]))),
        Some(idx1) => {
            let take = |idx: &[usize]| idx.iter().zip(sets).map(|(&i, s)| s.points()[i].clone()).collect();
            let (pos, neg) = if s0 > 0 { (take(&idx0), take(&idx1)) } else { (take(&idx1), take(&idx0)) };
            Ok(SameTypeVerdict::fails(Witness::OppositeTuples {
                subfamily: subfamily.to_vec(),
                positive: pos,
                negative: neg,
            }))
        }
    }
}

/// Same-type check of a whole family: every `(d + 1)`-subfamily must pass.
/// Families with at most `d` sets hold vacuously.
pub fn same_type_family(f: &Family) -> Result<SameTypeVerdict> {
    let d = f.dim();
    let m = f.len();
    let mut signs = BTreeMap::new();
    if m <= d {
        return Ok(SameTypeVerdict::holds(signs));
    }
    for sub in combinations(m, d + 1) {
        let sets: Vec<&PointSet> = sub.iter().map(|&i| f.set(i)).collect();
        let v = tuple_scan(&sets, &sub)?;
        if !v.holds {
            return Ok(v);
        }
        signs.extend(v.signs);
    }
    Ok(SameTypeVerdict::holds(signs))
}

/// A hyperplane meeting every `conv(sets[i])`, searched among hyperplanes
/// spanned by `d` affinely independent points of the union (first found in
/// lexicographic order of the union indices).
pub fn transversal_hyperplane(sets: &[PointSet]) -> Result<Option<Hyperplane>> {
    let refs: Vec<&PointSet> = sets.iter().collect();
    check_tuple_input(&refs)?;
    Ok(transversal_raw(&refs).map(|f| f.to_hyperplane()))
}

pub(crate) fn transversal_raw(sets: &[&PointSet]) -> Option<RawForm> {
    let d = sets.len() - 1;
    let union: Vec<&Point> = sets.iter().flat_map(|s| s.points()).collect();
    let mut found = None;
    for_each_combination(union.len(), d, |c| {
        let rows: Vec<&IntVec> = c.iter().map(|&i| union[i].hom()).collect();
        let Some(form) = RawForm::through(&rows) else {
            return true;
        };
        if sets.iter().all(|s| form.meets_hull(s.points())) {
            found = Some(form);
            return false;
        }
        true
    });
    found
}

/// `true` iff no transversal hyperplane exists.
pub fn same_type_via_transversal(sets: &[PointSet]) -> Result<bool> {
    Ok(transversal_hyperplane(sets)?.is_none())
}

/// Family-level check driven by the transversal search. Produces the same
/// `holds` as [`same_type_family`] under general position; signs are read off
/// one tuple per subfamily.
pub fn same_type_family_via_transversal(f: &Family) -> Result<SameTypeVerdict> {
    let d = f.dim();
    let m = f.len();
    let mut signs = BTreeMap::new();
    if m <= d {
        return Ok(SameTypeVerdict::holds(signs));
    }
    for sub in combinations(m, d + 1) {
        let sets: Vec<&PointSet> = sub.iter().map(|&i| f.set(i)).collect();
        check_tuple_input(&sets)?;
        if let Some(form) = transversal_raw(&sets) {
            return Ok(SameTypeVerdict::fails(Witness::Transversal {
                subfamily: sub,
                hyperplane: form.to_hyperplane(),
            }));
        }
        let rows: Vec<&IntVec> = sets.iter().map(|s| s.points()[0].hom()).collect();
        signs.insert(sub, orient_rows(&rows));
    }
    Ok(SameTypeVerdict::holds(signs))
}
