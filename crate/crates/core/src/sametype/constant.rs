//! The same-type constant `c(X_1, ..., X_m)` on small families.
//!
//! [`c_exact`] decides, for a candidate value `v`, whether subsets with
//! `|Y_i| >= ceil(v |X_i|)` exist, and binary-searches the finitely many
//! candidate values `k / |X_i|`. Subsets of same-type sets are same-type, so
//! each feasibility query looks for subsets of exactly those sizes. The query
//! is a constraint search over one bitmask domain per set: once a
//! `(d + 1)`-subfamily has a full tuple its sign is fixed, and every later
//! choice filters the other domains through a precomputed orientation table.

use std::collections::BTreeMap;

use num::{One, Zero};
use serde::Serialize;

use super::planar::{first_bits, lex_less, Frac, OutOfBudget, Planar};
use super::{same_type_family, SameTypeVerdict};
use crate::combinatorics::{combinations, for_each_combination, for_each_product};
use crate::error::{Error, Result};
use crate::geometry::{orient_rows, Family, IntVec, Point, PointSet, RawForm, Scalar, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CMethod {
    Exhaustive,
    CellHeuristic,
}

/// A same-type selection and its value `min_i |Y_i| / |X_i|`.
#[derive(Clone, Debug)]
pub struct CResult {
    pub value: Scalar,
    pub optimal_subsets: Vec<PointSet>,
    /// Indices into the corresponding input sets, sorted.
    pub indices: Vec<Vec<usize>>,
    pub method: CMethod,
}

/// Size limits for [`c_exact_with`].
#[derive(Clone, Copy, Debug)]
pub struct CExactBudget {
    /// Largest `|X_i|` for the general search; three planar sets may have
    /// up to 64 points each.
    pub max_set_size: usize,
    pub max_sets: usize,
    /// Search nodes summed over all feasibility queries.
    pub max_nodes: u64,
}

impl Default for CExactBudget {
    fn default() -> Self {
        CExactBudget { max_set_size: 12, max_sets: 5, max_nodes: 50_000_000 }
    }
}

/// Largest supported `|X_i|` (domains are `u64` masks).
const MASK_BITS: usize = 64;

/// Orientation signs of every transversal tuple of one `(d + 1)`-subfamily.
///
/// For each slot `k` and each choice of points in the other slots (mixed
/// radix over the other slots in order), `masks[k][key]` holds the positive
/// and negative candidate masks for slot `k`.
#[derive(Clone, Debug)]
pub struct OrientationTable {
    sets: Vec<usize>,
    sizes: Vec<usize>,
    masks: Vec<Vec<(u64, u64)>>,
}

impl OrientationTable {
    pub fn new(f: &Family, sets: &[usize]) -> Result<Self> {
        let sizes: Vec<usize> = sets.iter().map(|&i| f.set(i).len()).collect();
        let mut masks: Vec<Vec<(u64, u64)>> = (0..sets.len())
            .map(|k| {
                let n: usize = sizes.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, s)| s).product();
                vec![(0, 0); n]
            })
            .collect();
        let mut rows: Vec<&IntVec> = Vec::with_capacity(sets.len());
        let mut degenerate = None;
        for_each_product(&sizes, |idx| {
            rows.clear();
            rows.extend(idx.iter().zip(sets).map(|(&p, &s)| f.set(s).points()[p].hom()));
            let sg = orient_rows(&rows);
            if sg == 0 {
                degenerate = Some(idx.iter().zip(sets).map(|(&p, &s)| f.set(s).points()[p].clone()).collect());
                return false;
            }
            for k in 0..sets.len() {
                let key = other_key(&sizes, idx, k);
                let m = &mut masks[k][key];
                if sg > 0 {
                    m.0 |= 1 << idx[k];
                } else {
                    m.1 |= 1 << idx[k];
                }
            }
            true
        });
        if let Some(points) = degenerate {
            return Err(Error::DegenerateTuple { points });
        }
        Ok(OrientationTable { sets: sets.to_vec(), sizes, masks })
    }

    /// Sign of the tuple `idx` (one point index per slot).
    pub fn sign(&self, idx: &[usize]) -> Sign {
        let (pos, _) = self.masks[0][other_key(&self.sizes, idx, 0)];
        if pos >> idx[0] & 1 == 1 {
            1
        } else {
            -1
        }
    }

    fn candidates(&self, k: usize, others: &[usize], sign: Sign) -> u64 {
        let (pos, neg) = self.masks[k][other_key(&self.sizes, others, k)];
        if sign > 0 {
            pos
        } else {
            neg
        }
    }
}

/// Mixed-radix key of `idx` with slot `skip` left out. `idx[skip]` is ignored.
fn other_key(sizes: &[usize], idx: &[usize], skip: usize) -> usize {
    let mut key = 0;
    for (j, (&i, &s)) in idx.iter().zip(sizes).enumerate() {
        if j != skip {
            key = key * s + i;
        }
    }
    key
}

/// Points of one set strictly inside each `(d + 1)`-simplex of that set,
/// indexed by the combinatorial rank of the sorted vertex tuple.
struct SimplexMasks {
    d: usize,
    /// `binom[k][n] = C(n, k)`.
    binom: Vec<Vec<usize>>,
    inside: Vec<u64>,
}

impl SimplexMasks {
    fn new(points: &[Point], d: usize) -> Self {
        let n = points.len();
        let binom: Vec<Vec<usize>> = (0..=d + 1)
            .map(|k| (0..=n).map(|m| crate::geometry::binomial(m as u64, k as u64) as usize).collect())
            .collect();
        let mut inside = vec![0u64; binom[d + 1][n]];
        let mut rows: Vec<&IntVec> = Vec::with_capacity(d + 1);
        for_each_combination(n, d + 1, |t| {
            rows.clear();
            rows.extend(t.iter().map(|&k| points[k].hom()));
            let whole = orient_rows(&rows);
            let mut mask = 0u64;
            for (x, p) in points.iter().enumerate() {
                if t.contains(&x) {
                    continue;
                }
                let inner = (0..=d).all(|k| {
                    let saved = rows[k];
                    rows[k] = p.hom();
                    let s = orient_rows(&rows);
                    rows[k] = saved;
                    s == whole
                });
                if inner {
                    mask |= 1 << x;
                }
            }
            let rank: usize = t.iter().enumerate().map(|(k, &v)| binom[k + 1][v]).sum();
            inside[rank] = mask;
            true
        });
        SimplexMasks { d, binom, inside }
    }

    fn rank(&self, sorted: &[usize]) -> usize {
        sorted.iter().enumerate().map(|(k, &t)| self.binom[k + 1][t]).sum()
    }

    /// Points of the set inside `conv(chosen + z)` but not `conv(chosen)`.
    fn added_by(&self, chosen: &[usize], z: usize) -> u64 {
        if chosen.len() < self.d {
            return 0;
        }
        let mut mask = 0;
        let mut t = vec![0; self.d + 1];
        for_each_combination(chosen.len(), self.d, |c| {
            for (slot, &k) in t.iter_mut().zip(c) {
                *slot = chosen[k];
            }
            t[self.d] = z;
            t.sort_unstable();
            mask |= self.inside[self.rank(&t)];
            true
        });
        mask
    }
}

/// One feasibility query: hull-closed sets `Z_i` containing `forced[i]`
/// with at least `target[i]` points inside `count[i]`.
struct Query {
    forced: Vec<Vec<usize>>,
    count: Vec<u64>,
    target: Vec<usize>,
}

struct Search<'a> {
    tables: &'a [OrientationTable],
    simplices: &'a [SimplexMasks],
    /// Subfamilies containing each set, as `(table, slot)`.
    member: Vec<Vec<(usize, usize)>>,
    full: Vec<u64>,
    nodes: u64,
    max_nodes: u64,
}

#[derive(Clone)]
struct State {
    chosen: Vec<Vec<usize>>,
    chosen_mask: Vec<u64>,
    dom: Vec<u64>,
    signs: Vec<Sign>,
}

enum Outcome {
    Found(Vec<Vec<usize>>),
    Infeasible,
    OutOfBudget,
}

impl Search<'_> {
    /// Adds `x` to set `i` together with everything its hull now covers,
    /// propagating signs and closure constraints. `false` on contradiction.
    fn include(&self, st: &mut State, i: usize, x: usize) -> bool {
        let mut pending = vec![(i, x)];
        let mut dirty = vec![false; st.dom.len()];
        while let Some((i, x)) = pending.pop() {
            if st.chosen_mask[i] >> x & 1 == 1 {
                continue;
            }
            if st.dom[i] >> x & 1 == 0 {
                return false;
            }
            let mut added = self.simplices[i].added_by(&st.chosen[i], x) & !st.chosen_mask[i];
            st.chosen[i].push(x);
            st.chosen_mask[i] |= 1 << x;
            st.dom[i] &= !(1u64 << x);
            dirty[i] = true;
            while added != 0 {
                let y = added.trailing_zeros() as usize;
                added &= added - 1;
                pending.push((i, y));
            }
            if !self.propagate_signs(st, i, x, &mut dirty) {
                return false;
            }
        }
        for (k, &dk) in dirty.iter().enumerate() {
            if dk && !self.closure_filter(st, k) {
                return false;
            }
        }
        true
    }

    fn propagate_signs(&self, st: &mut State, i: usize, x: usize, dirty: &mut [bool]) -> bool {
        for &(t, slot) in &self.member[i] {
            let table = &self.tables[t];
            let d1 = table.sets.len();
            if st.signs[t] == 0 {
                let chosen: Vec<Vec<usize>> = table.sets.iter().map(|&s| st.chosen[s].clone()).collect();
                if chosen.iter().any(Vec::is_empty) {
                    continue;
                }
                // First full tuples: they must agree, then the sign is fixed.
                let mut sign = 0;
                let mut clash = false;
                let sizes: Vec<usize> = chosen.iter().map(Vec::len).collect();
                let mut idx = vec![0; d1];
                for_each_product(&sizes, |pick| {
                    for k in 0..d1 {
                        idx[k] = chosen[k][pick[k]];
                    }
                    let s = table.sign(&idx);
                    if sign == 0 {
                        sign = s;
                    } else if s != sign {
                        clash = true;
                        return false;
                    }
                    true
                });
                if clash {
                    return false;
                }
                st.signs[t] = sign;
                for k in 0..d1 {
                    dirty[table.sets[k]] = true;
                    if !self.filter(st, t, k, None) {
                        return false;
                    }
                }
            } else {
                for k in 0..d1 {
                    if k != slot {
                        dirty[table.sets[k]] = true;
                        if !self.filter(st, t, k, Some((slot, x))) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Restricts the domain of slot `k` of table `t` to candidates agreeing
    /// with the fixed sign against every chosen tuple of the other slots
    /// (only those using `pin` when given). `false` if a chosen point of
    /// slot `k` disagrees.
    fn filter(&self, st: &mut State, t: usize, k: usize, pin: Option<(usize, usize)>) -> bool {
        let table = &self.tables[t];
        let set_k = table.sets[k];
        let d1 = table.sets.len();
        let lists: Vec<Vec<usize>> = (0..d1)
            .map(|j| match pin {
                Some((ps, px)) if ps == j => vec![px],
                _ if j == k => vec![0],
                _ => st.chosen[table.sets[j]].clone(),
            })
            .collect();
        let sizes: Vec<usize> = lists.iter().map(Vec::len).collect();
        let mut mask = st.dom[set_k] | st.chosen_mask[set_k];
        let mut idx = vec![0; d1];
        for_each_product(&sizes, |pick| {
            for j in 0..d1 {
                idx[j] = lists[j][pick[j]];
            }
            mask &= table.candidates(k, &idx, st.signs[t]);
            true
        });
        st.dom[set_k] &= mask;
        st.chosen_mask[set_k] & !mask == 0
    }

    /// Drops candidates whose hull with the chosen points would cover a
    /// point that can no longer be chosen, to a fixpoint.
    fn closure_filter(&self, st: &mut State, i: usize) -> bool {
        loop {
            let forbidden = self.full[i] & !(st.dom[i] | st.chosen_mask[i]);
            if forbidden == 0 {
                return true;
            }
            let mut removed = false;
            let mut cand = st.dom[i];
            while cand != 0 {
                let z = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                if self.simplices[i].added_by(&st.chosen[i], z) & forbidden != 0 {
                    st.dom[i] &= !(1u64 << z);
                    removed = true;
                }
            }
            if !removed {
                return true;
            }
        }
    }

    fn slack(&self, st: &State, q: &Query, i: usize) -> Option<isize> {
        let have = (st.chosen_mask[i] & q.count[i]).count_ones() as isize;
        let could = (st.dom[i] & q.count[i]).count_ones() as isize;
        let need = q.target[i] as isize;
        if have >= need {
            None
        } else {
            Some(have + could - need)
        }
    }

    fn solve(&mut self, st: State, q: &Query) -> Outcome {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Outcome::OutOfBudget;
        }
        let mut pick: Option<(isize, usize)> = None;
        for i in 0..st.dom.len() {
            if let Some(s) = self.slack(&st, q, i) {
                if s < 0 {
                    return Outcome::Infeasible;
                }
                if pick.is_none_or(|(b, _)| s < b) {
                    pick = Some((s, i));
                }
            }
        }
        let Some((_, i)) = pick else {
            return Outcome::Found(st.chosen);
        };
        // Grow compactly: the candidate whose hull covers the fewest new points.
        let mut cand = st.dom[i] & q.count[i];
        let mut x = cand.trailing_zeros() as usize;
        let mut x_cost = u32::MAX;
        while cand != 0 {
            let z = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            let cost = (self.simplices[i].added_by(&st.chosen[i], z) & !st.chosen_mask[i]).count_ones();
            if cost < x_cost {
                x = z;
                x_cost = cost;
            }
        }
        let mut with = st.clone();
        if self.include(&mut with, i, x) {
            match self.solve(with, q) {
                Outcome::Infeasible => {}
                other => return other,
            }
        }
        let mut without = st;
        without.dom[i] &= !(1u64 << x);
        if !self.closure_filter(&mut without, i) {
            return Outcome::Infeasible;
        }
        self.solve(without, q)
    }

    fn feasible(&mut self, q: &Query) -> Outcome {
        let m = self.full.len();
        let mut st = State {
            chosen: vec![Vec::new(); m],
            chosen_mask: vec![0; m],
            dom: self.full.clone(),
            signs: vec![0; self.tables.len()],
        };
        for (i, xs) in q.forced.iter().enumerate() {
            for &x in xs {
                if !self.include(&mut st, i, x) {
                    return Outcome::Infeasible;
                }
            }
        }
        self.solve(st, q)
    }
}

fn full_mask(n: usize) -> u64 {
    if n == MASK_BITS {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn ceil_mul(v: &Scalar, n: usize) -> usize {
    let x = v * Scalar::from_integer(n.into());
    let c = x.ceil().to_integer();
    usize::try_from(c).expect("fits")
}

fn result_from(f: &Family, indices: Vec<Vec<usize>>, method: CMethod) -> CResult {
    let value = indices
        .iter()
        .zip(f.sets())
        .map(|(y, x)| Scalar::new(y.len().into(), x.len().into()))
        .min()
        .unwrap_or_else(Scalar::one);
    let optimal_subsets = indices.iter().zip(f.sets()).map(|(y, x)| x.subset(y)).collect();
    CResult { value, optimal_subsets, indices, method }
}

/// Exact `c(X_1, ..., X_m)` under the default budget.
pub fn c_exact(f: &Family) -> Result<CResult> {
    c_exact_with(f, CExactBudget::default())
}

/// Exact `c(X_1, ..., X_m)`.
///
/// Among optimal selections with `|Y_i| = ceil(c |X_i|)`, returns the one
/// whose sorted index lists are lexicographically smallest, compared set by
/// set in input order.
///
/// Hull closure `Y_i -> X_i ∩ conv Y_i` preserves the same-type property, so
/// the search only visits hull-closed selections; exact-size optima are
/// read off as subsets of those.
pub fn c_exact_with(f: &Family, budget: CExactBudget) -> Result<CResult> {
    f.ensure_verified()?;
    let m = f.len();
    if m == 0 {
        return Err(Error::InvalidInput("empty family".into()));
    }
    if let Some(s) = f.sets().iter().find(|s| s.is_empty()) {
        return Err(Error::InvalidInput(format!("set {:?} is empty", s.label)));
    }
    let planar = f.dim() == 2 && m == 3;
    let cap = if planar { MASK_BITS } else { budget.max_set_size.min(MASK_BITS) };
    if m > budget.max_sets || f.sets().iter().any(|s| s.len() > cap) {
        let lb = f.sets().iter().map(|s| Scalar::new(1.into(), s.len().into())).min().expect("m > 0");
        return Err(Error::BudgetExceeded { best_lower_bound: lb, nodes: 0 });
    }
    let d = f.dim();
    if m <= d {
        let all = f.sets().iter().map(|s| (0..s.len()).collect()).collect();
        return Ok(result_from(f, all, CMethod::Exhaustive));
    }
    let res = if planar { planar_search(f, budget)? } else { general_search(f, budget)? };
    let check = Family::new(f.dim(), res.optimal_subsets.clone())?;
    if !same_type_family(&check)?.holds {
        return Err(Error::AssertionFailed("optimal selection is not same-type".into()));
    }
    Ok(res)
}

/// Three planar sets: search over triples of separating lines.
fn planar_search(f: &Family, budget: CExactBudget) -> Result<CResult> {
    let mut p = Planar::new(f, budget.max_nodes);
    let sizes: Vec<usize> = f.sets().iter().map(PointSet::len).collect();
    let floor = Frac(1, *sizes.iter().max().expect("three sets"));
    let over = |nodes: u64, best: Scalar| Error::BudgetExceeded { best_lower_bound: best, nodes };
    let lower = Scalar::new(1.into(), floor.1.into());
    let best = match p.best(floor) {
        Ok(Some(b)) => b,
        Ok(None) => return Err(Error::AssertionFailed("singleton selection rejected under general position".into())),
        Err(OutOfBudget) => return Err(over(p.nodes, lower)),
    };
    let v = p.value(&best);
    let value = Scalar::new(v.0.into(), v.1.into());
    let target: [usize; 3] = std::array::from_fn(|i| ceil_mul(&value, sizes[i]));
    let mut fixed = [0u64; 3];
    for i in 0..3 {
        let mut key: Option<u64> = None;
        let r = p.for_each(&target, &fixed, |m| {
            let k = first_bits(m[i], target[i]);
            if key.is_none_or(|b| lex_less(k, b)) {
                key = Some(k);
            }
        });
        if r.is_err() {
            return Err(over(p.nodes, value));
        }
        fixed[i] = key.ok_or_else(|| Error::AssertionFailed("optimal selection lost during tie-break".into()))?;
    }
    let indices = fixed.iter().map(|&mk| (0..MASK_BITS).filter(|b| mk >> b & 1 == 1).collect()).collect();
    let res = result_from(f, indices, CMethod::Exhaustive);
    debug_assert_eq!(res.value, value);
    Ok(res)
}

/// Constraint search over hull-closed selections.
fn general_search(f: &Family, budget: CExactBudget) -> Result<CResult> {
    let m = f.len();
    let d = f.dim();
    let subs = combinations(m, d + 1);
    let tables: Vec<OrientationTable> =
        subs.iter().map(|s| OrientationTable::new(f, s)).collect::<Result<_>>()?;
    let simplices: Vec<SimplexMasks> = f.sets().iter().map(|s| SimplexMasks::new(s.points(), d)).collect();
    let mut member = vec![Vec::new(); m];
    for (t, s) in subs.iter().enumerate() {
        for (slot, &i) in s.iter().enumerate() {
            member[i].push((t, slot));
        }
    }
    let sizes: Vec<usize> = f.sets().iter().map(PointSet::len).collect();
    let full: Vec<u64> = sizes.iter().map(|&n| full_mask(n)).collect();

    let mut candidates: Vec<Scalar> = sizes
        .iter()
        .flat_map(|&n| (1..=n).map(move |k| Scalar::new(k.into(), n.into())))
        .collect();
    candidates.sort();
    candidates.dedup();
    let lower = sizes.iter().map(|&n| Scalar::new(1.into(), n.into())).min().expect("m > 0");
    candidates.retain(|v| *v >= lower);

    let mut search =
        Search { tables: &tables, simplices: &simplices, member, full: full.clone(), nodes: 0, max_nodes: budget.max_nodes };
    let targets = |v: &Scalar| sizes.iter().map(|&n| ceil_mul(v, n)).collect::<Vec<_>>();
    let over = |search: &Search, best: &Scalar| Error::BudgetExceeded { best_lower_bound: best.clone(), nodes: search.nodes };
    let plain = |target: Vec<usize>| Query { forced: vec![Vec::new(); m], count: full.clone(), target };

    // Ascend from the singleton bound: feasible queries are cheap, so the
    // only expensive proof is the infeasible one just above the optimum.
    let mut lo = 0;
    let mut best = match search.feasible(&plain(targets(&candidates[0]))) {
        Outcome::Found(s) => s,
        Outcome::Infeasible => {
            return Err(Error::AssertionFailed("singleton selection rejected under general position".into()))
        }
        Outcome::OutOfBudget => return Err(over(&search, &Scalar::zero())),
    };
    while lo + 1 < candidates.len() {
        // Skip values the current witness already reaches.
        let reached = best.iter().zip(&sizes).map(|(y, &n)| Scalar::new(y.len().into(), n.into())).min().expect("m > 0");
        while lo + 1 < candidates.len() && candidates[lo + 1] <= reached {
            lo += 1;
        }
        if lo + 1 == candidates.len() {
            break;
        }
        match search.feasible(&plain(targets(&candidates[lo + 1]))) {
            Outcome::Found(s) => {
                lo += 1;
                best = s;
            }
            Outcome::Infeasible => break,
            Outcome::OutOfBudget => return Err(over(&search, &candidates[lo])),
        }
    }
    let value = candidates[lo].clone();
    let target = targets(&value);

    // Lexicographic fixing. For set i with chosen prefix F, candidate x is
    // feasible iff some closed solution contains F + x and enough points
    // of F + [x, n) to complete Y_i; `best` is always such a witness.
    let mut fixed: Vec<Vec<usize>> = vec![Vec::new(); m];
    for i in 0..m {
        let mut prefix: Vec<usize> = Vec::new();
        while prefix.len() < target[i] {
            let start = prefix.last().map_or(0, |&l| l + 1);
            let prefix_mask = prefix.iter().fold(0u64, |a, &p| a | 1 << p);
            let witness_next = {
                let mut w: Vec<usize> = best[i].iter().copied().filter(|&p| p >= start).collect();
                w.sort_unstable();
                w[0]
            };
            let mut chosen = witness_next;
            for x in start..witness_next {
                let mut forced = fixed.clone();
                forced[i] = prefix.clone();
                forced[i].push(x);
                let mut count = full.clone();
                let mut tgt = target.clone();
                for (j, fj) in fixed.iter().enumerate().take(i) {
                    count[j] = fj.iter().fold(0u64, |a, &p| a | 1 << p);
                    tgt[j] = fj.len();
                }
                count[i] = prefix_mask | (full[i] & !full_mask(x));
                match search.feasible(&Query { forced, count, target: tgt }) {
                    Outcome::Found(s) => {
                        best = s;
                        chosen = x;
                        break;
                    }
                    Outcome::Infeasible => {}
                    Outcome::OutOfBudget => return Err(over(&search, &value)),
                }
            }
            prefix.push(chosen);
        }
        fixed[i] = prefix;
    }

    let res = result_from(f, fixed, CMethod::Exhaustive);
    debug_assert_eq!(res.value, value);
    Ok(res)
}

/// Lower bound on `c` from arrangements of canonical hyperplanes.
///
/// The pool is the first `hyperplane_budget` hyperplanes spanned by `d`
/// points of the union (lexicographic in union order). For every
/// arrangement of at most `m` pool hyperplanes, each set keeps its most
/// populated full-sign cell; the best same-type outcome is returned, and
/// singletons are the fallback.
pub fn c_cell_heuristic(f: &Family, hyperplane_budget: usize) -> Result<CResult> {
    f.ensure_verified()?;
    if f.sets().iter().any(PointSet::is_empty) {
        return Err(Error::InvalidInput("empty set in family".into()));
    }
    let m = f.len();
    let d = f.dim();
    let union: Vec<&Point> = f.union().into_iter().map(|(_, p)| p).collect();
    let mut pool: Vec<RawForm> = Vec::new();
    for_each_combination(union.len(), d, |c| {
        let rows: Vec<&IntVec> = c.iter().map(|&i| union[i].hom()).collect();
        if let Some(h) = RawForm::through(&rows) {
            pool.push(h);
        }
        pool.len() < hyperplane_budget
    });
    // Side of every point against every pool hyperplane.
    let sides: Vec<Vec<Vec<Sign>>> = f
        .sets()
        .iter()
        .map(|s| s.points().iter().map(|p| pool.iter().map(|h| h.side(p.hom())).collect()).collect())
        .collect();

    let mut best = result_from(f, vec![vec![0]; m], CMethod::CellHeuristic);
    for k in 1..=m.min(pool.len()) {
        for_each_combination(pool.len(), k, |arr| {
            let mut pick = Vec::with_capacity(m);
            for set_sides in &sides {
                let mut cells: BTreeMap<Vec<Sign>, Vec<usize>> = BTreeMap::new();
                for (p, sv) in set_sides.iter().enumerate() {
                    let key: Vec<Sign> = arr.iter().map(|&h| sv[h]).collect();
                    if key.iter().all(|&s| s != 0) {
                        cells.entry(key).or_default().push(p);
                    }
                }
                let Some(cell) = cells.into_values().max_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a))) else {
                    return true;
                };
                pick.push(cell);
            }
            let cand = result_from(f, pick, CMethod::CellHeuristic);
            if cand.value > best.value {
                if let Ok(fam) = Family::new(d, cand.optimal_subsets.clone()) {
                    if matches!(same_type_family(&fam), Ok(SameTypeVerdict { holds: true, .. })) {
                        best = cand;
                    }
                }
            }
            true
        });
    }
    Ok(best)
}
