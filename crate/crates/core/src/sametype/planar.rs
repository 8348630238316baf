//! Same-type constant of three planar sets via separating lines.
//!
//! Three planar sets in general position are of the same type exactly when
//! each is strictly separated from the union of the other two by a line: a
//! point of `conv(Y_i) ∩ conv(Y_j ∪ Y_k)` lies on a segment from `conv(Y_j)`
//! to `conv(Y_k)`, whose line then meets all three hulls, and conversely the
//! middle one of three points a transversal line picks on the hulls lies in
//! the hull of the other two sets. A separating line can be translated and
//! rotated until it passes through two points of the union without changing
//! the separation (the two touched points stay on their sides), so
//! every same-type selection is contained in
//!
//! `Y_i = X_i ∩ S_i`, `S_i = H_i ∩ ¬H_j ∩ ¬H_k`
//!
//! for three such oriented lines `H_0, H_1, H_2`, and every such triple is
//! same-type. Each candidate line contributes one mask per set (its own side
//! for `X_i`, the far side for the other two); a selection is the bitwise
//! intersection of one candidate per set.

use std::collections::HashSet;

use crate::combinatorics::for_each_combination;
use crate::geometry::{Family, IntVec, RawForm};

pub(super) type Masks = [u64; 3];

pub(super) struct Planar {
    sizes: [usize; 3],
    /// Undominated candidate masks for the separator of each set, ordered by
    /// decreasing `min_i |mask_i| / |X_i|`.
    lines: [Vec<Masks>; 3],
    pub(super) nodes: u64,
    max_nodes: u64,
}

/// `a / b` compared as a fraction.
#[derive(Clone, Copy, Debug)]
pub(super) struct Frac(pub(super) usize, pub(super) usize);

impl PartialEq for Frac {
    fn eq(&self, o: &Self) -> bool {
        self.0 * o.1 == o.0 * self.1
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Frac {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.0 * o.1).cmp(&(o.0 * self.1))
    }
}

pub(super) struct OutOfBudget;

impl Planar {
    pub(super) fn new(f: &Family, max_nodes: u64) -> Self {
        let sizes = [f.set(0).len(), f.set(1).len(), f.set(2).len()];
        let union: Vec<(usize, usize, &IntVec)> = (0..3)
            .flat_map(|i| f.set(i).points().iter().enumerate().map(move |(k, p)| (i, k, p.hom())))
            .collect();
        let mut seen: [HashSet<Masks>; 3] = Default::default();
        for_each_combination(union.len(), 2, |c| {
            let (a, b) = (union[c[0]], union[c[1]]);
            let Some(form) = RawForm::through(&[a.2, b.2]) else { return true };
            let mut pos = [0u64; 3];
            let mut neg = [0u64; 3];
            let mut on = [0u64; 3];
            for &(i, k, p) in &union {
                match form.side(p) {
                    1 => pos[i] |= 1 << k,
                    -1 => neg[i] |= 1 << k,
                    _ => on[i] |= 1 << k,
                }
            }
            for (own, far) in [(pos, neg), (neg, pos)] {
                for i in 0..3 {
                    let mut m = far;
                    m[i] = own[i];
                    for j in 0..3 {
                        m[j] |= on[j];
                    }
                    seen[i].insert(m);
                }
            }
            true
        });
        let lines = seen.map(|s| undominated(s.into_iter().collect(), &sizes));
        Planar { sizes, lines, nodes: 0, max_nodes }
    }

    pub(super) fn value(&self, m: &Masks) -> Frac {
        (0..3).map(|i| Frac(m[i].count_ones() as usize, self.sizes[i])).min().expect("three sets")
    }

    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }

    /// A selection of maximum value, at least `floor`.
    pub(super) fn best(&mut self, floor: Frac) -> Result<Option<Masks>, OutOfBudget> {
        let mut best = floor;
        let mut arg = None;
        let lines = std::mem::take(&mut self.lines);
        let r = (|| {
            for a in &lines[0] {
                if self.value(a) < best || (arg.is_some() && self.value(a) == best) {
                    break;
                }
                for b in &lines[1] {
                    if self.value(b) < best || (arg.is_some() && self.value(b) == best) {
                        break;
                    }
                    self.tick()?;
                    let ab = [a[0] & b[0], a[1] & b[1], a[2] & b[2]];
                    let vab = self.value(&ab);
                    if vab < best || (arg.is_some() && vab == best) {
                        continue;
                    }
                    for c in &lines[2] {
                        if self.value(c) < best || (arg.is_some() && self.value(c) == best) {
                            break;
                        }
                        let abc = [ab[0] & c[0], ab[1] & c[1], ab[2] & c[2]];
                        let v = self.value(&abc);
                        if v > best || (arg.is_none() && v == best) {
                            best = v;
                            arg = Some(abc);
                        }
                    }
                }
            }
            Ok(())
        })();
        self.lines = lines;
        r.map(|()| arg)
    }

    /// Calls `visit` on every maximal selection with `|Y_i| >= target[i]`
    /// and `Y_i ⊇ forced[i]`.
    pub(super) fn for_each(
        &mut self,
        target: &[usize; 3],
        forced: &Masks,
        mut visit: impl FnMut(&Masks),
    ) -> Result<(), OutOfBudget> {
        let ok = |m: &Masks| (0..3).all(|i| m[i] & forced[i] == forced[i] && m[i].count_ones() as usize >= target[i]);
        let lines: Vec<Vec<Masks>> = self.lines.iter().map(|l| l.iter().copied().filter(ok).collect()).collect();
        for a in &lines[0] {
            for b in &lines[1] {
                self.tick()?;
                let ab = [a[0] & b[0], a[1] & b[1], a[2] & b[2]];
                if !ok(&ab) {
                    continue;
                }
                for c in &lines[2] {
                    let abc = [ab[0] & c[0], ab[1] & c[1], ab[2] & c[2]];
                    if ok(&abc) {
                        visit(&abc);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Drops masks contained componentwise in another; sorts the rest by
/// decreasing value.
fn undominated(mut v: Vec<Masks>, sizes: &[usize; 3]) -> Vec<Masks> {
    v.sort_by_key(|m| std::cmp::Reverse(m.iter().map(|x| x.count_ones()).sum::<u32>()));
    let mut kept: Vec<Masks> = Vec::new();
    for m in v {
        let covered = kept.iter().any(|k| (0..3).all(|i| m[i] & !k[i] == 0));
        if !covered {
            kept.push(m);
        }
    }
    let val = |m: &Masks| (0..3).map(|i| Frac(m[i].count_ones() as usize, sizes[i])).min().expect("three sets");
    kept.sort_by(|a, b| val(b).cmp(&val(a)));
    kept
}

/// The `t` smallest indices of `mask`.
pub(super) fn first_bits(mask: u64, t: usize) -> u64 {
    let mut out = 0;
    let mut m = mask;
    for _ in 0..t {
        let low = m & m.wrapping_neg();
        out |= low;
        m &= m - 1;
    }
    out
}

/// Lexicographic order of equal-size index sets as sorted lists.
pub(super) fn lex_less(a: u64, b: u64) -> bool {
    let diff = a ^ b;
    diff != 0 && a & diff & diff.wrapping_neg() != 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_helpers() {
        assert_eq!(first_bits(0b1011_0110, 3), 0b0001_0110);
        assert!(lex_less(0b0011, 0b0101));
        assert!(!lex_less(0b0101, 0b0011));
        assert!(!lex_less(0b11, 0b11));
        assert!(Frac(1, 3) < Frac(2, 5));
        assert_eq!(Frac(2, 4), Frac(1, 2));
    }
}
