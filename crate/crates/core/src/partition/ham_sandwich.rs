//! Polynomial bisection of several point sets at once.
//!
//! Points are lifted by the Veronese map and a hyperplane in the lifted space
//! is sought that bisects every lifted set. A bisecting hyperplane can always
//! be pushed until it contains `M` affinely independent lifted points, so
//! the search ranges over such `M`-tuples: a float local search proposes a
//! tuple, the hyperplane through it is rebuilt exactly, and the bisection is
//! verified by exact sign counts.

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng as _;

use super::poly::{monomials, veronese_lift, MultiPoly};
use crate::error::{Error, Result};
use crate::geometry::{binomial, Point, PointSet, Scalar};
use crate::rng::{self, Rng};

/// Restarts per degree before moving to the next degree.
const RESTARTS: usize = 40;
/// Moves per restart.
const STEPS: usize = 4000;

/// Whether `f` bisects `set`: each open side holds at most `|set| / 2`
/// points.
pub fn bisects(f: &MultiPoly, set: &PointSet) -> bool {
    let half = set.len() / 2;
    let (mut pos, mut neg) = (0, 0);
    for p in set.points() {
        match f.sign_at(p) {
            1 => pos += 1,
            -1 => neg += 1,
            _ => {}
        }
    }
    pos <= half && neg <= half
}

/// Lifted dimension `C(D + d, d) - 1`.
pub fn lifted_dim(d: usize, deg: u32) -> usize {
    (binomial(deg as u64 + d as u64, d as u64) - 1) as usize
}

/// A polynomial of degree at most `max_deg` bisecting every input set,
/// verified exactly. The lowest workable degree is used.
pub fn ham_sandwich_poly(sets: &[PointSet], max_deg: u32) -> Result<MultiPoly> {
    ham_sandwich_poly_seeded(sets, max_deg, 0)
}

pub fn ham_sandwich_poly_seeded(sets: &[PointSet], max_deg: u32, seed: u64) -> Result<MultiPoly> {
    let Some(d) = sets.iter().find_map(PointSet::dim) else {
        // Nothing to bisect.
        let dim = sets.first().and_then(PointSet::dim).unwrap_or(1);
        return Ok(MultiPoly::constant(dim, Scalar::one()));
    };
    if max_deg == 0 {
        return Err(Error::InvalidInput("degree budget must be at least 1".into()));
    }
    if sets.len() > lifted_dim(d, max_deg) {
        return Err(Error::InvalidInput(format!(
            "{} sets exceed the {} a degree-{max_deg} surface can bisect",
            sets.len(),
            lifted_dim(d, max_deg)
        )));
    }
    for s in sets {
        if let Some(sd) = s.dim() {
            if sd != d {
                return Err(Error::DimensionMismatch { expected: d, found: sd });
            }
        }
    }
    let mut rng = rng::seeded(seed);
    let mut deg = (1..=max_deg).find(|&k| lifted_dim(d, k) >= sets.len()).expect("checked above");
    loop {
        if let Some(f) = search_degree(sets, d, deg, &mut rng) {
            return Ok(f);
        }
        if deg == max_deg {
            return Err(Error::SearchExhausted(format!(
                "no bisecting surface of degree <= {max_deg} found for {} sets",
                sets.len()
            )));
        }
        deg += 1;
    }
}

struct Lifted {
    /// Exact lifted coordinates.
    exact: Vec<Point>,
    /// Float lift of affinely normalised coordinates.
    approx: Vec<Vec<f64>>,
    owner: Vec<usize>,
    half: Vec<usize>,
}

fn lift_all(sets: &[PointSet], d: usize, deg: u32) -> Lifted {
    let pts: Vec<(usize, &Point)> =
        sets.iter().enumerate().flat_map(|(i, s)| s.points().iter().map(move |p| (i, p))).collect();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for (_, p) in &pts {
        for (k, x) in p.to_f64().iter().enumerate() {
            lo[k] = lo[k].min(*x);
            hi[k] = hi[k].max(*x);
        }
    }
    let mons = monomials(d, deg);
    let approx = pts
        .iter()
        .map(|(_, p)| {
            let u: Vec<f64> = p
                .to_f64()
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    let half = (hi[k] - lo[k]) / 2.0;
                    if half > 0.0 {
                        (x - (hi[k] + lo[k]) / 2.0) / half
                    } else {
                        0.0
                    }
                })
                .collect();
            mons.iter().map(|e| e.iter().zip(&u).map(|(&k, x)| x.powi(k as i32)).product()).collect()
        })
        .collect();
    Lifted {
        exact: pts.iter().map(|(_, p)| veronese_lift(p, deg)).collect(),
        approx,
        owner: pts.iter().map(|(i, _)| *i).collect(),
        half: sets.iter().map(|s| s.len() / 2).collect(),
    }
}

/// Float affine form `c_0 + c . v` vanishing on the rows, if they span a
/// hyperplane.
fn float_form(rows: &[&[f64]]) -> Option<Vec<f64>> {
    let m = rows.len();
    let cols = m + 1;
    let mut a: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut row = Vec::with_capacity(cols);
            row.push(1.0);
            row.extend_from_slice(r);
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(m);
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let (best, val) = (r..m).map(|i| (i, a[i][c].abs())).fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val < 1e-10 {
            continue;
        }
        a.swap(r, best);
        let p = a[r][c];
        for x in a[r].iter_mut() {
            *x /= p;
        }
        for i in 0..m {
            if i != r {
                let f = a[i][c];
                if f != 0.0 {
                    for k in 0..cols {
                        a[i][k] -= f * a[r][k];
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r < m {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![0.0; cols];
    x[free] = 1.0;
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = -a[i][free];
    }
    Some(x)
}

/// Exact affine form through the lifted rows, when its kernel is a line.
fn exact_form(rows: &[&Point]) -> Option<Vec<Scalar>> {
    let m = rows.len();
    let cols = m + 1;
    let mut a: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|p| std::iter::once(Scalar::one()).chain(p.coords().iter().cloned()).collect())
        .collect();
    let mut pivots = Vec::with_capacity(m);
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(i) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, i);
        let p = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x /= &p;
        }
        for i in 0..m {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..cols {
                    let t = &f * &a[r][k];
                    a[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if r < m {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![Scalar::zero(); cols];
    x[free] = Scalar::one();
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = -a[i][free].clone();
    }
    Some(x)
}

fn excess(l: &Lifted, form: &[f64], on: &[bool]) -> usize {
    let k = l.half.len();
    let mut pos = vec![0usize; k];
    let mut neg = vec![0usize; k];
    for (j, v) in l.approx.iter().enumerate() {
        if on[j] {
            continue;
        }
        let s = form[0] + form[1..].iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        if s > 0.0 {
            pos[l.owner[j]] += 1;
        } else {
            neg[l.owner[j]] += 1;
        }
    }
    (0..k).map(|i| pos[i].saturating_sub(l.half[i]) + neg[i].saturating_sub(l.half[i])).sum()
}

fn score(l: &Lifted, tuple: &[usize], on: &mut [bool]) -> Option<usize> {
    let rows: Vec<&[f64]> = tuple.iter().map(|&j| l.approx[j].as_slice()).collect();
    let form = float_form(&rows)?;
    for &j in tuple {
        on[j] = true;
    }
    let e = excess(l, &form, on);
    for &j in tuple {
        on[j] = false;
    }
    Some(e)
}

fn to_poly(d: usize, deg: u32, form: &[Scalar]) -> MultiPoly {
    let mons = monomials(d, deg);
    let mut terms = vec![(vec![0; d], form[0].clone())];
    terms.extend(mons.into_iter().zip(form[1..].iter().cloned()));
    MultiPoly::from_terms(d, terms).monic()
}

fn verify(sets: &[PointSet], f: &MultiPoly) -> bool {
    !f.is_zero() && sets.iter().all(|s| bisects(f, s))
}

fn search_degree(sets: &[PointSet], d: usize, deg: u32, rng: &mut Rng) -> Option<MultiPoly> {
    let l = lift_all(sets, d, deg);
    let n = l.exact.len();
    let m = lifted_dim(d, deg);
    if n <= m {
        // A surface through every point bisects trivially.
        let mut rows: Vec<&Point> = l.exact.iter().collect();
        let f = complete_and_solve(&mut rows, d, deg, m, rng)?;
        return verify(sets, &f).then_some(f);
    }
    let mut on = vec![false; n];
    let by_set: Vec<Vec<usize>> = (0..sets.len()).map(|i| (0..n).filter(|&j| l.owner[j] == i).collect()).collect();
    for restart in 0..RESTARTS {
        let mut tuple = initial_tuple(&by_set, m, n, restart, rng);
        let Some(mut cur) = score(&l, &tuple, &mut on) else { continue };
        let mut temp = 1.0f64;
        for _ in 0..STEPS {
            if cur == 0 {
                break;
            }
            let slot = rng.gen_range(0..m);
            let cand = rng.gen_range(0..n);
            if tuple.contains(&cand) {
                continue;
            }
            let old = tuple[slot];
            tuple[slot] = cand;
            match score(&l, &tuple, &mut on) {
                Some(s) if s <= cur || rng.gen::<f64>() < (-((s - cur) as f64) / temp).exp() => cur = s,
                _ => tuple[slot] = old,
            }
            temp = (temp * 0.999).max(0.05);
        }
        if cur == 0 {
            let rows: Vec<&Point> = tuple.iter().map(|&j| &l.exact[j]).collect();
            if let Some(form) = exact_form(&rows) {
                let f = to_poly(d, deg, &form);
                if verify(sets, &f) {
                    return Some(f);
                }
            }
        }
    }
    None
}

/// Start with one point per set near its float centroid, then fill the
/// remaining slots round-robin; later restarts are random.
fn initial_tuple(by_set: &[Vec<usize>], m: usize, n: usize, restart: usize, rng: &mut Rng) -> Vec<usize> {
    let mut tuple = Vec::with_capacity(m);
    if restart == 0 {
        let mut queues: Vec<Vec<usize>> = by_set.to_vec();
        let mut k = 0;
        while tuple.len() < m && queues.iter().any(|q| !q.is_empty()) {
            let q = &mut queues[k % by_set.len()];
            if let Some(j) = q.pop() {
                tuple.push(j);
            }
            k += 1;
        }
    }
    let mut rest: Vec<usize> = (0..n).filter(|j| !tuple.contains(j)).collect();
    rest.shuffle(rng);
    tuple.extend(rest.into_iter().take(m - tuple.len()));
    tuple
}

/// With at most `m` points, pad the rows with random lattice points of the
/// lifted space until the kernel is a line.
fn complete_and_solve(rows: &mut Vec<&Point>, d: usize, deg: u32, m: usize, rng: &mut Rng) -> Option<MultiPoly> {
    let mut extra: Vec<Point> = Vec::new();
    for _ in 0..50 {
        extra.clear();
        while rows.len() + extra.len() < m {
            let p = Point::from_ints(&(0..d).map(|_| rng.gen_range(-1000..=1000)).collect::<Vec<_>>());
            extra.push(veronese_lift(&p, deg));
        }
        let all: Vec<&Point> = rows.iter().copied().chain(extra.iter()).collect();
        if let Some(form) = exact_form(&all) {
            return Some(to_poly(d, deg, &form));
        }
    }
    None
}
