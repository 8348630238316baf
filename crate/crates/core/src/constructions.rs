//! Generators and audits: grid sets, perturbed copies, blow-ups, boundary
//! counts and the upper-bound chain on perturbed grids.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use rand::Rng as _;

use crate::combinatorics::for_each_combination;
use crate::error::{Error, Result};
use crate::geometry::hull::{invert, ConvexHull, Location};
use crate::geometry::{
    binomial, hull_meets_hyperplane, int, orient_rows, ratio, side, span_hyperplane, Family, Hyperplane, IntVec,
    Point, PointSet, Scalar,
};
use crate::rng::{self, Rng};
use crate::sametype::same_type_family;

const MAX_RETRIES: u32 = 100;

/// The `C(n, d)` pairwise `d`-wise intersection points of `n` hyperplanes in
/// general position.
#[derive(Clone, Debug)]
pub struct GridSet {
    pub hyperplanes: Vec<Hyperplane>,
    pub points: PointSet,
    /// Sorted `d`-subset of hyperplane indices to point index.
    pub index: BTreeMap<Vec<usize>, usize>,
}

impl GridSet {
    pub fn dim(&self) -> usize {
        self.hyperplanes.first().map_or(0, Hyperplane::dim)
    }

    pub fn n(&self) -> usize {
        self.hyperplanes.len()
    }

    /// Generating hyperplanes of point `p`, sorted.
    pub fn generators(&self, p: usize) -> &[usize] {
        self.index.iter().find(|(_, &v)| v == p).map(|(k, _)| k.as_slice()).expect("index covers every point")
    }
}

fn solve(rows: &[&Hyperplane]) -> Option<Point> {
    let a: Vec<Vec<Scalar>> = rows.iter().map(|h| h.normal().to_vec()).collect();
    let inv = invert(&a)?;
    let x = inv.iter().map(|r| r.iter().zip(rows).map(|(c, h)| c * h.offset()).sum()).collect();
    Some(Point::new(x).expect("d >= 1"))
}

fn random_hyperplane(rng: &mut Rng, d: usize) -> Hyperplane {
    loop {
        let normal: Vec<Scalar> = (0..d).map(|_| int(rng.gen_range(-9..=9))).collect();
        if normal.iter().all(Zero::is_zero) {
            continue;
        }
        return Hyperplane::new(normal, int(rng.gen_range(-40..=40))).expect("nonzero normal");
    }
}

fn try_grid(rng: &mut Rng, n: usize, d: usize) -> Option<GridSet> {
    let hyperplanes: Vec<Hyperplane> = (0..n).map(|_| random_hyperplane(rng, d)).collect();
    let mut pts = Vec::new();
    let mut index = BTreeMap::new();
    let mut ok = true;
    for_each_combination(n, d, |c| {
        let rows: Vec<&Hyperplane> = c.iter().map(|&i| &hyperplanes[i]).collect();
        let Some(p) = solve(&rows) else {
            ok = false;
            return false;
        };
        // On exactly its generators.
        if (0..n).any(|j| !c.contains(&j) && hyperplanes[j].eval(&p).is_zero()) {
            ok = false;
            return false;
        }
        index.insert(c.to_vec(), pts.len());
        pts.push(p);
        true
    });
    if !ok {
        return None;
    }
    let points = PointSet::new("X", pts).ok()?;
    Some(GridSet { hyperplanes, points, index })
}

/// `n` random integer hyperplanes in general position and their `C(n, d)`
/// intersection points.
pub fn grid_set(n: usize, d: usize, seed: u64) -> Result<GridSet> {
    if d == 0 || n < d {
        return Err(Error::InvalidInput(format!("grid needs n >= d >= 1, got n={n}, d={d}")));
    }
    let mut rng = rng::seeded(seed);
    for _ in 0..MAX_RETRIES {
        if let Some(g) = try_grid(&mut rng, n, d) {
            return Ok(g);
        }
    }
    Err(Error::RetryExhausted(format!("no grid of {n} hyperplanes in general position")))
}

/// Grid points on the boundary of `conv(body)`.
pub fn boundary_count(g: &GridSet, body: &PointSet) -> Result<usize> {
    if body.is_empty() {
        return Err(Error::InvalidInput("empty body".into()));
    }
    let hull = ConvexHull::new(body.points())?;
    if hull.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: hull.dim() });
    }
    if !hull.is_full_dimensional() {
        return Err(Error::DegenerateBody { dim: hull.affine_dim() });
    }
    let mut count = 0;
    for p in g.points.points() {
        if hull.locate(p)? == Location::Boundary {
            count += 1;
        }
    }
    Ok(count)
}

/// Largest sup-norm displacement of points of set `i` that preserves every
/// orientation with `d` points of the other sets: the minimum clearance from
/// a point of `X_i` to a hyperplane spanned by `d` points outside `X_i`.
/// `None` when fewer than `d` such points exist.
pub fn safe_radius(f: &Family, i: usize) -> Option<Scalar> {
    let d = f.dim();
    let others: Vec<&Point> = f.union().into_iter().filter(|(s, _)| *s != i).map(|(_, p)| p).collect();
    let mut best: Option<Scalar> = None;
    for_each_combination(others.len(), d, |c| {
        let pts: Vec<&Point> = c.iter().map(|&k| others[k]).collect();
        if let Ok(h) = span_hyperplane(&pts) {
            for x in f.set(i).points() {
                let cl = h.sup_norm_clearance(x);
                if best.as_ref().is_none_or(|b| cl < *b) {
                    best = Some(cl);
                }
            }
        }
        true
    });
    best
}

fn min_pairwise_distance(f: &Family) -> Option<Scalar> {
    let all: Vec<&Point> = f.union().into_iter().map(|(_, p)| p).collect();
    let mut best: Option<Scalar> = None;
    for a in 0..all.len() {
        for b in a + 1..all.len() {
            let dist = all[a].sup_distance(all[b]);
            if best.as_ref().is_none_or(|x| dist < *x) {
                best = Some(dist);
            }
        }
    }
    best
}

/// Uniform point of the rational grid `center + radius * {-K..K}/K` (sup norm
/// at most `radius`).
fn jitter(rng: &mut Rng, center: &Point, radius: &Scalar) -> Point {
    const K: i64 = 1000;
    let coords = center.coords().iter().map(|c| c + radius * ratio(rng.gen_range(-K..=K), K)).collect();
    Point::new(coords).expect("d >= 1")
}

/// Largest radius [`blow_up`] accepts for set `i` (exclusive).
pub fn blow_up_limit(f: &Family, i: usize) -> Option<Scalar> {
    let half = min_pairwise_distance(f).map(|x| x / int(2));
    match (half, safe_radius(f, i)) {
        (Some(a), Some(b)) => Some(if a < b { a } else { b }),
        (a, b) => a.or(b),
    }
}

/// Replaces each point of `X_i` by `n_cloud` points within sup distance
/// `radius`. Every orientation the clouds take part in matches that of their
/// centres, so `c` is unchanged.
pub fn blow_up(f: &Family, i: usize, n_cloud: usize, radius: &Scalar, seed: u64) -> Result<Family> {
    if i >= f.len() {
        return Err(Error::InvalidInput(format!("set index {i} out of range")));
    }
    if n_cloud == 0 || !radius.is_positive() {
        return Err(Error::InvalidInput("n_cloud and radius must be positive".into()));
    }
    if let Some(max) = blow_up_limit(f, i) {
        if *radius >= max {
            return Err(Error::RadiusTooLarge { radius: radius.clone(), max });
        }
    }
    let mut rng = rng::seeded(seed);
    for _ in 0..MAX_RETRIES {
        let cloud: Vec<Point> =
            f.set(i).points().iter().flat_map(|c| (0..n_cloud).map(|_| jitter(&mut rng, c, radius)).collect::<Vec<_>>()).collect();
        let Ok(set) = PointSet::new(f.set(i).label.clone(), cloud) else { continue };
        let mut out = f.with_set(i, set)?;
        if out.verify().is_ok() {
            return Ok(out);
        }
    }
    Err(Error::RetryExhausted("blow-up never reached general position".into()))
}

/// `m` perturbed copies of one grid set.
#[derive(Clone, Debug)]
pub struct PerturbedFamily {
    pub family: Family,
    pub grid: GridSet,
    /// `predecessor[i][j]`: grid index of point `j` of set `i`.
    pub predecessor: Vec<Vec<usize>>,
    /// Effective sup-norm bound on every displacement.
    pub magnitude: Scalar,
}

/// Least clearance between a grid point and a hyperplane spanned by `d` grid
/// points not containing it. Displacements below it keep every grid point
/// inside `conv` of any perturbed subset whose unperturbed hull has it in
/// the interior.
pub fn grid_clearance(g: &GridSet) -> Option<Scalar> {
    let d = g.dim();
    let pts = g.points.points();
    let mut best: Option<Scalar> = None;
    for_each_combination(pts.len(), d, |c| {
        let span: Vec<&Point> = c.iter().map(|&k| &pts[k]).collect();
        if let Ok(h) = span_hyperplane(&span) {
            for x in pts {
                let v = h.eval(x);
                if !v.is_zero() {
                    let cl = h.sup_norm_clearance(x);
                    if best.as_ref().is_none_or(|b| cl < *b) {
                        best = Some(cl);
                    }
                }
            }
        }
        true
    });
    best
}

/// Largest `2^-k` not exceeding `x`.
fn power_of_two_below(x: &Scalar) -> Scalar {
    let mut p = Scalar::one();
    while p > *x {
        p /= int(2);
    }
    p
}

pub fn perturbed_grid_family(n: usize, d: usize, m: usize, magnitude: &Scalar, seed: u64) -> Result<PerturbedFamily> {
    if !magnitude.is_positive() {
        return Err(Error::InvalidInput("magnitude must be positive".into()));
    }
    if m == 0 {
        return Err(Error::InvalidInput("need at least one copy".into()));
    }
    let grid = grid_set(n, d, rng::derive(seed, 0))?;
    let eff = match grid_clearance(&grid) {
        Some(c) if *magnitude >= &c / int(2) => power_of_two_below(&(c / int(4))),
        _ => magnitude.clone(),
    };
    let size = grid.points.len();
    let mut rng = rng::seeded(rng::derive(seed, 1));
    for _ in 0..MAX_RETRIES {
        let sets: Result<Vec<PointSet>> = (0..m)
            .map(|i| {
                let pts = grid.points.points().iter().map(|p| jitter(&mut rng, p, &eff)).collect();
                PointSet::new(format!("X{}", i + 1), pts)
            })
            .collect();
        let Ok(sets) = sets else { continue };
        let Ok(mut family) = Family::new(d, sets) else { continue };
        if family.verify().is_ok() {
            let predecessor = vec![(0..size).collect(); m];
            return Ok(PerturbedFamily { family, grid, predecessor, magnitude: eff });
        }
    }
    Err(Error::RetryExhausted("perturbed copies never reached general position".into()))
}

/// One checked inequality `lhs <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub name: String,
    pub lhs: u128,
    pub rhs: u128,
    pub ok: bool,
}

impl Inequality {
    fn new(name: impl Into<String>, lhs: u128, rhs: u128) -> Self {
        Inequality { name: name.into(), lhs, rhs, ok: lhs <= rhs }
    }
}

#[derive(Clone, Debug)]
pub struct UpperBoundReport {
    /// `|Z_i|`: grid points strictly inside `conv Y_i`.
    pub z_sizes: Vec<usize>,
    /// Per grid hyperplane, how many `conv Z_i` it meets.
    pub hyperplane_hits: Vec<usize>,
    /// Per set, how many grid hyperplanes contain a point of `Z_i`.
    pub incident: Vec<usize>,
    /// The set picked by the pigeonhole step.
    pub pigeon: usize,
    pub inequalities: Vec<Inequality>,
    /// `C(floor(dn/m), d) / C(n, d)`.
    pub ratio_bound: Scalar,
}

/// `C(floor(dn/m), d) / C(n, d)`.
pub fn ratio_bound(n: usize, d: usize, m: usize) -> Scalar {
    let k = (d * n / m) as u64;
    Scalar::new(binomial(k, d as u64).into(), binomial(n as u64, d as u64).into())
}

/// Checks the grid upper-bound chain for same-type subsets `y[i]` (indices
/// into set `i`).
pub fn upper_bound_audit(pf: &PerturbedFamily, y: &[Vec<usize>]) -> Result<UpperBoundReport> {
    let f = &pf.family;
    let (m, d, n) = (f.len(), f.dim(), pf.grid.n());
    if y.len() != m || y.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInput("need one nonempty subset per set".into()));
    }
    let subsets: Vec<PointSet> = y.iter().zip(f.sets()).map(|(idx, s)| s.subset(idx)).collect();
    if !same_type_family(&Family::new(d, subsets.clone())?)?.holds {
        return Err(Error::InvalidInput("subsets are not of the same type".into()));
    }
    let grid = pf.grid.points.points();
    let mut z: Vec<Vec<usize>> = Vec::with_capacity(m);
    for s in &subsets {
        let hull = ConvexHull::new(s.points())?;
        let mut zi = Vec::new();
        for (k, p) in grid.iter().enumerate() {
            if hull.interior_contains(p)? {
                zi.push(k);
            }
        }
        z.push(zi);
    }
    let mut ineq = Vec::new();

    let mut hits = Vec::with_capacity(n);
    for (h_idx, h) in pf.grid.hyperplanes.iter().enumerate() {
        let mut c = 0;
        for zi in z.iter().filter(|zi| !zi.is_empty()) {
            if hull_meets_hyperplane(&pf.grid.points.subset(zi), h)? {
                c += 1;
            }
        }
        hits.push(c);
        ineq.push(Inequality::new(format!("hyperplane {h_idx} meets at most d of the Z_i"), c as u128, d as u128));
    }

    let incident: Vec<usize> = z
        .iter()
        .map(|zi| {
            let mut hs: Vec<usize> = zi.iter().flat_map(|&p| pf.grid.generators(p).to_vec()).collect();
            hs.sort_unstable();
            hs.dedup();
            hs.len()
        })
        .collect();
    let pigeon = (0..m).min_by_key(|&i| (incident[i], i)).expect("m >= 1");
    let cap = d * n / m;
    ineq.push(Inequality::new("pigeonhole: incident hyperplanes <= floor(dn/m)", incident[pigeon] as u128, cap as u128));
    ineq.push(Inequality::new(
        "|Z_i| <= C(floor(dn/m), d)",
        z[pigeon].len() as u128,
        binomial(cap as u64, d as u64),
    ));

    for i in 0..m {
        let pred: Vec<Point> = y[i].iter().map(|&j| grid[pf.predecessor[i][j]].clone()).collect();
        let hull = ConvexHull::new(&pred)?;
        let mut boundary = 0u128;
        for p in grid {
            let loc = hull.locate(p)?;
            let on_boundary =
                if hull.is_full_dimensional() { loc == Location::Boundary } else { loc != Location::Outside };
            if on_boundary {
                boundary += 1;
            }
        }
        ineq.push(Inequality::new(
            format!("|Y_{i}| <= |Z_{i}| + |X on boundary of conv P(Y_{i})|"),
            y[i].len() as u128,
            z[i].len() as u128 + boundary,
        ));
    }

    if let Some(bad) = ineq.iter().find(|q| !q.ok) {
        return Err(Error::AssertionFailed(format!("{}: {} > {}", bad.name, bad.lhs, bad.rhs)));
    }
    Ok(UpperBoundReport {
        z_sizes: z.iter().map(Vec::len).collect(),
        hyperplane_hits: hits,
        incident,
        pigeon,
        inequalities: ineq,
        ratio_bound: ratio_bound(n, d, m),
    })
}

/// Integer cluster centres in convex position: a regular `m`-gon of radius
/// 1000 for `d = 2`, points `(t, t^2, ..., t^d)` of the moment curve
/// otherwise.
pub fn cluster_centers(m: usize, d: usize) -> Vec<Vec<Scalar>> {
    (0..m)
        .map(|k| {
            if d == 2 {
                let a = std::f64::consts::TAU * k as f64 / m as f64;
                vec![int((1000.0 * a.cos()).round() as i64), int((1000.0 * a.sin()).round() as i64)]
            } else {
                let t = 10 * (k as i64 + 1);
                (1..=d as u32).map(|e| int(t.pow(e))).collect()
            }
        })
        .collect()
}

/// Point layouts for extraction experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Every set is a tight cluster around its own centre.
    Clustered,
    /// Cluster spreads grow with the set index, so later sets overlap.
    Mixed,
}

/// `m` sets of `n` random points around [`cluster_centers`], verified in
/// general position.
pub fn clustered_family(m: usize, d: usize, n: usize, layout: Layout, seed: u64) -> Result<Family> {
    let centers = cluster_centers(m, d);
    let scale = if d == 2 { 1000 } else { 10 * m as i64 };
    let mut rng = rng::seeded(seed);
    for _ in 0..MAX_RETRIES {
        let sets: Result<Vec<PointSet>> = centers
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let spread = match layout {
                    Layout::Clustered => scale / 5,
                    Layout::Mixed => scale / 5 + (scale * i as i64) / (2 * m as i64),
                };
                let pts = (0..n).map(|_| rng::point_near(&mut rng, c, spread * 97, 97)).collect();
                PointSet::new(format!("X{}", i + 1), pts)
            })
            .collect();
        let Ok(sets) = sets else { continue };
        let mut f = Family::new(d, sets)?;
        if f.verify().is_ok() {
            return Ok(f);
        }
    }
    Err(Error::RetryExhausted("no clustered family in general position".into()))
}

/// Sign of `orient(P^{-1}(S), x)` against `orient(S, x)` for every `d`-subset
/// `S` of grid points and grid point `x` off its span: `true` when a copy
/// keeps all of them.
pub fn preserves_grid_orientations(pf: &PerturbedFamily, i: usize) -> bool {
    let d = pf.family.dim();
    let grid = pf.grid.points.points();
    let copy = pf.family.set(i).points();
    let mut ok = true;
    for_each_combination(grid.len(), d, |c| {
        for x in grid {
            let mut rows: Vec<&IntVec> = c.iter().map(|&k| grid[k].hom()).collect();
            rows.push(x.hom());
            let before = orient_rows(&rows);
            if before == 0 {
                continue;
            }
            let mut moved: Vec<&IntVec> = c.iter().map(|&k| copy[k].hom()).collect();
            moved.push(x.hom());
            if orient_rows(&moved) != before {
                ok = false;
                return false;
            }
        }
        true
    });
    ok
}

/// `side` of every grid point against every generating hyperplane, as the
/// grid's incidence matrix (`0` exactly on generators).
pub fn incidence_signs(g: &GridSet) -> Result<Vec<Vec<i8>>> {
    g.points.points().iter().map(|p| g.hyperplanes.iter().map(|h| side(h, p)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sametype::c_exact;

    #[test]
    fn grid_counts() {
        assert_eq!(grid_set(3, 2, 1).unwrap().points.len(), 3);
        assert_eq!(grid_set(5, 2, 1).unwrap().points.len(), 10);
        assert_eq!(grid_set(4, 3, 1).unwrap().points.len(), 4);
        assert!(grid_set(1, 2, 1).is_err());
    }

    #[test]
    fn grid_index_is_exact_incidence() {
        let g = grid_set(6, 2, 9).unwrap();
        let signs = incidence_signs(&g).unwrap();
        for (gen, &p) in &g.index {
            let zeros: Vec<usize> = (0..g.n()).filter(|&h| signs[p][h] == 0).collect();
            assert_eq!(&zeros, gen);
        }
    }

    #[test]
    fn huge_triangle_has_no_grid_boundary_points() {
        let g = grid_set(6, 2, 3).unwrap();
        let body = PointSet::from_ints("C", &[&[-100_000, -100_000], &[100_000, -100_000], &[0, 100_000]]).unwrap();
        assert_eq!(boundary_count(&g, &body).unwrap(), 0);
        let hull = ConvexHull::new(body.points()).unwrap();
        let inside = g.points.points().iter().filter(|p| hull.interior_contains(p).unwrap()).count();
        assert_eq!(inside, 15);
    }

    #[test]
    fn segment_has_two_boundary_points_in_one_dimension() {
        let g = grid_set(7, 1, 4).unwrap();
        let mut xs = g.points.points().to_vec();
        xs.sort();
        let body = PointSet::new("C", vec![xs[1].clone(), xs[5].clone()]).unwrap();
        assert_eq!(boundary_count(&g, &body).unwrap(), 2);
    }

    #[test]
    fn degenerate_body_is_refused() {
        let g = grid_set(5, 2, 3).unwrap();
        let body = PointSet::from_ints("C", &[&[0, 0], &[1, 1], &[2, 2]]).unwrap();
        assert!(matches!(boundary_count(&g, &body), Err(Error::DegenerateBody { dim: 1 })));
    }

    #[test]
    fn perturbed_grid_is_close_and_generic() {
        let pf = perturbed_grid_family(5, 2, 3, &ratio(1, 1000), 11).unwrap();
        assert_eq!(pf.family.total_points(), 30);
        assert_eq!(pf.family.general_position(), crate::GeneralPosition::Verified);
        for (i, s) in pf.family.sets().iter().enumerate() {
            for (j, p) in s.points().iter().enumerate() {
                assert!(p.sup_distance(&pf.grid.points.points()[pf.predecessor[i][j]]) <= pf.magnitude);
            }
            assert!(preserves_grid_orientations(&pf, i));
        }
    }

    #[test]
    fn blow_up_counts_and_preserves_c() {
        let f = Family::verified(
            2,
            vec![
                PointSet::from_ints("a", &[&[0, 0], &[31, 7]]).unwrap(),
                PointSet::from_ints("b", &[&[100, 3], &[90, 40]]).unwrap(),
                PointSet::from_ints("c", &[&[11, 95], &[60, 50]]).unwrap(),
            ],
        )
        .unwrap();
        let max = blow_up_limit(&f, 0).unwrap();
        let g = blow_up(&f, 0, 2, &(&max / int(2)), 5).unwrap();
        assert_eq!(g.set(0).len(), 4);
        assert_eq!(c_exact(&f).unwrap().value, c_exact(&g).unwrap().value);
        assert!(matches!(blow_up(&f, 0, 2, &max, 5), Err(Error::RadiusTooLarge { .. })));
    }

    #[test]
    fn singleton_audit_is_trivial() {
        let pf = perturbed_grid_family(5, 2, 3, &ratio(1, 1000), 2).unwrap();
        let r = upper_bound_audit(&pf, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(r.z_sizes, vec![0, 0, 0]);
        assert!(r.inequalities.iter().all(|q| q.ok));
    }

    #[test]
    fn ratio_bound_values() {
        assert_eq!(ratio_bound(6, 2, 3), Scalar::new(6.into(), 15.into()));
        assert_eq!(ratio_bound(9, 2, 3), Scalar::new(15.into(), 36.into()));
    }
}
