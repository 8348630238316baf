//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::OnceLock;
use std::time::Instant;

use num::{BigInt, One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;

use sametype::approx::{compare_c, eps_approximant, ApproxConfig};
use sametype::constructions::{
    blow_up, blow_up_limit, boundary_count, clustered_family, grid_set, perturbed_grid_family, upper_bound_audit,
    Layout,
};
use sametype::extraction::{extract_same_type, ExtractionConfig};
use sametype::geometry::{binomial, int, ratio};
use sametype::partition::{build_partition_seeded, ham_sandwich_poly_seeded, lifted_dim, MultiPoly, Partition};
use sametype::rng;
use sametype::sametype::{c_exact, same_type_family, same_type_tuple, same_type_via_transversal};
use sametype::{orient, side, span_hyperplane, Error, Family, Point, PointSet, Scalar, Sign};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn pt(c: &[i64]) -> Point {
    Point::from_ints(c)
}

fn random_int_point(r: &mut rng::Rng, d: usize, lo: i64, hi: i64) -> Point {
    pt(&(0..d).map(|_| r.gen_range(lo..=hi)).collect::<Vec<_>>())
}

fn random_rational_point(r: &mut rng::Rng, d: usize) -> Point {
    let c = (0..d).map(|_| rng::rational(r, -1000, 1000, 97)).collect();
    Point::new(c).unwrap()
}

// 1. Orientation-scan and transversal-hyperplane checkers agree.
fn checker_equivalence() -> Outcome {
    let mut r = rng::seeded(101);
    let (mut tested, mut holds, mut attempts) = (0, 0, 0);
    while tested < 600 {
        attempts += 1;
        if attempts > 100_000 {
            return Err(format!("only {tested} general-position families generated"));
        }
        let d = if tested % 3 == 2 { 3 } else { 2 };
        let m = d + 1;
        let spread = r.gen_range(0..=40);
        let sets: Vec<PointSet> = (0..m)
            .map(|i| {
                let size = r.gen_range(1..=6);
                let center: Vec<i64> = (0..d).map(|_| r.gen_range(-spread..=spread)).collect();
                let pts: Vec<Point> = (0..size)
                    .map(|_| pt(&center.iter().map(|c| c + r.gen_range(-25..=25)).collect::<Vec<_>>()))
                    .collect();
                PointSet::new(format!("X{i}"), pts)
            })
            .collect::<Result<_, _>>()
            .unwrap_or_default();
        if sets.len() != m {
            continue;
        }
        let Ok(f) = Family::verified(d, sets) else { continue };
        let a = same_type_tuple(f.sets()).map_err(|e| e.to_string())?.holds;
        let b = same_type_via_transversal(f.sets()).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("disagreement on {:?}", f.sets()))?;
        tested += 1;
        holds += a as usize;
    }
    ensure(holds > 0 && holds < tested, || format!("degenerate sample: {holds}/{tested} hold"))?;
    Ok(format!("{tested} families agree ({holds} same-type)"))
}

fn det_naive(m: &[Vec<Scalar>]) -> Scalar {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut total = Scalar::zero();
    for (j, a) in m[0].iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Scalar>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = a * det_naive(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn naive_orient(pts: &[Point]) -> Sign {
    let rows: Vec<Vec<Scalar>> =
        pts.iter().map(|p| std::iter::once(Scalar::one()).chain(p.coords().iter().cloned()).collect()).collect();
    let det = det_naive(&rows);
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

// 2. Orientation predicate against a cofactor-expansion determinant.
fn predicate_suite() -> Outcome {
    let mut r = rng::seeded(202);
    let mut zeros = 0;
    for k in 0..10_000 {
        let d = 1 + k % 4;
        let mut pts: Vec<Point> = (0..=d)
            .map(|_| if k % 5 == 0 { random_int_point(&mut r, d, -2, 2) } else { random_rational_point(&mut r, d) })
            .collect();
        let s = orient(&pts).map_err(|e| e.to_string())?;
        ensure(s == naive_orient(&pts), || format!("determinant mismatch on {pts:?}"))?;
        zeros += (s == 0) as usize;
        let t: Vec<Scalar> = (0..d).map(|_| rng::rational(&mut r, -500, 500, 31)).collect();
        let moved: Vec<Point> = pts.iter().map(|p| p.translate(&t).unwrap()).collect();
        ensure(orient(&moved).unwrap() == s, || format!("translation changed the sign of {pts:?}"))?;
        let (i, j) = (r.gen_range(0..=d), r.gen_range(0..=d));
        if i != j {
            pts.swap(i, j);
            ensure(orient(&pts).unwrap() == -s, || format!("swap did not negate the sign of {pts:?}"))?;
        }
    }
    Ok(format!("10000 inputs agree ({zeros} degenerate)"))
}

// Grid points of a planar grid on the boundary of conv(body), counted on
// hull edges directly.
fn boundary_naive(grid: &[Point], body: &[Point]) -> usize {
    let mut hull: Vec<Point> = Vec::new();
    // Gift wrapping on the distinct body points.
    let start = body.iter().min_by(|a, b| a.coords().cmp(b.coords())).unwrap().clone();
    let mut cur = start.clone();
    loop {
        hull.push(cur.clone());
        let mut next = if body[0] == cur { body[1].clone() } else { body[0].clone() };
        for q in body {
            if *q == cur {
                continue;
            }
            let o = orient(&[&cur, &next, q]).unwrap();
            let farther = || {
                let dn: Scalar = next.coords().iter().zip(cur.coords()).map(|(a, b)| (a - b) * (a - b)).sum();
                let dq: Scalar = q.coords().iter().zip(cur.coords()).map(|(a, b)| (a - b) * (a - b)).sum();
                dq > dn
            };
            if o < 0 || (o == 0 && farther()) {
                next = q.clone();
            }
        }
        cur = next;
        if cur == start {
            break;
        }
    }
    let on_segment = |p: &Point, a: &Point, b: &Point| {
        orient(&[a, b, p]).unwrap() == 0
            && (0..2).all(|k| {
                let (x, y, z) = (p.coord(k), a.coord(k), b.coord(k));
                (y.min(z)) <= x && x <= (y.max(z))
            })
    };
    grid.iter()
        .filter(|p| (0..hull.len()).any(|i| on_segment(p, &hull[i], &hull[(i + 1) % hull.len()])))
        .count()
}

// 3. Boundary count on grid sets.
fn boundary_count_bound() -> Outcome {
    let mut worst = Vec::new();
    for n in [6usize, 8, 10, 12] {
        let g = grid_set(n, 2, n as u64).map_err(|e| e.to_string())?;
        let mut r = rng::seeded(300 + n as u64);
        let mut max = 0;
        let mut bodies = 0;
        while bodies < 200 {
            let k = r.gen_range(3..=8);
            let body: Vec<Point> = if bodies % 2 == 0 {
                g.points.points().choose_multiple(&mut r, k.min(g.points.len())).cloned().collect()
            } else {
                (0..k).map(|_| random_rational_point(&mut r, 2)).collect()
            };
            let set = PointSet::new("C", body.clone()).map_err(|e| e.to_string())?;
            let count = match boundary_count(&g, &set) {
                Ok(c) => c,
                Err(Error::DegenerateBody { .. }) => continue,
                Err(e) => return Err(e.to_string()),
            };
            ensure(count == boundary_naive(g.points.points(), &body), || format!("n={n}: naive count differs"))?;
            ensure(count <= 2 * n, || format!("n={n}: {count} boundary points exceed {}", 2 * n))?;
            max = max.max(count);
            bodies += 1;
        }
        worst.push(format!("n={n}: max {max} <= {}", 2 * n));
    }
    let g = grid_set(6, 3, 6).map_err(|e| e.to_string())?;
    let bound = 2 * binomial(6, 2) as usize;
    let mut r = rng::seeded(399);
    let (mut bodies, mut max) = (0, 0);
    while bodies < 50 {
        let k = r.gen_range(4..=10);
        let body: Vec<Point> = g.points.points().choose_multiple(&mut r, k).cloned().collect();
        let set = PointSet::new("C", body).map_err(|e| e.to_string())?;
        let count = match boundary_count(&g, &set) {
            Ok(c) => c,
            Err(Error::DegenerateBody { .. }) => continue,
            Err(e) => return Err(e.to_string()),
        };
        ensure(count <= bound, || format!("d=3: {count} boundary points exceed {bound}"))?;
        max = max.max(count);
        bodies += 1;
    }
    worst.push(format!("d=3 n=6: max {max} <= {bound}"));
    Ok(worst.join(", "))
}

fn random_set(r: &mut rng::Rng, label: &str, n: usize) -> PointSet {
    loop {
        let pts: Vec<Point> = (0..n).map(|_| random_rational_point(r, 2)).collect();
        if let Ok(s) = PointSet::new(label, pts) {
            return s;
        }
    }
}

fn signs(polys: &[MultiPoly], p: &Point) -> Vec<Sign> {
    polys.iter().map(|f| f.sign_at(p)).collect()
}

// Open-side counts of `f` on `pts` are at most half.
fn bisects_naive(f: &MultiPoly, pts: &[&Point]) -> bool {
    let pos = pts.iter().filter(|p| f.sign_at(p) > 0).count();
    let neg = pts.iter().filter(|p| f.sign_at(p) < 0).count();
    2 * pos <= pts.len() && 2 * neg <= pts.len()
}

// Every stage bisects each cell of the previous stages.
fn stages_bisect(part: &Partition, x: &PointSet) -> Result<usize, String> {
    let mut checked = 0;
    for j in 0..part.polys.len() {
        let mut cells: BTreeMap<Vec<Sign>, Vec<&Point>> = BTreeMap::new();
        for p in x.points() {
            let s = signs(&part.polys[..j], p);
            if s.iter().all(|&v| v != 0) {
                cells.entry(s).or_default().push(p);
            }
        }
        for (key, pts) in &cells {
            ensure(bisects_naive(&part.polys[j], pts), || format!("stage {j} does not bisect cell {key:?}"))?;
            checked += 1;
        }
    }
    Ok(checked)
}

// 4 and 5 (sweep half). Partition guarantees.
fn partition_sweep() -> Result<(String, usize), String> {
    let mut lines = Vec::new();
    let mut bisections = 0;
    for n in [64usize, 128] {
        let x = random_set(&mut rng::seeded(400 + n as u64), "X", n);
        for jj in 1..=4usize {
            let part = build_partition_seeded(&x, jj, rng::derive(4, (n * 10 + jj) as u64)).map_err(|e| e.to_string())?;
            let cap = n >> jj;
            let mut recount: BTreeMap<Vec<Sign>, Vec<usize>> = BTreeMap::new();
            let mut on = 0;
            for (i, p) in x.points().iter().enumerate() {
                let s = signs(&part.polys, p);
                if s.contains(&0) {
                    on += 1;
                } else {
                    recount.entry(s).or_default().push(i);
                }
            }
            ensure(recount == part.cells, || format!("n={n} J={jj}: reported cells differ from re-evaluation"))?;
            ensure(on == part.on_surface.len(), || format!("n={n} J={jj}: on-surface count differs"))?;
            let max = recount.values().map(Vec::len).max().unwrap_or(0);
            ensure(max <= cap, || format!("n={n} J={jj}: cell of {max} points exceeds {cap}"))?;
            for (j, f) in part.polys.iter().enumerate() {
                let dj = f.degree() as u128;
                // deg <= 2 * 2^{j/2} + 1 iff (deg - 1)^2 <= 4 * 2^j.
                ensure(dj == 0 || (dj - 1).pow(2) <= 4u128 << j, || format!("n={n} J={jj}: stage {j} degree {dj}"))?;
            }
            let total = part.total_degree() as u128;
            // total <= 12 * 2^{J/2} iff total^2 <= 144 * 2^J.
            ensure(total * total <= 144u128 << jj, || format!("n={n} J={jj}: degree sum {total}"))?;
            let bound = 6 * (2 * total).pow(2);
            ensure(recount.len() as u128 <= bound, || format!("n={n} J={jj}: {} cells exceed {bound}", recount.len()))?;
            bisections += stages_bisect(&part, &x)?;
            lines.push(format!("n={n} J={jj}: max cell {max}/{cap}, degree sum {total}, {} cells", recount.len()));
        }
    }
    Ok((lines.join("; "), bisections))
}

fn partition_results() -> Result<(String, usize), String> {
    static CACHE: OnceLock<Result<(String, usize), String>> = OnceLock::new();
    CACHE.get_or_init(partition_sweep).clone()
}

fn partition_guarantees() -> Outcome {
    partition_results().map(|(s, _)| s)
}

// 5. Ham-sandwich bisection, sweep stages plus standalone instances.
fn ham_sandwich() -> Outcome {
    let (_, sweep) = partition_results()?;
    let mut r = rng::seeded(500);
    for k in 0..100u64 {
        let deg = 1 + (k % 2) as u32;
        let count = r.gen_range(1..=lifted_dim(2, deg));
        let sets: Vec<PointSet> = (0..count)
            .map(|i| {
                let size = r.gen_range(1..=20);
                random_set(&mut r, &format!("X{i}"), size)
            })
            .collect();
        let f = ham_sandwich_poly_seeded(&sets, deg, k).map_err(|e| format!("instance {k}: {e}"))?;
        ensure(!f.is_zero() && f.degree() <= deg, || format!("instance {k}: degree {}", f.degree()))?;
        for s in &sets {
            let pts: Vec<&Point> = s.points().iter().collect();
            ensure(bisects_naive(&f, &pts), || format!("instance {k}: set {} not bisected", s.label))?;
        }
    }
    Ok(format!("{sweep} sweep cells and 100 standalone instances bisected"))
}

// 6. Extraction on clustered families.
fn extraction() -> Outcome {
    let (n, m, r) = (200usize, 5usize, 16u64);
    let runs: Vec<(u64, sametype::Result<_>)> = (1..=20u64)
        .into_par_iter()
        .map(|seed| {
            let out = clustered_family(m, 2, n, Layout::Clustered, seed)
                .and_then(|f| extract_same_type(&f, &ExtractionConfig::new(r, seed)).map(|rep| (f, rep)));
            (seed, out)
        })
        .collect();
    let mut ok = 0;
    let mut min_fraction: Option<Scalar> = None;
    for (seed, out) in runs {
        match out {
            Ok((f, rep)) => {
                let sub = Family::new(2, rep.subsets.clone()).map_err(|e| e.to_string())?;
                ensure(same_type_family(&sub).map_err(|e| e.to_string())?.holds, || format!("seed {seed}: subsets not same-type"))?;
                for (i, (y, idx)) in rep.subsets.iter().zip(&rep.indices).enumerate() {
                    ensure(&f.set(i).subset(idx) == y, || format!("seed {seed}: subset {i} differs from its indices"))?;
                    let k = rep.sets[i].k;
                    ensure(4 * k * y.len() >= n, || format!("seed {seed}: |Y_{i}| = {} below n/(4k) with k = {k}", y.len()))?;
                }
                let expect = rep.subsets.iter().map(|y| ratio(y.len() as i64, n as i64)).min().unwrap();
                ensure(rep.fraction == expect, || format!("seed {seed}: fraction {} != {expect}", rep.fraction))?;
                min_fraction = Some(min_fraction.map_or(expect.clone(), |x: Scalar| x.min(expect)));
                ok += 1;
            }
            Err(Error::ResampleLimitExceeded { .. }) => {}
            Err(e) => return Err(format!("seed {seed}: {e}")),
        }
    }
    ensure(ok * 10 >= 20 * 8, || format!("only {ok}/20 seeds succeeded"))?;
    Ok(format!("{ok}/20 seeds succeeded, min fraction {}", min_fraction.unwrap()))
}

fn generalized_binomial2(x: &Scalar) -> Scalar {
    x * (x - Scalar::one()) / int(2)
}

// 7. Upper-bound chain on perturbed grids and the ratio trend.
fn upper_bound_chain() -> Outcome {
    let mut parts = Vec::new();
    for n in [6usize, 8] {
        for seed in 1..=3u64 {
            let pf = perturbed_grid_family(n, 2, 3, &ratio(1, 1000), seed).map_err(|e| e.to_string())?;
            let c = c_exact(&pf.family).map_err(|e| e.to_string())?;
            let rep = upper_bound_audit(&pf, &c.indices).map_err(|e| e.to_string())?;
            // n piercing checks, the pigeonhole, the |Z_i| bound, m containment checks.
            ensure(rep.inequalities.len() == n + 2 + 3, || format!("n={n}: {} inequalities", rep.inequalities.len()))?;
            for kind in ["hyperplane", "pigeonhole", "|Z_i|", "|Y_"] {
                ensure(rep.inequalities.iter().any(|q| q.name.starts_with(kind)), || format!("no {kind} check"))?;
            }
            for q in &rep.inequalities {
                ensure(q.ok, || format!("n={n} seed={seed}: {} fails ({} > {})", q.name, q.lhs, q.rhs))?;
            }
            let floor = Scalar::new(binomial((2 * n / 3) as u64, 2).into(), binomial(n as u64, 2).into());
            ensure(rep.ratio_bound == floor, || format!("n={n}: ratio bound {} != {floor}", rep.ratio_bound))?;
            if seed == 1 {
                parts.push(format!("n={n}: c = {}", c.value));
            }
        }
    }
    let limit = ratio(4, 9);
    let mut gaps = Vec::new();
    let mut floored = Vec::new();
    for n in [6i64, 8, 10] {
        let x = ratio(2 * n, 3);
        let real = generalized_binomial2(&x) / int(n * (n - 1) / 2);
        gaps.push(&limit - real);
        let fl = Scalar::new(binomial((2 * n / 3) as u64, 2).into(), binomial(n as u64, 2).into());
        floored.push((&limit - fl).to_string());
    }
    ensure(gaps.windows(2).all(|w| w[1] < w[0] && w[1].is_positive()), || format!("gaps {gaps:?} not strictly decreasing"))?;
    parts.push(format!(
        "gap to 4/9 of C(2n/3,2)/C(n,2): {} (floored: {})",
        gaps.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(", "),
        floored.join(", ")
    ));
    Ok(parts.join("; "))
}

// 8. Blowing up one set leaves c unchanged.
fn blow_up_invariance() -> Outcome {
    let mut r = rng::seeded(800);
    let mut done = 0;
    let mut below_one = 0;
    let mut attempts = 0;
    while done < 20 {
        attempts += 1;
        if attempts > 10_000 {
            return Err(format!("only {done} instances generated"));
        }
        let sets: Vec<PointSet> = (0..3)
            .map(|i| {
                let size = r.gen_range(1..=4);
                let c = (i as i64 - 1) * r.gen_range(0..=30);
                let pts = (0..size).map(|_| pt(&[c + r.gen_range(-20..=20), r.gen_range(-20..=20)])).collect();
                PointSet::new(format!("X{i}"), pts)
            })
            .collect::<Result<_, _>>()
            .unwrap_or_default();
        if sets.len() != 3 {
            continue;
        }
        let Ok(f) = Family::verified(2, sets) else { continue };
        let i = r.gen_range(0..3);
        let Some(limit) = blow_up_limit(&f, i) else { continue };
        let g = blow_up(&f, i, 2, &(limit / int(2)), done).map_err(|e| e.to_string())?;
        ensure(g.set(i).len() == 2 * f.set(i).len(), || "cloud size".into())?;
        let before = c_exact(&f).map_err(|e| e.to_string())?.value;
        let after = c_exact(&g).map_err(|e| e.to_string())?.value;
        ensure(before == after, || format!("instance {done}: c changed from {before} to {after}"))?;
        below_one += (before < Scalar::one()) as usize;
        done += 1;
    }
    Ok(format!("20 instances keep c exactly ({below_one} with c < 1)"))
}

// Random open polytope with at most three facets, spanned by points of x.
fn random_polytope(r: &mut rng::Rng, x: &PointSet) -> Vec<(sametype::Hyperplane, Sign)> {
    let k = r.gen_range(1..=3);
    let mut facets = Vec::new();
    while facets.len() < k {
        let ab: Vec<&Point> = x.points().choose_multiple(r, 2).collect();
        if let Ok(h) = span_hyperplane(&ab) {
            facets.push((h, if r.gen::<bool>() { 1 } else { -1 }));
        }
    }
    facets
}

fn count_in(facets: &[(sametype::Hyperplane, Sign)], s: &PointSet) -> i64 {
    s.points().iter().filter(|p| facets.iter().all(|(h, sg)| side(h, p).unwrap() == *sg)).count() as i64
}

// Three sets of random points around the origin, so c is well below 1.
fn overlapping_family(seed: u64, n: usize) -> Result<Family, String> {
    let mut r = rng::seeded(seed);
    for _ in 0..100 {
        let sets = (0..3).map(|i| random_set(&mut r, &format!("X{i}"), n)).collect();
        if let Ok(f) = Family::verified(2, sets) {
            return Ok(f);
        }
    }
    Err("no overlapping family in general position".into())
}

// 9. Epsilon-approximant audit and the comparison of c.
fn approximants() -> Outcome {
    let eps = ratio(1, 10);
    let x = random_set(&mut rng::seeded(900), "X", 2000);
    let formula = eps_approximant(&x, 3, &ApproxConfig::new(eps.clone(), 9)).map_err(|e| e.to_string())?;
    let cfg = ApproxConfig { size_override: Some(500), ..ApproxConfig::new(eps.clone(), 9) };
    let a = eps_approximant(&x, 3, &cfg).map_err(|e| e.to_string())?;
    ensure(a.subset.len() == 500 && a.max_discrepancy <= eps, || format!("reported discrepancy {}", a.max_discrepancy))?;
    let mut r = rng::seeded(901);
    let mut worst = Scalar::zero();
    for _ in 0..1000 {
        let facets = random_polytope(&mut r, &x);
        let d = (Scalar::new(count_in(&facets, &x).into(), BigInt::from(2000))
            - Scalar::new(count_in(&facets, &a.subset).into(), BigInt::from(500)))
        .abs();
        worst = worst.max(d);
    }
    ensure(worst <= eps, || format!("independent audit found discrepancy {worst}"))?;

    let ceps = ratio(1, 4);
    let mut gaps = Vec::new();
    for seed in 1..=10u64 {
        let f = overlapping_family(seed, 8)?;
        let cfg = ApproxConfig { size_override: Some(6), ..ApproxConfig::new(ceps.clone(), seed) };
        let rep = compare_c(&f, &cfg, Default::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        let cx = c_exact(&f).map_err(|e| e.to_string())?.value;
        ensure(rep.c_x == cx, || format!("seed {seed}: c(X) {} != {cx}", rep.c_x))?;
        ensure(rep.approximant_sizes == [6, 6, 6], || format!("seed {seed}: sizes {:?}", rep.approximant_sizes))?;
        ensure(rep.c_a <= &cx + &ceps, || format!("seed {seed}: c(A) = {} > c(X) + 1/4", rep.c_a))?;
        gaps.push(format!("{}->{}", rep.c_x, rep.c_a));
    }
    Ok(format!(
        "formula size {} (A = X), sampled 500: reported {}, independent {}; c(X)->c(A) over 10 instances: {}",
        formula.formula_size,
        a.max_discrepancy,
        worst,
        gaps.join(" ")
    ))
}

fn cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let full: Vec<String> = std::iter::once("sametype".to_string())
        .chain(args.iter().map(|a| if a.ends_with(".json") || a.ends_with(".csv") || a.ends_with(".toml") {
            dir.join(a).display().to_string()
        } else {
            a.to_string()
        }))
        .collect();
    match sametype::cli::run_args(&full) {
        0 | 1 => Ok(()),
        code => Err(format!("{args:?} exited with {code}")),
    }
}

fn cli_pipeline(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    std::fs::write(
        dir.join("sweep.toml"),
        "command = \"partition\"\njobs = 2\n\n[grid]\nn = [64, 128]\nJ = [1, 2, 3, 4]\nseed = [1]\n",
    )
    .map_err(|e| e.to_string())?;
    for args in [
        &["gen", "grid", "--n", "6", "--d", "2", "--m", "3", "--seed", "7", "--out", "grid.json"][..],
        &["check", "--in", "grid.json", "--method", "both", "--out", "check.json"],
        &["c-exact", "--in", "grid.json", "--out", "c.json"],
        &["audit", "--in", "grid.json", "--out", "audit.json"],
        &["gen", "clustered", "--n", "128", "--d", "2", "--m", "1", "--seed", "3", "--out", "one.json"],
        &["partition", "--in", "one.json", "--J", "4", "--seed", "5", "--out", "part.json"],
        &["gen", "clustered", "--n", "60", "--d", "2", "--m", "3", "--seed", "4", "--out", "fam.json"],
        &["extract", "--in", "fam.json", "--r", "8", "--max-resample", "10000", "--seed", "6", "--out", "extract.json"],
        &["approx", "--in", "fam.json", "--eps", "1/4", "--size", "40", "--seed", "8", "--out", "approx.json"],
        &["sweep", "--config", "sweep.toml", "--out", "sweep.csv"],
    ] {
        cli(dir, args)?;
    }
    let mut out = BTreeMap::new();
    for e in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let p = e.map_err(|e| e.to_string())?.path();
        let name = p.file_name().unwrap().to_string_lossy().to_string();
        if !name.ends_with(".manifest.json") {
            out.insert(name, std::fs::read(&p).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

// 10. Reruns with the same seeds give identical bytes.
fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = cli_pipeline(a.path())?;
    let second = cli_pipeline(b.path())?;
    ensure(first.keys().eq(second.keys()), || "different file sets".into())?;
    for (name, bytes) in &first {
        ensure(&second[name] == bytes, || format!("{name} differs between runs"))?;
    }
    let manifests = std::fs::read_dir(a.path()).unwrap().filter(|e| {
        e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".manifest.json")
    });
    let outputs = first.keys().filter(|k| k.as_str() != "sweep.toml").count();
    ensure(manifests.count() == outputs, || "missing manifests".into())?;
    Ok(format!("{} artifacts byte-identical across runs", outputs))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("1 checker equivalence", checker_equivalence),
        ("2 predicate suite", predicate_suite),
        ("3 grid boundary count", boundary_count_bound),
        ("4 partition guarantees", partition_guarantees),
        ("5 ham-sandwich bisection", ham_sandwich),
        ("6 extraction", extraction),
        ("7 upper-bound chain", upper_bound_chain),
        ("8 blow-up invariance", blow_up_invariance),
        ("9 approximant audit", approximants),
        ("10 determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {name}: PASS ({secs:.1}s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {name}: FAIL ({secs:.1}s) {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
