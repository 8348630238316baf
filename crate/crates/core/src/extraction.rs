//! Extraction of a large same-type subfamily.
//!
//! Each set is cut into sign cells by polynomial partitioning. Cells holding
//! more than `n / (4k)` points are kept (`k` the number of realized cells),
//! and a hypergraph is built whose edges are the `(d + 1)`-tuples of heavy
//! cells from distinct sets that one hyperplane pierces. One cell per set is
//! then drawn by Moser–Tardos resampling until no edge is spanned; the
//! selected cells have no transversal hyperplane, hence are of the same type.

use std::collections::{BTreeMap, HashSet};

use rand::Rng as _;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{combinations, for_each_product};
use crate::error::{Error, Result};
use crate::geometry::hull::hull_vertices;
use crate::geometry::{Family, PointSet, Scalar};
use crate::partition::{build_partition_seeded, warren_audit, Partition, SignVector};
use crate::rng;
use crate::sametype::{same_type_family, SameTypeVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractionConfig {
    /// Partition fineness; each set gets `ceil(log2 r)` bisection rounds.
    pub r: u64,
    /// Heavy-cell threshold denominator. `None` uses `4 k_i` per set.
    pub heavy_threshold_denominator: Option<u64>,
    pub max_resample: u64,
    pub seed: u64,
}

impl ExtractionConfig {
    pub fn new(r: u64, seed: u64) -> Self {
        ExtractionConfig { r, heavy_threshold_denominator: None, max_resample: 10_000, seed }
    }

    /// `ceil(log2 r)`.
    pub fn rounds(&self) -> usize {
        (64 - (self.r - 1).leading_zeros()) as usize
    }

    fn validate(&self) -> Result<()> {
        if self.r < 2 {
            return Err(Error::InvalidInput("r must be at least 2".into()));
        }
        if self.max_resample == 0 {
            return Err(Error::InvalidInput("max_resample must be at least 1".into()));
        }
        if self.heavy_threshold_denominator == Some(0) {
            return Err(Error::InvalidInput("heavy threshold denominator must be positive".into()));
        }
        Ok(())
    }
}

/// A sign cell of one set's partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellVertex {
    pub set_index: usize,
    pub sign_vector: SignVector,
    /// Indices into the set, sorted.
    pub indices: Vec<usize>,
    pub points: PointSet,
    /// Vertices of `conv(points)`.
    hull: PointSet,
}

impl CellVertex {
    pub fn new(set_index: usize, sign_vector: SignVector, x: &PointSet, indices: Vec<usize>) -> Self {
        let points = x.subset(&indices);
        let hull = PointSet::new(points.label.clone(), hull_vertices(points.points())).expect("distinct vertices");
        CellVertex { set_index, sign_vector, indices, points, hull }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Cells of `part` holding strictly more than `threshold` points of `x`.
pub fn heavy_cells(part: &Partition, x: &PointSet, set_index: usize, threshold: &Scalar) -> Vec<CellVertex> {
    part.cells
        .iter()
        .filter(|(_, idx)| Scalar::from_integer(idx.len().into()) > *threshold)
        .map(|(sv, idx)| CellVertex::new(set_index, sv.clone(), x, idx.clone()))
        .collect()
}

/// Whether one hyperplane meets the convex hull of every cell.
pub fn piercing_edge(cells: &[&CellVertex]) -> bool {
    let hulls: Vec<&PointSet> = cells.iter().map(|c| &c.hull).collect();
    crate::sametype::transversal_raw(&hulls).is_some()
}

#[derive(Clone, Debug)]
pub struct PiercingHypergraph {
    pub dim: usize,
    pub parts: Vec<Vec<CellVertex>>,
    /// Per `(d + 1)`-subfamily of parts, the pierced tuples of cell indices
    /// (one per part, in subfamily order).
    pub edges: BTreeMap<Vec<usize>, HashSet<Vec<usize>>>,
}

impl PiercingHypergraph {
    pub fn edge_counts(&self) -> BTreeMap<Vec<usize>, usize> {
        self.edges.iter().map(|(s, e)| (s.clone(), e.len())).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().map(HashSet::len).sum()
    }

    /// The first subfamily whose chosen cells form an edge.
    pub fn violated(&self, pick: &[usize]) -> Option<&[usize]> {
        self.edges.iter().find_map(|(sub, e)| {
            let key: Vec<usize> = sub.iter().map(|&i| pick[i]).collect();
            e.contains(&key).then_some(sub.as_slice())
        })
    }
}

/// Tests every transversal `(d + 1)`-tuple of cells for piercing.
pub fn build_hypergraph(dim: usize, parts: Vec<Vec<CellVertex>>) -> PiercingHypergraph {
    let m = parts.len();
    let mut edges = BTreeMap::new();
    if m > dim {
        for sub in combinations(m, dim + 1) {
            let sizes: Vec<usize> = sub.iter().map(|&i| parts[i].len()).collect();
            let mut tuples = Vec::new();
            for_each_product(&sizes, |t| {
                tuples.push(t.to_vec());
                true
            });
            let found: HashSet<Vec<usize>> = tuples
                .into_par_iter()
                .filter(|t| {
                    let cells: Vec<&CellVertex> = sub.iter().zip(t).map(|(&i, &c)| &parts[i][c]).collect();
                    piercing_edge(&cells)
                })
                .collect();
            edges.insert(sub, found);
        }
    }
    PiercingHypergraph { dim, parts, edges }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    /// Chosen cell index per part.
    pub cells: Vec<usize>,
    /// Resampling rounds performed.
    pub rounds: u64,
}

/// One cell per part spanning no edge, by Moser–Tardos resampling.
pub fn lll_select(h: &PiercingHypergraph, max_resample: u64, seed: u64) -> Result<Selection> {
    if let Some(i) = h.parts.iter().position(Vec::is_empty) {
        return Err(Error::InvalidInput(format!("part {i} has no cells")));
    }
    let mut r = rng::seeded(seed);
    let mut pick: Vec<usize> = h.parts.iter().map(|p| r.gen_range(0..p.len())).collect();
    let mut rounds = 0;
    while let Some(sub) = h.violated(&pick) {
        if rounds == max_resample {
            return Err(Error::ResampleLimitExceeded { rounds });
        }
        for &i in sub {
            pick[i] = r.gen_range(0..h.parts[i].len());
        }
        rounds += 1;
    }
    debug_assert!(h.violated(&pick).is_none());
    Ok(Selection { cells: pick, rounds })
}

#[derive(Clone, Debug)]
pub struct SetReport {
    /// Realized full-sign cells.
    pub k: usize,
    /// `6 (2D)^d` for the partition's total degree `D`.
    pub warren_bound: u128,
    pub total_degree: u32,
    pub threshold: Scalar,
    pub heavy_cells: usize,
    pub light_points: usize,
    pub on_surface: usize,
}

#[derive(Clone, Debug)]
pub struct ExtractionReport {
    pub config: ExtractionConfig,
    pub subsets: Vec<PointSet>,
    /// Indices into the input sets, sorted.
    pub indices: Vec<Vec<usize>>,
    pub verdict: SameTypeVerdict,
    pub fraction: Scalar,
    pub sets: Vec<SetReport>,
    pub edge_counts: BTreeMap<Vec<usize>, usize>,
    pub rounds: u64,
}

/// Runs the whole pipeline on a verified family of equal-size sets.
pub fn extract_same_type(f: &Family, cfg: &ExtractionConfig) -> Result<ExtractionReport> {
    cfg.validate()?;
    f.ensure_verified()?;
    let n = f.sets().first().map_or(0, PointSet::len);
    if let Some(s) = f.sets().iter().find(|s| s.len() != n) {
        return Err(Error::InvalidInput(format!(
            "set {:?} has {} points, expected {n}; blow sets up to a common size first",
            s.label,
            s.len()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput("sets are empty".into()));
    }
    let rounds = cfg.rounds();
    let partitions: Vec<Partition> = f
        .sets()
        .par_iter()
        .enumerate()
        .map(|(i, x)| build_partition_seeded(x, rounds, rng::derive(cfg.seed, i as u64)))
        .collect::<Result<_>>()?;

    let mut parts = Vec::with_capacity(f.len());
    let mut reports = Vec::with_capacity(f.len());
    for (i, (x, part)) in f.sets().iter().zip(&partitions).enumerate() {
        let k = part.cells.len();
        let w = warren_audit(part)?;
        let denom = cfg.heavy_threshold_denominator.unwrap_or(4 * k as u64);
        let threshold = Scalar::new(n.into(), denom.into());
        let heavy = heavy_cells(part, x, i, &threshold);
        let heavy_points: usize = heavy.iter().map(CellVertex::len).sum();
        let light_points = n - part.on_surface.len() - heavy_points;
        if cfg.heavy_threshold_denominator.is_none() && 4 * light_points > n {
            return Err(Error::AssertionFailed(format!("set {i}: {light_points} points in light cells exceed n/4")));
        }
        reports.push(SetReport {
            k,
            warren_bound: w.bound,
            total_degree: w.total_degree,
            threshold,
            heavy_cells: heavy.len(),
            light_points,
            on_surface: part.on_surface.len(),
        });
        parts.push(heavy);
    }

    let h = build_hypergraph(f.dim(), parts);
    let sel = lll_select(&h, cfg.max_resample, rng::derive(cfg.seed, u64::MAX))?;
    if h.violated(&sel.cells).is_some() {
        return Err(Error::AssertionFailed("selection spans an edge".into()));
    }
    let chosen: Vec<&CellVertex> = sel.cells.iter().enumerate().map(|(i, &c)| &h.parts[i][c]).collect();
    let subsets: Vec<PointSet> = chosen.iter().map(|c| c.points.clone()).collect();
    let indices: Vec<Vec<usize>> = chosen.iter().map(|c| c.indices.clone()).collect();
    let check = Family::new(f.dim(), subsets.clone())?;
    let verdict = same_type_family(&check)?;
    if !verdict.holds {
        return Err(Error::SameTypeVerificationFailed(format!("{:?}", verdict.witness)));
    }
    let fraction = indices.iter().map(|y| Scalar::new(y.len().into(), n.into())).min().expect("nonempty family");
    for (rep, y) in reports.iter().zip(&indices) {
        if Scalar::from_integer(y.len().into()) <= rep.threshold {
            return Err(Error::AssertionFailed("selected cell below heavy threshold".into()));
        }
    }
    Ok(ExtractionReport {
        config: cfg.clone(),
        subsets,
        indices,
        verdict,
        fraction,
        sets: reports,
        edge_counts: h.edge_counts(),
        rounds: sel.rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{clustered_family, Layout};
    use crate::geometry::{hull_meets_hyperplane, int, Point};
    use crate::partition::build_partition;
    use crate::sametype::{same_type_tuple, transversal_hyperplane};

    fn cell(i: usize, pts: &[&[i64]]) -> CellVertex {
        let x = PointSet::from_ints(format!("X{i}"), pts).unwrap();
        CellVertex::new(i, vec![1], &x, (0..pts.len()).collect())
    }

    #[test]
    fn config_rounds() {
        assert_eq!(ExtractionConfig::new(2, 0).rounds(), 1);
        assert_eq!(ExtractionConfig::new(16, 0).rounds(), 4);
        assert_eq!(ExtractionConfig::new(17, 0).rounds(), 5);
        assert!(ExtractionConfig::new(1, 0).validate().is_err());
    }

    #[test]
    fn heavy_filter_matches_recount() {
        let f = clustered_family(1, 2, 64, Layout::Clustered, 3).unwrap();
        let x = f.set(0);
        let part = build_partition(x, 3).unwrap();
        assert_eq!(heavy_cells(&part, x, 0, &int(0)).len(), part.cells.len());
        assert!(heavy_cells(&part, x, 0, &int(64)).is_empty());
        let t = Scalar::new(64.into(), 16.into());
        let direct = part.cells.values().filter(|c| c.len() > 4).count();
        let hv = heavy_cells(&part, x, 0, &t);
        assert_eq!(hv.len(), direct);
        for c in &hv {
            for (&i, p) in c.indices.iter().zip(c.points.points()) {
                assert_eq!(&x.points()[i], p);
                let s: Vec<i8> = part.polys.iter().map(|q| q.sign_at(p)).collect();
                assert_eq!(s, c.sign_vector);
            }
        }
    }

    #[test]
    fn crossed_cells_are_pierced() {
        let a = cell(0, &[&[0, 0], &[1, 3]]);
        let b = cell(1, &[&[10, 1], &[11, -2]]);
        let c = cell(2, &[&[20, 2], &[21, -1]]);
        assert!(piercing_edge(&[&a, &b, &c]));
        let h = transversal_hyperplane(&[a.points.clone(), b.points.clone(), c.points.clone()]).unwrap().unwrap();
        for s in [&a.points, &b.points, &c.points] {
            assert!(hull_meets_hyperplane(s, &h).unwrap());
        }
    }

    #[test]
    fn singletons_are_not_pierced() {
        let a = cell(0, &[&[0, 0]]);
        let b = cell(1, &[&[5, 1]]);
        let c = cell(2, &[&[2, 7]]);
        assert!(!piercing_edge(&[&a, &b, &c]));
    }

    #[test]
    fn small_cells_at_simplex_vertices() {
        let a = cell(0, &[&[0, 0], &[1, 1], &[0, 1]]);
        let b = cell(1, &[&[100, 0], &[101, 1], &[100, 2]]);
        let c = cell(2, &[&[0, 100], &[2, 101], &[1, 102]]);
        assert!(!piercing_edge(&[&a, &b, &c]));
        assert!(same_type_tuple(&[a.points.clone(), b.points.clone(), c.points.clone()]).unwrap().holds);
    }

    #[test]
    fn selection_without_edges_is_immediate() {
        let parts = vec![vec![cell(0, &[&[0, 0]])], vec![cell(1, &[&[9, 1]])], vec![cell(2, &[&[3, 8]])]];
        let h = build_hypergraph(2, parts);
        assert_eq!(h.edge_count(), 0);
        assert_eq!(lll_select(&h, 1, 0).unwrap().rounds, 0);
    }

    #[test]
    fn forced_edge_exhausts_resampling() {
        let parts = vec![
            vec![cell(0, &[&[0, 0], &[1, 3]])],
            vec![cell(1, &[&[10, 1], &[11, -2]])],
            vec![cell(2, &[&[20, 2], &[21, -1]])],
        ];
        let h = build_hypergraph(2, parts);
        assert_eq!(h.edge_count(), 1);
        assert!(matches!(lll_select(&h, 50, 0), Err(Error::ResampleLimitExceeded { rounds: 50 })));
    }

    #[test]
    fn random_sparse_selection_avoids_edges() {
        let mut r = rng::seeded(4);
        let parts: Vec<Vec<CellVertex>> = (0..4)
            .map(|i| {
                (0..5)
                    .map(|k| {
                        let c = vec![int(1000 * i as i64 + 37 * k), int(((i * i) as i64) * 700 + 11 * k)];
                        let pts: Vec<Point> = (0..3).map(|_| rng::point_near(&mut r, &c, 20, 1)).collect();
                        let x = PointSet::new(format!("X{i}"), hull_vertices(&pts)).unwrap();
                        let n = x.len();
                        CellVertex::new(i, vec![k as i8], &x, (0..n).collect())
                    })
                    .collect()
            })
            .collect();
        let h = build_hypergraph(2, parts);
        let s = lll_select(&h, 10_000, 1).unwrap();
        for (sub, e) in &h.edges {
            let key: Vec<usize> = sub.iter().map(|&i| s.cells[i]).collect();
            assert!(!e.contains(&key));
        }
    }

    #[test]
    fn triangle_clusters_extract() {
        let f = clustered_family(3, 2, 32, Layout::Clustered, 1).unwrap();
        let rep = extract_same_type(&f, &ExtractionConfig::new(4, 7)).unwrap();
        assert!(rep.verdict.holds);
        for (s, y) in rep.sets.iter().zip(&rep.indices) {
            assert!(Scalar::from_integer(y.len().into()) > s.threshold);
            assert!(s.k as u128 <= s.warren_bound);
        }
        let again = extract_same_type(&f, &ExtractionConfig::new(4, 7)).unwrap();
        assert_eq!(rep.indices, again.indices);
    }

    #[test]
    fn unequal_sizes_are_rejected() {
        let f = Family::verified(
            2,
            vec![
                PointSet::from_ints("A", &[&[0, 0], &[1, 5]]).unwrap(),
                PointSet::from_ints("B", &[&[9, 1]]).unwrap(),
                PointSet::from_ints("C", &[&[3, 8]]).unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(extract_same_type(&f, &ExtractionConfig::new(4, 0)), Err(Error::InvalidInput(_))));
    }
}
