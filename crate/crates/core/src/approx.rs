//! ε-approximants for the range space of open polytopes with at most `m`
//! facets, and the comparison of `c` on an approximant against the original.

use num::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Family, IntVec, PointSet, RawForm, Scalar, Sign};
use crate::rng::{self, Rng};
use crate::sametype::{c_exact_with, CExactBudget};

/// Fresh samples drawn before giving up on the audit.
const MAX_ATTEMPTS: u64 = 20;

#[derive(Clone, Debug)]
pub struct ApproxConfig {
    pub eps: Scalar,
    /// Constant in the VC-dimension bound `vc_constant * d m log2 m`.
    pub vc_constant: Scalar,
    pub seed: u64,
    /// Random ranges in the audit.
    pub range_samples: usize,
    /// Sample this many points instead of the formula's size.
    pub size_override: Option<usize>,
}

impl ApproxConfig {
    pub fn new(eps: Scalar, seed: u64) -> Self {
        ApproxConfig { eps, vc_constant: Scalar::one(), seed, range_samples: 1000, size_override: None }
    }

    fn validate(&self) -> Result<()> {
        if !self.eps.is_positive() || self.eps >= Scalar::one() {
            return Err(Error::InvalidInput(format!("eps must lie in (0, 1), got {}", self.eps)));
        }
        if !self.vc_constant.is_positive() {
            return Err(Error::InvalidInput("vc_constant must be positive".into()));
        }
        Ok(())
    }
}

/// `ceil(vc_constant * d * m * log2 m)`, at least 1.
pub fn vc_dimension(m: usize, d: usize, vc_constant: &Scalar) -> u64 {
    let c = vc_constant.to_f64().unwrap_or(f64::MAX);
    let v = (c * d as f64 * m as f64 * (m as f64).log2()).ceil();
    (v as u64).max(1)
}

/// `ceil((32 / eps^2) D ln(16 D / eps^2))`.
pub fn approximant_size_for(eps: &Scalar, vc: u64) -> u64 {
    let e = eps.to_f64().expect("finite");
    let k = 32.0 / (e * e);
    (k * vc as f64 * (16.0 * vc as f64 / (e * e)).ln()).ceil() as u64
}

pub fn approximant_size(m: usize, d: usize, cfg: &ApproxConfig) -> u64 {
    approximant_size_for(&cfg.eps, vc_dimension(m, d, &cfg.vc_constant))
}

/// An open polytope `{x : s_k f_k(x) > 0 for all k}`.
#[derive(Clone, Debug)]
pub struct Range {
    facets: Vec<(RawForm, Sign)>,
}

impl Range {
    pub fn facets(&self) -> usize {
        self.facets.len()
    }

    fn contains(&self, p: &IntVec) -> bool {
        self.facets.iter().all(|(f, s)| f.side(p) == *s)
    }

    pub fn count(&self, x: &PointSet) -> usize {
        x.points().iter().filter(|p| self.contains(p.hom())).count()
    }
}

/// Random ranges with `1..=m` facets, each spanned by `d` points of `x`
/// with a random open side.
pub fn sample_ranges(x: &PointSet, m: usize, count: usize, rng: &mut Rng) -> Vec<Range> {
    let Some(d) = x.dim() else { return Vec::new() };
    if x.len() < d || m == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(count);
    let mut misses = 0;
    while out.len() < count && misses < 100 * count + 100 {
        let k = rng.gen_range(1..=m);
        let mut facets = Vec::with_capacity(k);
        while facets.len() < k && misses < 100 * count + 100 {
            let idx = sample(rng, x.len(), d).into_vec();
            let rows: Vec<&IntVec> = idx.iter().map(|&i| x.points()[i].hom()).collect();
            match RawForm::through(&rows) {
                Some(f) => facets.push((f, if rng.gen::<bool>() { 1 } else { -1 })),
                None => misses += 1,
            }
        }
        if facets.len() == k {
            out.push(Range { facets });
        }
    }
    out
}

/// `| |F ∩ X| / |X| - |F ∩ A| / |A| |`.
pub fn discrepancy(r: &Range, x: &PointSet, a: &PointSet) -> Scalar {
    if x.is_empty() || a.is_empty() {
        return Scalar::zero();
    }
    let fx = Scalar::new(r.count(x).into(), x.len().into());
    let fa = Scalar::new(r.count(a).into(), a.len().into());
    (fx - fa).abs()
}

#[derive(Clone, Debug)]
pub struct Approximant {
    pub subset: PointSet,
    /// Indices into `X`, sorted.
    pub indices: Vec<usize>,
    /// Size from the formula, before any override.
    pub formula_size: u64,
    pub max_discrepancy: Scalar,
    pub ranges: usize,
    pub attempts: u64,
}

/// A seeded uniform sample of `X`, audited on random ranges.
///
/// When `X` is no larger than the target size, `X` itself is returned.
pub fn eps_approximant(x: &PointSet, m: usize, cfg: &ApproxConfig) -> Result<Approximant> {
    cfg.validate()?;
    let d = x.dim().unwrap_or(1);
    let formula_size = approximant_size(m, d, cfg);
    let size = cfg.size_override.map_or(formula_size, |s| s as u64);
    let mut range_rng = rng::seeded(rng::derive(cfg.seed, 0));
    let ranges = sample_ranges(x, m, cfg.range_samples, &mut range_rng);
    if size >= x.len() as u64 {
        return Ok(Approximant {
            subset: x.clone(),
            indices: (0..x.len()).collect(),
            formula_size,
            max_discrepancy: Scalar::zero(),
            ranges: ranges.len(),
            attempts: 0,
        });
    }
    if size == 0 {
        return Err(Error::InvalidInput("approximant size must be positive".into()));
    }
    let full_counts: Vec<usize> = ranges.par_iter().map(|r| r.count(x)).collect();
    let mut worst = Scalar::zero();
    for attempt in 1..=MAX_ATTEMPTS {
        let mut r = rng::seeded(rng::derive(cfg.seed, attempt));
        let mut indices = sample(&mut r, x.len(), size as usize).into_vec();
        indices.sort_unstable();
        let a = x.subset(&indices);
        let max = ranges
            .par_iter()
            .zip(&full_counts)
            .map(|(rg, &cx)| {
                let fx = Scalar::new(cx.into(), x.len().into());
                let fa = Scalar::new(rg.count(&a).into(), a.len().into());
                (fx - fa).abs()
            })
            .max()
            .unwrap_or_else(Scalar::zero);
        if max <= cfg.eps {
            return Ok(Approximant {
                subset: a,
                indices,
                formula_size,
                max_discrepancy: max,
                ranges: ranges.len(),
                attempts: attempt,
            });
        }
        worst = if attempt == 1 { max } else { worst.min(max) };
    }
    Err(Error::AuditFailedRepeatedly { max_discrepancy: worst })
}

#[derive(Clone, Debug)]
pub struct CompareReport {
    pub c_x: Scalar,
    pub c_a: Scalar,
    /// `c(A) - c(X)`.
    pub gap: Scalar,
    pub eps: Scalar,
    pub sizes: Vec<usize>,
    pub approximant_sizes: Vec<usize>,
    pub max_discrepancy: Scalar,
}

/// Computes `c` exactly on the family and on per-set approximants, and
/// checks `c(A) <= c(X) + eps`.
///
/// The bound holds whenever each `A_i` is an `eps`-approximant for open
/// polytopes with at most `m` facets; the audit samples that condition.
pub fn compare_c(f: &Family, cfg: &ApproxConfig, budget: CExactBudget) -> Result<CompareReport> {
    cfg.validate()?;
    f.ensure_verified()?;
    let m = f.len();
    let approx: Vec<Approximant> = f
        .sets()
        .iter()
        .enumerate()
        .map(|(i, x)| eps_approximant(x, m, &ApproxConfig { seed: rng::derive(cfg.seed, 1000 + i as u64), ..cfg.clone() }))
        .collect::<Result<_>>()?;
    let a = Family::new(f.dim(), approx.iter().map(|a| a.subset.clone()).collect())?.mark_verified();
    let c_x = c_exact_with(f, budget)?.value;
    let c_a = c_exact_with(&a, budget)?.value;
    let gap = &c_a - &c_x;
    if gap > cfg.eps {
        return Err(Error::AssertionFailed(format!("c(A) = {c_a} exceeds c(X) + eps = {}", &c_x + &cfg.eps)));
    }
    Ok(CompareReport {
        c_x,
        c_a,
        gap,
        eps: cfg.eps.clone(),
        sizes: f.sets().iter().map(PointSet::len).collect(),
        approximant_sizes: approx.iter().map(|a| a.subset.len()).collect(),
        max_discrepancy: approx.iter().map(|a| a.max_discrepancy.clone()).max().unwrap_or_else(Scalar::zero),
    })
}
