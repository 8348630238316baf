//! Parameter sweeps: a TOML file names a command and a grid of parameter
//! lists; every point of the Cartesian product becomes one CSV row.
//!
//! ```toml
//! command = "partition"
//! jobs = 4
//!
//! [grid]
//! n = [64, 128]
//! J = [1, 2, 3, 4]
//! seed = [1]
//! ```
//!
//! Parameters missing from the grid take their defaults. Rational columns
//! are exact strings; the `_f64` columns are for display only.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{compare_c, eps_approximant, ApproxConfig};
use crate::constructions::{clustered_family, perturbed_grid_family, upper_bound_audit, Layout};
use crate::error::{Error, Result};
use crate::extraction::{extract_same_type, ExtractionConfig};
use crate::geometry::{parse_scalar, scalar_to_f64, Scalar};
use crate::partition::{build_partition_seeded, warren_audit};
use crate::rng;
use crate::sametype::{c_exact_with, CExactBudget};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub command: String,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub grid: BTreeMap<String, Vec<toml::Value>>,
}

/// One grid point: parameter names to values.
type Params = BTreeMap<String, toml::Value>;

struct Spec {
    params: &'static [(&'static str, &'static str)],
    measured: &'static [&'static str],
    run: fn(&Params) -> Result<Vec<String>>,
}

fn spec(command: &str) -> Result<Spec> {
    Ok(match command {
        "partition" => Spec {
            params: &[("n", "64"), ("d", "2"), ("J", "1"), ("seed", "0")],
            measured: &["max_cell", "degree_sum", "cells_realized", "warren_bound", "on_surface"],
            run: partition_row,
        },
        "extract" => Spec {
            params: &[("n", "200"), ("d", "2"), ("m", "5"), ("r", "16"), ("layout", "clustered"), ("seed", "0")],
            measured: &["fraction", "fraction_f64", "rounds", "min_subset", "edges"],
            run: extract_row,
        },
        "grid" => Spec {
            params: &[("n", "5"), ("d", "2"), ("m", "3"), ("magnitude", "1/1000"), ("seed", "0")],
            measured: &["c", "c_f64", "ratio_bound", "ratio_bound_f64", "audit_ok"],
            run: grid_row,
        },
        "approx" => Spec {
            params: &[
                ("n", "8"),
                ("d", "2"),
                ("m", "3"),
                ("eps", "1/4"),
                ("size", "0"),
                ("layout", "mixed"),
                ("seed", "0"),
            ],
            measured: &["max_discrepancy", "max_discrepancy_f64", "c_x", "c_x_f64", "c_a", "c_a_f64"],
            run: approx_row,
        },
        other => {
            return Err(Error::Config(format!(
                "unknown sweep command {other:?}; expected partition, extract, grid or approx"
            )))
        }
    })
}

fn text(p: &Params, k: &str) -> Result<String> {
    match p.get(k) {
        Some(toml::Value::String(s)) => Ok(s.clone()),
        Some(toml::Value::Integer(i)) => Ok(i.to_string()),
        Some(v) => Err(Error::Config(format!("parameter {k} has unsupported value {v}"))),
        None => Err(Error::Config(format!("parameter {k} missing"))),
    }
}

fn uint(p: &Params, k: &str) -> Result<u64> {
    text(p, k)?.parse().map_err(|_| Error::Config(format!("parameter {k} must be a nonnegative integer")))
}

fn rational(p: &Params, k: &str) -> Result<Scalar> {
    parse_scalar(&text(p, k)?)
}

fn layout(p: &Params) -> Result<Layout> {
    match text(p, "layout")?.as_str() {
        "clustered" => Ok(Layout::Clustered),
        "mixed" => Ok(Layout::Mixed),
        other => Err(Error::Config(format!("layout must be clustered or mixed, got {other:?}"))),
    }
}

fn exact(x: &Scalar) -> [String; 2] {
    [x.to_string(), scalar_to_f64(x).to_string()]
}

fn partition_row(p: &Params) -> Result<Vec<String>> {
    let (n, d, seed) = (uint(p, "n")? as usize, uint(p, "d")? as usize, uint(p, "seed")?);
    let f = clustered_family(1, d, n, Layout::Clustered, seed)?;
    let part = build_partition_seeded(f.set(0), uint(p, "J")? as usize, rng::derive(seed, 1))?;
    let w = warren_audit(&part)?;
    Ok(vec![
        part.max_cell().to_string(),
        part.total_degree().to_string(),
        w.realized.to_string(),
        w.bound.to_string(),
        part.on_surface.len().to_string(),
    ])
}

fn extract_row(p: &Params) -> Result<Vec<String>> {
    let (n, d, m, seed) = (uint(p, "n")? as usize, uint(p, "d")? as usize, uint(p, "m")? as usize, uint(p, "seed")?);
    let f = clustered_family(m, d, n, layout(p)?, seed)?;
    let r = extract_same_type(&f, &ExtractionConfig::new(uint(p, "r")?, seed))?;
    let [fr, fr64] = exact(&r.fraction);
    Ok(vec![
        fr,
        fr64,
        r.rounds.to_string(),
        r.subsets.iter().map(|s| s.len()).min().unwrap_or(0).to_string(),
        r.edge_counts.values().sum::<usize>().to_string(),
    ])
}

fn grid_row(p: &Params) -> Result<Vec<String>> {
    let (n, d, m) = (uint(p, "n")? as usize, uint(p, "d")? as usize, uint(p, "m")? as usize);
    let pf = perturbed_grid_family(n, d, m, &rational(p, "magnitude")?, uint(p, "seed")?)?;
    let c = c_exact_with(&pf.family, CExactBudget::default())?;
    let audit = upper_bound_audit(&pf, &c.indices)?;
    let holds = audit.inequalities.iter().all(|q| q.ok);
    let [cv, cf] = exact(&c.value);
    let [rb, rf] = exact(&audit.ratio_bound);
    Ok(vec![cv, cf, rb, rf, holds.to_string()])
}

fn approx_row(p: &Params) -> Result<Vec<String>> {
    let (n, d, m, seed) = (uint(p, "n")? as usize, uint(p, "d")? as usize, uint(p, "m")? as usize, uint(p, "seed")?);
    let f = clustered_family(m, d, n, layout(p)?, seed)?;
    let size = uint(p, "size")? as usize;
    let cfg = ApproxConfig {
        size_override: (size > 0).then_some(size),
        ..ApproxConfig::new(rational(p, "eps")?, seed)
    };
    let mut out = Vec::new();
    let mut worst = Scalar::from_integer(0.into());
    for (i, x) in f.sets().iter().enumerate() {
        let c = ApproxConfig { seed: rng::derive(seed, 1000 + i as u64), ..cfg.clone() };
        worst = worst.max(eps_approximant(x, m, &c)?.max_discrepancy);
    }
    out.extend(exact(&worst));
    let r = compare_c(&f, &cfg, CExactBudget::default())?;
    out.extend(exact(&r.c_x));
    out.extend(exact(&r.c_a));
    Ok(out)
}

/// Runs every grid point and renders the CSV. Returns the CSV text, the row
/// count and the number of failed rows.
pub fn run_sweep(cfg: &SweepConfig, jobs: Option<usize>) -> Result<(String, usize, usize)> {
    let spec = spec(&cfg.command)?;
    if let Some(k) = cfg.grid.keys().find(|k| !spec.params.iter().any(|(p, _)| p == k)) {
        return Err(Error::Config(format!("parameter {k:?} is not used by {:?}", cfg.command)));
    }
    let mut points: Vec<Params> = Vec::new();
    if !cfg.grid.is_empty() && cfg.grid.values().all(|v| !v.is_empty()) {
        let keys: Vec<&String> = cfg.grid.keys().collect();
        let lens: Vec<usize> = keys.iter().map(|k| cfg.grid[*k].len()).collect();
        crate::combinatorics::for_each_product(&lens, |idx| {
            let mut p: Params =
                spec.params.iter().map(|(k, v)| (k.to_string(), toml::Value::String(v.to_string()))).collect();
            for (k, &i) in keys.iter().zip(idx) {
                p.insert((*k).clone(), cfg.grid[*k][i].clone());
            }
            points.push(p);
            true
        });
    }
    let jobs = jobs.or(cfg.jobs).unwrap_or(1).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rows: Vec<(Vec<String>, Result<Vec<String>>)> = pool.install(|| {
        points
            .par_iter()
            .map(|p| {
                let params = spec.params.iter().map(|(k, _)| text(p, k).unwrap_or_default()).collect();
                (params, (spec.run)(p))
            })
            .collect()
    });

    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<&str> =
        spec.params.iter().map(|(k, _)| *k).chain(spec.measured.iter().copied()).chain(["ok", "error"]).collect();
    w.write_record(&header).map_err(csv_err)?;
    let mut failed = 0;
    for (params, r) in &rows {
        let mut rec = params.clone();
        match r {
            Ok(vals) => {
                rec.extend(vals.iter().cloned());
                rec.extend(["true".to_string(), String::new()]);
            }
            Err(e) => {
                failed += 1;
                rec.extend(std::iter::repeat_n(String::new(), spec.measured.len()));
                rec.extend(["false".to_string(), e.to_string()]);
            }
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok((String::from_utf8(bytes).expect("csv is utf-8"), rows.len(), failed))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}
