//! JSON file formats.
//!
//! Every rational is a string, `"p/q"` in lowest terms or an integer. A
//! family file is
//!
//! ```json
//! { "dim": 2, "sets": [ { "label": "X1", "points": [["0", "1/2"], ["3", "-1"]] } ] }
//! ```
//!
//! with an optional `"provenance"` object recording how it was generated.
//! Object keys are emitted in sorted order, so equal inputs give
//! byte-identical files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::approx::{Approximant, CompareReport};
use crate::constructions::UpperBoundReport;
use crate::error::{Error, Result};
use crate::extraction::ExtractionReport;
use crate::geometry::{format_scalar, parse_scalar, Family, Hyperplane, Point, PointSet, Scalar, Sign};
use crate::partition::{MultiPoly, Partition, WarrenReport};
use crate::sametype::{CResult, SameTypeVerdict, Witness};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SetFile {
    pub label: String,
    pub points: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FamilyFile {
    pub dim: usize,
    pub sets: Vec<SetFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Value>,
}

pub fn point_strings(p: &Point) -> Vec<String> {
    p.coords().iter().map(format_scalar).collect()
}

pub fn set_file(s: &PointSet) -> SetFile {
    SetFile { label: s.label.clone(), points: s.points().iter().map(point_strings).collect() }
}

pub fn family_file(f: &Family, provenance: Option<Value>) -> FamilyFile {
    FamilyFile { dim: f.dim(), sets: f.sets().iter().map(set_file).collect(), provenance }
}

pub fn parse_set(s: &SetFile, dim: usize) -> Result<PointSet> {
    let pts = s
        .points
        .iter()
        .map(|p| {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            Point::parse(&p.iter().map(String::as_str).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(s.label.clone(), pts)
}

/// Parses a family file without certifying general position.
pub fn parse_family(text: &str) -> Result<(Family, Option<Value>)> {
    let file: FamilyFile = serde_json::from_str(text)?;
    let sets = file.sets.iter().map(|s| parse_set(s, file.dim)).collect::<Result<Vec<_>>>()?;
    Ok((Family::new(file.dim, sets)?, file.provenance))
}

pub fn family_json(f: &Family, provenance: Option<Value>) -> String {
    to_string(&serde_json::to_value(family_file(f, provenance)).expect("plain data"))
}

/// Pretty JSON with a trailing newline.
pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

fn sc(x: &Scalar) -> Value {
    Value::String(format_scalar(x))
}

fn points(ps: &[Point]) -> Value {
    Value::Array(ps.iter().map(|p| json!(point_strings(p))).collect())
}

fn tuple_key(t: &[usize]) -> String {
    t.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

pub fn hyperplane_json(h: &Hyperplane) -> Value {
    json!({ "normal": h.normal().iter().map(sc).collect::<Vec<_>>(), "offset": sc(h.offset()) })
}

pub fn verdict_json(v: &SameTypeVerdict) -> Value {
    let signs: Map<String, Value> = v.signs.iter().map(|(k, s)| (tuple_key(k), json!(s))).collect();
    let witness = match &v.witness {
        None => Value::Null,
        Some(Witness::OppositeTuples { subfamily, positive, negative }) => json!({
            "kind": "opposite_tuples",
            "subfamily": subfamily,
            "positive": points(positive),
            "negative": points(negative),
        }),
        Some(Witness::Transversal { subfamily, hyperplane }) => json!({
            "kind": "transversal",
            "subfamily": subfamily,
            "hyperplane": hyperplane_json(hyperplane),
        }),
    };
    json!({ "holds": v.holds, "signs": signs, "witness": witness })
}

pub fn cresult_json(r: &CResult) -> Value {
    json!({
        "value": sc(&r.value),
        "method": r.method,
        "indices": r.indices,
        "subsets": r.optimal_subsets.iter().map(set_file).collect::<Vec<_>>(),
    })
}

pub fn sign_string(v: &[Sign]) -> String {
    v.iter()
        .map(|s| match s {
            1 => '+',
            -1 => '-',
            _ => '0',
        })
        .collect()
}

pub fn parse_sign_string(s: &str) -> Result<Vec<Sign>> {
    s.chars()
        .map(|c| match c {
            '+' => Ok(1),
            '-' => Ok(-1),
            '0' => Ok(0),
            _ => Err(Error::Parse(format!("bad sign character {c:?}"))),
        })
        .collect()
}

pub fn poly_json(p: &MultiPoly) -> Value {
    let terms: Map<String, Value> = p
        .terms()
        .iter()
        .map(|(e, c)| (e.iter().map(u32::to_string).collect::<Vec<_>>().join(","), sc(c)))
        .collect();
    json!({ "dim": p.dim(), "degree": p.degree(), "terms": terms })
}

pub fn parse_poly(v: &Value) -> Result<MultiPoly> {
    let bad = |what: &str| Error::Parse(format!("polynomial: {what}"));
    let dim = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing dim"))? as usize;
    let terms = v.get("terms").and_then(Value::as_object).ok_or_else(|| bad("missing terms"))?;
    let mut out = Vec::with_capacity(terms.len());
    for (k, c) in terms {
        let e = if k.is_empty() {
            Vec::new()
        } else {
            k.split(',').map(|x| x.trim().parse::<u32>().map_err(|_| bad("bad exponent"))).collect::<Result<Vec<_>>>()?
        };
        if e.len() != dim {
            return Err(bad("exponent length"));
        }
        let c = c.as_str().ok_or_else(|| bad("coefficient must be a string"))?;
        out.push((e, parse_scalar(c)?));
    }
    Ok(MultiPoly::from_terms(dim, out))
}

pub fn partition_json(p: &Partition, warren: Option<&WarrenReport>) -> Value {
    let cells: Map<String, Value> = p.cells.iter().map(|(k, v)| (sign_string(k), json!(v))).collect();
    let on: Map<String, Value> = p.on_surface.iter().map(|(i, v)| (i.to_string(), json!(sign_string(v)))).collect();
    let stages: Vec<Value> = p
        .stages
        .iter()
        .map(|s| json!({ "budget": s.budget, "degree": s.degree, "cells_in": s.cells_in }))
        .collect();
    let mut v = json!({
        "dim": p.dim,
        "n": p.n,
        "polys": p.polys.iter().map(poly_json).collect::<Vec<_>>(),
        "cells": cells,
        "on_surface": on,
        "stages": stages,
        "total_degree": p.total_degree(),
        "max_cell": p.max_cell(),
    });
    if let Some(w) = warren {
        v["warren"] = json!({ "total_degree": w.total_degree, "realized": w.realized, "bound": w.bound.to_string() });
    }
    v
}

/// Polynomials and cells of a partition file.
pub fn parse_partition_cells(v: &Value) -> Result<(Vec<MultiPoly>, BTreeMap<Vec<Sign>, Vec<usize>>)> {
    let bad = |what: &str| Error::Parse(format!("partition: {what}"));
    let polys = v
        .get("polys")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing polys"))?
        .iter()
        .map(parse_poly)
        .collect::<Result<Vec<_>>>()?;
    let mut cells = BTreeMap::new();
    for (k, idx) in v.get("cells").and_then(Value::as_object).ok_or_else(|| bad("missing cells"))? {
        let idx: Vec<usize> = serde_json::from_value(idx.clone())?;
        cells.insert(parse_sign_string(k)?, idx);
    }
    Ok((polys, cells))
}

pub fn extraction_json(r: &ExtractionReport) -> Value {
    let sets: Vec<Value> = r
        .sets
        .iter()
        .map(|s| {
            json!({
                "k": s.k,
                "warren_bound": s.warren_bound.to_string(),
                "total_degree": s.total_degree,
                "threshold": sc(&s.threshold),
                "heavy_cells": s.heavy_cells,
                "light_points": s.light_points,
                "on_surface": s.on_surface,
            })
        })
        .collect();
    let edges: Map<String, Value> = r.edge_counts.iter().map(|(k, v)| (tuple_key(k), json!(v))).collect();
    json!({
        "config": r.config,
        "fraction": sc(&r.fraction),
        "indices": r.indices,
        "subsets": r.subsets.iter().map(set_file).collect::<Vec<_>>(),
        "verdict": verdict_json(&r.verdict),
        "sets": sets,
        "edge_counts": edges,
        "resample_rounds": r.rounds,
    })
}

pub fn approximant_json(a: &Approximant) -> Value {
    json!({
        "size": a.subset.len(),
        "formula_size": a.formula_size,
        "max_discrepancy": sc(&a.max_discrepancy),
        "ranges": a.ranges,
        "attempts": a.attempts,
        "indices": a.indices,
    })
}

pub fn compare_json(r: &CompareReport) -> Value {
    json!({
        "c_x": sc(&r.c_x),
        "c_a": sc(&r.c_a),
        "gap": sc(&r.gap),
        "eps": sc(&r.eps),
        "sizes": r.sizes,
        "approximant_sizes": r.approximant_sizes,
        "max_discrepancy": sc(&r.max_discrepancy),
    })
}

pub fn upper_bound_json(r: &UpperBoundReport) -> Value {
    let ineq: Vec<Value> = r
        .inequalities
        .iter()
        .map(|q| json!({ "name": q.name, "lhs": q.lhs.to_string(), "rhs": q.rhs.to_string(), "ok": q.ok }))
        .collect();
    json!({
        "z_sizes": r.z_sizes,
        "hyperplane_hits": r.hyperplane_hits,
        "incident": r.incident,
        "pigeon": r.pigeon,
        "inequalities": ineq,
        "ratio_bound": sc(&r.ratio_bound),
        "all_ok": r.inequalities.iter().all(|q| q.ok),
    })
}
