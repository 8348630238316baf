//! Command-line driver.
//!
//! Exit codes: 0 success (or the verdict holds), 1 a negative outcome with a
//! witness or an exhausted budget, 2 a usage or input error, 3 an internal
//! assertion failure.

mod manifest;
mod sweep;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use manifest::RunManifest;
pub use sweep::{run_sweep, SweepConfig};

use crate::approx::{compare_c, eps_approximant, ApproxConfig};
use crate::constructions::{clustered_family, perturbed_grid_family, upper_bound_audit, Layout, PerturbedFamily};
use crate::error::{Error, Result};
use crate::extraction::{extract_same_type, ExtractionConfig};
use crate::geometry::{parse_scalar, Family, PointSet, Scalar};
use crate::io;
use crate::partition::{build_partition_seeded, warren_audit};
use crate::sametype::{c_exact_with, same_type_family, same_type_family_via_transversal, CExactBudget};

#[derive(Parser, Debug)]
#[command(name = "sametype", version, about = "Same-type experiments on finite point families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Where to write the run manifest (default: next to --out, else stderr).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a family file.
    Gen(GenArgs),
    /// Decide the same-type property for every (d+1)-subfamily.
    Check(CheckArgs),
    /// Exact same-type constant of a small family.
    CExact(CExactArgs),
    /// Polynomial partition of one set.
    Partition(PartitionArgs),
    /// Extract a large same-type subfamily.
    Extract(ExtractArgs),
    /// Epsilon-approximants of every set, optionally comparing c.
    Approx(ApproxArgs),
    /// Grid upper-bound audit of a perturbed grid family.
    Audit(AuditArgs),
    /// Run a parameter sweep described by a TOML file, writing CSV.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum GenKind {
    Grid,
    Clustered,
    Mixed,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    pub kind: GenKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// Perturbation magnitude for grids (a rational).
    #[arg(long, default_value = "1/1000")]
    pub magnitude: String,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
pub enum CheckMethod {
    Tuple,
    Transversal,
    Both,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = CheckMethod::Both)]
    pub method: CheckMethod,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CExactArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 50_000_000)]
    pub max_nodes: u64,
    #[arg(long, default_value_t = 12)]
    pub max_set_size: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    /// A family file; the set chosen by --set is partitioned.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long = "J")]
    pub j: usize,
    #[arg(long, default_value_t = 0)]
    pub set: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub r: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_resample: u64,
    /// Fixed heavy-cell threshold denominator instead of 4k per set.
    #[arg(long)]
    pub threshold_denominator: Option<u64>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "1/10")]
    pub eps: String,
    #[arg(long, default_value = "1")]
    pub vc_constant: String,
    #[arg(long, default_value_t = 1000)]
    pub ranges: usize,
    /// Sample size instead of the bound from the VC dimension.
    #[arg(long)]
    pub size: Option<usize>,
    /// Also compute c exactly on the family and on the approximants.
    #[arg(long)]
    pub compare: bool,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    /// A family written by `gen grid`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value_t = 50_000_000)]
    pub max_nodes: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid points run concurrently (default: the config's `jobs`, else 1).
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Parses `std::env::args`, runs, and returns the exit code.
pub fn main() -> i32 {
    run_args(std::env::args_os())
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    run(cli)
}

/// Outcome of a subcommand: printed summary, JSON or CSV body, exit code.
struct Output {
    body: String,
    summary: String,
    code: i32,
    config: Value,
    inputs: Vec<PathBuf>,
}

pub fn run(cli: Cli) -> i32 {
    let start = Instant::now();
    let name = command_name(&cli.command);
    let out_path = out_of(&cli.command).cloned();
    match dispatch(&cli.command) {
        Ok(o) => {
            if let Err(e) = emit(&o.body, out_path.as_deref()) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            println!("{}", o.summary);
            let m = RunManifest::new(name, o.config, &o.inputs, out_path.as_deref(), start.elapsed());
            if let Err(e) = m.write(cli.manifest.as_deref(), out_path.as_deref()) {
                eprintln!("error: {e}");
                return e.exit_code();
            }
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Check(_) => "check",
        Command::CExact(_) => "c-exact",
        Command::Partition(_) => "partition",
        Command::Extract(_) => "extract",
        Command::Approx(_) => "approx",
        Command::Audit(_) => "audit",
        Command::Sweep(_) => "sweep",
    }
}

fn out_of(c: &Command) -> Option<&PathBuf> {
    match c {
        Command::Gen(a) => a.out.as_ref(),
        Command::Check(a) => a.out.as_ref(),
        Command::CExact(a) => a.out.as_ref(),
        Command::Partition(a) => a.out.as_ref(),
        Command::Extract(a) => a.out.as_ref(),
        Command::Approx(a) => a.out.as_ref(),
        Command::Audit(a) => a.out.as_ref(),
        Command::Sweep(a) => a.out.as_ref(),
    }
}

fn emit(body: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn read_family(path: &Path) -> Result<(Family, Option<Value>)> {
    let text = std::fs::read_to_string(path)?;
    io::parse_family(&text)
}

fn read_verified(path: &Path) -> Result<(Family, Option<Value>)> {
    let (mut f, prov) = read_family(path)?;
    f.verify().map_err(|v| Error::NotInGeneralPosition(v.to_string()))?;
    Ok((f, prov))
}

fn scalar_arg(s: &str, what: &str) -> Result<Scalar> {
    parse_scalar(s).map_err(|_| Error::InvalidInput(format!("--{what} must be a rational, got {s:?}")))
}

fn ok(body: String, summary: String, code: i32, config: Value, inputs: Vec<PathBuf>) -> Result<Output> {
    Ok(Output { body, summary, code, config, inputs })
}

/// Provenance block written by `gen grid`, enough to rebuild the grid.
pub fn grid_provenance(n: usize, d: usize, m: usize, magnitude: &Scalar, seed: u64) -> Value {
    json!({ "kind": "perturbed_grid", "n": n, "d": d, "m": m, "magnitude": magnitude.to_string(), "seed": seed })
}

/// Rebuilds a perturbed grid family from its provenance and checks that it
/// matches the stored sets.
pub fn rebuild_grid(f: &Family, prov: Option<&Value>) -> Result<PerturbedFamily> {
    let bad = || Error::InvalidInput("family has no perturbed_grid provenance; generate it with `gen grid`".into());
    let p = prov.ok_or_else(bad)?;
    if p.get("kind").and_then(Value::as_str) != Some("perturbed_grid") {
        return Err(bad());
    }
    let num = |k: &str| p.get(k).and_then(Value::as_u64).ok_or_else(bad);
    let magnitude = parse_scalar(p.get("magnitude").and_then(Value::as_str).ok_or_else(bad)?)?;
    let pf = perturbed_grid_family(num("n")? as usize, num("d")? as usize, num("m")? as usize, &magnitude, num("seed")?)?;
    if pf.family.sets() != f.sets() {
        return Err(Error::InvalidInput("stored sets differ from the regenerated grid family".into()));
    }
    Ok(pf)
}

fn dispatch(c: &Command) -> Result<Output> {
    match c {
        Command::Gen(a) => {
            let (f, prov) = match a.kind {
                GenKind::Grid => {
                    let mag = scalar_arg(&a.magnitude, "magnitude")?;
                    let pf = perturbed_grid_family(a.n, a.d, a.m, &mag, a.seed)?;
                    (pf.family, Some(grid_provenance(a.n, a.d, a.m, &mag, a.seed)))
                }
                GenKind::Clustered | GenKind::Mixed => {
                    let layout = if a.kind == GenKind::Mixed { Layout::Mixed } else { Layout::Clustered };
                    let f = clustered_family(a.m, a.d, a.n, layout, a.seed)?;
                    let kind = if a.kind == GenKind::Mixed { "mixed" } else { "clustered" };
                    (f, Some(json!({ "kind": kind, "n": a.n, "d": a.d, "m": a.m, "seed": a.seed })))
                }
            };
            let sizes: Vec<usize> = f.sets().iter().map(PointSet::len).collect();
            let config = prov.clone().unwrap_or(Value::Null);
            ok(io::family_json(&f, prov), format!("generated {} sets of sizes {sizes:?}", f.len()), 0, config, vec![])
        }
        Command::Check(a) => {
            let (f, _) = read_verified(&a.input)?;
            let tuple = matches!(a.method, CheckMethod::Tuple | CheckMethod::Both).then(|| same_type_family(&f)).transpose()?;
            let trans = matches!(a.method, CheckMethod::Transversal | CheckMethod::Both)
                .then(|| same_type_family_via_transversal(&f))
                .transpose()?;
            if let (Some(t), Some(h)) = (&tuple, &trans) {
                if t.holds != h.holds {
                    return Err(Error::AssertionFailed("orientation scan and transversal search disagree".into()));
                }
            }
            let holds = tuple.as_ref().or(trans.as_ref()).map(|v| v.holds).expect("one method runs");
            let body = io::to_string(&json!({
                "holds": holds,
                "tuple": tuple.as_ref().map(io::verdict_json),
                "transversal": trans.as_ref().map(io::verdict_json),
            }));
            let config = json!({ "method": format!("{:?}", a.method).to_lowercase() });
            ok(body, format!("same-type: {holds}"), if holds { 0 } else { 1 }, config, vec![a.input.clone()])
        }
        Command::CExact(a) => {
            let (f, _) = read_verified(&a.input)?;
            let budget = CExactBudget { max_set_size: a.max_set_size, max_nodes: a.max_nodes, ..CExactBudget::default() };
            let r = c_exact_with(&f, budget)?;
            let config = json!({ "max_nodes": a.max_nodes, "max_set_size": a.max_set_size });
            ok(io::to_string(&io::cresult_json(&r)), r.value.to_string(), 0, config, vec![a.input.clone()])
        }
        Command::Partition(a) => {
            let (f, _) = read_family(&a.input)?;
            if a.set >= f.len() {
                return Err(Error::InvalidInput(format!("--set {} out of range for {} sets", a.set, f.len())));
            }
            let p = build_partition_seeded(f.set(a.set), a.j, a.seed)?;
            let w = warren_audit(&p)?;
            let summary = format!(
                "{} cells, max cell {}, total degree {}, warren bound {}",
                p.cells.len(),
                p.max_cell(),
                p.total_degree(),
                w.bound
            );
            let config = json!({ "J": a.j, "set": a.set, "seed": a.seed });
            ok(io::to_string(&io::partition_json(&p, Some(&w))), summary, 0, config, vec![a.input.clone()])
        }
        Command::Extract(a) => {
            let (f, _) = read_verified(&a.input)?;
            let cfg = ExtractionConfig {
                r: a.r,
                heavy_threshold_denominator: a.threshold_denominator,
                max_resample: a.max_resample,
                seed: a.seed,
            };
            let r = extract_same_type(&f, &cfg)?;
            let summary = format!("fraction {} after {} resampling rounds", r.fraction, r.rounds);
            let config = serde_json::to_value(&cfg)?;
            ok(io::to_string(&io::extraction_json(&r)), summary, 0, config, vec![a.input.clone()])
        }
        Command::Approx(a) => {
            let (f, _) = read_verified(&a.input)?;
            let cfg = ApproxConfig {
                eps: scalar_arg(&a.eps, "eps")?,
                vc_constant: scalar_arg(&a.vc_constant, "vc-constant")?,
                seed: a.seed,
                range_samples: a.ranges,
                size_override: a.size,
            };
            let m = f.len();
            let sets: Vec<Value> = f
                .sets()
                .iter()
                .enumerate()
                .map(|(i, x)| {
                    let c = ApproxConfig { seed: crate::rng::derive(cfg.seed, 1000 + i as u64), ..cfg.clone() };
                    eps_approximant(x, m, &c).map(|ap| io::approximant_json(&ap))
                })
                .collect::<Result<_>>()?;
            let compare = a.compare.then(|| compare_c(&f, &cfg, CExactBudget::default())).transpose()?;
            let summary = match &compare {
                Some(c) => format!("c(X) = {}, c(A) = {}", c.c_x, c.c_a),
                None => format!("{} approximants", sets.len()),
            };
            let body = io::to_string(&json!({
                "eps": a.eps,
                "approximants": sets,
                "compare": compare.as_ref().map(io::compare_json),
            }));
            let config = json!({
                "eps": a.eps, "vc_constant": a.vc_constant, "ranges": a.ranges,
                "size": a.size, "compare": a.compare, "seed": a.seed,
            });
            ok(body, summary, 0, config, vec![a.input.clone()])
        }
        Command::Audit(a) => {
            let (f, prov) = read_verified(&a.input)?;
            let pf = rebuild_grid(&f, prov.as_ref())?;
            let budget = CExactBudget { max_nodes: a.max_nodes, ..CExactBudget::default() };
            let c = c_exact_with(&pf.family, budget)?;
            let r = upper_bound_audit(&pf, &c.indices)?;
            let all = r.inequalities.iter().all(|q| q.ok);
            let body = io::to_string(&json!({ "c": io::cresult_json(&c), "audit": io::upper_bound_json(&r) }));
            let summary = format!("c = {}, ratio bound {}, inequalities hold: {all}", c.value, r.ratio_bound);
            ok(body, summary, if all { 0 } else { 3 }, json!({ "max_nodes": a.max_nodes }), vec![a.input.clone()])
        }
        Command::Sweep(a) => {
            let text = std::fs::read_to_string(&a.config)?;
            let cfg: SweepConfig = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            let (csv, rows, failed) = run_sweep(&cfg, a.jobs)?;
            let config = serde_json::to_value(&cfg)?;
            let summary = format!("{rows} rows, {failed} failed");
            ok(csv, summary, 0, config, vec![a.config.clone()])
        }
    }
}
