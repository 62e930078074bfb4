//! Command-line interface: `analyze`, `ceresa` and `export`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::abel_jacobi::w1_cycle;
use crate::arith::{fmt_rat, Matrix, Rat, Vector};
use crate::chain::{negate_cycle, translate, FramedChain};
use crate::curve::{classify_genus3, cycle_basis, parse_curve, MetricGraph};
use crate::error::Error;
use crate::homology::{
    alignment, ceresa_invariant, ceresa_report, period_generators, CeresaOptions, CeresaReport, PeriodLattice,
};
use crate::jacobian::{check_dicing, edge_functionals, symbolic_gram, DicingReport, JacobianData};
use crate::zonotope::build_zonotope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Numeric,
    Symbolic,
    Both,
}

#[derive(Debug, Parser)]
#[command(name = "tropjac", version, about = "Tropical Jacobians and the Ceresa obstruction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RunConfig {
    /// Curve file (JSON).
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory; defaults to the working directory for `export`,
    /// standard output otherwise.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Inferred from the lengths in the file when absent.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Replays a seeded random translation of W₁⁻ as a consistency check.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Genus, type, Gram matrix, periods and dicing check.
    Analyze(RunConfig),
    /// The Ceresa obstruction report.
    Ceresa(RunConfig),
    /// W₁, W₁⁻, the connecting chain and the zonotope as JSON files.
    Export(RunConfig),
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Validation { .. }
            | Error::Degenerate(_)
            | Error::UnknownEdge(_)
            | Error::SymbolicLengths
            | Error::SingularLattice(_) => 2,
            Error::WrongGenus { .. } => 3,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// The curve and the effective mode, after checking they agree.
pub fn load(cfg: &RunConfig) -> CliResult<(MetricGraph, Mode)> {
    let text = fs::read_to_string(&cfg.input)
        .map_err(|e| invalid(format!("cannot read {}: {e}", cfg.input.display())))?;
    let g = parse_curve(&text)?;
    let mode = match (cfg.mode, g.is_symbolic()) {
        (None, true) | (Some(Mode::Symbolic), true) => Mode::Symbolic,
        (None, false) => Mode::Numeric,
        (Some(Mode::Symbolic), false) => return Err(invalid("symbolic mode needs variable edge lengths")),
        (Some(m), true) => return Err(invalid(format!("{m:?} mode needs rational edge lengths").to_lowercase())),
        (Some(m), false) => m,
    };
    Ok((g, mode))
}

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

fn matrix_json<T: fmt::Display>(m: &Matrix<T>) -> Value {
    json!(m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn rat_matrix_json(m: &Matrix<Rat>) -> Value {
    json!(m.iter().map(|r| strings(r)).collect::<Vec<_>>())
}

fn dicing_json(d: &DicingReport) -> Value {
    json!({
        "totally_unimodular": d.totally_unimodular,
        "gram_identity": d.gram_identity,
        "passed": d.passed(),
    })
}

pub fn analyze(g: &MetricGraph, mode: Mode) -> CliResult<Value> {
    let genus = g.genus();
    let mut out = Map::new();
    out.insert("genus".into(), json!(genus));
    out.insert("vertices".into(), json!(g.vertices().len()));
    out.insert("edges".into(), json!(g.edges().len()));
    if genus == 3 {
        out.insert("type".into(), json!(classify_genus3(g)?.to_string()));
    }
    if genus == 0 {
        return Ok(Value::Object(out));
    }
    let basis = cycle_basis(g);
    let ids = |v: &[usize]| -> Vec<String> { v.iter().map(|&i| basis.edge_ids[i].clone()).collect() };
    let fs = edge_functionals(&basis);
    let mut jac = Map::new();
    jac.insert("tree".into(), json!(ids(&basis.tree)));
    jac.insert("cotree".into(), json!(ids(&basis.cotree)));
    jac.insert(
        "functionals".into(),
        Value::Object(fs.iter().map(|f| (f.edge.clone(), json!(f.coords))).collect()),
    );
    if matches!(mode, Mode::Numeric | Mode::Both) {
        let jd = JacobianData::with_basis(g, basis.clone())?;
        jac.insert("Q".into(), rat_matrix_json(&jd.q));
        jac.insert("dicing".into(), dicing_json(&jd.check_dicing()));
        if genus == 3 {
            let periods = period_generators(&jd.q)?;
            jac.insert("periods".into(), json!(strings(&periods)));
            jac.insert("lattice".into(), json!(PeriodLattice::new(periods).describe()));
        }
    }
    if matches!(mode, Mode::Symbolic | Mode::Both) {
        let sg = if g.is_symbolic() { g.clone() } else { g.symbolic_companion() };
        let q = symbolic_gram(&sg, &basis);
        let mut sym = Map::new();
        sym.insert("Q".into(), matrix_json(&q));
        sym.insert("dicing".into(), dicing_json(&check_dicing(&fs, &sg.symbolic_lengths(), &q)));
        if genus == 3 {
            let periods = period_generators(&q)?;
            sym.insert("periods".into(), json!(periods.iter().map(ToString::to_string).collect::<Vec<_>>()));
        }
        jac.insert("symbolic".into(), Value::Object(sym));
    }
    out.insert("jacobian".into(), Value::Object(jac));
    Ok(Value::Object(out))
}

/// A translation with small random rational coordinates.
pub fn seeded_shift(seed: u64, g: usize) -> Vector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g)
        .map(|_| Rat::new(rng.gen_range(-12i64..=12).into(), rng.gen_range(1i64..=6).into()))
        .collect()
}

pub fn report_json(r: &CeresaReport) -> Value {
    let mut out = Map::new();
    out.insert("genus".into(), json!(r.genus));
    if let Some(t) = &r.curve_type {
        out.insert("type".into(), json!(t));
    }
    if let Some(core) = &r.core {
        out.insert("type".into(), json!("K4 core"));
        out.insert("core".into(), json!(core));
    }
    if let Some(n) = &r.numeric {
        out.insert("invariant".into(), json!(fmt_rat(&n.residue)));
        out.insert("lattice".into(), json!(n.lattice.describe()));
        out.insert("method".into(), json!(n.method.to_string()));
    }
    out.insert("verdict".into(), json!(r.verdict.to_string()));
    if let Some(s) = &r.symbolic {
        out.insert(
            "symbolic".into(),
            json!({"invariant": s.reduced.to_string(), "member": s.member}),
        );
    }
    out.insert("chain_cells".into(), json!(r.chain_cells()));
    out.insert("k_range".into(), json!([r.k_range.0, r.k_range.1]));
    Value::Object(out)
}

pub fn ceresa(g: &MetricGraph, mode: Mode, seed: Option<u64>) -> CliResult<Value> {
    let numeric = matches!(mode, Mode::Numeric | Mode::Both);
    let symbolic = matches!(mode, Mode::Symbolic | Mode::Both);
    let report = ceresa_report(g, &CeresaOptions::default(), numeric, symbolic)?;
    let mut out = report_json(&report);
    if let (Some(seed), Some(n), Value::Object(map)) = (seed, &report.numeric, &mut out) {
        let target = match &report.core {
            Some(ids) => crate::curve::restrict_to_edges(g, ids)?,
            None => g.clone(),
        };
        let opts = CeresaOptions {
            shift: Some(seeded_shift(seed, 3)),
            ..Default::default()
        };
        let shifted = ceresa_invariant(&target, &opts)?;
        map.insert(
            "translation_check".into(),
            json!({
                "seed": seed,
                "invariant": fmt_rat(&shifted.residue),
                "agrees": shifted.residue == n.residue,
            }),
        );
    }
    Ok(out)
}

pub fn chain_json(c: &FramedChain) -> Value {
    json!({
        "k": c.k,
        "cells": c.cells.iter().map(|cell| json!({
            "vertices": cell.verts.iter().map(|v| strings(v)).collect::<Vec<_>>(),
            "framing": cell.framing.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// Files written by `export`, as (name, contents).
pub fn export_files(g: &MetricGraph) -> CliResult<Vec<(String, Value)>> {
    if g.is_symbolic() {
        return Err(invalid("export needs rational edge lengths"));
    }
    if g.genus() == 0 {
        return Err(CliError {
            code: 3,
            message: "a tree has a trivial Jacobian".into(),
        });
    }
    let jd = JacobianData::new(g)?;
    let w1 = w1_cycle(&jd)?;
    let mut files = vec![("w1.json".to_string(), chain_json(&w1))];
    let w1m = if jd.genus() == 3 {
        let t = alignment(&jd.basis, &jd.graph, &jd.lengths);
        let mut v = chain_json(&translate(&negate_cycle(&w1), &t));
        v["translation"] = json!(strings(&t));
        v
    } else {
        chain_json(&negate_cycle(&w1))
    };
    files.push(("w1_minus.json".into(), w1m));
    if jd.genus() == 3 {
        let inv = ceresa_invariant(g, &CeresaOptions::default())?;
        let mut v = chain_json(&inv.chain);
        v["method"] = json!(inv.method.to_string());
        v["integral"] = json!(fmt_rat(&inv.value));
        v["difference"] = chain_json(&inv.difference);
        files.push(("chain.json".into(), v));
    }
    files.push(("zonotope.json".into(), build_zonotope(&jd)?.to_json()));
    Ok(files)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn emit(cfg: &RunConfig, name: &str, v: &Value) -> CliResult<()> {
    match &cfg.output {
        Some(dir) => write_file(dir, name, v),
        None => {
            print!("{}", pretty(v));
            Ok(())
        }
    }
}

fn write_file(dir: &Path, name: &str, v: &Value) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| invalid(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, pretty(v)).map_err(|e| CliError {
        code: 1,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analyze(cfg) => {
            let (g, mode) = load(&cfg)?;
            emit(&cfg, "analysis.json", &analyze(&g, mode)?)
        }
        Command::Ceresa(cfg) => {
            let (g, mode) = load(&cfg)?;
            if cfg.verbose {
                eprintln!("genus {}, mode {mode:?}", g.genus());
            }
            emit(&cfg, "ceresa.json", &ceresa(&g, mode, cfg.seed)?)
        }
        Command::Export(cfg) => {
            let (g, _) = load(&cfg)?;
            let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from("."));
            for (name, v) in export_files(&g)? {
                if cfg.verbose {
                    eprintln!("writing {}", dir.join(&name).display());
                }
                write_file(&dir, &name, &v)?;
            }
            Ok(())
        }
    }
}
