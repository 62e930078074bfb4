//! The Ceresa obstruction: `∫ Ω₀` over a chain connecting W₁ and W₁⁻, taken
//! modulo the periods.

use std::fmt;

use crate::abel_jacobi::{vertex_image, w1_cycle};
use crate::arith::{add_vec, scale_vec, sub_vec, Rat, Ring, Vector};
use crate::chain::{canonicalize, integrate_omega0, negate_cycle, translate, FramedChain};
use crate::curve::{classify_genus3, cycle_basis, cycle_basis_with_tree, find_k4, restrict_to_edges, CycleBasis, MetricGraph};
use crate::error::{Error, Result};
use crate::jacobian::{edge_functionals, symbolic_gram, JacobianData};
use crate::poly::Poly;

use super::cone::cone_chain;
use super::cw::{build_cw, solve_boundary, DEFAULT_PLANE_BUDGET};
use super::periods::{period_generators, PeriodLattice, SymbolicPeriodLattice};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMethod {
    /// Arrangement first, cone when the arrangement exceeds the plane budget.
    Auto,
    Cw,
    Cone,
}

impl fmt::Display for ChainMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainMethod::Auto => "auto",
            ChainMethod::Cw => "cw",
            ChainMethod::Cone => "cone",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedInequivalent,
    Inconclusive,
    NoCertificate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CertifiedInequivalent => "certified-inequivalent",
            Verdict::Inconclusive => "inconclusive",
            Verdict::NoCertificate => "no certificate from this method",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CeresaOptions {
    /// Extra translation added to the alignment of W₁⁻.
    pub shift: Option<Vector>,
    /// Spanning tree edge ids; the breadth-first tree when absent.
    pub tree: Option<Vec<String>>,
    pub method: ChainMethod,
    pub plane_budget: usize,
}

impl Default for CeresaOptions {
    fn default() -> Self {
        CeresaOptions {
            shift: None,
            tree: None,
            method: ChainMethod::Auto,
            plane_budget: DEFAULT_PLANE_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CeresaInvariant {
    /// `∫ Ω₀` over the connecting chain.
    pub value: Rat,
    /// Class of `±value` in `[0, step/2]`.
    pub residue: Rat,
    pub lattice: PeriodLattice,
    pub verdict: Verdict,
    pub method: ChainMethod,
    pub difference: FramedChain,
    pub chain: FramedChain,
}

#[derive(Clone, Debug)]
pub struct SymbolicInvariant {
    pub value: Poly,
    pub reduced: Poly,
    pub member: bool,
    pub lattice: SymbolicPeriodLattice,
}

fn basis_for(g: &MetricGraph, tree: &Option<Vec<String>>) -> Result<CycleBasis> {
    match tree {
        Some(ids) => {
            let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
            cycle_basis_with_tree(g, &ids)
        }
        None => Ok(cycle_basis(g)),
    }
}

fn require_genus3(g: &MetricGraph) -> Result<()> {
    let found = g.genus();
    if found != 3 {
        return Err(Error::WrongGenus {
            expected: "3".into(),
            found,
        });
    }
    Ok(())
}

/// The translation taking the last cotree edge of W₁⁻ onto its W₁ image.
pub fn alignment<R: Ring>(basis: &CycleBasis, g: &MetricGraph, lengths: &[R]) -> Vec<R> {
    let fs = edge_functionals(basis);
    let x = *basis.cotree.last().expect("positive genus");
    let tail = vertex_image(basis, lengths, &g.edges()[x].tail).expect("tail vertex");
    let step = scale_vec(&lengths[x], &fs[x].to_ring::<R>());
    add_vec(&add_vec(&tail, &tail), &step)
}

/// W₁ − (W₁⁻ translated by the alignment plus `shift`), canonicalized.
pub fn difference_cycle(jd: &JacobianData, shift: Option<&Vector>) -> Result<FramedChain> {
    let torus = jd.torus()?;
    let w1 = w1_cycle(jd)?;
    let mut t = alignment(&jd.basis, &jd.graph, &jd.lengths);
    if let Some(d) = shift {
        t = add_vec(&t, d);
    }
    let w1m = translate(&negate_cycle(&w1), &t);
    Ok(canonicalize(&torus, &w1.minus(&w1m)))
}

/// Connecting chain for the difference cycle by the requested method; returns
/// the method actually used.
pub fn connecting_chain(
    jd: &JacobianData,
    diff: &FramedChain,
    method: ChainMethod,
    plane_budget: usize,
) -> Result<(FramedChain, ChainMethod)> {
    let torus = jd.torus()?;
    let via_cw = || -> Result<FramedChain> {
        let segments: Vec<(Vector, Vector)> = diff
            .cells
            .iter()
            .map(|c| (c.verts[0].clone(), c.verts[1].clone()))
            .collect();
        let cw = build_cw(&torus, &segments, plane_budget)?;
        solve_boundary(&cw, diff)
    };
    match method {
        ChainMethod::Cone => Ok((cone_chain(&torus, diff)?, ChainMethod::Cone)),
        ChainMethod::Cw => Ok((via_cw()?, ChainMethod::Cw)),
        ChainMethod::Auto => match via_cw() {
            Ok(c) => Ok((c, ChainMethod::Cw)),
            Err(Error::UnsupportedChain(_)) => Ok((cone_chain(&torus, diff)?, ChainMethod::Cone)),
            Err(e) => Err(e),
        },
    }
}

pub fn ceresa_invariant(g: &MetricGraph, options: &CeresaOptions) -> Result<CeresaInvariant> {
    require_genus3(g)?;
    let jd = JacobianData::with_basis(g, basis_for(g, &options.tree)?)?;
    let diff = difference_cycle(&jd, options.shift.as_ref())?;
    let (chain, method) = connecting_chain(&jd, &diff, options.method, options.plane_budget)?;
    let value = integrate_omega0(&chain)?;
    let lattice = PeriodLattice::new(period_generators(&jd.q)?);
    let verdict = if lattice.contains(&value) {
        Verdict::Inconclusive
    } else {
        Verdict::CertifiedInequivalent
    };
    Ok(CeresaInvariant {
        residue: lattice.symmetric_residue(&value),
        value,
        lattice,
        verdict,
        method,
        difference: diff,
        chain,
    })
}

/// Closed form of the invariant for the aligned difference: its `eₖ`-framed
/// part is a closed polygon in V (the k-th cycle followed by its reflection),
/// so the integral is the sum of the polygons' areas in the `(k+1, k+2)`
/// coordinate planes.
pub fn stokes_integral<R: Ring>(basis: &CycleBasis, g: &MetricGraph, lengths: &[R]) -> Result<R> {
    if basis.genus() != 3 {
        return Err(Error::WrongGenus {
            expected: "3".into(),
            found: basis.genus(),
        });
    }
    let fs = edge_functionals(basis);
    let s0 = alignment(basis, g, lengths);
    let mut total = R::zero();
    for (k, path) in basis.paths.iter().enumerate() {
        let mut pts = vec![vertex_image(basis, lengths, &path.start).expect("start vertex")];
        for &(e, s) in &path.steps {
            let step = scale_vec(&(R::from_int(i64::from(s)) * lengths[e].clone()), &fs[e].to_ring::<R>());
            let next = add_vec(pts.last().expect("nonempty"), &step);
            pts.push(next);
        }
        let mirrored: Vec<Vec<R>> = pts.iter().map(|p| sub_vec(&s0, p)).collect();
        pts.extend(mirrored);
        let (a, b) = ((k + 1) % 3, (k + 2) % 3);
        let n = pts.len();
        let mut twice = R::zero();
        for i in 0..n {
            let (u, w) = (&pts[i], &pts[(i + 1) % n]);
            twice = twice + u[a].clone() * w[b].clone() - u[b].clone() * w[a].clone();
        }
        total = total + twice;
    }
    Ok(total.scale_rat(&Rat::new(1.into(), 2.into())))
}

pub fn symbolic_invariant(g: &MetricGraph, tree: &Option<Vec<String>>) -> Result<SymbolicInvariant> {
    require_genus3(g)?;
    let sg = if g.is_symbolic() { g.clone() } else { g.symbolic_companion() };
    let basis = basis_for(&sg, tree)?;
    let lengths = sg.symbolic_lengths();
    let value = stokes_integral(&basis, &sg, &lengths)?;
    let lattice = SymbolicPeriodLattice::new(period_generators(&symbolic_gram(&sg, &basis))?);
    Ok(SymbolicInvariant {
        reduced: lattice.reduce(&value),
        member: lattice.contains(&value),
        value,
        lattice,
    })
}

#[derive(Clone, Debug)]
pub struct CeresaReport {
    pub genus: usize,
    pub curve_type: Option<String>,
    /// Edge ids of the K₄ core when the input has higher genus.
    pub core: Option<Vec<String>>,
    pub numeric: Option<CeresaInvariant>,
    pub symbolic: Option<SymbolicInvariant>,
    pub verdict: Verdict,
    pub k_range: (usize, usize),
}

impl CeresaReport {
    pub fn chain_cells(&self) -> usize {
        self.numeric.as_ref().map_or(0, |n| n.chain.len())
    }
}

/// Genus 3 runs directly; higher genus reduces to the first K₄ core, whose
/// obstruction survives the projection to every W_k with `1 ≤ k ≤ g−2`.
pub fn ceresa_report(g: &MetricGraph, options: &CeresaOptions, numeric: bool, symbolic: bool) -> Result<CeresaReport> {
    let genus = g.genus();
    if genus < 3 {
        return Err(Error::WrongGenus {
            expected: "at least 3".into(),
            found: genus,
        });
    }
    let k_range = (1, genus - 2);
    let (target, core, curve_type) = if genus == 3 {
        (g.clone(), None, Some(classify_genus3(g)?.to_string()))
    } else {
        match find_k4(g) {
            Some(ids) => (restrict_to_edges(g, &ids)?, Some(ids), None),
            None => {
                return Ok(CeresaReport {
                    genus,
                    curve_type: None,
                    core: None,
                    numeric: None,
                    symbolic: None,
                    verdict: Verdict::NoCertificate,
                    k_range,
                })
            }
        }
    };
    let numeric = if numeric && !target.is_symbolic() {
        let mut opts = options.clone();
        if core.is_some() {
            opts.tree = None;
        }
        Some(ceresa_invariant(&target, &opts)?)
    } else {
        None
    };
    let symbolic = if symbolic || target.is_symbolic() {
        let tree = if core.is_some() { None } else { options.tree.clone() };
        Some(symbolic_invariant(&target, &tree)?)
    } else {
        None
    };
    let certified = numeric.as_ref().map_or(false, |n| n.verdict == Verdict::CertifiedInequivalent)
        || (numeric.is_none() && symbolic.as_ref().map_or(false, |s| !s.member));
    Ok(CeresaReport {
        genus,
        curve_type,
        core,
        numeric,
        symbolic,
        verdict: if certified {
            Verdict::CertifiedInequivalent
        } else {
            Verdict::Inconclusive
        },
        k_range,
    })
}
