//! The Voronoi zonotope of a Jacobian: Minkowski sum of the zone segments
//! `[−½αₑeₑ, ½αₑeₑ]`, with faces indexed by covectors of the arrangement
//! `{eₑ^⊥}`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{add_vec, det3, dot, fmt_rat, int_to_rat, lex_cmp, rank, rat, scale_vec, sub_vec, Rat, Vector};
use crate::curve::{contract_tracked, normalize_tracked, EdgeMap, MetricGraph};
use crate::error::{Error, Result};
use crate::jacobian::JacobianData;
use crate::snf::integer_kernel;

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub edge: String,
    pub direction: Vec<i64>,
    pub scale: Rat,
}

impl Generator {
    fn vector(&self) -> Vector {
        self.direction.iter().map(|&x| rat(x) * &self.scale).collect()
    }
}

pub type Covector = Vec<i8>;

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub covector: Covector,
    pub dim: usize,
    /// Indices into [`Zonotope::vertices`].
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Zonotope {
    pub dim: usize,
    pub generators: Vec<Generator>,
    pub vertices: Vec<Vector>,
    pub vertex_covectors: Vec<Covector>,
    pub faces: Vec<Face>,
}

/// `a·y ≥ b` for all rows has a solution (Fourier–Motzkin elimination).
fn feasible(mut rows: Vec<(Vector, Rat)>, nvars: usize) -> bool {
    for v in 0..nvars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for (a, b) in rows {
            if a[v].is_positive() {
                pos.push((a, b));
            } else if a[v].is_negative() {
                neg.push((a, b));
            } else {
                rest.push((a, b));
            }
        }
        for (ap, bp) in &pos {
            for (an, bn) in &neg {
                let (sp, sn) = (-an[v].clone(), ap[v].clone());
                let a: Vector = ap.iter().zip(an).map(|(x, y)| x * &sp + y * &sn).collect();
                rest.push((a, bp * &sp + bn * &sn));
            }
        }
        rest.sort_by(|x, y| lex_cmp(&x.0, &y.0).then(x.1.cmp(&y.1)));
        rest.dedup();
        rows = rest;
    }
    rows.iter().all(|(_, b)| !b.is_positive())
}

/// Some linear functional realizes the partial sign vector `signs` on the
/// first `signs.len()` directions.
fn realizable(dirs: &[Vec<i64>], signs: &[i8], dim: usize) -> bool {
    let zero_rows: Vec<Vec<BigInt>> = dirs
        .iter()
        .zip(signs)
        .filter(|(_, &s)| s == 0)
        .map(|(d, _)| d.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let basis: Vec<Vector> = if zero_rows.is_empty() {
        (0..dim)
            .map(|i| (0..dim).map(|j| rat(i64::from(i == j))).collect())
            .collect()
    } else {
        integer_kernel(&zero_rows, dim)
            .iter()
            .map(|v| v.iter().map(int_to_rat).collect())
            .collect()
    };
    let rows: Vec<(Vector, Rat)> = dirs
        .iter()
        .zip(signs)
        .filter(|(_, &s)| s != 0)
        .map(|(d, &s)| {
            let dr: Vector = d.iter().map(|&x| rat(x * i64::from(s))).collect();
            (basis.iter().map(|k| dot(&dr, k)).collect(), Rat::one())
        })
        .collect();
    if basis.is_empty() {
        return rows.is_empty();
    }
    feasible(rows, basis.len())
}

fn covectors(dirs: &[Vec<i64>], dim: usize) -> Vec<Covector> {
    let mut out = Vec::new();
    let mut stack: Vec<Covector> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == dirs.len() {
            out.push(prefix);
            continue;
        }
        for s in [1i8, 0, -1] {
            let mut next = prefix.clone();
            next.push(s);
            if realizable(&dirs[..next.len()], &next, dim) {
                stack.push(next);
            }
        }
    }
    out.sort();
    out
}

fn zero_set_rank(dirs: &[Vec<i64>], covector: &[i8]) -> usize {
    let m: Vec<Vector> = dirs
        .iter()
        .zip(covector)
        .filter(|(_, &s)| s == 0)
        .map(|(d, _)| d.iter().map(|&x| rat(x)).collect())
        .collect();
    if m.is_empty() {
        0
    } else {
        rank(&m)
    }
}

impl Zonotope {
    /// Zero directions and zero scales are dropped.
    pub fn new(dim: usize, generators: Vec<Generator>) -> Result<Self> {
        let generators: Vec<Generator> = generators
            .into_iter()
            .filter(|g| g.direction.iter().any(|&x| x != 0) && !g.scale.is_zero())
            .collect();
        if generators.iter().any(|g| g.direction.len() != dim || g.scale.is_negative()) {
            return Err(Error::Dimension("zone vector of the wrong size or sign".into()));
        }
        let dirs: Vec<Vec<i64>> = generators.iter().map(|g| g.direction.clone()).collect();
        let full = vec![0i8; dirs.len()];
        if dim > 0 && zero_set_rank(&dirs, &full) < dim {
            return Err(Error::WrongRank(format!("zone vectors do not span ℝ^{dim}")));
        }
        let all = covectors(&dirs, dim);
        let vertex_covectors: Vec<Covector> = all.iter().filter(|c| c.iter().all(|&s| s != 0)).cloned().collect();
        let vertices: Vec<Vector> = vertex_covectors
            .iter()
            .map(|c| {
                generators.iter().zip(c).fold(vec![Rat::zero(); dim], |acc, (g, &s)| {
                    add_vec(&acc, &scale_vec(&Rat::new(BigInt::from(s), BigInt::from(2)), &g.vector()))
                })
            })
            .collect();
        let faces = all
            .into_iter()
            .map(|c| {
                let dim_face = zero_set_rank(&dirs, &c);
                let verts = vertex_covectors
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.iter().zip(&c).all(|(a, b)| *b == 0 || a == b))
                    .map(|(i, _)| i)
                    .collect();
                Face {
                    covector: c,
                    dim: dim_face,
                    vertices: verts,
                }
            })
            .collect();
        Ok(Zonotope {
            dim,
            generators,
            vertices,
            vertex_covectors,
            faces,
        })
    }

    pub fn faces_of_dim(&self, k: usize) -> Vec<&Face> {
        self.faces.iter().filter(|f| f.dim == k).collect()
    }

    pub fn facets(&self) -> Vec<&Face> {
        if self.dim == 0 {
            return Vec::new();
        }
        self.faces_of_dim(self.dim - 1)
    }

    pub fn vertex_set(&self) -> BTreeSet<Vector> {
        self.vertices.iter().cloned().collect()
    }

    /// Facet vertex indices, counterclockwise seen from outside in dimension 3.
    pub fn facet_cycles(&self) -> Vec<Vec<usize>> {
        self.facets()
            .into_iter()
            .map(|f| {
                if self.dim != 3 {
                    return f.vertices.clone();
                }
                let pts: Vec<&Vector> = f.vertices.iter().map(|&i| &self.vertices[i]).collect();
                let n = pts.len();
                let centroid: Vector = (0..3)
                    .map(|k| pts.iter().map(|p| p[k].clone()).sum::<Rat>() / rat(n as i64))
                    .collect();
                let zone: Vec<Vector> = self
                    .generators
                    .iter()
                    .zip(&f.covector)
                    .filter(|(_, &s)| s == 0)
                    .map(|(g, _)| g.direction.iter().map(|&x| rat(x)).collect())
                    .collect();
                let mut normal = zone
                    .iter()
                    .flat_map(|a| zone.iter().map(move |b| crate::arith::cross(a, b)))
                    .find(|c| !crate::arith::is_zero_vec(c))
                    .expect("facet spans a plane");
                if dot(&normal, &centroid).is_negative() {
                    normal = normal.iter().map(|x| -x).collect();
                }
                let mut order = f.vertices.clone();
                let v0 = order.remove(0);
                let p0 = self.vertices[v0].clone();
                order.sort_by(|&a, &b| {
                    let d = det3(&sub_vec(&self.vertices[a], &p0), &sub_vec(&self.vertices[b], &p0), &normal);
                    d.cmp(&Rat::zero()).reverse()
                });
                order.insert(0, v0);
                order
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Vec<String>> = self.vertices.iter().map(|v| v.iter().map(fmt_rat).collect()).collect();
        json!({
            "dim": self.dim,
            "vertices": vertices,
            "facets": self.facet_cycles(),
        })
    }
}

pub fn build_zonotope(jd: &JacobianData) -> Result<Zonotope> {
    let generators = jd
        .graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| Generator {
            edge: e.id.clone(),
            direction: jd.functionals[i].coords.clone(),
            scale: jd.lengths[i].clone(),
        })
        .collect();
    Zonotope::new(jd.genus(), generators)
}

fn apply_map(u: &[Vec<i64>], v: &[Rat]) -> Vector {
    u.iter()
        .map(|row| row.iter().zip(v).map(|(&a, x)| rat(a) * x).sum())
        .collect()
}

fn apply_int(u: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    u.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Pushes each cycle of `jd` through an edge map into the cycle coordinates
/// of `target`: row `j` of the result is `π(γᵢ)` read off on the `j`-th
/// cotree edge.
fn pushforward(jd: &JacobianData, map: &EdgeMap, target: &JacobianData) -> Vec<Vec<i64>> {
    let tg = target.genus();
    let mut out = vec![vec![0i64; jd.genus()]; tg];
    for (i, row) in jd.basis.matrix.iter().enumerate() {
        let mut image: BTreeMap<String, i64> = BTreeMap::new();
        for (e, edge) in jd.graph.edges().iter().enumerate() {
            if let Some(Some((id, s))) = map.get(&edge.id) {
                image.entry(id.clone()).or_insert(row[e] * i64::from(*s));
            }
        }
        for (j, &c) in target.basis.cotree.iter().enumerate() {
            let id = &target.graph.edges()[c].id;
            out[j][i] = image.get(id).copied().unwrap_or(0);
        }
    }
    out
}

/// Lifts cycles of `target` back to cycle coordinates of `jd` when `target`
/// is a subgraph of `jd` up to merging: row `j` is the j-th cycle of `target`.
fn pullback_cycles(jd: &JacobianData, map: &EdgeMap, target: &JacobianData) -> Vec<Vec<i64>> {
    let index: BTreeMap<&str, usize> = target
        .graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.id.as_str(), i))
        .collect();
    target
        .basis
        .matrix
        .iter()
        .map(|row| {
            jd.basis
                .cotree
                .iter()
                .map(|&c| match map.get(&jd.graph.edges()[c].id) {
                    Some(Some((id, s))) => row[index[id.as_str()]] * i64::from(*s),
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct Projection {
    pub deleted: Option<MetricGraph>,
    /// Restriction of functionals to the deleted curve's cycle lattice.
    pub map: Vec<Vec<i64>>,
    pub zonotope: Zonotope,
    /// Image of the zone vectors of the original curve under `map`.
    pub image: Zonotope,
    pub verified: bool,
}

/// 𝒵 of the curve with edge `e` deleted, compared with the projection of 𝒵
/// along the zone vector of `e`.
pub fn project_zonotope(jd: &JacobianData, e: &str) -> Result<Projection> {
    let idx = jd.graph.edge_index(e)?;
    if jd.functionals[idx].is_zero() {
        return Err(Error::BridgeEdge(e.to_string()));
    }
    let original = build_zonotope(jd)?;
    let reduced = jd.graph.without_edges(&[e])?;
    if reduced.genus() == 0 {
        let point = Zonotope::new(0, Vec::new())?;
        return Ok(Projection {
            deleted: None,
            map: Vec::new(),
            zonotope: point.clone(),
            image: point,
            verified: true,
        });
    }
    let (h, map) = normalize_tracked(&reduced)?;
    let jh = JacobianData::new(&h)?;
    let u = pullback_cycles(jd, &map, &jh);
    let zonotope = build_zonotope(&jh)?;
    let image = Zonotope::new(
        jh.genus(),
        original
            .generators
            .iter()
            .map(|g| Generator {
                edge: g.edge.clone(),
                direction: apply_int(&u, &g.direction),
                scale: g.scale.clone(),
            })
            .collect(),
    )?;
    let projected: BTreeSet<Vector> = original.vertices.iter().map(|v| apply_map(&u, v)).collect();
    let verified = image.vertex_set() == zonotope.vertex_set() && zonotope.vertex_set().is_subset(&projected);
    Ok(Projection {
        deleted: Some(h),
        map: u,
        zonotope,
        image,
        verified,
    })
}

#[derive(Clone, Debug)]
pub struct ContractionFace {
    pub face: Face,
    pub codim: usize,
    pub contracted: Option<MetricGraph>,
    /// Comparison with 𝒵 of the contracted curve; `None` when the subcurve
    /// has bridges and no comparison is made.
    pub verified: Option<bool>,
}

fn flow_signs(jd: &JacobianData, cycles: &[Vec<BigInt>], sub: &BTreeSet<usize>) -> Vec<i8> {
    let m = jd.graph.edges().len();
    let flow_of = |c: &[BigInt], e: usize| -> BigInt {
        (0..jd.genus()).map(|i| &c[i] * BigInt::from(jd.basis.matrix[i][e])).sum()
    };
    let mut p = BigInt::from(2);
    loop {
        let mut w = vec![BigInt::zero(); jd.genus()];
        let mut t = BigInt::one();
        for c in cycles {
            for (x, y) in w.iter_mut().zip(c) {
                *x += &t * y;
            }
            t *= &p;
        }
        let ok = sub.iter().all(|&e| {
            let used = cycles.iter().any(|c| !flow_of(c, e).is_zero());
            !used || !flow_of(&w, e).is_zero()
        });
        if ok {
            return (0..m)
                .map(|e| {
                    let f = flow_of(&w, e);
                    if f.is_positive() {
                        1
                    } else if f.is_negative() {
                        -1
                    } else {
                        0
                    }
                })
                .collect();
        }
        p += 1;
    }
}

/// The face of 𝒵 selected by a generic flow on the subcurve `sub`.
pub fn contraction_face(jd: &JacobianData, sub: &[&str]) -> Result<ContractionFace> {
    let z = build_zonotope(jd)?;
    let mut idx = BTreeSet::new();
    for id in sub {
        idx.insert(jd.graph.edge_index(id).map_err(|_| Error::NotASubcurve(format!("unknown edge {id:?}")))?);
    }
    let contracted = contract_tracked(&jd.graph, sub).map_err(|e| match e {
        Error::DisconnectedSubcurve(ids) => Error::NotASubcurve(format!("{ids:?} is not connected")),
        other => other,
    });
    // Cycles supported on the subcurve.
    let rows: Vec<Vec<BigInt>> = (0..jd.graph.edges().len())
        .filter(|e| !idx.contains(e))
        .map(|e| (0..jd.genus()).map(|i| BigInt::from(jd.basis.matrix[i][e])).collect())
        .collect();
    let cycles = if rows.is_empty() {
        (0..jd.genus())
            .map(|i| (0..jd.genus()).map(|j| BigInt::from(i64::from(i == j))).collect())
            .collect()
    } else {
        integer_kernel(&rows, jd.genus())
    };
    if cycles.is_empty() {
        contracted?;
        let face = z.faces.iter().find(|f| f.dim == z.dim).cloned().expect("top face");
        return Ok(ContractionFace {
            face,
            codim: 0,
            contracted: None,
            verified: Some(true),
        });
    }
    let signs = flow_signs(jd, &cycles, &idx);
    let covector: Covector = z
        .generators
        .iter()
        .map(|g| signs[jd.graph.edge_index(&g.edge).expect("generator edge")])
        .collect();
    let face = z
        .faces
        .iter()
        .find(|f| f.covector == covector)
        .cloned()
        .ok_or_else(|| Error::Internal("flow covector missing from the face lattice".into()))?;
    let codim = z.dim - face.dim;
    let bridgeless = idx.iter().all(|&e| signs[e] != 0);
    let (h, map) = contracted?;
    if !bridgeless || h.genus() == 0 {
        let verified = bridgeless.then_some(face.dim == 0);
        return Ok(ContractionFace {
            face,
            codim,
            contracted: Some(h),
            verified,
        });
    }
    let jh = JacobianData::new(&h)?;
    let small = build_zonotope(&jh)?;
    let p = pushforward(jd, &map, &jh);
    let center = z.generators.iter().zip(&covector).fold(vec![Rat::zero(); z.dim], |acc, (g, &s)| {
        add_vec(&acc, &scale_vec(&Rat::new(BigInt::from(s), BigInt::from(2)), &g.vector()))
    });
    let pt: Vec<Vec<i64>> = (0..jd.genus()).map(|i| p.iter().map(|row| row[i]).collect()).collect();
    let lifted: BTreeSet<Vector> = small.vertices.iter().map(|v| add_vec(&apply_map(&pt, v), &center)).collect();
    let face_set: BTreeSet<Vector> = face.vertices.iter().map(|&i| z.vertices[i].clone()).collect();
    Ok(ContractionFace {
        verified: Some(lifted == face_set && small.dim == face.dim),
        face,
        codim,
        contracted: Some(h),
    })
}
