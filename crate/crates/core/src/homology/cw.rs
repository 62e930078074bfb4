//! Torus CW structures cut out by periodic plane arrangements.
//!
//! Everything is computed in lattice coordinates `t = Q⁻¹x`, where Γ₁ is ℤ³
//! and the fundamental domain is the unit cube. Each plane family `n·t ∈ c + ℤ`
//! has a primitive integer normal, so the arrangement is Γ₁-periodic and
//! its cells glue across opposite faces of the cube.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{det3, dot, floor_int, int_to_rat, lex_cmp, primitive_direction, rat, sub_vec, Rat, Vector};
use crate::chain::{boundary, chains_equal, FramedCell, FramedChain};
use crate::error::{Error, Result};
use crate::jacobian::Torus;
use crate::snf::{integer_kernel, solve_sparse, SparseSystem};

/// Default cap on the number of cutting planes inside the unit cube.
pub const DEFAULT_PLANE_BUDGET: usize = 80;

/// The planes `normal·t = offset + m`, `m ∈ ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaneFamily {
    pub normal: Vec<i64>,
    pub offset: Rat,
}

fn frac(x: &Rat) -> Rat {
    x - int_to_rat(&floor_int(x))
}

fn to_rat(n: &[i64]) -> Vector {
    n.iter().map(|&x| rat(x)).collect()
}

fn normalize_sign(mut n: Vec<i64>) -> Vec<i64> {
    if n.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        n.iter_mut().for_each(|x| *x = -*x);
    }
    n
}

impl PlaneFamily {
    pub fn through(normal: Vec<i64>, p: &[Rat]) -> Self {
        let normal = normalize_sign(normal);
        let offset = frac(&dot(&to_rat(&normal), p));
        PlaneFamily { normal, offset }
    }

    pub fn value(&self, t: &[Rat]) -> Rat {
        dot(&to_rat(&self.normal), t)
    }

    pub fn contains(&self, t: &[Rat]) -> bool {
        (self.value(t) - &self.offset).is_integer()
    }

    /// Plane values strictly inside the range of `n·t` over the unit cube.
    pub fn cuts(&self) -> Vec<Rat> {
        let lo: i64 = self.normal.iter().map(|&x| x.min(0)).sum();
        let hi: i64 = self.normal.iter().map(|&x| x.max(0)).sum();
        (lo..=hi)
            .map(|m| &self.offset + rat(m))
            .filter(|v| *v > rat(lo) && *v < rat(hi))
            .collect()
    }
}

fn l1(n: &[i64]) -> i64 {
    n.iter().map(|x| x.abs()).sum()
}

fn gauss_reduce(mut a: Vec<i64>, mut b: Vec<i64>) -> (Vec<i64>, Vec<i64>) {
    let d = |x: &[i64], y: &[i64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<i64>();
    loop {
        if d(&b, &b) < d(&a, &a) {
            std::mem::swap(&mut a, &mut b);
        }
        let num = d(&a, &b);
        let den = d(&a, &a);
        let mu = (2 * num + den).div_euclid(2 * den);
        if mu == 0 {
            return (a, b);
        }
        b = b.iter().zip(&a).map(|(y, x)| y - mu * x).collect();
    }
}

fn parallel(a: &[i64], b: &[i64]) -> bool {
    let (a, b) = (to_rat(a), to_rat(b));
    crate::arith::is_zero_vec(&crate::arith::cross(&a, &b))
}

/// Two families containing the line through `p` with direction `d`, and a
/// transversal family through each endpoint.
fn choose_families(families: &mut BTreeSet<PlaneFamily>, p: &[Rat], q: &[Rat]) -> Result<()> {
    let d = primitive_direction(&sub_vec(q, p)).ok_or(Error::DegenerateSegment)?;
    let row = vec![d.clone()];
    let kernel = integer_kernel(&row, 3);
    let as_i64 = |v: &Vec<BigInt>| -> Result<Vec<i64>> {
        v.iter()
            .map(|x| i64::try_from(x).map_err(|_| Error::UnsupportedChain("plane normal too large".into())))
            .collect()
    };
    let (n1, n2) = gauss_reduce(as_i64(&kernel[0])?, as_i64(&kernel[1])?);
    let cands: Vec<PlaneFamily> = [
        n1.clone(),
        n2.clone(),
        n1.iter().zip(&n2).map(|(a, b)| a + b).collect(),
        n1.iter().zip(&n2).map(|(a, b)| a - b).collect(),
    ]
    .into_iter()
    .map(|n| PlaneFamily::through(n, p))
    .collect();
    let mut best: Option<((usize, i64, usize, usize), usize, usize)> = None;
    for i in 0..cands.len() {
        for j in i + 1..cands.len() {
            if parallel(&cands[i].normal, &cands[j].normal) {
                continue;
            }
            let fresh = usize::from(!families.contains(&cands[i])) + usize::from(!families.contains(&cands[j]));
            let key = (fresh, l1(&cands[i].normal) + l1(&cands[j].normal), i, j);
            if best.as_ref().map_or(true, |b| key < b.0) {
                best = Some((key, i, j));
            }
        }
    }
    let (_, i, j) = best.expect("two independent normals");
    families.insert(cands[i].clone());
    families.insert(cands[j].clone());
    let dr: Vec<Rat> = d.iter().map(int_to_rat).collect();
    for end in [p, q] {
        let covered = families
            .iter()
            .any(|f| !dot(&to_rat(&f.normal), &dr).is_zero() && f.contains(end));
        if !covered {
            let axis = (0..3)
                .filter(|&k| !d[k].is_zero())
                .max_by_key(|&k| d[k].abs())
                .expect("nonzero direction");
            let mut n = vec![0; 3];
            n[axis] = 1;
            families.insert(PlaneFamily::through(n, end));
        }
    }
    Ok(())
}

struct Plane {
    normal: Vector,
    value: Rat,
}

#[derive(Clone)]
struct Cell {
    verts: Vec<Vector>,
    inc: Vec<BTreeSet<usize>>,
    facets: BTreeSet<usize>,
}

fn unit_cube(planes: &mut Vec<Plane>) -> Cell {
    let base = planes.len();
    for i in 0..3 {
        for v in 0..2 {
            let mut n = vec![rat(0); 3];
            n[i] = rat(1);
            planes.push(Plane { normal: n, value: rat(v) });
        }
    }
    let mut verts = Vec::new();
    let mut inc = Vec::new();
    for bits in 0..8usize {
        let v: Vector = (0..3).map(|i| rat(((bits >> i) & 1) as i64)).collect();
        inc.push((0..3).map(|i| base + 2 * i + ((bits >> i) & 1)).collect());
        verts.push(v);
    }
    Cell {
        verts,
        inc,
        facets: (base..base + 6).collect(),
    }
}

fn split(cell: &Cell, h: usize, plane: &Plane) -> Option<(Cell, Cell)> {
    let f: Vec<Rat> = cell.verts.iter().map(|v| dot(&plane.normal, v) - &plane.value).collect();
    if !f.iter().any(|x| x.is_negative()) || !f.iter().any(|x| x.is_positive()) {
        return None;
    }
    let n = cell.verts.len();
    let mut cut_verts = Vec::new();
    let mut cut_inc = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if !(f[a].is_negative() && f[b].is_positive() || f[a].is_positive() && f[b].is_negative()) {
                continue;
            }
            let shared: BTreeSet<usize> = cell.inc[a].intersection(&cell.inc[b]).copied().collect();
            if shared.len() < 2 {
                continue;
            }
            let s = &f[a] / (&f[a] - &f[b]);
            let p: Vector = cell.verts[a]
                .iter()
                .zip(&cell.verts[b])
                .map(|(x, y)| x + &s * (y - x))
                .collect();
            let mut inc = shared;
            inc.insert(h);
            cut_verts.push(p);
            cut_inc.push(inc);
        }
    }
    let part = |neg: bool| -> Cell {
        let strict = |x: &Rat| if neg { x.is_negative() } else { x.is_positive() };
        let facets: BTreeSet<usize> = cell
            .facets
            .iter()
            .copied()
            .filter(|fc| (0..n).any(|i| strict(&f[i]) && cell.inc[i].contains(fc)))
            .chain(std::iter::once(h))
            .collect();
        let mut verts = Vec::new();
        let mut inc = Vec::new();
        for i in 0..n {
            if strict(&f[i]) || f[i].is_zero() {
                let mut s: BTreeSet<usize> = cell.inc[i].intersection(&facets).copied().collect();
                if f[i].is_zero() {
                    s.insert(h);
                }
                verts.push(cell.verts[i].clone());
                inc.push(s);
            }
        }
        for (p, s) in cut_verts.iter().zip(&cut_inc) {
            verts.push(p.clone());
            inc.push(s.intersection(&facets).copied().collect());
        }
        Cell { verts, inc, facets }
    };
    Some((part(true), part(false)))
}

fn shift_of(points: &[Vector]) -> Vector {
    (0..3)
        .map(|i| {
            let m = points.iter().map(|p| &p[i]).min().expect("nonempty");
            int_to_rat(&floor_int(m))
        })
        .collect()
}

fn shifted(points: &[Vector]) -> Vec<Vector> {
    let s = shift_of(points);
    points.iter().map(|p| sub_vec(p, &s)).collect()
}

fn sorted_key(points: &[Vector]) -> Vec<Vector> {
    let mut k = shifted(points);
    k.sort_by(|a, b| lex_cmp(a, b));
    k
}

fn ccw(points: &[Vector], normal: &[Rat]) -> Vec<Vector> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| lex_cmp(a, b));
    let v0 = pts.remove(0);
    pts.sort_by(|a, b| {
        let d = det3(&sub_vec(a, &v0), &sub_vec(b, &v0), normal);
        d.cmp(&Rat::zero()).reverse()
    });
    pts.insert(0, v0);
    pts
}

/// Boundary of a cell as (lower cell, coefficient) pairs.
pub type CellBoundary = Vec<(usize, i64)>;

/// A CW structure on V/Γ₁ whose cells are stored in lattice coordinates, each
/// translated so its componentwise minimum lies in `[0, 1)³`.
#[derive(Clone, Debug)]
pub struct CwComplex {
    pub torus: Torus,
    pub families: Vec<PlaneFamily>,
    pub vertices: Vec<Vector>,
    /// Oriented from the lexicographically smaller end.
    pub edges: Vec<[Vector; 2]>,
    /// Counterclockwise about the normal of their plane family.
    pub faces: Vec<Vec<Vector>>,
    pub solids: usize,
    pub d1: Vec<CellBoundary>,
    pub d2: Vec<CellBoundary>,
    pub d3: Vec<CellBoundary>,
    edge_index: HashMap<Vec<Vector>, usize>,
}

impl CwComplex {
    pub fn counts(&self) -> [usize; 4] {
        [self.vertices.len(), self.edges.len(), self.faces.len(), self.solids]
    }

    pub fn euler_characteristic(&self) -> i64 {
        let [v, e, f, c] = self.counts();
        v as i64 - e as i64 + f as i64 - c as i64
    }

    pub fn boundaries_vanish(&self) -> bool {
        fn composes_to_zero(outer: &[CellBoundary], inner: &[CellBoundary]) -> bool {
            inner.iter().all(|col| {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for &(mid, a) in col {
                    for &(low, b) in &outer[mid] {
                        *acc.entry(low).or_default() += a * b;
                    }
                }
                acc.values().all(|&x| x == 0)
            })
        }
        composes_to_zero(&self.d1, &self.d2) && composes_to_zero(&self.d2, &self.d3)
    }

    /// The 1-cells covering a segment given in ambient coordinates, with signs.
    pub fn segment_cells(&self, a: &[Rat], b: &[Rat]) -> Result<Vec<(usize, i64)>> {
        let ta = self.torus.to_lattice(a);
        let tb = self.torus.to_lattice(b);
        let d = sub_vec(&tb, &ta);
        if crate::arith::is_zero_vec(&d) {
            return Err(Error::DegenerateSegment);
        }
        let mut params: BTreeSet<Rat> = [rat(0), rat(1)].into_iter().collect();
        for f in &self.families {
            let nd = f.value(&d);
            if nd.is_zero() {
                continue;
            }
            let va = f.value(&ta) - &f.offset;
            let vb = f.value(&tb) - &f.offset;
            let (lo, hi) = if va < vb { (va.clone(), vb) } else { (vb, va.clone()) };
            let mut m = lo.ceil();
            while m <= hi {
                params.insert((&m - &va) / &nd);
                m += rat(1);
            }
        }
        let params: Vec<Rat> = params.into_iter().collect();
        let point = |s: &Rat| -> Vector { ta.iter().zip(&d).map(|(x, y)| x + s * y).collect() };
        let mut out = Vec::new();
        for w in params.windows(2) {
            let (p, q) = (point(&w[0]), point(&w[1]));
            let key = sorted_key(&[p.clone(), q.clone()]);
            let idx = self.edge_index.get(&key).ok_or_else(|| {
                let show: Vec<String> = a.iter().map(crate::arith::fmt_rat).collect();
                Error::UnsupportedChain(format!("segment from ({}) is not on the 1-skeleton", show.join(",")))
            })?;
            let sign = if lex_cmp(&p, &q).is_lt() { 1 } else { -1 };
            out.push((*idx, sign));
        }
        Ok(out)
    }

    /// Integer vector over the 1-cells for each framing coordinate.
    pub fn one_chain_coordinates(&self, c: &FramedChain) -> Result<Vec<Vec<BigInt>>> {
        let mut b = vec![vec![BigInt::zero(); self.edges.len()]; c.g];
        for cell in &c.cells {
            for (e, s) in self.segment_cells(&cell.verts[0], &cell.verts[1])? {
                for (j, beta) in cell.framing.iter().enumerate() {
                    b[j][e] += beta * s;
                }
            }
        }
        Ok(b)
    }

    pub fn face_polygon(&self, f: usize) -> Vec<Vector> {
        self.faces[f].iter().map(|t| self.torus.from_lattice(t)).collect()
    }
}

/// Cuts the unit cube by plane families containing the given segments
/// (ambient coordinates) and glues the result into a CW structure on the torus.
pub fn build_cw(torus: &Torus, segments: &[(Vector, Vector)], plane_budget: usize) -> Result<CwComplex> {
    if torus.dim() != 3 {
        return Err(Error::WrongGenus {
            expected: "3".into(),
            found: torus.dim(),
        });
    }
    let mut families: BTreeSet<PlaneFamily> = (0..3)
        .map(|i| {
            let mut n = vec![0; 3];
            n[i] = 1;
            PlaneFamily {
                normal: n,
                offset: rat(0),
            }
        })
        .collect();
    for (a, b) in segments {
        choose_families(&mut families, &torus.to_lattice(a), &torus.to_lattice(b))?;
    }
    let families: Vec<PlaneFamily> = families.into_iter().collect();
    let mut planes = Vec::new();
    let mut cells = vec![unit_cube(&mut planes)];
    let cuts: Vec<Plane> = families
        .iter()
        .flat_map(|f| {
            let normal = to_rat(&f.normal);
            f.cuts().into_iter().map(move |value| Plane {
                normal: normal.clone(),
                value,
            })
        })
        .collect();
    if cuts.len() > plane_budget {
        return Err(Error::UnsupportedChain(format!(
            "arrangement needs {} planes, budget is {plane_budget}",
            cuts.len()
        )));
    }
    for plane in cuts {
        let h = planes.len();
        let mut next = Vec::with_capacity(cells.len());
        for cell in cells {
            match split(&cell, h, &plane) {
                Some((a, b)) => {
                    next.push(a);
                    next.push(b);
                }
                None => next.push(cell),
            }
        }
        planes.push(plane);
        cells = next;
    }
    assemble(torus, families, &planes, &cells)
}

fn assemble(torus: &Torus, families: Vec<PlaneFamily>, planes: &[Plane], cells: &[Cell]) -> Result<CwComplex> {
    let mut face_index: HashMap<Vec<Vector>, usize> = HashMap::new();
    let mut faces: Vec<Vec<Vector>> = Vec::new();
    let mut d3 = Vec::with_capacity(cells.len());
    for cell in cells {
        let n = cell.verts.len();
        let centroid: Vector = (0..3)
            .map(|i| cell.verts.iter().map(|v| v[i].clone()).sum::<Rat>() / rat(n as i64))
            .collect();
        let mut col: BTreeMap<usize, i64> = BTreeMap::new();
        for &h in &cell.facets {
            let poly: Vec<Vector> = (0..n).filter(|&i| cell.inc[i].contains(&h)).map(|i| cell.verts[i].clone()).collect();
            if poly.len() < 3 {
                return Err(Error::Internal("facet with fewer than three vertices".into()));
            }
            let key = sorted_key(&poly);
            let id = *face_index.entry(key).or_insert_with(|| {
                faces.push(ccw(&shifted(&poly), &planes[h].normal));
                faces.len() - 1
            });
            let outward = (dot(&planes[h].normal, &centroid) - &planes[h].value).is_negative();
            *col.entry(id).or_default() += if outward { 1 } else { -1 };
        }
        d3.push(col.into_iter().filter(|&(_, v)| v != 0).collect());
    }

    let mut edge_index: HashMap<Vec<Vector>, usize> = HashMap::new();
    let mut edges: Vec<[Vector; 2]> = Vec::new();
    let mut d2 = Vec::with_capacity(faces.len());
    for poly in &faces {
        let mut col: BTreeMap<usize, i64> = BTreeMap::new();
        for i in 0..poly.len() {
            let (p, q) = (&poly[i], &poly[(i + 1) % poly.len()]);
            let key = sorted_key(&[p.clone(), q.clone()]);
            let id = *edge_index.entry(key.clone()).or_insert_with(|| {
                edges.push([key[0].clone(), key[1].clone()]);
                edges.len() - 1
            });
            *col.entry(id).or_default() += if lex_cmp(p, q).is_lt() { 1 } else { -1 };
        }
        d2.push(col.into_iter().filter(|&(_, v)| v != 0).collect());
    }

    let mut vertex_index: HashMap<Vector, usize> = HashMap::new();
    let mut vertices: Vec<Vector> = Vec::new();
    let mut d1 = Vec::with_capacity(edges.len());
    for [p, q] in &edges {
        let mut col: BTreeMap<usize, i64> = BTreeMap::new();
        for (v, s) in [(q, 1), (p, -1)] {
            let key = sorted_key(std::slice::from_ref(v)).remove(0);
            let id = *vertex_index.entry(key.clone()).or_insert_with(|| {
                vertices.push(key);
                vertices.len() - 1
            });
            *col.entry(id).or_default() += s;
        }
        d1.push(col.into_iter().filter(|&(_, v)| v != 0).collect());
    }

    let cw = CwComplex {
        torus: torus.clone(),
        families,
        vertices,
        edges,
        faces,
        solids: cells.len(),
        d1,
        d2,
        d3,
        edge_index,
    };
    if !cw.boundaries_vanish() {
        return Err(Error::Internal("∂∂ ≠ 0 on the arrangement".into()));
    }
    Ok(cw)
}

/// A framed 2-chain of faces of `cw` with boundary exactly `c`.
pub fn solve_boundary(cw: &CwComplex, c: &FramedChain) -> Result<FramedChain> {
    if c.k != 1 {
        return Err(Error::Dimension("solve_boundary takes a 1-chain".into()));
    }
    let b = cw.one_chain_coordinates(c)?;
    let mut system = SparseSystem::new(cw.edges.len(), cw.faces.len());
    for (f, col) in cw.d2.iter().enumerate() {
        for &(e, v) in col {
            system.add(e, f, v);
        }
    }
    let mut x = vec![vec![BigInt::zero(); cw.faces.len()]; c.g];
    for (j, bj) in b.iter().enumerate() {
        if bj.iter().all(Zero::is_zero) {
            continue;
        }
        x[j] = solve_sparse(&system, bj).ok_or(Error::NoSolution)?;
    }
    let mut gamma = FramedChain::new(2, c.g);
    for f in 0..cw.faces.len() {
        let framing: Vec<BigInt> = (0..c.g).map(|j| x[j][f].clone()).collect();
        if framing.iter().any(|v| !v.is_zero()) {
            gamma.push(FramedCell::polygon(cw.face_polygon(f), framing));
        }
    }
    let torus = &cw.torus;
    if !chains_equal(torus, &boundary(torus, &gamma)?, c) {
        return Err(Error::Internal("solved chain has the wrong boundary".into()));
    }
    Ok(gamma)
}
