//! Framed polyhedral chains on the torus V/Γ₁.
//!
//! A cell is a lift to the universal cover (a point, a segment or a convex
//! planar polygon) carrying a framing vector in Γ₂ ≅ ℤᵍ. Chains are compared
//! through [`canonicalize`], which splits overlapping segments at their mutual
//! breakpoints, merges equal supports and picks a fixed lift for every cell.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{det, floor_int, int_to_rat, inverse, mat_vec, sub_vec, Matrix, Rat, Ring, Vector};
use crate::error::{Error, Result};
use crate::jacobian::Torus;
use crate::snf::smith_normal_form;

pub type Framing = Vec<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FramedCell {
    pub verts: Vec<Vector>,
    pub framing: Framing,
}

impl FramedCell {
    pub fn point(p: Vector, framing: Framing) -> Self {
        FramedCell {
            verts: vec![p],
            framing,
        }
    }

    pub fn segment(p: Vector, q: Vector, framing: Framing) -> Self {
        FramedCell {
            verts: vec![p, q],
            framing,
        }
    }

    pub fn polygon(verts: Vec<Vector>, framing: Framing) -> Self {
        FramedCell { verts, framing }
    }

    pub fn dim(&self) -> usize {
        self.verts.len().min(3) - 1
    }

    fn negated_framing(&self) -> Self {
        FramedCell {
            verts: self.verts.clone(),
            framing: neg_framing(&self.framing),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedChain {
    pub k: usize,
    pub g: usize,
    pub cells: Vec<FramedCell>,
}

impl FramedChain {
    pub fn new(k: usize, g: usize) -> Self {
        FramedChain {
            k,
            g,
            cells: Vec::new(),
        }
    }

    pub fn from_cells(k: usize, g: usize, cells: Vec<FramedCell>) -> Result<Self> {
        for c in &cells {
            if c.dim() != k || c.framing.len() != g || c.verts.iter().any(|v| v.len() != g) {
                return Err(Error::Dimension(format!("cell {c:?} in a {k}-chain of genus {g}")));
            }
        }
        Ok(FramedChain { k, g, cells })
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn push(&mut self, cell: FramedCell) {
        self.cells.push(cell);
    }

    /// Formal sum (no canonicalization).
    pub fn plus(&self, other: &FramedChain) -> FramedChain {
        let mut out = self.clone();
        out.cells.extend(other.cells.iter().cloned());
        out
    }

    /// Formal difference (no canonicalization).
    pub fn minus(&self, other: &FramedChain) -> FramedChain {
        let mut out = self.clone();
        out.cells.extend(other.cells.iter().map(FramedCell::negated_framing));
        out
    }
}

pub(crate) fn neg_framing(b: &[BigInt]) -> Framing {
    b.iter().map(|x| -x).collect()
}

fn add_framing(acc: &mut Framing, b: &[BigInt]) {
    for (x, y) in acc.iter_mut().zip(b) {
        *x += y;
    }
}

fn is_zero_framing(b: &[BigInt]) -> bool {
    b.iter().all(Zero::is_zero)
}

fn frac(x: &Rat) -> Rat {
    x - int_to_rat(&floor_int(x))
}

fn parallel(u: &[Rat], v: &[Rat]) -> bool {
    (0..u.len()).all(|i| (i + 1..u.len()).all(|j| &u[i] * &v[j] == &u[j] * &v[i]))
}

/// Moves a cell so that its lexicographically smallest vertex lies in the
/// half-open fundamental parallelepiped.
fn normalize_position(torus: &Torus, verts: &[Vector]) -> Vec<Vector> {
    let min = verts.iter().min().expect("cell with vertices");
    let shift = torus.lattice_point(&torus.floor_shift(min));
    verts.iter().map(|v| sub_vec(v, &shift)).collect()
}

/// Integer change of coordinates sending a primitive vector to the first
/// basis vector.
struct LineFrame {
    u: Matrix<Rat>,
    u_inv: Matrix<Rat>,
}

fn line_frame(p: &[BigInt]) -> LineFrame {
    let column: Vec<Vec<BigInt>> = p.iter().map(|x| vec![x.clone()]).collect();
    let snf = smith_normal_form(&column, 1);
    let sign = snf.right[0][0].clone();
    let u: Matrix<Rat> = snf
        .left
        .iter()
        .map(|row| row.iter().map(|x| int_to_rat(&(x * &sign))).collect())
        .collect();
    let u_inv = inverse(&u).expect("unimodular");
    LineFrame { u, u_inv }
}

type LineKey = (Vec<BigInt>, Vec<Rat>);

fn canonical_points(torus: &Torus, cells: &[FramedCell]) -> Vec<FramedCell> {
    let mut acc: BTreeMap<Vector, Framing> = BTreeMap::new();
    for c in cells {
        let key = torus.reduce(&c.verts[0]);
        let entry = acc.entry(key).or_insert_with(|| vec![BigInt::zero(); c.framing.len()]);
        add_framing(entry, &c.framing);
    }
    acc.into_iter()
        .filter(|(_, b)| !is_zero_framing(b))
        .map(|(p, b)| FramedCell::point(p, b))
        .collect()
}

/// Segments on a common closed geodesic are parametrized by a circle
/// coordinate σ ∈ ℝ/ℤ; the chain restricted to the geodesic is a step
/// function in σ, emitted as maximal arcs of constant framing.
fn canonical_segments(torus: &Torus, cells: &[FramedCell]) -> Vec<FramedCell> {
    let g = torus.dim();
    let mut frames: BTreeMap<Vec<BigInt>, LineFrame> = BTreeMap::new();
    let mut groups: BTreeMap<LineKey, Vec<(Rat, Rat, Framing)>> = BTreeMap::new();
    for c in cells {
        if is_zero_framing(&c.framing) {
            continue;
        }
        let mut ta = torus.to_lattice(&c.verts[0]);
        let mut tb = torus.to_lattice(&c.verts[1]);
        let Some(mut p) = crate::arith::primitive_direction(&sub_vec(&tb, &ta)) else {
            continue;
        };
        let mut beta = c.framing.clone();
        let lead = p.iter().position(|x| !x.is_zero()).expect("nonzero direction");
        if p[lead].is_negative() {
            p = neg_framing(&p);
            std::mem::swap(&mut ta, &mut tb);
            beta = neg_framing(&beta);
        }
        let len = (&tb[lead] - &ta[lead]) / int_to_rat(&p[lead]);
        let frame = frames.entry(p.clone()).or_insert_with(|| line_frame(&p));
        let u = mat_vec(&frame.u, &ta);
        let y: Vec<Rat> = u[1..].iter().map(frac).collect();
        groups
            .entry((p, y))
            .or_default()
            .push((u[0].clone(), len, beta));
    }
    let mut out = Vec::new();
    for ((p, y), segs) in groups {
        let frame = &frames[&p];
        let bps: BTreeSet<Rat> = segs
            .iter()
            .flat_map(|(s, l, _)| [frac(s), frac(&(s + l))])
            .collect();
        let b: Vec<Rat> = bps.into_iter().collect();
        let n = b.len();
        let arcs: Vec<(Rat, Rat)> = (0..n)
            .map(|i| {
                let hi = if i + 1 < n { b[i + 1].clone() } else { &b[0] + Rat::one() };
                (b[i].clone(), hi)
            })
            .collect();
        let two = Rat::from_integer(2.into());
        let sums: Vec<Framing> = arcs
            .iter()
            .map(|(lo, hi)| {
                let m = (lo + hi) / &two;
                let mut acc = vec![BigInt::zero(); g];
                for (s, l, beta) in &segs {
                    let count = floor_int(&(s + l - &m)) - floor_int(&(s - &m));
                    if !count.is_zero() {
                        for (x, bx) in acc.iter_mut().zip(beta) {
                            *x += &count * bx;
                        }
                    }
                }
                acc
            })
            .collect();
        let mut runs: Vec<(Rat, Rat, Framing)> = Vec::new();
        if sums.iter().all(|s| *s == sums[0]) {
            runs.push((Rat::zero(), Rat::one(), sums[0].clone()));
        } else {
            let start = (0..n).find(|&i| sums[i] != sums[(i + n - 1) % n]).expect("a change point");
            for j in start..start + n {
                let idx = j % n;
                let off = if j >= n { Rat::one() } else { Rat::zero() };
                let lo = &arcs[idx].0 + &off;
                let hi = &arcs[idx].1 + &off;
                match runs.last_mut() {
                    Some(last) if last.2 == sums[idx] => last.1 = hi,
                    _ => runs.push((lo, hi, sums[idx].clone())),
                }
            }
        }
        for (lo, hi, beta) in runs {
            if is_zero_framing(&beta) {
                continue;
            }
            let lift = |sigma: &Rat| {
                let mut u = vec![sigma.clone()];
                u.extend(y.iter().cloned());
                torus.from_lattice(&mat_vec(&frame.u_inv, &u))
            };
            out.push(FramedCell::segment(lift(&lo), lift(&hi), beta));
        }
    }
    out
}

fn canonical_polygon(torus: &Torus, cell: &FramedCell) -> Option<FramedCell> {
    let mut v = cell.verts.clone();
    loop {
        let n = v.len();
        if n < 3 {
            return None;
        }
        let redundant = (0..n).find(|&i| {
            let prev = &v[(i + n - 1) % n];
            let next = &v[(i + 1) % n];
            parallel(&sub_vec(&v[i], prev), &sub_vec(next, &v[i]))
        });
        match redundant {
            Some(i) => {
                v.remove(i);
            }
            None => break,
        }
    }
    let n = v.len();
    let i0 = (0..n).min_by(|&a, &b| v[a].cmp(&v[b])).expect("vertices");
    let mut framing = cell.framing.clone();
    let ordered: Vec<Vector> = if v[(i0 + n - 1) % n] < v[(i0 + 1) % n] {
        framing = neg_framing(&framing);
        (0..n).map(|k| v[(i0 + n - k) % n].clone()).collect()
    } else {
        (0..n).map(|k| v[(i0 + k) % n].clone()).collect()
    };
    Some(FramedCell::polygon(normalize_position(torus, &ordered), framing))
}

fn canonical_polygons(torus: &Torus, cells: &[FramedCell]) -> Vec<FramedCell> {
    let mut acc: BTreeMap<Vec<Vector>, Framing> = BTreeMap::new();
    for c in cells {
        if is_zero_framing(&c.framing) {
            continue;
        }
        if let Some(p) = canonical_polygon(torus, c) {
            let entry = acc
                .entry(p.verts)
                .or_insert_with(|| vec![BigInt::zero(); c.framing.len()]);
            add_framing(entry, &p.framing);
        }
    }
    acc.into_iter()
        .filter(|(_, b)| !is_zero_framing(b))
        .map(|(v, b)| FramedCell::polygon(v, b))
        .collect()
}

/// Canonical representative of a chain modulo Γ₁: idempotent, and two chains
/// defining the same current get the same representative (for 2-chains this
/// holds up to subdivision, which is not resolved).
pub fn canonicalize(torus: &Torus, c: &FramedChain) -> FramedChain {
    let mut cells = match c.k {
        0 => canonical_points(torus, &c.cells),
        1 => canonical_segments(torus, &c.cells)
            .into_iter()
            .map(|cell| FramedCell {
                verts: normalize_position(torus, &cell.verts),
                framing: cell.framing,
            })
            .collect(),
        _ => canonical_polygons(torus, &c.cells),
    };
    cells.sort();
    FramedChain {
        k: c.k,
        g: c.g,
        cells,
    }
}

pub fn boundary(torus: &Torus, c: &FramedChain) -> Result<FramedChain> {
    if c.k == 0 {
        return Err(Error::Dimension("boundary of a 0-chain".into()));
    }
    let mut out = FramedChain::new(c.k - 1, c.g);
    for cell in &c.cells {
        let n = cell.verts.len();
        if c.k == 1 {
            out.push(FramedCell::point(cell.verts[1].clone(), cell.framing.clone()));
            out.push(FramedCell::point(cell.verts[0].clone(), neg_framing(&cell.framing)));
        } else {
            for i in 0..n {
                out.push(FramedCell::segment(
                    cell.verts[i].clone(),
                    cell.verts[(i + 1) % n].clone(),
                    cell.framing.clone(),
                ));
            }
        }
    }
    Ok(canonicalize(torus, &out))
}

pub fn is_cycle(torus: &Torus, c: &FramedChain) -> bool {
    c.k == 0 || boundary(torus, c).map(|b| b.is_empty()).unwrap_or(false)
}

pub fn chains_equal(torus: &Torus, a: &FramedChain, b: &FramedChain) -> bool {
    a.k == b.k && canonicalize(torus, &a.minus(b)).is_empty()
}

/// Image under x ↦ −x. Framings change sign with the tangent directions.
pub fn negate_cycle(c: &FramedChain) -> FramedChain {
    FramedChain {
        k: c.k,
        g: c.g,
        cells: c
            .cells
            .iter()
            .map(|cell| FramedCell {
                verts: cell.verts.iter().map(|v| v.iter().map(|x| -x).collect()).collect(),
                framing: neg_framing(&cell.framing),
            })
            .collect(),
    }
}

pub fn translate(c: &FramedChain, t: &[Rat]) -> FramedChain {
    FramedChain {
        k: c.k,
        g: c.g,
        cells: c
            .cells
            .iter()
            .map(|cell| FramedCell {
                verts: cell.verts.iter().map(|v| crate::arith::add_vec(v, t)).collect(),
                framing: cell.framing.clone(),
            })
            .collect(),
    }
}

/// The parallelograms swept by each segment along `t`, so that
/// `∂ sweep = translate(c, t) − c` for a cycle `c`.
pub fn sweep_chain(torus: &Torus, c: &FramedChain, t: &[Rat]) -> Result<FramedChain> {
    if c.k != 1 {
        return Err(Error::Dimension("sweep of a non-1-chain".into()));
    }
    if !is_cycle(torus, c) {
        return Err(Error::NotACycle);
    }
    let mut out = FramedChain::new(2, c.g);
    for cell in &c.cells {
        let p = &cell.verts[0];
        let q = &cell.verts[1];
        out.push(FramedCell::polygon(
            vec![
                p.clone(),
                crate::arith::add_vec(p, t),
                crate::arith::add_vec(q, t),
                q.clone(),
            ],
            cell.framing.clone(),
        ));
    }
    Ok(canonicalize(torus, &out))
}

/// `∫ Ω₀` over one polygon: fan triangulation from the first vertex, each
/// triangle contributing `½·det[p₁−p₀, p₂−p₀, β]`.
pub fn omega0_polygon<R: Ring>(verts: &[Vec<R>], framing: &[R]) -> R {
    let mut acc = R::zero();
    let p0 = &verts[0];
    for i in 1..verts.len().saturating_sub(1) {
        let u = crate::arith::sub_vec(&verts[i], p0);
        let v = crate::arith::sub_vec(&verts[i + 1], p0);
        acc = acc + det(&vec![u, v, framing.to_vec()]);
    }
    acc.scale_rat(&Rat::new(1.into(), 2.into()))
}

pub fn integrate_omega0(c: &FramedChain) -> Result<Rat> {
    if c.g != 3 {
        return Err(Error::WrongGenus {
            expected: "3".into(),
            found: c.g,
        });
    }
    if c.k != 2 {
        return Err(Error::Dimension("Ω₀ integrates over 2-chains".into()));
    }
    Ok(c.cells.iter().fold(Rat::zero(), |acc, cell| {
        let beta: Vector = cell.framing.iter().map(int_to_rat).collect();
        acc + omega0_polygon(&cell.verts, &beta)
    }))
}

/// Element of ⋀ᵏΓ₁ ⊗ Γ₂: rows indexed by Γ₁ (k = 1) or by pairs `a < b`
/// (k = 2), columns by the Γ₂ basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyClass {
    pub k: usize,
    pub matrix: Vec<Vec<BigInt>>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }
}

fn integral_matrix(m: Vec<Vec<Rat>>) -> Result<Vec<Vec<BigInt>>> {
    m.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    if x.is_integer() {
                        Ok(x.to_integer())
                    } else {
                        Err(Error::NonIntegralClass(crate::arith::fmt_rat(&x)))
                    }
                })
                .collect()
        })
        .collect()
}

pub fn homology_class(torus: &Torus, c: &FramedChain) -> Result<HomologyClass> {
    if !is_cycle(torus, c) {
        return Err(Error::NotACycle);
    }
    let g = c.g;
    match c.k {
        1 => {
            let mut m = vec![vec![Rat::zero(); g]; g];
            for cell in &c.cells {
                let d = torus.to_lattice(&sub_vec(&cell.verts[1], &cell.verts[0]));
                for (j, b) in cell.framing.iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    let b = int_to_rat(b);
                    for i in 0..g {
                        m[i][j] += &d[i] * &b;
                    }
                }
            }
            Ok(HomologyClass {
                k: 1,
                matrix: integral_matrix(m)?,
            })
        }
        2 => {
            let pairs: Vec<(usize, usize)> = (0..g).flat_map(|a| (a + 1..g).map(move |b| (a, b))).collect();
            let mut m = vec![vec![Rat::zero(); g]; pairs.len()];
            let half = Rat::new(1.into(), 2.into());
            for cell in &c.cells {
                let t: Vec<Vector> = cell.verts.iter().map(|v| torus.to_lattice(v)).collect();
                let n = t.len();
                for (r, &(a, b)) in pairs.iter().enumerate() {
                    let mut area = Rat::zero();
                    for i in 0..n {
                        let (p, q) = (&t[i], &t[(i + 1) % n]);
                        area += &p[a] * &q[b] - &p[b] * &q[a];
                    }
                    area *= &half;
                    for (j, beta) in cell.framing.iter().enumerate() {
                        m[r][j] += &area * int_to_rat(beta);
                    }
                }
            }
            Ok(HomologyClass {
                k: 2,
                matrix: integral_matrix(m)?,
            })
        }
        k => Err(Error::Dimension(format!("homology class in degree {k}"))),
    }
}
