//! Polarized lattice data of the Jacobian: Gram matrix, edge functionals,
//! period lattice Γ₁ and fundamental domain reduction.
//!
//! Points of V are written in the coordinates given by the cotree basis of
//! Γ₂, so the lattice Γ₁ is spanned by the columns of Q.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    det, floor_int, identity, int_to_rat, inverse, mat_mul, mat_vec, sub_vec, transpose, Matrix, Rat, Ring,
    Vector,
};
use crate::curve::{cycle_basis, CycleBasis, MetricGraph};
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeFunctional {
    pub edge: String,
    pub coords: Vec<i64>,
}

impl EdgeFunctional {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn to_rat(&self) -> Vector {
        self.coords.iter().map(|&c| Rat::from_integer(c.into())).collect()
    }

    pub fn to_ring<R: Ring>(&self) -> Vec<R> {
        self.coords.iter().map(|&c| R::from_int(c)).collect()
    }
}

pub fn edge_functionals(basis: &CycleBasis) -> Vec<EdgeFunctional> {
    (0..basis.edge_count())
        .map(|e| EdgeFunctional {
            edge: basis.edge_ids[e].clone(),
            coords: basis.edge_column(e),
        })
        .collect()
}

/// `B·diag(α)·Bᵀ` over any coefficient ring.
pub fn gram_matrix<R: Ring>(lengths: &[R], basis: &CycleBasis) -> Matrix<R> {
    let g = basis.genus();
    let mut q = vec![vec![R::zero(); g]; g];
    for (i, row_i) in basis.matrix.iter().enumerate() {
        for (j, row_j) in basis.matrix.iter().enumerate() {
            let mut acc = R::zero();
            for (e, len) in lengths.iter().enumerate() {
                let s = row_i[e] * row_j[e];
                if s != 0 {
                    acc = acc + R::from_int(s) * len.clone();
                }
            }
            q[i][j] = acc;
        }
    }
    q
}

/// `Σ αₑ eₑ eₑᵀ`, summed edge by edge.
pub fn zone_sum<R: Ring>(functionals: &[EdgeFunctional], lengths: &[R]) -> Matrix<R> {
    let g = functionals.first().map_or(0, |f| f.coords.len());
    let mut q = vec![vec![R::zero(); g]; g];
    for (f, len) in functionals.iter().zip(lengths) {
        for i in 0..g {
            for j in 0..g {
                let s = f.coords[i] * f.coords[j];
                if s != 0 {
                    q[i][j] = q[i][j].clone() + R::from_int(s) * len.clone();
                }
            }
        }
    }
    q
}

pub fn symbolic_gram(g: &MetricGraph, basis: &CycleBasis) -> Matrix<Poly> {
    gram_matrix(&g.symbolic_lengths(), basis)
}

/// Γ₁ as the integer lattice spanned by the columns of `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Torus {
    pub q: Matrix<Rat>,
    pub q_inv: Matrix<Rat>,
}

impl Torus {
    pub fn new(q: Matrix<Rat>) -> Result<Self> {
        let q_inv = inverse(&q).ok_or_else(|| Error::SingularLattice("det Q = 0".into()))?;
        Ok(Torus { q, q_inv })
    }

    /// The standard torus ℝᵍ/ℤᵍ.
    pub fn standard(g: usize) -> Self {
        Torus {
            q: identity(g),
            q_inv: identity(g),
        }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// Coordinates with respect to the lattice basis.
    pub fn to_lattice(&self, x: &[Rat]) -> Vector {
        mat_vec(&self.q_inv, x)
    }

    pub fn from_lattice(&self, t: &[Rat]) -> Vector {
        mat_vec(&self.q, t)
    }

    /// Integer coordinates of `v` when it is a lattice vector.
    pub fn lattice_vector(&self, v: &[Rat]) -> Option<Vec<BigInt>> {
        self.to_lattice(v)
            .into_iter()
            .map(|t| t.is_integer().then(|| t.to_integer()))
            .collect()
    }

    /// The lattice shift moving `p` into the half-open parallelepiped.
    pub fn floor_shift(&self, p: &[Rat]) -> Vec<BigInt> {
        self.to_lattice(p).iter().map(floor_int).collect()
    }

    pub fn lattice_point(&self, n: &[BigInt]) -> Vector {
        let t: Vector = n.iter().map(int_to_rat).collect();
        self.from_lattice(&t)
    }

    pub fn reduce(&self, p: &[Rat]) -> Vector {
        let n = self.floor_shift(p);
        sub_vec(p, &self.lattice_point(&n))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JacobianData {
    pub graph: MetricGraph,
    pub basis: CycleBasis,
    pub lengths: Vec<Rat>,
    pub q: Matrix<Rat>,
    pub functionals: Vec<EdgeFunctional>,
}

impl JacobianData {
    pub fn new(g: &MetricGraph) -> Result<Self> {
        JacobianData::with_basis(g, cycle_basis(g))
    }

    pub fn with_basis(g: &MetricGraph, basis: CycleBasis) -> Result<Self> {
        let lengths = g.exact_lengths()?;
        let q = gram_matrix(&lengths, &basis);
        let functionals = edge_functionals(&basis);
        Ok(JacobianData {
            graph: g.clone(),
            basis,
            lengths,
            q,
            functionals,
        })
    }

    pub fn genus(&self) -> usize {
        self.basis.genus()
    }

    pub fn lattice_basis(&self) -> Result<Vec<Vector>> {
        if det(&self.q).is_zero() {
            return Err(Error::SingularLattice("det Q = 0".into()));
        }
        let g = self.genus();
        Ok((0..g).map(|j| (0..g).map(|i| self.q[i][j].clone()).collect()).collect())
    }

    pub fn torus(&self) -> Result<Torus> {
        Torus::new(self.q.clone())
    }

    pub fn reduce_point(&self, p: &[Rat]) -> Result<Vector> {
        if p.len() != self.genus() {
            return Err(Error::Dimension(format!("point of length {} in genus {}", p.len(), self.genus())));
        }
        Ok(self.torus()?.reduce(p))
    }

    /// Leading principal minors are all positive.
    pub fn is_positive_definite(&self) -> bool {
        (1..=self.genus()).all(|k| {
            let m: Matrix<Rat> = self.q[..k].iter().map(|r| r[..k].to_vec()).collect();
            det(&m).is_positive()
        })
    }

    pub fn check_dicing(&self) -> DicingReport {
        check_dicing(&self.functionals, &self.lengths, &self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuWitness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub det: BigInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DicingReport {
    pub totally_unimodular: bool,
    pub witness: Option<TuWitness>,
    pub gram_identity: bool,
}

impl DicingReport {
    pub fn passed(&self) -> bool {
        self.totally_unimodular && self.gram_identity
    }
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// First square submatrix (by size, then rows, then columns) whose
/// determinant lies outside {0, ±1}.
pub fn find_tu_violation(m: &[Vec<i64>]) -> Option<TuWitness> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for k in 1..=rows.min(cols) {
        for r in combinations(rows, k) {
            for c in combinations(cols, k) {
                let sub: Matrix<Rat> = r
                    .iter()
                    .map(|&i| c.iter().map(|&j| Rat::from_integer(m[i][j].into())).collect())
                    .collect();
                let d = det(&sub).to_integer();
                if d.abs() > BigInt::one() {
                    return Some(TuWitness {
                        rows: r,
                        cols: c.clone(),
                        det: d,
                    });
                }
            }
        }
    }
    None
}

pub fn check_dicing<R: Ring>(functionals: &[EdgeFunctional], lengths: &[R], q: &Matrix<R>) -> DicingReport {
    let matrix: Vec<Vec<i64>> = functionals.iter().map(|f| f.coords.clone()).collect();
    let witness = find_tu_violation(&matrix);
    DicingReport {
        totally_unimodular: witness.is_none(),
        witness,
        gram_identity: zone_sum(functionals, lengths) == *q,
    }
}

/// The integer matrix `U` with `B_to = U·B_from`, when both bases span the
/// same cycle lattice.
pub fn basis_change(from: &CycleBasis, to: &CycleBasis) -> Option<Vec<Vec<i64>>> {
    if from.edge_ids != to.edge_ids || from.genus() != to.genus() {
        return None;
    }
    let u: Vec<Vec<i64>> = to
        .matrix
        .iter()
        .map(|row| from.cotree.iter().map(|&c| row[c]).collect())
        .collect();
    let m = from.edge_count();
    for (i, row) in to.matrix.iter().enumerate() {
        for e in 0..m {
            let v: i64 = (0..from.genus()).map(|k| u[i][k] * from.matrix[k][e]).sum();
            if v != row[e] {
                return None;
            }
        }
    }
    Some(u)
}

/// `U Q Uᵀ`.
pub fn congruent<R: Ring>(u: &[Vec<i64>], q: &Matrix<R>) -> Matrix<R> {
    let ur: Matrix<R> = u.iter().map(|r| r.iter().map(|&x| R::from_int(x)).collect()).collect();
    mat_mul(&mat_mul(&ur, q), &transpose(&ur))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_vec};
    use crate::curve::{cycle_basis_with_tree, parse_curve};

    pub(crate) const K4_UNIT: &str = r#"{"vertices":["1","2","3","4"],"edges":[
        {"id":"A","from":"1","to":"2","length":"1"},{"id":"B","from":"4","to":"1","length":"1"},
        {"id":"C","from":"2","to":"4","length":"1"},{"id":"D","from":"3","to":"4","length":"1"},
        {"id":"E","from":"2","to":"3","length":"1"},{"id":"F","from":"1","to":"3","length":"1"}],"basepoint":"3"}"#;

    fn k4() -> JacobianData {
        JacobianData::new(&parse_curve(K4_UNIT).unwrap()).unwrap()
    }

    #[test]
    fn unit_k4_gram_and_functionals() {
        let jd = k4();
        let expect = vec![rat_vec(&[3, -1, -1]), rat_vec(&[-1, 3, -1]), rat_vec(&[-1, -1, 3])];
        assert_eq!(jd.q, expect);
        assert_eq!(jd.lattice_basis().unwrap(), expect);
        let coords: Vec<Vec<i64>> = jd.functionals.iter().map(|f| f.coords.clone()).collect();
        assert_eq!(
            coords,
            vec![
                vec![1, 0, 0],
                vec![0, 1, 0],
                vec![0, 0, 1],
                vec![0, 1, -1],
                vec![1, 0, -1],
                vec![-1, 1, 0]
            ]
        );
        assert!(jd.is_positive_definite());
    }

    #[test]
    fn reduction() {
        let jd = k4();
        assert_eq!(jd.reduce_point(&rat_vec(&[4, -1, -1])).unwrap(), rat_vec(&[1, 0, 0]));
        assert_eq!(jd.reduce_point(&rat_vec(&[3, -1, -1])).unwrap(), rat_vec(&[0, 0, 0]));
        assert_eq!(jd.reduce_point(&rat_vec(&[0, 0, 0])).unwrap(), rat_vec(&[0, 0, 0]));
    }

    #[test]
    fn singular_lattice() {
        let g = parse_curve(r#"{"vertices":["1"],"edges":[{"id":"L","from":"1","to":"1","length":"2"}],"basepoint":"1"}"#)
            .unwrap();
        let g = g.with_length("L", crate::curve::Length::Exact(rat(0))).unwrap();
        let jd = JacobianData::new(&g).unwrap();
        assert!(matches!(jd.lattice_basis(), Err(Error::SingularLattice(_))));
        assert!(matches!(jd.reduce_point(&rat_vec(&[1])), Err(Error::SingularLattice(_))));
    }

    #[test]
    fn dicing_and_witness() {
        let report = k4().check_dicing();
        assert!(report.passed());
        let w = find_tu_violation(&[vec![1, 1], vec![-1, 1]]).unwrap();
        assert_eq!(w.det, BigInt::from(2));
    }

    #[test]
    fn tree_change_is_unimodular_congruence() {
        let g = parse_curve(K4_UNIT).unwrap();
        let b1 = cycle_basis(&g);
        let b2 = cycle_basis_with_tree(&g, &["A", "B", "F"]).unwrap();
        let u = basis_change(&b1, &b2).unwrap();
        let q1 = gram_matrix(&g.exact_lengths().unwrap(), &b1);
        let q2 = gram_matrix(&g.exact_lengths().unwrap(), &b2);
        assert_eq!(congruent(&u, &q1), q2);
        let ur: Matrix<Rat> = u.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        assert_eq!(det(&ur).abs(), rat(1));
    }
}
