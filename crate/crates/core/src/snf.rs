//! Integer linear algebra: Smith normal form with unimodular transforms, exact
//! integer solving, integer kernels, and a sparse solver for boundary matrices.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `diag = left · a · right` with `left`, `right` unimodular and the diagonal
/// entries nonnegative, each dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diag: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.diag[i][i].clone()).collect()
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        if !y.is_zero() {
            *x -= f * y;
        }
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let delta = f * &row[src];
            row[dst] -= delta;
        }
    }
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    if i != j {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for x in m[i].iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Computes the Smith normal form of an `rows × cols` integer matrix.
pub fn smith_normal_form(a: &IntMatrix, cols: usize) -> SmithForm {
    let rows = a.len();
    let mut d = a.clone();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero magnitude in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        left.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut right, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                row_axpy(&mut d, i, t, &q);
                row_axpy(&mut left, i, t, &q);
                if !d[i][t].is_zero() {
                    d.swap(t, i);
                    left.swap(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                col_axpy(&mut d, j, t, &q);
                col_axpy(&mut right, j, t, &q);
                if !d[t][j].is_zero() {
                    swap_cols(&mut d, t, j);
                    swap_cols(&mut right, t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !d[i][j].is_zero() && !(&d[i][j] % &d[t][t]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut d, t, i, &minus_one);
                    row_axpy(&mut left, t, i, &minus_one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut left, t);
        }
        t += 1;
    }
    SmithForm {
        diag: d,
        left,
        right,
        rank: t,
    }
}

fn mat_vec(m: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

/// One integer solution of `a x = b`, if any exists.
pub fn solve_integer(a: &IntMatrix, cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(a, cols);
    let ub = mat_vec(&snf.left, b);
    let mut y = vec![BigInt::zero(); cols];
    for (i, val) in ub.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = val.div_rem(&snf.diag[i][i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !val.is_zero() {
            return None;
        }
    }
    Some(mat_vec(&snf.right, &y))
}

/// A ℤ-basis of `{x ∈ ℤ^cols : a x = 0}`.
pub fn integer_kernel(a: &IntMatrix, cols: usize) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a, cols);
    (snf.rank..cols)
        .map(|j| snf.right.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Hermite-style row echelon basis of the ℤ-span of the given rows, with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn row_hermite(rows_in: &IntMatrix, cols: usize) -> IntMatrix {
    let mut m: IntMatrix = rows_in.to_vec();
    let mut out = Vec::new();
    let mut r0 = 0;
    for c in 0..cols {
        loop {
            let nz: Vec<usize> = (r0..m.len()).filter(|&i| !m[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| m[i][c].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = m[i][c].div_floor(&m[p][c]);
                    row_axpy(&mut m, i, p, &q);
                }
            }
        }
        if let Some(p) = (r0..m.len()).find(|&i| !m[i][c].is_zero()) {
            m.swap(r0, p);
            if m[r0][c].is_negative() {
                negate_row(&mut m, r0);
            }
            for i in 0..r0 {
                let q = m[i][c].div_floor(&m[r0][c]);
                row_axpy(&mut m, i, r0, &q);
            }
            r0 += 1;
        }
    }
    for row in m.into_iter().take(r0) {
        out.push(row);
    }
    out
}

/// Reduces `v` modulo the ℤ-span of a [`row_hermite`] basis.
pub fn hermite_reduce(basis: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    let mut v = v.to_vec();
    for row in basis {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let q = v[c].div_floor(&row[c]);
        for (x, y) in v.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    v
}

/// Sparse integer system, stored by rows.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    pub rows: Vec<BTreeMap<usize, BigInt>>,
    pub cols: usize,
}

impl SparseSystem {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseSystem {
            rows: vec![BTreeMap::new(); rows],
            cols,
        }
    }

    pub fn add(&mut self, row: usize, col: usize, val: i64) {
        if val == 0 {
            return;
        }
        let e = self.rows[row].entry(col).or_insert_with(BigInt::zero);
        *e += val;
        if e.is_zero() {
            self.rows[row].remove(&col);
        }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(BigInt::zero(), |acc, (&j, a)| acc + a * &x[j]))
            .collect()
    }
}

/// Solves `a x = b` over ℤ for a sparse system.
///
/// Eliminates variables through ±1 pivots first (each such step is a
/// unimodular change of variables and keeps the system integral), then hands
/// the residual block to the dense Smith normal form.
pub fn solve_sparse(a: &SparseSystem, b: &[BigInt]) -> Option<Vec<BigInt>> {
    let nrows = a.rows.len();
    let mut rows = a.rows.clone();
    let mut rhs = b.to_vec();
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); a.cols];
    for (i, r) in rows.iter().enumerate() {
        for &j in r.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut alive: BTreeSet<(usize, usize)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.len(), i))
        .collect();
    let mut row_done = vec![false; nrows];
    // (pivot row contents, pivot column, pivot value, rhs) in elimination order
    let mut eliminated: Vec<(BTreeMap<usize, BigInt>, usize, BigInt, BigInt)> = Vec::new();
    let mut stuck: Vec<usize> = Vec::new();

    while let Some(&(len, i)) = alive.iter().next() {
        alive.remove(&(len, i));
        if rows[i].is_empty() {
            if !rhs[i].is_zero() {
                return None;
            }
            row_done[i] = true;
            continue;
        }
        let pivot = rows[i]
            .iter()
            .filter(|(_, v)| v.abs().is_one())
            .min_by_key(|(&j, _)| col_rows[j].len())
            .map(|(&j, v)| (j, v.clone()));
        let Some((pc, pv)) = pivot else {
            stuck.push(i);
            continue;
        };
        let prow = std::mem::take(&mut rows[i]);
        let pb = rhs[i].clone();
        row_done[i] = true;
        for &j in prow.keys() {
            col_rows[j].remove(&i);
        }
        let others: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in others {
            let f = &rows[r][&pc] * &pv;
            let old_len = rows[r].len();
            let was_alive = alive.remove(&(old_len, r));
            for (&j, v) in &prow {
                let e = rows[r].entry(j).or_insert_with(BigInt::zero);
                *e -= &f * v;
                if e.is_zero() {
                    rows[r].remove(&j);
                    col_rows[j].remove(&r);
                } else {
                    col_rows[j].insert(r);
                }
            }
            rhs[r] -= &f * &pb;
            if was_alive {
                alive.insert((rows[r].len(), r));
            } else if let Some(pos) = stuck.iter().position(|&s| s == r) {
                // A stuck row may have gained a unit entry.
                stuck.swap_remove(pos);
                alive.insert((rows[r].len(), r));
            }
        }
        eliminated.push((prow, pc, pv, pb));
    }

    let mut x = vec![BigInt::zero(); a.cols];
    let pivot_cols: HashSet<usize> = eliminated.iter().map(|e| e.1).collect();
    if !stuck.is_empty() {
        let mut free_cols: Vec<usize> = stuck
            .iter()
            .flat_map(|&i| rows[i].keys().copied())
            .filter(|j| !pivot_cols.contains(j))
            .collect();
        free_cols.sort_unstable();
        free_cols.dedup();
        let index: BTreeMap<usize, usize> =
            free_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let dense: IntMatrix = stuck
            .iter()
            .map(|&i| {
                let mut row = vec![BigInt::zero(); free_cols.len()];
                for (j, v) in &rows[i] {
                    row[index[j]] = v.clone();
                }
                row
            })
            .collect();
        let db: Vec<BigInt> = stuck.iter().map(|&i| rhs[i].clone()).collect();
        let y = solve_integer(&dense, free_cols.len(), &db)?;
        for (k, &j) in free_cols.iter().enumerate() {
            x[j] = y[k].clone();
        }
    }
    for (prow, pc, pv, pb) in eliminated.into_iter().rev() {
        let mut acc = pb;
        for (&j, v) in &prow {
            if j != pc {
                acc -= v * &x[j];
            }
        }
        x[pc] = acc * &pv;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let cols = b[0].len();
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| row.iter().zip(b).fold(BigInt::zero(), |acc, (x, r)| acc + x * &r[j]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn smith_form_of_classic_example() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a, 3);
        assert_eq!(s.invariant_factors(), v(&[2, 6, 12]));
        assert_eq!(mul(&mul(&s.left, &a), &s.right), s.diag);
    }

    #[test]
    fn solves_only_when_integral_solution_exists() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve_integer(&a, 2, &v(&[4, 9])), Some(v(&[2, 3])));
        assert_eq!(solve_integer(&a, 2, &v(&[1, 0])), None);
    }

    #[test]
    fn kernel_of_row_vector() {
        let a = m(&[&[2, 1, 1]]);
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for w in &k {
            assert!(mat_vec(&a, w).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn hermite_reduction_is_canonical() {
        let basis = row_hermite(&m(&[&[2, 4], &[0, 6], &[4, 2]]), 2);
        let a = hermite_reduce(&basis, &v(&[5, 7]));
        let b = hermite_reduce(&basis, &v(&[5 + 2, 7 + 4]));
        assert_eq!(a, b);
    }

    #[test]
    fn sparse_solver_handles_cycle_boundaries() {
        // Boundary matrix of a triangle: edges e0=(0→1), e1=(1→2), e2=(0→2).
        let mut s = SparseSystem::new(3, 3);
        for (e, (t, h)) in [(0, 1), (1, 2), (0, 2)].into_iter().enumerate() {
            s.add(h, e, 1);
            s.add(t, e, -1);
        }
        let b = v(&[-1, 0, 1]);
        let x = solve_sparse(&s, &b).unwrap();
        assert_eq!(s.apply(&x), b);
        assert!(solve_sparse(&s, &v(&[1, 0, 0])).is_none());
    }

    #[test]
    fn sparse_solver_falls_back_to_smith_form() {
        let mut s = SparseSystem::new(2, 2);
        s.add(0, 0, 2);
        s.add(1, 1, 3);
        assert_eq!(solve_sparse(&s, &v(&[4, 6])), Some(v(&[2, 2])));
        assert_eq!(solve_sparse(&s, &v(&[4, 5])), None);
    }
}
