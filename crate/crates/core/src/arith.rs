//! Exact rational scalars, small dense matrices and the ring abstraction shared
//! by numeric and symbolic computations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type Vector = Vec<Rat>;
pub type Matrix<R> = Vec<Vec<R>>;

/// Commutative ring with unit. Implemented by [`Rat`] and by
/// [`crate::poly::Poly`], so Gram matrices, minors and the area formula can run
/// in either mode.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
    fn scale_rat(&self, s: &Rat) -> Self;
}

impl Ring for Rat {
    fn from_int(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }

    fn scale_rat(&self, s: &Rat) -> Self {
        self * s
    }
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_rat(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn rat_vec(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| rat(x)).collect()
}

/// Parses `"p"` or `"p/q"` with optional leading minus. Decimal points and
/// exponents are rejected so that lengths stay exact.
pub fn parse_rational(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let is_int = |t: &str| {
        let body = t.strip_prefix('-').unwrap_or(t);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num) || !is_int(den) || den.starts_with('-') {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn floor_int(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I: IntoIterator<Item = &'a Rat>>(xs: I) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to the primitive integer vector on the same ray.
/// Returns `None` for the zero vector.
pub fn primitive_direction(v: &[Rat]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let den = common_denominator(v.iter());
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * int_to_rat(&den)).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    Some(ints.into_iter().map(|x| x / &g).collect())
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

pub fn add_vec<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub_vec<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale_vec<R: Ring>(s: &R, a: &[R]) -> Vec<R> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

pub fn neg_vec<R: Ring>(a: &[R]) -> Vec<R> {
    a.iter().map(|x| -x.clone()).collect()
}

pub fn dot<R: Ring>(a: &[R], b: &[R]) -> R {
    a.iter()
        .zip(b)
        .fold(R::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn cross(a: &[Rat], b: &[Rat]) -> Vector {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn det3(a: &[Rat], b: &[Rat], c: &[Rat]) -> Rat {
    dot(&cross(a, b), c)
}

pub fn is_zero_vec<R: Ring>(a: &[R]) -> bool {
    a.iter().all(Zero::is_zero)
}

pub fn mat_vec<R: Ring>(m: &Matrix<R>, v: &[R]) -> Vec<R> {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul<R: Ring>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(R::zero(), |acc, (x, brow)| acc + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn transpose<R: Ring>(m: &Matrix<R>) -> Matrix<R> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn column<R: Ring>(m: &Matrix<R>, j: usize) -> Vec<R> {
    m.iter().map(|row| row[j].clone()).collect()
}

/// Determinant by cofactor expansion. Works over any ring; intended for the
/// small (g ≤ 6) matrices this crate deals with.
pub fn det<R: Ring>(m: &Matrix<R>) -> R {
    let n = m.len();
    match n {
        0 => R::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = R::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let term = m[0][j].clone() * det(&minor_matrix(m, 0, j));
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// The matrix with row `i` and column `j` removed.
pub fn minor_matrix<R: Ring>(m: &Matrix<R>, i: usize, j: usize) -> Matrix<R> {
    m.iter()
        .enumerate()
        .filter(|&(r, _)| r != i)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(c, _)| c != j)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Signed cofactor `(-1)^(i+j) det(minor(i, j))`.
pub fn cofactor<R: Ring>(m: &Matrix<R>, i: usize, j: usize) -> R {
    let d = det(&minor_matrix(m, i, j));
    if (i + j) % 2 == 0 {
        d
    } else {
        -d
    }
}

/// Inverse of a square rational matrix by Gauss–Jordan elimination.
pub fn inverse(m: &Matrix<Rat>) -> Option<Matrix<Rat>> {
    let n = m.len();
    let mut a: Matrix<Rat> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &f * &a[col][c];
                    a[r][c] = &a[r][c] - delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Rank of a rational matrix.
pub fn rank(m: &Matrix<Rat>) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for k in c..cols {
                    let delta = &f * &a[r][k];
                    a[i][k] = &a[i][k] - delta;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Solves `m x = b` for a square nonsingular rational matrix.
pub fn solve(m: &Matrix<Rat>, b: &[Rat]) -> Option<Vector> {
    inverse(m).map(|inv| mat_vec(&inv, b))
}

pub fn identity<R: Ring>(n: usize) -> Matrix<R> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { R::one() } else { R::zero() }).collect())
        .collect()
}

pub fn to_rat_matrix(m: &[Vec<i64>]) -> Matrix<Rat> {
    m.iter().map(|r| rat_vec(r)).collect()
}

/// Lexicographic comparison of rational vectors.
pub fn lex_cmp(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    a.iter().cmp(b.iter())
}

pub fn abs_rat(x: &Rat) -> Rat {
    x.abs()
}

pub fn sign(x: &Rat) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
