#![allow(dead_code)]

use std::path::PathBuf;

use num_rational::BigRational;
use num_traits::{One, Zero};
use tropjac::curve::{parse_curve, MetricGraph};
use tropjac::poly::{Monomial, Poly};

pub type Rat = BigRational;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn fixture(name: &str) -> MetricGraph {
    let text = std::fs::read_to_string(data_path(name)).expect("fixture");
    parse_curve(&text).expect("valid fixture")
}

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Parses sums like `ab+ad-2cf` or `a*b-c`: single-letter variables,
/// optional integer coefficients.
pub fn poly(s: &str) -> Poly {
    let mut out = Poly::zero();
    let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let mut term = String::new();
    let mut sign = 1i64;
    let flush = |term: &str, sign: i64, out: &mut Poly| {
        if term.is_empty() {
            return;
        }
        let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
        let coeff: i64 = if digits.is_empty() { 1 } else { digits.parse().unwrap() };
        let mut p = Poly::constant(q(sign * coeff, 1));
        for c in term[digits.len()..].chars() {
            p = p * Poly::var(&c.to_string());
        }
        *out = out.clone() + p;
    };
    for c in s.chars() {
        if c == '+' || c == '-' {
            flush(&term, sign, &mut out);
            term.clear();
            sign = if c == '-' { -1 } else { 1 };
        } else {
            term.push(c);
        }
    }
    flush(&term, sign, &mut out);
    out
}

/// Rank over ℚ of polynomials viewed as coefficient vectors on monomials.
pub fn rational_rank(polys: &[Poly]) -> usize {
    let mut monos: Vec<Monomial> = polys.iter().flat_map(|p| p.monomials()).collect();
    monos.sort();
    monos.dedup();
    let mut rows: Vec<Vec<Rat>> = polys.iter().map(|p| monos.iter().map(|m| p.coefficient(m)).collect()).collect();
    let mut rank = 0;
    for col in 0..monos.len() {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = Rat::one() / rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone() * inv.clone();
                for c in 0..monos.len() {
                    let v = rows[rank][c].clone() * f.clone();
                    rows[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by cofactor expansion, for small integer matrices.
pub fn int_det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * int_det(&minor)
        })
        .sum()
}

/// Every square submatrix, exhaustively.
pub fn totally_unimodular(m: &[Vec<i64>]) -> bool {
    let (rows, cols) = (m.len(), m[0].len());
    for rmask in 1u32..(1 << rows) {
        let rs: Vec<usize> = (0..rows).filter(|i| rmask & (1 << i) != 0).collect();
        for cmask in 1u32..(1 << cols) {
            if cmask.count_ones() as usize != rs.len() {
                continue;
            }
            let cs: Vec<usize> = (0..cols).filter(|j| cmask & (1 << j) != 0).collect();
            let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
            if int_det(&sub).abs() > 1 {
                return false;
            }
        }
    }
    true
}
