//! Periods of the determinantal form Ω₀ and membership in their lattice.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{column, common_denominator, fmt_rat, int_to_rat, Matrix, Rat, Ring};
use crate::chain::omega0_polygon;
use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::snf::solve_integer;

fn unit<R: Ring>(g: usize, j: usize) -> Vec<R> {
    (0..g).map(|i| if i == j { R::one() } else { R::zero() }).collect()
}

/// `∫ Ω₀` over the parallelogram spanned by `λ_{i+1}, λ_{i+2}` framed by `e_j`.
pub fn period_integral<R: Ring>(q: &Matrix<R>, i: usize, j: usize) -> R {
    let u = column(q, (i + 1) % 3);
    let v = column(q, (i + 2) % 3);
    let o = vec![R::zero(); 3];
    let uv: Vec<R> = u.iter().zip(&v).map(|(a, b)| a.clone() + b.clone()).collect();
    omega0_polygon(&[o, u, uv, v], &unit::<R>(3, j))
}

/// The 3×3 matrix of minors `M_ij = det[λ_{i+1}, λ_{i+2}, e_j]`.
pub fn period_minors<R: Ring>(q: &Matrix<R>) -> Result<Matrix<R>> {
    if q.len() != 3 {
        return Err(Error::WrongGenus {
            expected: "3".into(),
            found: q.len(),
        });
    }
    Ok((0..3)
        .map(|i| {
            (0..3)
                .map(|j| {
                    let m = vec![column(q, (i + 1) % 3), column(q, (i + 2) % 3), unit(3, j)];
                    crate::arith::det(&m)
                })
                .collect()
        })
        .collect())
}

/// The six distinct minors of a symmetric Q, upper triangle in row order.
pub fn period_generators<R: Ring>(q: &Matrix<R>) -> Result<Vec<R>> {
    let m = period_minors(q)?;
    Ok((0..3).flat_map(|i| (i..3).map(move |j| (i, j))).map(|(i, j)| m[i][j].clone()).collect())
}

/// A finitely generated subgroup of ℚ in normal form `(G/N)ℤ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodLattice {
    pub generators: Vec<Rat>,
    pub denominator: BigInt,
    pub gcd: BigInt,
}

impl PeriodLattice {
    pub fn new(generators: Vec<Rat>) -> Self {
        let denominator = common_denominator(generators.iter());
        let gcd = generators.iter().fold(BigInt::zero(), |acc, x| {
            acc.gcd(&(x * int_to_rat(&denominator)).to_integer())
        });
        PeriodLattice {
            generators,
            denominator,
            gcd,
        }
    }

    /// The positive generator `G/N`, zero for the trivial group.
    pub fn step(&self) -> Rat {
        Rat::new(self.gcd.clone(), self.denominator.clone())
    }

    pub fn contains(&self, x: &Rat) -> bool {
        let step = self.step();
        if step.is_zero() {
            x.is_zero()
        } else {
            (x / step).is_integer()
        }
    }

    /// Representative in `[0, step)`.
    pub fn residue(&self, x: &Rat) -> Rat {
        let step = self.step();
        if step.is_zero() {
            return x.clone();
        }
        let q = (x / &step).floor();
        x - q * step
    }

    /// The residue class of `±x` as a single number in `[0, step/2]`.
    pub fn symmetric_residue(&self, x: &Rat) -> Rat {
        let r = self.residue(x);
        let step = self.step();
        if step.is_zero() {
            return r.abs();
        }
        let other = &step - &r;
        if other < r {
            other
        } else {
            r
        }
    }

    pub fn describe(&self) -> String {
        fmt_rat(&self.step())
    }
}

/// Integer polynomials spanned by the period generators, tested on monomial
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicPeriodLattice {
    pub generators: Vec<Poly>,
}

impl SymbolicPeriodLattice {
    pub fn new(generators: Vec<Poly>) -> Self {
        SymbolicPeriodLattice { generators }
    }

    /// Integer coefficients `n` with `x = Σ nᵢ Pᵢ`, if they exist.
    pub fn coefficients(&self, x: &Poly) -> Option<Vec<BigInt>> {
        if !x.has_integer_coefficients() || self.generators.iter().any(|p| !p.has_integer_coefficients()) {
            return None;
        }
        let mut monomials: BTreeSet<Monomial> = x.monomials();
        for p in &self.generators {
            monomials.extend(p.monomials());
        }
        let a: Vec<Vec<BigInt>> = monomials
            .iter()
            .map(|m| self.generators.iter().map(|p| p.coefficient(m).to_integer()).collect())
            .collect();
        let b: Vec<BigInt> = monomials.iter().map(|m| x.coefficient(m).to_integer()).collect();
        solve_integer(&a, self.generators.len(), &b)
    }

    pub fn contains(&self, x: &Poly) -> bool {
        self.coefficients(x).is_some()
    }

    /// Same ℤ-module as `other`.
    pub fn same_span(&self, other: &SymbolicPeriodLattice) -> bool {
        self.generators.iter().all(|p| other.contains(p)) && other.generators.iter().all(|p| self.contains(p))
    }

    /// A short representative of `±x` modulo the lattice: the minimum of
    /// (term count, coefficient norm, sign, text) over `±x − Σ nᵢPᵢ` with
    /// `|nᵢ| ≤ 2`.
    pub fn reduce(&self, x: &Poly) -> Poly {
        let k = self.generators.len();
        let mut monomials: BTreeSet<Monomial> = x.monomials();
        for p in &self.generators {
            monomials.extend(p.monomials());
        }
        let monomials: Vec<Monomial> = monomials.into_iter().collect();
        let coords = |p: &Poly| -> Vec<Rat> { monomials.iter().map(|m| p.coefficient(m)).collect() };
        let gens: Vec<Vec<Rat>> = self.generators.iter().map(coords).collect();
        let to_poly = |v: &[Rat]| -> Poly {
            monomials
                .iter()
                .zip(v)
                .fold(Poly::zero(), |acc, (m, c)| acc + Poly::from_term(m.clone(), c.clone()))
        };
        // Monomials are sorted, so the leading term is the last nonzero entry.
        let rough = |v: &[Rat]| {
            let len = v.iter().filter(|c| !c.is_zero()).count();
            let l1: Rat = v.iter().map(|c| c.abs()).sum();
            let negative_lead = v.iter().rev().find(|c| !c.is_zero()).map_or(false, |c| c.is_negative());
            (len, l1, negative_lead)
        };
        let xv = coords(x);
        let mut best = x.clone();
        let mut best_key = (rough(&xv), best.to_string());
        let mut n = vec![-2i64; k];
        let mut combo: Vec<Rat> = vec![Rat::zero(); monomials.len()];
        for g in &gens {
            for (c, y) in combo.iter_mut().zip(g) {
                *c -= y * Rat::from_integer(2.into());
            }
        }
        loop {
            for sign in [1i64, -1] {
                let cand: Vec<Rat> = xv
                    .iter()
                    .zip(&combo)
                    .map(|(a, c)| a * Rat::from_integer(sign.into()) - c)
                    .collect();
                let r = rough(&cand);
                if r <= best_key.0 {
                    let p = to_poly(&cand);
                    let key = (r, p.to_string());
                    if key < best_key {
                        best = p;
                        best_key = key;
                    }
                }
            }
            let Some(i) = (0..k).find(|&i| n[i] < 2) else { break };
            n[i] += 1;
            for (c, y) in combo.iter_mut().zip(&gens[i]) {
                *c += y;
            }
            for j in 0..i {
                for (c, y) in combo.iter_mut().zip(&gens[j]) {
                    *c -= y * Rat::from_integer(4.into());
                }
                n[j] = -2;
            }
        }
        best
    }
}

/// The alternative generating set: opposite-pair differences and the four
/// vertex sums, for the canonical K₄ variables.
pub fn symmetric_generators() -> Vec<Poly> {
    let v = |s: &str| Poly::var(s);
    let ad = v("a") * v("d");
    let be = v("b") * v("e");
    let cf = v("c") * v("f");
    vec![
        ad.clone() - be,
        ad.clone() - cf,
        v("d") * v("e") + v("d") * v("f") + v("e") * v("f") + ad.clone(),
        v("a") * v("b") + v("a") * v("f") + v("b") * v("f") + ad.clone(),
        v("a") * v("c") + v("a") * v("e") + v("c") * v("e") + ad.clone(),
        v("b") * v("c") + v("b") * v("d") + v("c") * v("d") + ad,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_vec, ratio};

    #[test]
    fn unit_k4_periods() {
        let q = vec![rat_vec(&[3, -1, -1]), rat_vec(&[-1, 3, -1]), rat_vec(&[-1, -1, 3])];
        let gens = period_generators(&q).unwrap();
        let mut sorted = gens.clone();
        sorted.sort();
        assert_eq!(sorted, rat_vec(&[4, 4, 4, 8, 8, 8]));
        let lattice = PeriodLattice::new(gens);
        assert_eq!(lattice.step(), rat(4));
        assert!(!lattice.contains(&rat(1)));
        assert_eq!(lattice.symmetric_residue(&rat(-5)), rat(1));
        assert_eq!(lattice.symmetric_residue(&rat(7)), rat(1));
    }

    #[test]
    fn rational_normal_form() {
        let l = PeriodLattice::new(vec![ratio(1, 2), ratio(1, 3)]);
        assert_eq!(l.step(), ratio(1, 6));
        assert!(l.contains(&ratio(5, 6)));
        assert!(!l.contains(&ratio(1, 12)));
    }

    #[test]
    fn period_integral_matches_minor() {
        let q = vec![rat_vec(&[5, -1, -2]), rat_vec(&[-1, 4, -1]), rat_vec(&[-2, -1, 6])];
        let m = period_minors(&q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(period_integral(&q, i, j), m[i][j]);
            }
        }
    }

    #[test]
    fn symbolic_membership() {
        let lat = SymbolicPeriodLattice::new(symmetric_generators());
        let ad = Poly::var("a") * Poly::var("d");
        assert!(!lat.contains(&ad));
        assert!(lat.contains(&(Poly::var("b") * Poly::var("e") - Poly::var("c") * Poly::var("f"))));
        assert!(!lat.contains(&ad.scale(&ratio(1, 2))));
        let r = Poly::var("d") * Poly::var("e") + Poly::var("d") * Poly::var("f") + Poly::var("e") * Poly::var("f");
        assert_eq!(lat.reduce(&r).to_string(), "a*d");
    }
}
