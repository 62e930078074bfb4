//! Multivariate polynomials with exact rational coefficients over named
//! variables. Used for symbolic edge lengths.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{fmt_rat, Rat, Ring};

/// A monomial as a sorted list of `(variable, exponent)` pairs with positive
/// exponents. Ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<String, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            *map.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(map.into_iter().collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn var(name: &str) -> Self {
        Poly::from_term(Monomial::var(name), Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_term(Monomial::one(), c)
    }

    pub fn from_term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn monomials(&self) -> BTreeSet<Monomial> {
        self.terms.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> Rat {
        self.terms.values().fold(Rat::zero(), |acc, c| acc + c.abs())
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    /// Evaluates at the given point. Missing variables are an error.
    pub fn eval(&self, values: &HashMap<String, Rat>) -> Option<Rat> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = values.get(v)?;
                for _ in 0..*e {
                    t = &t * x;
                }
            }
            acc += t;
        }
        Some(acc)
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rat::one())
    }
}

impl Add for Poly {
    type Output = Poly;

    fn add(mut self, rhs: Poly) -> Poly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;

    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;

    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Ring for Poly {
    fn from_int(n: i64) -> Self {
        Poly::constant(Rat::from_integer(BigInt::from(n)))
    }

    fn scale_rat(&self, s: &Rat) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first, then lexicographic within a degree.
        let mut ordered: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0 .0.cmp(&b.0 .0)));
        let mut out = String::new();
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            if m.0.is_empty() {
                out.push_str(&fmt_rat(&mag));
            } else if mag.is_one() {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{}*{}", fmt_rat(&mag), m));
            }
        }
        write!(f, "{out}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    fn v(name: &str) -> Poly {
        Poly::var(name)
    }

    #[test]
    fn arithmetic_and_display() {
        let p = v("a") * v("d");
        assert_eq!(p.to_string(), "a*d");
        let q = (v("a") + v("b")) * (v("a") - v("b"));
        assert_eq!(q.to_string(), "a^2-b^2");
        assert_eq!((-p.clone()).to_string(), "-a*d");
        assert!((p.clone() - p).is_zero());
        let r = Poly::constant(ratio(1, 2)) * v("e") + Poly::from_int(3);
        assert_eq!(r.to_string(), "1/2*e+3");
    }

    #[test]
    fn evaluation() {
        let p = v("a") * v("b") + v("c");
        let vals: HashMap<String, Rat> =
            [("a", rat(2)), ("b", rat(3)), ("c", rat(-1))]
                .into_iter()
                .map(|(k, x)| (k.to_string(), x))
                .collect();
        assert_eq!(p.eval(&vals), Some(rat(5)));
        assert_eq!(v("z").eval(&vals), None);
    }

    #[test]
    fn monomial_order_is_graded() {
        let a = Monomial::var("z");
        let b = Monomial::var("a").mul(&Monomial::var("b"));
        assert!(a < b);
        assert!(Monomial::one() < a);
    }
}
