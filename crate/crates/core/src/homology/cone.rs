//! A connecting 2-chain built by coning from the origin.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{add_vec, cross, is_zero_vec, sub_vec, Vector};
use crate::chain::{canonicalize, chains_equal, homology_class, neg_framing, FramedCell, FramedChain, Framing};
use crate::error::{Error, Result};
use crate::jacobian::Torus;

fn push_polygon(out: &mut Vec<FramedCell>, verts: Vec<Vector>, framing: &Framing) {
    let flat = (2..verts.len()).all(|i| {
        is_zero_vec(&cross(&sub_vec(&verts[1], &verts[0]), &sub_vec(&verts[i], &verts[0])))
    });
    if !flat {
        out.push(FramedCell::polygon(verts, framing.clone()));
    }
}

/// Cells `R` with `∂R = ℓ(x, v) − Σ nᵢ ℓ(0, λᵢ)` where `ℓ(x, v)` is the loop
/// `[x, x+v]` and `v = Σ nᵢ λᵢ`.
fn loop_filling(torus: &Torus, x: &Vector, n: &[BigInt], framing: &Framing, out: &mut Vec<FramedCell>) {
    let g = x.len();
    let o = vec![crate::arith::Rat::zero(); g];
    let v = torus.lattice_point(n);
    push_polygon(out, vec![o.clone(), x.clone(), add_vec(x, &v), v], framing);
    // ℓ(0, w+u) = ℓ(0, w) + ℓ(0, u) − ∂T(0, w, w+u)
    let neg = neg_framing(framing);
    let mut w = o.clone();
    for (i, ni) in n.iter().enumerate() {
        let mut step = vec![BigInt::zero(); g];
        step[i] = if ni.is_negative() { BigInt::from(-1) } else { BigInt::from(1) };
        let u = torus.lattice_point(&step);
        let mut k = ni.abs();
        while !k.is_zero() {
            let next = add_vec(&w, &u);
            if !is_zero_vec(&w) {
                push_polygon(out, vec![o.clone(), w.clone(), next.clone()], &neg);
            }
            w = next;
            k -= 1;
        }
    }
}

/// A 2-chain `γ` with `∂γ = c` for a null-homologous framed 1-cycle `c`.
pub fn cone_chain(torus: &Torus, c: &FramedChain) -> Result<FramedChain> {
    if c.k != 1 {
        return Err(Error::Dimension("connecting chains fill 1-cycles".into()));
    }
    if !homology_class(torus, c)?.is_zero() {
        return Err(Error::NoSolution);
    }
    let g = c.g;
    let o = vec![crate::arith::Rat::zero(); g];
    let c = canonicalize(torus, c);
    let mut cells = Vec::new();
    for cell in &c.cells {
        let (a, b) = (&cell.verts[0], &cell.verts[1]);
        let p = torus.reduce(a);
        let q = add_vec(&p, &sub_vec(b, a));
        let shift = torus.floor_shift(&q);
        push_polygon(&mut cells, vec![o.clone(), p, q.clone()], &cell.framing);
        if shift.iter().any(|s| !s.is_zero()) {
            let qbar = sub_vec(&q, &torus.lattice_point(&shift));
            push_polygon(&mut cells, vec![o.clone(), q, qbar.clone()], &cell.framing);
            // the leftover loop [q̄, q̄ − N] is removed with the opposite sign
            let n: Vec<BigInt> = shift.iter().map(|s| -s).collect();
            let mut filling = Vec::new();
            loop_filling(torus, &qbar, &n, &cell.framing, &mut filling);
            cells.extend(filling.into_iter().map(|f| FramedCell {
                framing: neg_framing(&f.framing),
                verts: f.verts,
            }));
        }
    }
    let gamma = FramedChain::from_cells(2, g, cells)?;
    let check = crate::chain::boundary(torus, &gamma)?;
    if !chains_equal(torus, &check, &c) {
        return Err(Error::Internal("cone chain boundary mismatch".into()));
    }
    Ok(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat_vec, ratio};
    use crate::chain::{boundary, integrate_omega0, negate_cycle};

    fn ints(xs: &[i64]) -> Framing {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn fills_a_boundary() {
        let torus = Torus::new(vec![rat_vec(&[3, -1, -1]), rat_vec(&[-1, 3, -1]), rat_vec(&[-1, -1, 3])]).unwrap();
        let tri = FramedChain::from_cells(
            2,
            3,
            vec![FramedCell::polygon(
                vec![rat_vec(&[2, 1, 0]), vec![ratio(7, 2), ratio(3, 1), ratio(-1, 3)], rat_vec(&[5, -4, 2])],
                ints(&[1, 2, -1]),
            )],
        )
        .unwrap();
        let c = boundary(&torus, &tri).unwrap();
        let gamma = cone_chain(&torus, &c).unwrap();
        assert!(chains_equal(&torus, &boundary(&torus, &gamma).unwrap(), &c));
        // the difference is a 2-cycle, so its integral is a period
        let diff = integrate_omega0(&gamma).unwrap() - integrate_omega0(&tri).unwrap();
        let lattice = crate::homology::PeriodLattice::new(
            crate::homology::period_generators(&torus.q).unwrap(),
        );
        assert!(lattice.contains(&diff));
    }

    #[test]
    fn rejects_nonzero_class() {
        let torus = Torus::standard(3);
        let c = FramedChain::from_cells(
            1,
            3,
            vec![FramedCell::segment(rat_vec(&[0, 0, 0]), rat_vec(&[1, 0, 0]), ints(&[1, 0, 0]))],
        )
        .unwrap();
        assert!(matches!(cone_chain(&torus, &c), Err(Error::NoSolution)));
        let both = c.plus(&negate_cycle(&c));
        assert!(cone_chain(&torus, &both).is_err());
    }
}
