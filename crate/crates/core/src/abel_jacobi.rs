//! The Abel–Jacobi map and the tautological cycle W₁.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{add_vec, fmt_rat, primitive_direction, scale_vec, sub_vec, Rat, Ring, Vector};
use crate::chain::{FramedCell, FramedChain};
use crate::curve::{CurvePoint, CycleBasis, Divisor};
use crate::error::{Error, Result};
use crate::jacobian::{JacobianData, Torus};

/// Image of a vertex along its tree path from the base point (a lift to V).
pub fn vertex_image<R: Ring>(basis: &CycleBasis, lengths: &[R], v: &str) -> Option<Vec<R>> {
    let path = basis.vertex_paths.get(v)?;
    let g = basis.genus();
    let mut acc = vec![R::zero(); g];
    for &(e, s) in path {
        let coeff = R::from_int(i64::from(s)) * lengths[e].clone();
        for i in 0..g {
            let c = basis.matrix[i][e];
            if c != 0 {
                acc[i] = acc[i].clone() + R::from_int(c) * coeff.clone();
            }
        }
    }
    Some(acc)
}

fn point_lift(jd: &JacobianData, p: &CurvePoint) -> Result<Vector> {
    match p {
        CurvePoint::Vertex(v) => vertex_image(&jd.basis, &jd.lengths, v)
            .ok_or_else(|| Error::validation("divisor", format!("unknown vertex {v:?}"))),
        CurvePoint::OnEdge { edge, offset } => {
            let idx = jd.graph.edge_index(edge)?;
            if offset.is_negative() || *offset > jd.lengths[idx] {
                return Err(Error::validation(
                    "divisor",
                    format!("offset {} outside edge {edge:?}", fmt_rat(offset)),
                ));
            }
            let tail = &jd.graph.edges()[idx].tail;
            let base = vertex_image(&jd.basis, &jd.lengths, tail).expect("tail vertex");
            Ok(add_vec(&base, &scale_vec(offset, &jd.functionals[idx].to_rat())))
        }
    }
}

/// `Σ aᵢ μ(pᵢ)` before reduction.
pub fn abel_jacobi_lift(jd: &JacobianData, d: &Divisor) -> Result<Vector> {
    let mut acc = vec![Rat::zero(); jd.genus()];
    for (p, a) in &d.entries {
        let img = point_lift(jd, p)?;
        acc = add_vec(&acc, &scale_vec(&Rat::from_integer((*a).into()), &img));
    }
    Ok(acc)
}

pub fn abel_jacobi_point(jd: &JacobianData, d: &Divisor) -> Result<Vector> {
    let torus = jd.torus()?;
    Ok(torus.reduce(&abel_jacobi_lift(jd, d)?))
}

/// One segment per edge of positive length, from μ(tail) along αₑ·eₑ, framed
/// by the (primitive) edge functional. Edges come in file order.
pub fn w1_cycle(jd: &JacobianData) -> Result<FramedChain> {
    jd.torus()?;
    let g = jd.genus();
    let mut chain = FramedChain::new(1, g);
    for (idx, e) in jd.graph.edges().iter().enumerate() {
        let f = &jd.functionals[idx];
        if f.is_zero() || jd.lengths[idx].is_zero() {
            continue;
        }
        let p = vertex_image(&jd.basis, &jd.lengths, &e.tail).expect("tail vertex");
        let q = add_vec(&p, &scale_vec(&jd.lengths[idx], &f.to_rat()));
        chain.push(FramedCell::segment(p, q, f.coords.iter().map(|&c| BigInt::from(c)).collect()));
    }
    Ok(chain)
}

/// `Σₑ Bᵢₑ αₑ eₑ`, the displacement of W₁ around the i-th basis cycle.
pub fn cycle_displacement(jd: &JacobianData, i: usize) -> Vector {
    let mut acc = vec![Rat::zero(); jd.genus()];
    for (e, f) in jd.functionals.iter().enumerate() {
        let c = jd.basis.matrix[i][e];
        if c != 0 {
            acc = add_vec(&acc, &scale_vec(&(&jd.lengths[e] * Rat::from_integer(c.into())), &f.to_rat()));
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSegment {
    pub from: Vector,
    pub to: Vector,
    pub weight: i64,
}

/// Frames a weighted rational-slope 1-complex by weight times primitive
/// direction, after checking the balancing condition at every endpoint.
pub fn frame_cycle(torus: &Torus, support: &[WeightedSegment]) -> Result<FramedChain> {
    let g = torus.dim();
    let mut balance: BTreeMap<Vector, Vec<BigInt>> = BTreeMap::new();
    let mut chain = FramedChain::new(1, g);
    for s in support {
        let dir = primitive_direction(&sub_vec(&s.to, &s.from)).ok_or(Error::DegenerateSegment)?;
        let framed: Vec<BigInt> = dir.iter().map(|x| x * s.weight).collect();
        for (p, sign) in [(&s.from, 1i64), (&s.to, -1i64)] {
            let entry = balance
                .entry(torus.reduce(p))
                .or_insert_with(|| vec![BigInt::zero(); g]);
            for (acc, x) in entry.iter_mut().zip(&framed) {
                *acc += x * sign;
            }
        }
        chain.push(FramedCell::segment(s.from.clone(), s.to.clone(), framed));
    }
    if let Some((v, _)) = balance.iter().find(|(_, b)| b.iter().any(|x| !x.is_zero())) {
        let coords: Vec<String> = v.iter().map(fmt_rat).collect();
        return Err(Error::NotBalanced(format!("({})", coords.join(","))));
    }
    Ok(chain)
}
