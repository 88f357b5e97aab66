//! Rank of the Karoubi periodicity group `pi_{V-W} KO_G` (real) or
//! `pi_{V-W} KU_G` (complex), counted over conjugacy classes.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use super::PeriodicError;
use crate::cyclo::Cyc;
use crate::grp::FiniteGroup;
use crate::repring::{real_structure, Flavor, VirtualChar};

/// Character of `V^g` as a representation of the centralizer of `g`:
/// `h -> (1/|g|) sum_t chi_V(h g^t)`.
fn fixed_character(g: &FiniteGroup, v: &VirtualChar, x: u32, cent: &[u32]) -> HashMap<u32, Cyc> {
    let o = g.element_order(x);
    let powers: Vec<u32> = (0..o as i64).map(|t| g.pow(x, t)).collect();
    let inv_o = BigRational::new(BigInt::one(), BigInt::from(o));
    cent.iter()
        .map(|&h| {
            let s = powers
                .iter()
                .fold(Cyc::zero(1), |acc, &p| &acc + v.value_at(g.mul(h, p)));
            (h, s.scale(&inv_o))
        })
        .collect()
}

/// `det(h | V^g)` by Newton's identities on the power sums
/// `chi_{V^g}(h^s)`.
fn det_at(g: &FiniteGroup, f: &HashMap<u32, Cyc>, h: u32, dim: usize) -> Cyc {
    let p: Vec<Cyc> = (0..=dim as i64).map(|s| f[&g.pow(h, s)].clone()).collect();
    let mut e = vec![Cyc::from_int(1, 1)];
    for t in 1..=dim {
        let mut acc = Cyc::zero(1);
        for s in 1..=t {
            let term = &e[t - s] * &p[s];
            acc = if s % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(t))));
    }
    e.pop().unwrap()
}

fn fixed_dim(f: &HashMap<u32, Cyc>, id: u32) -> Result<usize, PeriodicError> {
    f[&id]
        .as_integer()
        .and_then(|d| usize::try_from(d).ok())
        .ok_or_else(|| PeriodicError::Invariant("fixed subspace has non-integral dimension".into()))
}

/// A class contributes one to the rank when the fixed-point dimensions of
/// `V` and `W` have equal parity and `V^g`, `W^g` carry the same
/// determinant on the centralizer. In the complex case both conditions are
/// automatic, so the rank is the number of classes.
pub fn karoubi_rank(v: &VirtualChar, w: &VirtualChar, flavor: Flavor) -> Result<usize, PeriodicError> {
    if v.plus(w).is_err() {
        return Err(crate::repring::ReprError::TableMismatch.into());
    }
    if !v.is_honest() || !w.is_honest() {
        return Err(PeriodicError::NotHonestDifference(format!("{v} - ({w})")));
    }
    let t = v.table();
    let cc = t.classes();
    if flavor == Flavor::Complex {
        return Ok(cc.len());
    }
    let rs = real_structure(t);
    for x in [v, w] {
        if !rs.contains(x) {
            return Err(PeriodicError::NotReal(x.to_string()));
        }
    }
    let g = t.group();
    let id = g.identity();
    let mut rank = 0;
    for j in 0..cc.len() {
        let x = cc.rep(j);
        let cent = g.centralizer(x);
        let fv = fixed_character(g, v, x, &cent);
        let fw = fixed_character(g, w, x, &cent);
        let (dv, dw) = (fixed_dim(&fv, id)?, fixed_dim(&fw, id)?);
        if (dv + dw).is_odd() {
            continue;
        }
        let one = Cyc::from_int(1, 1);
        let oriented = cent
            .iter()
            .all(|&h| &det_at(g, &fv, h, dv) * &det_at(g, &fw, h, dw) == one);
        if oriented {
            rank += 1;
        }
    }
    Ok(rank)
}
