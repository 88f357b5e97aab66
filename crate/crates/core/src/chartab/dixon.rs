//! Dixon-Schneider character tables.
//!
//! Normalised central characters `w_k = |C_k| chi(g_k) / chi(1)` are the
//! common eigenvectors of the class matrices `(M_j)_{l,k} = a_{jlk}`, where
//! `a_{jlk}` counts pairs `(x, y)` in `C_j x C_l` with `x y = g_k`. Over a
//! prime `p = 1 mod exponent(G)` every eigenvalue lies in `F_p`, so the
//! eigenspaces can be split there. Characters are recovered modulo `p` and
//! then lifted to exact cyclotomic values through eigenvalue multiplicities.

use std::sync::Arc;

use log::debug;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fp::{is_prime, Fp};
use super::{CharacterTable, TableError};
use crate::cyclo::Cyc;
use crate::grp::FiniteGroup;

pub const DEFAULT_DIXON_LIMIT: usize = 2000;
const PRIME_ATTEMPTS: usize = 12;
const RANDOM_SPLITS: usize = 64;

/// Character table of `group`, refusing groups above [`DEFAULT_DIXON_LIMIT`].
pub fn dixon_character_table(group: Arc<FiniteGroup>) -> Result<CharacterTable, TableError> {
    dixon_bounded(group, DEFAULT_DIXON_LIMIT)
}

pub fn dixon_bounded(group: Arc<FiniteGroup>, limit: usize) -> Result<CharacterTable, TableError> {
    let n = group.order();
    if n > limit {
        return Err(TableError::TooLarge { order: n, limit });
    }
    let consts = structure_constants(&group);
    let e = group.exponent() as u64;
    let root = (1..).find(|r: &u64| r * r >= n as u64).unwrap();
    let bound = 2 * root * e;
    let mut candidates = (1..).map(|t: u64| t * e + 1).filter(|&p| p > bound && is_prime(p));
    for attempt in 0..PRIME_ATTEMPTS {
        let p = candidates.next().expect("infinitely many primes 1 mod e");
        match attempt_prime(&group, &consts, Fp { p }) {
            Some(rows) => {
                let table = CharacterTable::from_rows(group.clone(), rows);
                if table.verify().is_ok() {
                    return Ok(table);
                }
                debug!("p = {p}: lifted table failed verification");
            }
            None => debug!("p = {p}: eigenspace splitting failed (attempt {attempt})"),
        }
    }
    Err(TableError::NoPrime)
}

/// `a[j][l][k]` for class representatives `g_k`.
fn structure_constants(g: &FiniteGroup) -> Vec<Vec<Vec<u64>>> {
    let cc = g.conjugacy_classes();
    let r = cc.len();
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for k in 0..r {
        let z = cc.rep(k);
        for (j, aj) in a.iter_mut().enumerate() {
            for &x in cc.members(j) {
                let y = g.mul(g.inv(x), z);
                aj[cc.class_of(y)][k] += 1;
            }
        }
    }
    a
}

fn attempt_prime(g: &FiniteGroup, consts: &[Vec<Vec<u64>>], f: Fp) -> Option<Vec<Vec<Cyc>>> {
    let cc = g.conjugacy_classes();
    let r = cc.len();
    let mats: Vec<Vec<Vec<u64>>> = consts
        .iter()
        .map(|m| m.iter().map(|row| row.iter().map(|&x| x % f.p).collect()).collect())
        .collect();

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
        .collect()];
    let mut rng = ChaCha8Rng::seed_from_u64(f.p);
    let mut tries = 0;
    let mut j = 1;
    while spaces.len() < r {
        let a = if j < r {
            j += 1;
            mats[j - 1].clone()
        } else {
            tries += 1;
            if tries > RANDOM_SPLITS {
                return None;
            }
            let coef: Vec<u64> = (0..r).map(|_| rng.gen_range(0..f.p)).collect();
            combine(f, &mats, &coef)
        };
        let mut next = Vec::new();
        for w in spaces {
            if w.len() == 1 {
                next.push(w);
            } else {
                next.extend(split(f, &a, w)?);
            }
        }
        spaces = next;
    }

    let z = f.pow(f.primitive_root(), (f.p - 1) / cc.exponent() as u64);
    let n = g.order() as u64;
    let mut rows = Vec::with_capacity(r);
    for space in spaces {
        let w = &space[0];
        if w[0] == 0 {
            return None;
        }
        let norm = f.inv(w[0]);
        let w: Vec<u64> = w.iter().map(|&x| f.mul(x, norm)).collect();
        // |G| / d^2 = sum_j w_j w_{j*} / |C_j|
        let mut s = 0;
        for j in 0..r {
            let t = f.mul(w[j], w[cc.inverse_class(j)]);
            s = f.add(s, f.mul(t, f.inv(cc.size(j) as u64 % f.p)));
        }
        if s == 0 {
            return None;
        }
        let d2 = f.mul(n % f.p, f.inv(s));
        let d = (1..).take_while(|d: &u64| d * d <= n).find(|&d| f.mul(d, d) == d2)?;
        let values: Vec<u64> = (0..r)
            .map(|j| f.mul(f.mul(d, w[j]), f.inv(cc.size(j) as u64 % f.p)))
            .collect();
        rows.push(lift_row(f, g, z, d, &values)?);
    }
    Some(rows)
}

fn combine(f: Fp, mats: &[Vec<Vec<u64>>], coef: &[u64]) -> Vec<Vec<u64>> {
    let r = coef.len();
    let mut out = vec![vec![0u64; r]; r];
    for (m, &c) in mats.iter().zip(coef) {
        for (orow, mrow) in out.iter_mut().zip(m) {
            for (o, &x) in orow.iter_mut().zip(mrow) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
    }
    out
}

/// Splits an `a`-invariant subspace (rows in RREF) into eigenspaces of `a`.
fn split(f: Fp, a: &[Vec<u64>], basis: Vec<Vec<u64>>) -> Option<Vec<Vec<Vec<u64>>>> {
    let d = basis.len();
    let r = a.len();
    let pivots: Vec<usize> = basis
        .iter()
        .map(|b| b.iter().position(|&x| x != 0).unwrap())
        .collect();
    // Restriction: column i holds the coordinates of a * b_i.
    let mut c = vec![vec![0u64; d]; d];
    for (i, b) in basis.iter().enumerate() {
        for (row, &pv) in pivots.iter().enumerate() {
            let mut s = 0;
            for k in 0..r {
                s = f.add(s, f.mul(a[pv][k], b[k]));
            }
            c[row][i] = s;
        }
    }
    let roots = f.roots(&f.charpoly(&c));
    if roots.len() == 1 {
        return Some(vec![basis]);
    }
    let mut out = Vec::new();
    let mut total = 0;
    for t in roots {
        let mut shifted = c.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = f.sub(row[i], t);
        }
        let ys = f.nullspace(&shifted, d);
        total += ys.len();
        let mut vecs: Vec<Vec<u64>> = ys
            .iter()
            .map(|y| {
                (0..r)
                    .map(|k| {
                        y.iter()
                            .zip(&basis)
                            .fold(0, |acc, (&yi, b)| f.add(acc, f.mul(yi, b[k])))
                    })
                    .collect()
            })
            .collect();
        f.rref(&mut vecs);
        out.push(vecs);
    }
    (total == d).then_some(out)
}

/// Exact character from its values modulo `p`. At a class of order `o`,
/// `chi(g) = sum_k m_k zeta_o^k` where `m_k` is the multiplicity of the
/// eigenvalue `zeta_o^k`, recovered as a discrete Fourier coefficient.
fn lift_row(f: Fp, g: &FiniteGroup, z: u64, degree: u64, values: &[u64]) -> Option<Vec<Cyc>> {
    let cc = g.conjugacy_classes();
    let e = cc.exponent() as u64;
    let mut row = Vec::with_capacity(values.len());
    for j in 0..values.len() {
        let o = cc.rep_order(j) as u64;
        let zo = f.pow(z, e / o);
        let zinv = f.inv(zo);
        let oinv = f.inv(o % f.p);
        let mut mult = Vec::with_capacity(o as usize);
        let mut total = 0;
        for k in 0..o {
            let step = f.pow(zinv, k);
            let mut s = 0;
            let mut w = 1;
            for l in 0..o {
                s = f.add(s, f.mul(values[cc.power_of(j, l as i64)], w));
                w = f.mul(w, step);
            }
            let m = f.mul(s, oinv);
            if m > degree {
                return None;
            }
            total += m;
            mult.push((k as i64, BigRational::from_integer(BigInt::from(m))));
        }
        if total != degree {
            return None;
        }
        row.push(Cyc::reduce(mult, o as u32));
    }
    Some(row)
}
