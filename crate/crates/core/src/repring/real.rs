//! Real structure: Frobenius-Schur indicators, the lattice `RO(G)` inside
//! `RU(G)` and the conjugation pairing.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{ReprError, VirtualChar};
use crate::chartab::CharacterTable;
use crate::cyclo::Cyc;
use crate::lattice::IntMatrix;

/// `(1/|G|) sum_g chi_i(g^2)`.
pub fn frobenius_schur(table: &CharacterTable, i: usize) -> i8 {
    let cc = table.classes();
    let mut s = Cyc::zero(1);
    for j in 0..cc.len() {
        let size = BigRational::from_integer(cc.size(j).into());
        s = &s + &table.value(i, cc.power_of(j, 2)).scale(&size);
    }
    let q = s.as_rational().expect("indicator sum is rational")
        / BigRational::from_integer(table.group().order().into());
    assert!(q.is_integer(), "Frobenius-Schur indicator {q} is not an integer");
    i8::try_from(q.to_integer()).expect("indicator in {-1, 0, 1}")
}

#[derive(Clone, Debug)]
pub struct RealStructure {
    indicators: Vec<i8>,
    conj_perm: Vec<usize>,
    /// Basis of `RO(G)` in irreducible coordinates.
    ro_basis: Vec<Vec<BigInt>>,
}

/// Cached per table.
pub fn real_structure(table: &CharacterTable) -> &RealStructure {
    table.real_cell().get_or_init(|| {
        let r = table.len();
        let indicators: Vec<i8> = (0..r).map(|i| frobenius_schur(table, i)).collect();
        let conj_perm: Vec<usize> = (0..r)
            .map(|i| {
                let c: Vec<Cyc> = table.row(i).iter().map(Cyc::conj).collect();
                (0..r).find(|&k| table.row(k) == c.as_slice()).expect("conjugate row exists")
            })
            .collect();
        let unit = |i: usize, k: i64| {
            let mut v = vec![BigInt::zero(); r];
            v[i] += k;
            v
        };
        let mut ro_basis = Vec::new();
        for i in 0..r {
            match indicators[i] {
                1 => ro_basis.push(unit(i, 1)),
                -1 => ro_basis.push(unit(i, 2)),
                _ => {
                    if i < conj_perm[i] {
                        let mut v = unit(i, 1);
                        v[conj_perm[i]] += 1;
                        ro_basis.push(v);
                    }
                }
            }
        }
        RealStructure {
            indicators,
            conj_perm,
            ro_basis,
        }
    })
}

impl RealStructure {
    pub fn indicators(&self) -> &[i8] {
        &self.indicators
    }

    pub fn conj_perm(&self) -> &[usize] {
        &self.conj_perm
    }

    pub fn ro_rank(&self) -> usize {
        self.ro_basis.len()
    }

    pub fn ro_basis_coords(&self) -> &[Vec<BigInt>] {
        &self.ro_basis
    }

    pub fn ro_basis(&self, table: &Arc<CharacterTable>) -> Vec<VirtualChar> {
        self.ro_basis
            .iter()
            .map(|c| VirtualChar::new(table.clone(), c.clone()).unwrap())
            .collect()
    }

    /// Columns are the `RO(G)` basis vectors.
    pub fn ro_matrix(&self) -> IntMatrix {
        let rows = self.conj_perm.len();
        IntMatrix::from_columns(rows, &self.ro_basis)
    }

    /// Coordinates of `v` in the `RO(G)` basis, if it lies in that lattice.
    pub fn ro_coords(&self, v: &VirtualChar) -> Option<Vec<BigInt>> {
        let c = v.coords();
        let mut out = Vec::with_capacity(self.ro_basis.len());
        for i in 0..c.len() {
            match self.indicators[i] {
                1 => out.push(c[i].clone()),
                -1 => {
                    let (q, r) = c[i].div_rem(&BigInt::from(2));
                    if !r.is_zero() {
                        return None;
                    }
                    out.push(q);
                }
                _ => {
                    let k = self.conj_perm[i];
                    if c[i] != c[k] {
                        return None;
                    }
                    if i < k {
                        out.push(c[i].clone());
                    }
                }
            }
        }
        Some(out)
    }

    pub fn from_ro_coords(&self, table: &Arc<CharacterTable>, coords: &[BigInt]) -> VirtualChar {
        let r = self.conj_perm.len();
        let mut v = vec![BigInt::zero(); r];
        for (b, c) in self.ro_basis.iter().zip(coords) {
            for (x, y) in v.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        VirtualChar::new(table.clone(), v).unwrap()
    }

    pub fn contains(&self, v: &VirtualChar) -> bool {
        self.ro_coords(v).is_some()
    }
}

/// `G_ij = epsilon(chi_i chi_j) = <chi_i, conj(chi_j)>`.
pub fn gram_matrix(table: &CharacterTable) -> IntMatrix {
    let r = table.len();
    let mut g = IntMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            let conj: Vec<Cyc> = table.row(j).iter().map(Cyc::conj).collect();
            let ip = table.inner_product(table.row(i), &conj).expect("rows have equal length");
            g[(i, j)] = ip.to_integer();
        }
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Real,
    Complex,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Real => "real",
            Flavor::Complex => "complex",
        })
    }
}

/// A representation together with the presentation the caller used. Real
/// representations are stored as their complexifications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlavoredRep {
    rep: VirtualChar,
    flavor: Flavor,
}

impl FlavoredRep {
    pub fn complex(rep: VirtualChar) -> FlavoredRep {
        FlavoredRep {
            rep,
            flavor: Flavor::Complex,
        }
    }

    /// `rep` must be the complexification of a real virtual representation.
    pub fn real(rep: VirtualChar) -> Result<FlavoredRep, ReprError> {
        if !real_structure(rep.table()).contains(&rep) {
            return Err(ReprError::NotReal(rep.to_string()));
        }
        Ok(FlavoredRep {
            rep,
            flavor: Flavor::Real,
        })
    }

    pub fn rep(&self) -> &VirtualChar {
        &self.rep
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Real dimension of the underlying representation.
    pub fn real_dim(&self) -> BigInt {
        match self.flavor {
            Flavor::Real => self.rep.dim(),
            Flavor::Complex => self.rep.dim() * 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::table_for;
    use crate::grp::Builtin;
    use crate::repring::parse_rep_expr;
    use num_traits::One;

    fn tab(b: Builtin) -> Arc<CharacterTable> {
        table_for(&Arc::new(b.build().unwrap())).unwrap()
    }

    fn basis_exprs(t: &Arc<CharacterTable>) -> Vec<String> {
        real_structure(t).ro_basis(t).iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn indicators() {
        let q = tab(Builtin::Quaternion8);
        assert_eq!(frobenius_schur(&q, q.resolve("H").unwrap()), -1);
        let f = tab(Builtin::SemidirectCyclic { m: 7, k: 3, r: 2 });
        assert_eq!(frobenius_schur(&f, f.resolve("rho").unwrap()), 0);
        let s = tab(Builtin::Symmetric(3));
        assert_eq!(frobenius_schur(&s, s.resolve("lambda").unwrap()), 1);
    }

    #[test]
    fn ro_bases() {
        let q = tab(Builtin::Quaternion8);
        assert_eq!(basis_exprs(&q), ["1", "sigma1", "sigma2", "sigma3", "2*H"]);
        let s = tab(Builtin::Symmetric(3));
        assert_eq!(basis_exprs(&s), ["1", "sigma", "lambda"]);
        let c5 = tab(Builtin::Cyclic(5));
        let mut got: Vec<VirtualChar> = real_structure(&c5).ro_basis(&c5);
        let want: Vec<VirtualChar> = ["1", "L + L4", "L2 + L3"]
            .iter()
            .map(|e| parse_rep_expr(e, &c5).unwrap())
            .collect();
        got.sort_by_key(|v| v.coords().to_vec());
        for w in &want {
            assert!(got.contains(w), "{w}");
        }
        assert_eq!(got.len(), 3);
        let h = parse_rep_expr("H", &q).unwrap();
        assert!(FlavoredRep::real(h.clone()).is_err());
        assert!(FlavoredRep::real(h.scaled(&BigInt::from(2))).is_ok());
    }

    #[test]
    fn gram_is_conjugation() {
        for b in [Builtin::Symmetric(3), Builtin::Cyclic(3), Builtin::SemidirectCyclic { m: 7, k: 3, r: 2 }] {
            let t = tab(b);
            let g = gram_matrix(&t);
            let perm = real_structure(&t).conj_perm().to_vec();
            for i in 0..t.len() {
                for j in 0..t.len() {
                    let want = if perm[i] == j { BigInt::one() } else { BigInt::zero() };
                    assert_eq!(g[(i, j)], want);
                }
            }
        }
    }
}
