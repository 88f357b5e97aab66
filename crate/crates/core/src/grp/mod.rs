//! Finite groups as dense multiplication tables, with conjugacy classes,
//! power maps and subgroup enumeration.

mod builtin;
mod subgroups;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builtin::Builtin;
pub use subgroups::Subgroup;

/// Default cap on the size of a permutation-group closure.
pub const DEFAULT_CLOSURE_LIMIT: usize = 1_000_000;
/// Default cap on `|G|` for subgroup enumeration.
pub const DEFAULT_SUBGROUP_LIMIT: usize = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group closure exceeded {limit} elements")]
    SizeLimit { limit: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotBijection { index: usize, degree: usize },
    #[error("generator {index} has degree {got}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("invalid action: {r}^{k} is not 1 mod {m}")]
    InvalidAction { m: u32, k: u32, r: u32 },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("unknown builtin group {0:?}")]
    UnknownBuiltin(String),
    #[error("bad parameters for builtin {name}: {reason}")]
    BadParams { name: String, reason: String },
    #[error("elements do not form a subgroup")]
    NotSubgroup,
    #[error("element index {0} out of range")]
    BadElement(usize),
}

/// How a group was constructed. Doubles as the JSON group specification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupSpec {
    Permutation { generators: Vec<Vec<usize>> },
    Table { mult: Vec<Vec<usize>> },
    Builtin { name: String, params: Vec<u32> },
}

impl GroupSpec {
    /// Stable one-line descriptor, used for reports and memo keys.
    pub fn descriptor(&self) -> String {
        match self {
            GroupSpec::Builtin { name, params } => match Builtin::from_parts(name, params) {
                Ok(b) => format!("builtin:{b}"),
                Err(_) => format!("builtin:{name}{params:?}"),
            },
            other => serde_json::to_string(other).expect("group spec serializes"),
        }
    }
}

/// A finite group stored as a full multiplication table. Element 0 is the
/// identity.
pub struct FiniteGroup {
    n: usize,
    mult: Vec<u32>,
    inv: Vec<u32>,
    elem_order: Vec<u32>,
    spec: GroupSpec,
    classes: OnceLock<ConjugacyClasses>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.n)
            .field("spec", &self.spec.descriptor())
            .finish()
    }
}

impl FiniteGroup {
    pub fn from_spec(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
        match spec {
            GroupSpec::Permutation { generators } => {
                Self::from_permutations(generators, DEFAULT_CLOSURE_LIMIT)
            }
            GroupSpec::Table { mult } => Self::from_table(mult),
            GroupSpec::Builtin { name, params } => {
                Builtin::from_parts(name, params)?.build()
            }
        }
    }

    /// Closure of the given permutations, enumerated breadth-first from the
    /// identity. Element indices follow discovery order; products are
    /// `(a * b)(x) = a(b(x))`.
    pub fn from_permutations(
        generators: &[Vec<usize>],
        limit: usize,
    ) -> Result<FiniteGroup, GroupError> {
        let degree = generators.first().map_or(0, Vec::len);
        for (index, g) in generators.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::DegreeMismatch {
                    index,
                    expected: degree,
                    got: g.len(),
                });
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::NotBijection { index, degree });
                }
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut elems = vec![identity.clone()];
        index.insert(identity, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let prod: Vec<usize> = g.iter().map(|&x| elems[i][x]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= limit {
                        return Err(GroupError::SizeLimit { limit });
                    }
                    index.insert(prod.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(prod);
                }
            }
        }
        let n = elems.len();
        let mut mult = vec![0u32; n * n];
        for (a, pa) in elems.iter().enumerate() {
            for (b, pb) in elems.iter().enumerate() {
                let prod: Vec<usize> = pb.iter().map(|&x| pa[x]).collect();
                mult[a * n + b] = index[&prod] as u32;
            }
        }
        Ok(Self::assemble(
            n,
            mult,
            GroupSpec::Permutation {
                generators: generators.to_vec(),
            },
        ))
    }

    /// Accepts an explicit Cayley table. If the identity is not element 0 the
    /// table is relabelled by swapping it into position 0. Associativity is
    /// checked exhaustively up to 256 elements and by seeded sampling above.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::InvalidTable(format!("row {i} has length {}", r.len())));
            }
            let mut seen = vec![false; n];
            for &x in r {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(GroupError::InvalidTable(format!("row {i} is not a permutation")));
                }
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for r in rows {
                if std::mem::replace(&mut seen[r[c]], true) {
                    return Err(GroupError::InvalidTable(format!("column {c} is not a permutation")));
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| rows[e][x] == x && rows[x][e] == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity element".into()))?;
        let relabel = |x: usize| {
            if x == e {
                0
            } else if x == 0 {
                e
            } else {
                x
            }
        };
        let mut mult = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mult[relabel(a) * n + relabel(b)] = relabel(rows[a][b]) as u32;
            }
        }
        let at = |a: usize, b: usize| mult[a * n + b] as usize;
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        let ok = if n <= 256 {
            (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| assoc(a, b, c))))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            (0..200_000).all(|_| assoc(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
        };
        if !ok {
            return Err(GroupError::InvalidTable("multiplication is not associative".into()));
        }
        Ok(Self::assemble(n, mult, GroupSpec::Table { mult: rows.to_vec() }))
    }

    pub(crate) fn assemble(n: usize, mult: Vec<u32>, spec: GroupSpec) -> FiniteGroup {
        let mut inv = vec![0u32; n];
        for a in 0..n {
            for b in 0..n {
                if mult[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        let mut elem_order = vec![1u32; n];
        for (a, ord) in elem_order.iter_mut().enumerate() {
            let mut x = a;
            while x != 0 {
                x = mult[x * n + a] as usize;
                *ord += 1;
            }
        }
        FiniteGroup {
            n,
            mult,
            inv,
            elem_order,
            spec,
            classes: OnceLock::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn descriptor(&self) -> String {
        self.spec.descriptor()
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mult[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn identity(&self) -> u32 {
        0
    }

    pub fn element_order(&self, a: u32) -> u32 {
        self.elem_order[a as usize]
    }

    /// `a^k` for any integer `k`.
    pub fn pow(&self, a: u32, k: i64) -> u32 {
        let ord = self.elem_order[a as usize] as i64;
        let mut e = k.rem_euclid(ord);
        let mut base = a;
        let mut acc = 0u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn conjugate(&self, x: u32, g: u32) -> u32 {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.n as u32
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u32 {
        self.elem_order.iter().fold(1u32, |acc, &o| acc.lcm(&o))
    }

    pub fn centralizer(&self, g: u32) -> Vec<u32> {
        self.elements()
            .filter(|&h| self.mul(g, h) == self.mul(h, g))
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exhaustive check of the group axioms on the stored table.
    pub fn verify_axioms(&self) -> bool {
        let n = self.n as u32;
        (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a)
            && (0..n).all(|a| self.mul(a, self.inv(a)) == 0 && self.mul(self.inv(a), a) == 0)
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    let ab = self.mul(a, b);
                    (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
                })
            })
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| ConjugacyClasses::compute(self))
    }
}

/// Conjugacy classes with a deterministic ordering: by order of the
/// representative, then class size, then smallest element index. The
/// representative of a class is its smallest element.
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    class_of: Vec<usize>,
    members: Vec<Vec<u32>>,
    rep_orders: Vec<u32>,
    inverse_class: Vec<usize>,
    /// `rep_powers[c][j]` is the class of `rep_c^j` for `0 <= j < ord(rep_c)`.
    rep_powers: Vec<Vec<usize>>,
    exponent: u32,
}

impl ConjugacyClasses {
    fn compute(g: &FiniteGroup) -> ConjugacyClasses {
        let n = g.order();
        let mut raw_of = vec![usize::MAX; n];
        let mut raw: Vec<Vec<u32>> = Vec::new();
        for a in g.elements() {
            if raw_of[a as usize] != usize::MAX {
                continue;
            }
            let id = raw.len();
            let mut cls: Vec<u32> = Vec::new();
            for x in g.elements() {
                let c = g.conjugate(x, a);
                if raw_of[c as usize] == usize::MAX {
                    raw_of[c as usize] = id;
                    cls.push(c);
                }
            }
            cls.sort_unstable();
            raw.push(cls);
        }
        raw.sort_by_key(|cls| (g.element_order(cls[0]), cls.len(), cls[0]));
        let mut class_of = vec![0usize; n];
        for (c, cls) in raw.iter().enumerate() {
            for &x in cls {
                class_of[x as usize] = c;
            }
        }
        let rep_orders: Vec<u32> = raw.iter().map(|c| g.element_order(c[0])).collect();
        let inverse_class = raw.iter().map(|c| class_of[g.inv(c[0]) as usize]).collect();
        let rep_powers = raw
            .iter()
            .map(|c| {
                let r = c[0];
                let mut out = Vec::new();
                let mut x = 0u32;
                for _ in 0..g.element_order(r) {
                    out.push(class_of[x as usize]);
                    x = g.mul(x, r);
                }
                out
            })
            .collect();
        ConjugacyClasses {
            class_of,
            members: raw,
            rep_orders,
            inverse_class,
            rep_powers,
            exponent: g.exponent(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn class_of(&self, g: u32) -> usize {
        self.class_of[g as usize]
    }

    pub fn rep(&self, c: usize) -> u32 {
        self.members[c][0]
    }

    pub fn members(&self, c: usize) -> &[u32] {
        &self.members[c]
    }

    pub fn size(&self, c: usize) -> usize {
        self.members[c].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    pub fn rep_order(&self, c: usize) -> u32 {
        self.rep_orders[c]
    }

    pub fn inverse_class(&self, c: usize) -> usize {
        self.inverse_class[c]
    }

    /// Class of `g^k` for `g` in class `c`.
    pub fn power_of(&self, c: usize, k: i64) -> usize {
        let ord = self.rep_orders[c] as i64;
        self.rep_powers[c][k.rem_euclid(ord) as usize]
    }

    /// The class map `[g] -> [g^k]`.
    pub fn power_class(&self, k: i64) -> Vec<usize> {
        (0..self.len()).map(|c| self.power_of(c, k)).collect()
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_closures() {
        let c2 = FiniteGroup::from_permutations(&[vec![1, 0]], DEFAULT_CLOSURE_LIMIT).unwrap();
        assert_eq!(c2.order(), 2);
        let f21 = FiniteGroup::from_permutations(
            &[vec![1, 2, 3, 4, 5, 6, 0], vec![0, 2, 4, 6, 1, 3, 5]],
            DEFAULT_CLOSURE_LIMIT,
        )
        .unwrap();
        assert_eq!(f21.order(), 21);
        let center: Vec<u32> = f21
            .elements()
            .filter(|&z| f21.elements().all(|x| f21.mul(x, z) == f21.mul(z, x)))
            .collect();
        assert_eq!(center, vec![0]);
        let triv = FiniteGroup::from_permutations(&[], DEFAULT_CLOSURE_LIMIT).unwrap();
        assert_eq!(triv.order(), 1);
        assert!(f21.verify_axioms());
    }

    #[test]
    fn closure_limit_and_bad_input() {
        let s4 = [vec![1, 0, 2, 3], vec![1, 2, 3, 0]];
        assert_eq!(
            FiniteGroup::from_permutations(&s4, 10).unwrap_err(),
            GroupError::SizeLimit { limit: 10 }
        );
        assert!(matches!(
            FiniteGroup::from_permutations(&[vec![0, 0]], 10),
            Err(GroupError::NotBijection { .. })
        ));
        assert!(matches!(
            FiniteGroup::from_permutations(&[vec![1, 0], vec![0, 1, 2]], 10),
            Err(GroupError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn table_relabels_identity() {
        // Z/3 written with identity at index 2.
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_table(&t).unwrap();
        assert!(g.verify_axioms());
        assert_eq!(g.exponent(), 3);
        let bad = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 1, 0]];
        assert!(FiniteGroup::from_table(&bad).is_err());
    }

    #[test]
    fn class_data_s3_q8_f21() {
        let s3 = Builtin::Symmetric(3).build().unwrap();
        assert_eq!(s3.conjugacy_classes().sizes(), vec![1, 3, 2]);
        let q8 = Builtin::Quaternion8.build().unwrap();
        assert_eq!(q8.conjugacy_classes().sizes(), vec![1, 1, 2, 2, 2]);
        let f21 = Builtin::SemidirectCyclic { m: 7, k: 3, r: 2 }.build().unwrap();
        let cc = f21.conjugacy_classes();
        let mut sizes = cc.sizes();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3, 3, 7, 7]);
        assert_eq!(cc.sizes().iter().sum::<usize>(), 21);
    }

    #[test]
    fn exponents() {
        assert_eq!(Builtin::Quaternion8.build().unwrap().exponent(), 4);
        assert_eq!(
            Builtin::SemidirectCyclic { m: 7, k: 3, r: 2 }.build().unwrap().exponent(),
            21
        );
        assert_eq!(Builtin::Symmetric(3).build().unwrap().exponent(), 6);
    }

    #[test]
    fn power_maps_compose() {
        for b in Builtin::catalog() {
            let g = b.build().unwrap();
            let cc = g.conjugacy_classes();
            let e = cc.exponent() as i64;
            assert_eq!(cc.power_class(1), (0..cc.len()).collect::<Vec<_>>());
            for k in -3..=6i64 {
                assert_eq!(cc.power_class(k), cc.power_class(k + e));
                for l in -2..=4i64 {
                    let pk = cc.power_class(k);
                    let pl = cc.power_class(l);
                    let composed: Vec<usize> = (0..cc.len()).map(|c| pk[pl[c]]).collect();
                    assert_eq!(composed, cc.power_class(k * l), "{b} k={k} l={l}");
                }
            }
            for c in 0..cc.len() {
                assert_eq!(g.order() % cc.size(c), 0);
            }
        }
    }

    #[test]
    fn spec_json_forms() {
        let s: GroupSpec =
            serde_json::from_str(r#"{"kind":"builtin","name":"semidirect_cyclic","params":[7,3,2]}"#)
                .unwrap();
        assert_eq!(FiniteGroup::from_spec(&s).unwrap().order(), 21);
        let p: GroupSpec =
            serde_json::from_str(r#"{"kind":"permutation","generators":[[1,0]]}"#).unwrap();
        assert_eq!(FiniteGroup::from_spec(&p).unwrap().order(), 2);
        let t: GroupSpec = serde_json::from_str(r#"{"kind":"table","mult":[[0,1],[1,0]]}"#).unwrap();
        assert_eq!(FiniteGroup::from_spec(&t).unwrap().order(), 2);
        assert_eq!(s.descriptor(), "builtin:semidirect_cyclic(7,3,2)");
    }
}
