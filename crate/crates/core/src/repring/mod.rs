//! The representation ring `RU(G)` in irreducible coordinates, with its
//! lambda-ring operations and the real subring `RO(G)`.

mod expr;
mod real;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::chartab::{CharacterTable, TableError};
use crate::cyclo::Cyc;
use crate::grp::Subgroup;

pub use expr::{parse_rep_expr, ExprError};
pub use real::{frobenius_schur, gram_matrix, real_structure, Flavor, FlavoredRep, RealStructure};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReprError {
    #[error("virtual characters belong to different character tables")]
    TableMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    Length { expected: usize, got: usize },
    #[error("not a virtual character: multiplicity of {label} is {value}")]
    NotVirtualCharacter { label: String, value: BigRational },
    #[error("{op} needs an honest representation, got {rep}")]
    NotHonest { op: &'static str, rep: String },
    #[error("fixed-point dimension {0} is not an integer; the table is corrupt")]
    NonIntegralFixedDim(BigRational),
    #[error("{0} is not in the image of RO(G)")]
    NotReal(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// An element of `RU(G)`: integer multiplicities over the irreducibles of a
/// fixed table. The class-function view is computed on first use.
#[derive(Clone)]
pub struct VirtualChar {
    table: Arc<CharacterTable>,
    coords: Vec<BigInt>,
    values: OnceLock<Vec<Cyc>>,
}

impl fmt::Debug for VirtualChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VirtualChar({})", self)
    }
}

impl PartialEq for VirtualChar {
    fn eq(&self, other: &VirtualChar) -> bool {
        same_table(&self.table, &other.table) && self.coords == other.coords
    }
}

impl Eq for VirtualChar {}

fn same_table(a: &Arc<CharacterTable>, b: &Arc<CharacterTable>) -> bool {
    Arc::ptr_eq(a, b) || (a.group().descriptor() == b.group().descriptor() && **a == **b)
}

fn structure_constants(table: &Arc<CharacterTable>) -> Result<&Vec<Vec<BigInt>>, ReprError> {
    if let Some(c) = table.products_cell().get() {
        return Ok(c);
    }
    let r = table.len();
    let mut all = Vec::with_capacity(r * r);
    for i in 0..r {
        for j in 0..r {
            let f: Vec<Cyc> = table.row(i).iter().zip(table.row(j)).map(|(a, b)| a * b).collect();
            all.push(VirtualChar::decompose(table, &f)?.coords);
        }
    }
    Ok(table.products_cell().get_or_init(|| all))
}

impl VirtualChar {
    pub fn new(table: Arc<CharacterTable>, coords: Vec<BigInt>) -> Result<VirtualChar, ReprError> {
        if coords.len() != table.len() {
            return Err(ReprError::Length {
                expected: table.len(),
                got: coords.len(),
            });
        }
        Ok(VirtualChar {
            table,
            coords,
            values: OnceLock::new(),
        })
    }

    pub fn from_ints(table: &Arc<CharacterTable>, coords: &[i64]) -> Result<VirtualChar, ReprError> {
        VirtualChar::new(table.clone(), coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(table: &Arc<CharacterTable>) -> VirtualChar {
        VirtualChar::new(table.clone(), vec![BigInt::zero(); table.len()]).unwrap()
    }

    pub fn irreducible(table: &Arc<CharacterTable>, i: usize) -> VirtualChar {
        let mut c = vec![BigInt::zero(); table.len()];
        c[i] = BigInt::one();
        VirtualChar::new(table.clone(), c).unwrap()
    }

    pub fn trivial(table: &Arc<CharacterTable>) -> VirtualChar {
        VirtualChar::irreducible(table, 0)
    }

    /// Multiple of the trivial representation.
    pub fn constant(table: &Arc<CharacterTable>, n: i64) -> VirtualChar {
        VirtualChar::trivial(table).scaled(&BigInt::from(n))
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_honest(&self) -> bool {
        !self.coords.iter().any(Signed::is_negative)
    }

    /// Virtual dimension, the value at the identity.
    pub fn dim(&self) -> BigInt {
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigInt::from(self.table.degree(i)))
            .sum()
    }

    /// Values on classes, in `Q(zeta_o)` for a class of order `o`.
    pub fn class_function(&self) -> &[Cyc] {
        self.values.get_or_init(|| {
            let cc = self.table.classes();
            (0..cc.len())
                .map(|j| {
                    let mut v = Cyc::zero(cc.rep_order(j));
                    for (i, c) in self.coords.iter().enumerate() {
                        if !c.is_zero() {
                            let q = BigRational::from_integer(c.clone());
                            v = &v + &self.table.value(i, j).scale(&q);
                        }
                    }
                    v
                })
                .collect()
        })
    }

    /// Value at a group element.
    pub fn value_at(&self, g: u32) -> &Cyc {
        &self.class_function()[self.table.classes().class_of(g)]
    }

    /// Multiplicities `<f, chi_i>`; fails unless all are integers.
    pub fn decompose(table: &Arc<CharacterTable>, f: &[Cyc]) -> Result<VirtualChar, ReprError> {
        let mut coords = Vec::with_capacity(table.len());
        for i in 0..table.len() {
            let m = table.inner_product(f, table.row(i))?;
            if !m.is_integer() {
                return Err(ReprError::NotVirtualCharacter {
                    label: table.label(i).to_string(),
                    value: m,
                });
            }
            coords.push(m.to_integer());
        }
        let v = VirtualChar::new(table.clone(), coords)?;
        if v.class_function() != f {
            return Err(ReprError::Inconsistent("decomposition does not reconstruct".into()));
        }
        Ok(v)
    }

    fn check(&self, other: &VirtualChar) -> Result<(), ReprError> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(ReprError::TableMismatch)
        }
    }

    fn with_coords(&self, coords: Vec<BigInt>) -> VirtualChar {
        VirtualChar {
            table: self.table.clone(),
            coords,
            values: OnceLock::new(),
        }
    }

    pub fn plus(&self, other: &VirtualChar) -> Result<VirtualChar, ReprError> {
        self.check(other)?;
        Ok(self.with_coords(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect()))
    }

    pub fn minus(&self, other: &VirtualChar) -> Result<VirtualChar, ReprError> {
        self.check(other)?;
        Ok(self.with_coords(self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()))
    }

    pub fn neg(&self) -> VirtualChar {
        self.with_coords(self.coords.iter().map(|a| -a).collect())
    }

    pub fn scaled(&self, k: &BigInt) -> VirtualChar {
        self.with_coords(self.coords.iter().map(|a| a * k).collect())
    }

    /// Products go through the table's structure constants, each of which
    /// was decomposed and reconstructed once.
    pub fn tensor(&self, other: &VirtualChar) -> Result<VirtualChar, ReprError> {
        self.check(other)?;
        let r = self.table.len();
        let consts = structure_constants(&self.table)?;
        let mut out = vec![BigInt::zero(); r];
        for (i, a) in self.coords.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coords.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (o, n) in out.iter_mut().zip(&consts[i * r + j]) {
                    if !n.is_zero() {
                        *o += &ab * n;
                    }
                }
            }
        }
        Ok(self.with_coords(out))
    }

    pub fn pow(&self, m: u32) -> Result<VirtualChar, ReprError> {
        let mut acc = VirtualChar::trivial(&self.table);
        for _ in 0..m {
            acc = acc.tensor(self)?;
        }
        Ok(acc)
    }

    /// `psi^k`: the class function `g -> chi(g^k)`.
    pub fn adams(&self, k: i64) -> VirtualChar {
        let cc = self.table.classes();
        let vals = self.class_function();
        let f: Vec<Cyc> = (0..cc.len())
            .map(|j| vals[cc.power_of(j, k)].lift(cc.rep_order(j)))
            .collect();
        VirtualChar::decompose(&self.table, &f).expect("Adams operations preserve RU(G)")
    }

    /// Complex conjugate, `psi^-1`.
    pub fn conj(&self) -> VirtualChar {
        self.adams(-1)
    }

    fn require_honest(&self, op: &'static str) -> Result<(), ReprError> {
        if self.is_honest() {
            Ok(())
        } else {
            Err(ReprError::NotHonest {
                op,
                rep: self.to_string(),
            })
        }
    }

    /// Classwise elementary symmetric functions `e_0..=e_top` of the
    /// eigenvalues, from power sums by Newton's identities.
    fn elementary(&self, top: usize) -> Vec<Vec<Cyc>> {
        let cc = self.table.classes();
        let vals = self.class_function();
        (0..cc.len())
            .map(|j| {
                let o = cc.rep_order(j);
                let p: Vec<Cyc> = (0..=top)
                    .map(|s| vals[cc.power_of(j, s as i64)].lift(o))
                    .collect();
                let mut e = vec![Cyc::from_int(1, o)];
                for t in 1..=top {
                    let mut acc = Cyc::zero(o);
                    for s in 1..=t {
                        let term = &e[t - s] * &p[s];
                        acc = if s % 2 == 1 { &acc + &term } else { &acc - &term };
                    }
                    e.push(acc.scale(&BigRational::new(BigInt::one(), BigInt::from(t))));
                }
                e
            })
            .collect()
    }

    fn dim_usize(&self) -> usize {
        usize::try_from(self.dim()).expect("honest dimension fits in usize")
    }

    /// Exterior power of an honest representation.
    pub fn exterior(&self, i: usize) -> Result<VirtualChar, ReprError> {
        self.require_honest("exterior power")?;
        if i > self.dim_usize() {
            return Ok(VirtualChar::zero(&self.table));
        }
        let f: Vec<Cyc> = self.elementary(i).into_iter().map(|mut e| e.pop().unwrap()).collect();
        VirtualChar::decompose(&self.table, &f)
    }

    /// `e_U = sum (-1)^i Lambda^i U`, cross-checked classwise against
    /// `det(1 - g | U)` computed from eigenvalue multiplicities.
    pub fn euler_class(&self) -> Result<VirtualChar, ReprError> {
        self.require_honest("Euler class")?;
        let d = self.dim_usize();
        let cc = self.table.classes();
        let mut f = Vec::with_capacity(cc.len());
        for (j, e) in self.elementary(d).into_iter().enumerate() {
            let o = cc.rep_order(j);
            let alt = e.iter().enumerate().fold(Cyc::zero(o), |acc, (t, x)| {
                if t % 2 == 0 {
                    &acc + x
                } else {
                    &acc - x
                }
            });
            let mut det = Cyc::from_int(1, o);
            for (k, m) in self.eigen_multiplicities(j)?.iter().enumerate() {
                let factor = &Cyc::from_int(1, o) - &Cyc::root(o, k as i64);
                det = &det * &factor.pow(u32::try_from(m).expect("multiplicity fits"));
            }
            if alt != det {
                return Err(ReprError::Inconsistent(format!(
                    "Euler class disagrees with det(1 - g) at class {j}"
                )));
            }
            f.push(alt);
        }
        VirtualChar::decompose(&self.table, &f)
    }

    /// Top exterior power.
    pub fn det_char(&self) -> Result<VirtualChar, ReprError> {
        self.require_honest("determinant")?;
        self.exterior(self.dim_usize())
    }

    /// Multiplicity of `zeta_o^k` as an eigenvalue of the class-`j`
    /// representative (of order `o`), for `k = 0..o`.
    pub fn eigen_multiplicities(&self, j: usize) -> Result<Vec<BigInt>, ReprError> {
        let cc = self.table.classes();
        let o = cc.rep_order(j);
        let vals = self.class_function();
        let mut out = Vec::with_capacity(o as usize);
        for k in 0..o as i64 {
            let mut s = Cyc::zero(o);
            for l in 0..o as i64 {
                s = &s + &(&vals[cc.power_of(j, l)] * &Cyc::root(o, -k * l));
            }
            let m = s
                .as_rational()
                .map(|q| q / BigRational::from_integer(o.into()))
                .filter(BigRational::is_integer)
                .ok_or_else(|| ReprError::Inconsistent(format!("eigenvalue multiplicity at class {j}")))?;
            out.push(m.to_integer());
        }
        Ok(out)
    }

    /// `|a^H| = (1/|H|) sum_{h in H} chi(h)`.
    pub fn fixed_dim(&self, h: &Subgroup) -> Result<BigInt, ReprError> {
        let mut s = Cyc::zero(1);
        for &x in h.elements() {
            s = &s + self.value_at(x);
        }
        let q = s
            .as_rational()
            .ok_or_else(|| ReprError::Inconsistent("fixed-point sum is irrational".into()))?
            / BigRational::from_integer(h.order().into());
        if !q.is_integer() {
            return Err(ReprError::NonIntegralFixedDim(q));
        }
        Ok(q.to_integer())
    }

    /// True iff the character vanishes on every element of `h`.
    pub fn restriction_is_zero(&self, h: &Subgroup) -> bool {
        h.elements().iter().all(|&x| self.value_at(x).is_zero())
    }

    /// `epsilon(a) = <a, 1>`, the multiplicity of the trivial character.
    pub fn epsilon(&self) -> BigInt {
        self.coords[0].clone()
    }

    /// Renders in the expression grammar, e.g. `1 + sigma - lambda`.
    pub fn to_expr(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if i == 0 {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&format!("{mag}*"));
                }
                out.push_str(self.table.display_name(i));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for VirtualChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr())
    }
}
