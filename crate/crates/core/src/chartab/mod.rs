//! Complex character tables: construction, validation and the
//! inner product on class functions.

mod dixon;
mod fp;
mod load;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::cyclo::Cyc;
use crate::grp::{ConjugacyClasses, FiniteGroup, GroupSpec};

pub use dixon::{dixon_bounded, dixon_character_table, DEFAULT_DIXON_LIMIT};
pub use load::{load_table, parse_names, ClassDescriptor, TableDocument};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("group of order {order} exceeds the character table bound {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("no admissible prime split the class algebra")]
    NoPrime,
    #[error("orthogonality failure: {0}")]
    Orthogonality(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("class matching failed: {0}")]
    ClassMismatch(String),
    #[error("class matching is ambiguous: {0}")]
    Ambiguous(String),
    #[error("invalid table entry: {0}")]
    InvalidEntry(String),
    #[error("unknown irreducible label {0:?}")]
    UnknownLabel(String),
    #[error("class functions have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("malformed table document: {0}")]
    Json(String),
}

/// Irreducible complex characters of a finite group. Rows are irreducibles,
/// columns follow the group's class order, and the value in column `j` is
/// stored in `Q(zeta_o)` with `o` the order of the class representative.
#[derive(Clone)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    chars: Vec<Vec<Cyc>>,
    labels: Vec<String>,
    aliases: BTreeMap<String, usize>,
    real: OnceLock<crate::repring::RealStructure>,
    products: OnceLock<Vec<Vec<BigInt>>>,
}

impl fmt::Debug for CharacterTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CharacterTable")
            .field("group", &self.group.descriptor())
            .field("chars", &self.chars)
            .finish()
    }
}

impl PartialEq for CharacterTable {
    fn eq(&self, other: &CharacterTable) -> bool {
        self.chars == other.chars && self.classes().sizes() == other.classes().sizes()
    }
}

impl CharacterTable {
    /// Canonicalises column orders, sorts rows and attaches default names.
    /// Rows are ordered trivial character first, then by degree, then by
    /// lexicographic comparison of the value coordinates across classes.
    pub(crate) fn from_rows(group: Arc<FiniteGroup>, rows: Vec<Vec<Cyc>>) -> CharacterTable {
        let cc = group.conjugacy_classes();
        let mut rows: Vec<Vec<Cyc>> = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, v)| {
                        let o = cc.rep_order(j);
                        v.descend(o).unwrap_or(v)
                    })
                    .collect()
            })
            .collect();
        let is_trivial = |row: &Vec<Cyc>| row.iter().all(|v| v.as_integer() == Some(BigInt::one()));
        rows.sort_by(|a, b| {
            is_trivial(b)
                .cmp(&is_trivial(a))
                .then_with(|| a[0].cmp_coords(&b[0]))
                .then_with(|| {
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| x.cmp_coords(y))
                        .find(|o| o.is_ne())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
        });
        let labels = (0..rows.len()).map(|i| format!("chi{i}")).collect();
        let mut table = CharacterTable {
            group,
            chars: rows,
            labels,
            aliases: BTreeMap::new(),
            real: OnceLock::new(),
            products: OnceLock::new(),
        };
        table.aliases = default_aliases(&table);
        table
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        self.group.conjugacy_classes()
    }

    /// Number of irreducibles (equal to the number of classes).
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn field_order(&self) -> u32 {
        self.group.exponent()
    }

    pub fn value(&self, i: usize, class: usize) -> &Cyc {
        &self.chars[i][class]
    }

    pub fn row(&self, i: usize) -> &[Cyc] {
        &self.chars[i]
    }

    pub fn rows(&self) -> &[Vec<Cyc>] {
        &self.chars
    }

    pub fn degree(&self, i: usize) -> u64 {
        let d = self.chars[i][0].as_integer().expect("degrees are integers");
        u64::try_from(d).expect("degree fits in u64")
    }

    pub fn degrees(&self) -> Vec<u64> {
        (0..self.len()).map(|i| self.degree(i)).collect()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub(crate) fn real_cell(&self) -> &OnceLock<crate::repring::RealStructure> {
        &self.real
    }

    /// Cache for `chi_i chi_j` in irreducible coordinates, indexed `i * len + j`.
    pub(crate) fn products_cell(&self) -> &OnceLock<Vec<Vec<BigInt>>> {
        &self.products
    }

    pub fn aliases(&self) -> &BTreeMap<String, usize> {
        &self.aliases
    }

    /// Resolves `chiN` labels and aliases.
    pub fn resolve(&self, name: &str) -> Option<usize> {
        self.aliases
            .get(name)
            .copied()
            .or_else(|| self.labels.iter().position(|l| l == name))
    }

    /// Adds user aliases on top of the defaults. Targets may be `chiN`
    /// labels, existing aliases or bare indices.
    pub fn with_aliases(mut self, extra: &BTreeMap<String, String>) -> Result<CharacterTable, TableError> {
        for (name, target) in extra {
            let idx = match target.parse::<usize>() {
                Ok(i) if i < self.len() => i,
                _ => self
                    .resolve(target)
                    .ok_or_else(|| TableError::UnknownLabel(target.clone()))?,
            };
            self.aliases.insert(name.clone(), idx);
        }
        Ok(self)
    }

    /// The preferred display name of row `i`: the first alias in sorted
    /// order that is not a `_C` variant, else `chiN`.
    pub fn display_name(&self, i: usize) -> &str {
        self.aliases
            .iter()
            .find(|(k, &v)| v == i && !k.ends_with("_C"))
            .map(|(k, _)| k.as_str())
            .unwrap_or(&self.labels[i])
    }

    /// `(1/|G|) sum_g a(g) b(g^-1)`, computed classwise.
    pub fn inner_product(&self, a: &[Cyc], b: &[Cyc]) -> Result<BigRational, TableError> {
        let r = self.classes().len();
        if a.len() != r || b.len() != r {
            return Err(TableError::LengthMismatch(a.len(), b.len()));
        }
        let total = class_sum(self.classes(), a, b);
        total
            .as_rational()
            .map(|q| q / BigRational::from_integer(self.group.order().into()))
            .ok_or_else(|| TableError::InvalidEntry("inner product is not rational".into()))
    }

    /// Every defining property of a character table, checked exactly.
    pub fn verify(&self) -> Result<(), TableError> {
        let cc = self.classes();
        let r = cc.len();
        if self.chars.len() != r || self.chars.iter().any(|row| row.len() != r) {
            return Err(TableError::Dimension(format!(
                "table must be {r}x{r} for a group with {r} classes"
            )));
        }
        for (i, row) in self.chars.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !cc.rep_order(j).is_multiple_of(v.order()) || !v.is_integral() {
                    return Err(TableError::InvalidEntry(format!(
                        "row {i}, class {j}: {v} is not an algebraic integer of Q(zeta_{})",
                        cc.rep_order(j)
                    )));
                }
            }
        }
        let n = BigRational::from_integer(self.group.order().into());
        for i in 0..r {
            for k in i..r {
                let ip = class_sum(cc, &self.chars[i], &self.chars[k]);
                let expect = if i == k { n.clone() } else { BigRational::zero() };
                if ip.as_rational() != Some(expect) {
                    return Err(TableError::Orthogonality(format!("rows {i} and {k}")));
                }
            }
        }
        for j in 0..r {
            for l in j..r {
                let mut s = Cyc::zero(1);
                for row in &self.chars {
                    s = &s + &(&row[j] * &row[cc.inverse_class(l)]);
                }
                let expect = if j == l {
                    BigRational::from_integer((self.group.order() / cc.size(j)).into())
                } else {
                    BigRational::zero()
                };
                if s.as_rational() != Some(expect) {
                    return Err(TableError::Orthogonality(format!("columns {j} and {l}")));
                }
            }
        }
        let mut sq = 0u64;
        for row in &self.chars {
            let d = row[0]
                .as_integer()
                .filter(|d| d > &BigInt::zero())
                .ok_or_else(|| TableError::InvalidEntry(format!("degree {}", row[0])))?;
            let d = u64::try_from(d).map_err(|_| TableError::InvalidEntry("degree overflow".into()))?;
            if !(self.group.order() as u64).is_multiple_of(d) {
                return Err(TableError::InvalidEntry(format!("degree {d} does not divide |G|")));
            }
            sq += d * d;
        }
        if sq != self.group.order() as u64 {
            return Err(TableError::InvalidEntry("sum of squared degrees differs from |G|".into()));
        }
        if !self.chars[0].iter().all(|v| v.as_integer() == Some(BigInt::one())) {
            return Err(TableError::InvalidEntry("first row is not the trivial character".into()));
        }
        Ok(())
    }

    /// Document form, inverse of [`load_table`].
    pub fn to_document(&self) -> TableDocument {
        let cc = self.classes();
        TableDocument {
            classes: (0..cc.len())
                .map(|j| ClassDescriptor {
                    rep_order: cc.rep_order(j),
                    size: cc.size(j),
                })
                .collect(),
            chars: self.chars.clone(),
        }
    }
}

/// `sum_j |C_j| a_j b_{j*}` where `j*` is the inverse class.
fn class_sum(cc: &ConjugacyClasses, a: &[Cyc], b: &[Cyc]) -> Cyc {
    let mut total = Cyc::zero(1);
    for j in 0..cc.len() {
        let size = BigRational::from_integer(cc.size(j).into());
        let term = (&a[j] * &b[cc.inverse_class(j)]).scale(&size);
        total = &total + &term;
    }
    total
}

#[derive(Serialize)]
struct TableSummary<'a> {
    group: String,
    classes: Vec<ClassDescriptor>,
    labels: &'a [String],
    chars: &'a [Vec<Cyc>],
}

impl Serialize for CharacterTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TableSummary {
            group: self.group.descriptor(),
            classes: self.to_document().classes,
            labels: &self.labels,
            chars: &self.chars,
        }
        .serialize(s)
    }
}

fn default_aliases(t: &CharacterTable) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    let GroupSpec::Builtin { name, params } = t.group.spec() else {
        return out;
    };
    let cc = t.classes();
    let linear: Vec<usize> = (1..t.len()).filter(|&i| t.degree(i) == 1).collect();
    let value_at = |i: usize, elem: u32| t.value(i, cc.class_of(elem)).clone();
    match (name.as_str(), params.as_slice()) {
        ("symmetric", [3]) | ("dihedral", [3]) => {
            for (k, i) in [("sigma", linear[0]), ("lambda", t.len() - 1)] {
                out.insert(k.to_string(), i);
                out.insert(format!("{k}_C"), i);
            }
        }
        ("quaternion8", []) => {
            for (n, &i) in linear.iter().enumerate() {
                out.insert(format!("sigma{}", n + 1), i);
            }
            out.insert("H".into(), t.len() - 1);
        }
        ("semidirect_cyclic", [7, 3, 2]) => {
            let y = 7;
            let x = 1;
            let zeta3_sq = Cyc::root(3, 2);
            for &i in &linear {
                let v = value_at(i, y);
                if v == zeta3_sq {
                    out.insert("omega".into(), i);
                } else {
                    out.insert("omegabar".into(), i);
                }
            }
            let orbit = [3, 5, 6]
                .iter()
                .fold(Cyc::zero(7), |acc, &k| &acc + &Cyc::root(7, k));
            for i in (1..t.len()).filter(|&i| t.degree(i) == 3) {
                if value_at(i, x) == orbit {
                    out.insert("rho".into(), i);
                } else {
                    out.insert("rhobar".into(), i);
                }
            }
        }
        ("cyclic", [n]) if *n >= 2 => {
            for i in 1..t.len() {
                let v = value_at(i, 1);
                let k = (1..*n as i64).find(|&k| v == Cyc::root(*n, k)).unwrap();
                let name = if k == 1 { "L".to_string() } else { format!("L{k}") };
                out.insert(name, i);
            }
            if *n == 2 {
                out.insert("sigma".into(), 1);
                out.insert("sigma_C".into(), 1);
            }
        }
        _ => {}
    }
    out
}

type MemoCell = Arc<OnceLock<Result<Arc<CharacterTable>, TableError>>>;

fn memo() -> &'static Mutex<HashMap<String, MemoCell>> {
    static MEMO: OnceLock<Mutex<HashMap<String, MemoCell>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Process-wide memoised Dixon table, keyed by the group's provenance.
/// Concurrent callers for the same group block on a single computation.
pub fn table_for(group: &Arc<FiniteGroup>) -> Result<Arc<CharacterTable>, TableError> {
    let cell = memo()
        .lock()
        .unwrap()
        .entry(group.descriptor())
        .or_default()
        .clone();
    cell.get_or_init(|| dixon_character_table(group.clone()).map(Arc::new))
        .clone()
}
