//! Loading externally supplied character tables.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::fp::prime_factors;
use super::{class_sum, CharacterTable, TableError};
use crate::cyclo::Cyc;
use crate::grp::FiniteGroup;

const MATCH_BUDGET: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDescriptor {
    pub rep_order: u32,
    pub size: usize,
}

/// `{"classes":[{"rep_order":k,"size":s},...], "chars":[[Cyc,...],...]}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableDocument {
    pub classes: Vec<ClassDescriptor>,
    pub chars: Vec<Vec<Cyc>>,
}

impl TableDocument {
    pub fn from_json(text: &str) -> Result<TableDocument, TableError> {
        serde_json::from_str(text).map_err(|e| TableError::Json(e.to_string()))
    }
}

/// Validates `doc` against `group` and returns it in canonical form.
///
/// Document columns are matched to the group's classes by representative
/// order and size. Within a bucket of look-alike classes, a matching must
/// carry Galois conjugation of columns to the group's power maps, keep every
/// Adams operation integral, make low exterior powers of each row honest, and
/// give Frobenius-Schur indicators in `{-1, 0, 1}`. Several surviving
/// matchings are fine when they produce the same canonical table; otherwise
/// the document is ambiguous.
pub fn load_table(group: Arc<FiniteGroup>, doc: &TableDocument) -> Result<CharacterTable, TableError> {
    let cc = group.conjugacy_classes();
    let r = cc.len();
    if doc.classes.len() != r {
        return Err(TableError::Dimension(format!(
            "document has {} classes, group has {r}",
            doc.classes.len()
        )));
    }
    if doc.chars.len() != r || doc.chars.iter().any(|row| row.len() != r) {
        return Err(TableError::Dimension(format!("table must be {r}x{r}")));
    }

    let mut want: Vec<(u32, usize)> = (0..r).map(|j| (cc.rep_order(j), cc.size(j))).collect();
    let mut have: Vec<(u32, usize)> = doc.classes.iter().map(|c| (c.rep_order, c.size)).collect();
    want.sort_unstable();
    have.sort_unstable();
    if want != have {
        return Err(TableError::ClassMismatch(
            "class orders and sizes differ from the group's".into(),
        ));
    }

    let mut cols: Vec<Vec<Cyc>> = vec![Vec::with_capacity(r); r];
    for (i, row) in doc.chars.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let o = doc.classes[c].rep_order;
            let v = v.descend(o).filter(Cyc::is_integral).ok_or_else(|| {
                TableError::InvalidEntry(format!(
                    "row {i}, column {c}: {v} is not an algebraic integer of Q(zeta_{o})"
                ))
            })?;
            cols[c].push(v);
        }
    }

    let n = BigRational::from_integer(group.order().into());
    for i in 0..r {
        for k in i..r {
            let mut s = Cyc::zero(1);
            for (c, col) in cols.iter().enumerate() {
                let size = BigRational::from_integer(doc.classes[c].size.into());
                s = &s + &(&col[i] * &col[k].conj()).scale(&size);
            }
            let expect = if i == k { n.clone() } else { BigRational::zero() };
            if s.as_rational() != Some(expect) {
                return Err(TableError::Orthogonality(format!("rows {i} and {k}")));
            }
        }
    }

    let mut search = Search {
        group: &group,
        doc,
        cols: &cols,
        assign: vec![None; r],
        taken: vec![None; r],
        budget: MATCH_BUDGET,
        found: Vec::new(),
    };
    search.run(0)?;
    let mut found = search.found;
    match found.len() {
        0 => Err(TableError::ClassMismatch(
            "no assignment of columns to classes is consistent with the power maps".into(),
        )),
        1 => Ok(found.pop().unwrap()),
        _ => Err(TableError::Ambiguous(format!(
            "{} inequivalent class matchings fit the document",
            found.len()
        ))),
    }
}

struct Search<'a> {
    group: &'a Arc<FiniteGroup>,
    doc: &'a TableDocument,
    cols: &'a [Vec<Cyc>],
    /// document column -> group class
    assign: Vec<Option<usize>>,
    /// group class -> document column
    taken: Vec<Option<usize>>,
    budget: usize,
    found: Vec<CharacterTable>,
}

impl Search<'_> {
    fn run(&mut self, c: usize) -> Result<(), TableError> {
        if self.budget == 0 {
            return Err(TableError::Ambiguous("class matching search budget exhausted".into()));
        }
        self.budget -= 1;
        let r = self.cols.len();
        if c == r {
            if let Some(t) = self.leaf() {
                if !self.found.contains(&t) {
                    self.found.push(t);
                }
            }
            return Ok(());
        }
        let cc = self.group.conjugacy_classes();
        let key = (self.doc.classes[c].rep_order, self.doc.classes[c].size);
        for g in 0..r {
            if self.taken[g].is_some() || (cc.rep_order(g), cc.size(g)) != key {
                continue;
            }
            self.assign[c] = Some(g);
            self.taken[g] = Some(c);
            if self.consistent(c) {
                self.run(c + 1)?;
            }
            self.assign[c] = None;
            self.taken[g] = None;
        }
        Ok(())
    }

    /// Galois action on the new column agrees with power maps to and from
    /// already assigned columns.
    fn consistent(&self, c: usize) -> bool {
        let cc = self.group.conjugacy_classes();
        let g = self.assign[c].unwrap();
        let o = cc.rep_order(g) as i64;
        for k in 2..o {
            if k.gcd(&o) != 1 {
                continue;
            }
            if let Some(c2) = self.taken[cc.power_of(g, k)] {
                let ok = self.cols[c]
                    .iter()
                    .zip(&self.cols[c2])
                    .all(|(v, w)| &v.galois(k).unwrap() == w);
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn leaf(&self) -> Option<CharacterTable> {
        let cc = self.group.conjugacy_classes();
        let r = self.cols.len();
        let mut rows = vec![vec![Cyc::zero(1); r]; r];
        for (c, col) in self.cols.iter().enumerate() {
            let g = self.assign[c].unwrap();
            for (i, v) in col.iter().enumerate() {
                rows[i][g] = v.clone();
            }
        }
        let n = BigRational::from_integer(self.group.order().into());
        let mut primes = prime_factors(cc.exponent() as u64);
        if !primes.contains(&2) {
            primes.push(2);
        }
        for &q in &primes {
            for row in &rows {
                let adams: Vec<Cyc> = (0..r).map(|j| row[cc.power_of(j, q as i64)].clone()).collect();
                for other in &rows {
                    let m = class_sum(cc, &adams, other).as_rational()? / &n;
                    if !m.is_integer() {
                        return None;
                    }
                }
            }
        }
        // Exterior powers from Newton's identities must be honest; this ties
        // the non-Galois power maps to the document.
        let top = *primes.iter().max().unwrap() as usize;
        for row in &rows {
            let psi: Vec<Vec<Cyc>> = (0..=top)
                .map(|k| (0..r).map(|j| row[cc.power_of(j, k as i64)].clone()).collect())
                .collect();
            let mut lam = vec![vec![Cyc::from_int(1, 1); r]];
            for k in 1..=top {
                let mut acc = vec![Cyc::zero(1); r];
                for i in 1..=k {
                    let sign = if i % 2 == 1 { 1 } else { -1 };
                    for j in 0..r {
                        let t = (&psi[i][j] * &lam[k - i][j]).scale(&BigRational::from_integer(sign.into()));
                        acc[j] = &acc[j] + &t;
                    }
                }
                let inv = BigRational::new(1.into(), (k as i64).into());
                lam.push(acc.iter().map(|v| v.scale(&inv)).collect());
                if k < 2 {
                    continue;
                }
                for other in &rows {
                    let m = class_sum(cc, &lam[k], other).as_rational()? / &n;
                    if !m.is_integer() || m.is_negative() {
                        return None;
                    }
                }
            }
        }
        for row in &rows {
            let sq: Vec<Cyc> = (0..r).map(|j| row[cc.power_of(j, 2)].clone()).collect();
            let one = vec![Cyc::from_int(1, 1); r];
            let fs = class_sum(cc, &sq, &one).as_rational()? / &n;
            if fs.abs() > BigRational::one() || !fs.is_integer() {
                return None;
            }
        }
        let table = CharacterTable::from_rows(self.group.clone(), rows);
        table.verify().ok()?;
        Some(table)
    }
}

/// Convenience for name files: `{"alias": "chiK"}` or `{"alias": K}`.
pub fn parse_names(text: &str) -> Result<BTreeMap<String, String>, TableError> {
    let raw: BTreeMap<String, serde_json::Value> =
        serde_json::from_str(text).map_err(|e| TableError::Json(e.to_string()))?;
    raw.into_iter()
        .map(|(k, v)| match v {
            serde_json::Value::String(s) => Ok((k, s)),
            serde_json::Value::Number(n) if n.is_u64() => Ok((k, n.to_string())),
            other => Err(TableError::Json(format!("alias {k:?} has bad target {other}"))),
        })
        .collect()
}
