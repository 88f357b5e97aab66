//! Exact integer linear algebra: Hermite and Smith normal forms, cokernels
//! and element orders in quotient lattices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<IntMatrix, LatticeError> {
        if data.len() != rows * cols {
            return Err(LatticeError::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Convenience constructor for small literal matrices.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().cloned().map(Into::into).collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        IntMatrix::from_columns(self.rows, &idx.iter().map(|&j| self.column(j)).collect::<Vec<_>>())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if v.len() != self.cols {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * if n == 0 { BigInt::one() } else { a[(n - 1, n - 1)].clone() })
    }

    pub fn rank(&self) -> usize {
        hermite(self).rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Rendered as a JSON array of rows of decimal strings.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(BigInt::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// `U * M * V = S` with `U`, `V` unimodular and `S` diagonal with
/// `d1 | d2 | ...`. The inverses of `U` and `V` are tracked alongside.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub s: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `S[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }
}

/// Smith normal form. Pivots are chosen as the entry of least absolute value
/// in the remaining block, ties broken by row-major position.
pub fn snf(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows, m.cols);
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    'outer: for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &s[(i, j)];
                    if !x.is_zero()
                        && best.is_none_or(|(bi, bj)| x.abs() < s[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                if !q.is_zero() {
                    let nq = -&q;
                    s.add_row(i, t, &nq);
                    u.add_row(i, t, &nq);
                    u_inv.add_col(t, i, &q);
                }
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                if !q.is_zero() {
                    let nq = -&q;
                    s.add_col(j, t, &nq);
                    v.add_col(j, t, &nq);
                    v_inv.add_row(t, j, &q);
                }
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)])));
            if let Some(i) = bad_row {
                let one = BigInt::one();
                s.add_row(t, i, &one);
                u.add_row(t, i, &one);
                u_inv.add_col(i, t, &-one);
                continue;
            }
            break;
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    SmithDecomposition {
        u,
        v,
        s,
        u_inv,
        v_inv,
    }
}

/// A finitely generated abelian group `Z^free_rank + sum Z/d_i` with
/// `2 <= d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FgAbGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
}

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<String> = v.iter().map(BigInt::to_string).collect();
    strs.serialize(s)
}

impl FgAbGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `Z^rows / colspan(M)`.
pub fn cokernel(m: &IntMatrix) -> FgAbGroup {
    let d = snf(m).diagonal();
    let nonzero = d.iter().filter(|x| !x.is_zero()).count();
    FgAbGroup {
        free_rank: m.rows - nonzero,
        torsion: d.into_iter().filter(|x| x > &BigInt::one()).collect(),
    }
}

/// Order of an element in a quotient group; `Infinite` when no positive
/// multiple lies in the subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    /// Divisibility in the extended sense where every order divides `Infinite`.
    pub fn divides(&self, other: &Order) -> bool {
        match (self, other) {
            (_, Order::Infinite) => true,
            (Order::Infinite, Order::Finite(_)) => false,
            (Order::Finite(a), Order::Finite(b)) => b.is_multiple_of(a),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

/// Least `n >= 1` with `n * v` in the column span of `m`, read off through
/// the Smith change of basis.
pub fn element_order(m: &IntMatrix, v: &[BigInt]) -> Result<Order, LatticeError> {
    if v.len() != m.rows {
        return Err(LatticeError::DimensionMismatch {
            expected: m.rows,
            got: v.len(),
        });
    }
    let dec = snf(m);
    let w = dec.u.mul_vec(v)?;
    let diag = dec.diagonal();
    let mut n = BigInt::one();
    for (i, wi) in w.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_default();
        if d.is_zero() {
            if !wi.is_zero() {
                return Ok(Order::Infinite);
            }
        } else {
            let need = &d / d.gcd(wi);
            n = n.lcm(&need);
        }
    }
    Ok(Order::Finite(n))
}

struct Hermite {
    h: IntMatrix,
    v: IntMatrix,
    rank: usize,
    pivot_rows: Vec<usize>,
}

/// Column Hermite form `M * V = H`: the first `rank` columns of `H` are
/// lower-triangular in echelon form with positive pivots, and every entry to
/// the left of a pivot lies in `[0, pivot)`. The remaining columns are zero.
fn hermite(m: &IntMatrix) -> Hermite {
    let mut h = m.clone();
    let mut v = IntMatrix::identity(m.cols);
    let mut c = 0;
    let mut pivot_rows = Vec::new();
    for r in 0..m.rows {
        if c == m.cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for j in c..m.cols {
                if !h[(r, j)].is_zero() && best.is_none_or(|b| h[(r, j)].abs() < h[(r, b)].abs()) {
                    best = Some(j);
                }
            }
            let Some(b) = best else { break };
            h.swap_cols(c, b);
            v.swap_cols(c, b);
            let mut done = true;
            for j in c + 1..m.cols {
                let q = h[(r, j)].div_floor(&h[(r, c)]);
                if !q.is_zero() {
                    let nq = -q;
                    h.add_col(j, c, &nq);
                    v.add_col(j, c, &nq);
                }
                done &= h[(r, j)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_col(c);
            v.negate_col(c);
        }
        for j in 0..c {
            let q = h[(r, j)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                let nq = -q;
                h.add_col(j, c, &nq);
                v.add_col(j, c, &nq);
            }
        }
        pivot_rows.push(r);
        c += 1;
    }
    Hermite {
        h,
        v,
        rank: c,
        pivot_rows,
    }
}

/// Canonical basis of the column span (column Hermite normal form).
pub fn image_basis(m: &IntMatrix) -> IntMatrix {
    let herm = hermite(m);
    herm.h.select_columns(&(0..herm.rank).collect::<Vec<_>>())
}

/// Basis of the integer kernel `{x : M x = 0}`, in Hermite normal form.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let herm = hermite(m);
    let raw = herm.v.select_columns(&(herm.rank..m.cols).collect::<Vec<_>>());
    image_basis(&raw)
}

/// Some integer `x` with `M x = v`, if one exists.
pub fn membership(m: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
    if v.len() != m.rows {
        return Err(LatticeError::DimensionMismatch {
            expected: m.rows,
            got: v.len(),
        });
    }
    let herm = hermite(m);
    let mut residual = v.to_vec();
    let mut y = vec![BigInt::zero(); m.cols];
    for (k, &pr) in herm.pivot_rows.iter().enumerate() {
        let (q, rem) = residual[pr].div_rem(&herm.h[(pr, k)]);
        if !rem.is_zero() {
            return Ok(None);
        }
        for i in 0..m.rows {
            let d = &q * &herm.h[(i, k)];
            residual[i] -= d;
        }
        y[k] = q;
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    Ok(Some(herm.v.mul_vec(&y)?))
}
