//! Exact arithmetic in cyclotomic fields `Q(zeta_n)`.
//!
//! An element is stored in the power basis `1, z, ..., z^(phi(n)-1)` after
//! reduction modulo the `n`-th cyclotomic polynomial. The power basis is not
//! closed under the Galois action in the sense of the Zumbroich basis, but it
//! is canonical, which is all the engine needs: two elements of the same
//! order are equal iff their coordinate vectors are equal.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycError {
    #[error("galois exponent {k} is not a unit modulo {order}")]
    NonUnit { k: i64, order: u32 },
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
    #[error("expected {expected} coefficients for order {order}, got {got}")]
    CoeffCount { order: u32, expected: usize, got: usize },
    #[error("bad rational literal {0:?}")]
    BadRational(String),
}

/// Euler's totient.
pub fn totient(n: u32) -> u32 {
    let mut m = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn poly_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (constant term first) of the `n`-th cyclotomic polynomial,
/// obtained by dividing `X^n - 1` by `Phi_d` for every proper divisor `d`.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n > 0, "cyclotomic_poly(0)");
    if let Some(p) = poly_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_poly(d);
            num = exact_div_monic(&num, &div);
        }
    }
    let poly = Arc::new(num);
    poly_cache().lock().unwrap().insert(n, poly.clone());
    poly
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// An exact element of `Q(zeta_order)` in canonical power-basis form.
#[derive(Clone, Debug)]
pub struct Cyc {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl Cyc {
    /// Canonical form of `sum raw[e] * zeta_n^e`; exponents are folded mod `n`.
    pub fn reduce<I>(raw: I, order: u32) -> Cyc
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        assert!(order > 0, "cyclotomic order must be positive");
        let mut dense = vec![BigRational::zero(); order as usize];
        for (e, c) in raw {
            let idx = e.rem_euclid(order as i64) as usize;
            dense[idx] += c;
        }
        Self::from_poly(dense, order)
    }

    /// Reduces an arbitrary-length polynomial in `zeta_n` modulo `Phi_n`.
    fn from_poly(mut poly: Vec<BigRational>, order: u32) -> Cyc {
        let phi = cyclotomic_poly(order);
        let deg = phi.len() - 1;
        if poly.len() > deg {
            for top in (deg..poly.len()).rev() {
                let c = std::mem::take(&mut poly[top]);
                if c.is_zero() {
                    continue;
                }
                let base = top - deg;
                for (j, pj) in phi.iter().enumerate().take(deg) {
                    if !pj.is_zero() {
                        poly[base + j] -= &c * BigRational::from_integer(pj.clone());
                    }
                }
            }
        }
        poly.resize(deg, BigRational::zero());
        Cyc { order, coeffs: poly }
    }

    pub fn zero(order: u32) -> Cyc {
        Cyc {
            order,
            coeffs: vec![BigRational::zero(); totient(order) as usize],
        }
    }

    pub fn from_rational(q: BigRational, order: u32) -> Cyc {
        let mut c = Cyc::zero(order);
        c.coeffs[0] = q;
        c
    }

    pub fn from_int(n: i64, order: u32) -> Cyc {
        Cyc::from_rational(BigRational::from_integer(n.into()), order)
    }

    /// `zeta_order^k`.
    pub fn root(order: u32, k: i64) -> Cyc {
        Cyc::reduce([(k, BigRational::one())], order)
    }

    /// Builds a value from its power-basis coordinates, checking the length.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigRational>) -> Result<Cyc, CycError> {
        if order == 0 {
            return Err(CycError::ZeroOrder);
        }
        let expected = totient(order) as usize;
        if coeffs.len() != expected {
            return Err(CycError::CoeffCount {
                order,
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Cyc { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Re-expresses the value in `Q(zeta_target)`; `order` must divide `target`.
    pub fn lift(&self, target: u32) -> Cyc {
        assert!(
            target.is_multiple_of(self.order),
            "cannot lift order {} to {}",
            self.order,
            target
        );
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as i64;
        Cyc::reduce(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 * step, c.clone())),
            target,
        )
    }

    fn common(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
        if a.order == b.order {
            (a.clone(), b.clone())
        } else {
            let l = a.order.lcm(&b.order);
            (a.lift(l), b.lift(l))
        }
    }

    /// Image under `zeta -> zeta^k`.
    pub fn galois(&self, k: i64) -> Result<Cyc, CycError> {
        if (k.rem_euclid(self.order as i64)).gcd(&(self.order as i64)) != 1 {
            return Err(CycError::NonUnit {
                k,
                order: self.order,
            });
        }
        Ok(Cyc::reduce(
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 * k, c.clone())),
            self.order,
        ))
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Cyc {
        self.galois(-1).expect("-1 is always a unit")
    }

    pub fn scale(&self, q: &BigRational) -> Cyc {
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Cyc {
        let mut acc = Cyc::from_int(1, self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Algebraic integer test; the power basis is an integral basis.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    /// The same value written in `Q(zeta_d)`, if it lies in that subfield.
    pub fn descend(&self, d: u32) -> Option<Cyc> {
        if d == 0 {
            return None;
        }
        let big = self.order.lcm(&d);
        let target = self.lift(big);
        let k = totient(d) as usize;
        let rows = totient(big) as usize;
        // Augmented system [b_0 .. b_{k-1} | target], b_i = zeta_d^i in Q(zeta_big).
        let mut m: Vec<Vec<BigRational>> = vec![Vec::with_capacity(k + 1); rows];
        for i in 0..k {
            let b = Cyc::root(d, i as i64).lift(big);
            for (r, c) in b.coeffs.into_iter().enumerate() {
                m[r].push(c);
            }
        }
        for (r, c) in target.coeffs.into_iter().enumerate() {
            m[r].push(c);
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..k {
            let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for x in m[row].iter_mut() {
                *x *= &inv;
            }
            for r in 0..rows {
                if r != row && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..=k {
                        let sub = &f * &m[row][c];
                        m[r][c] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if m[row..].iter().any(|r| !r[k].is_zero()) {
            return None;
        }
        let mut coeffs = vec![BigRational::zero(); k];
        for (r, &col) in pivots.iter().enumerate() {
            coeffs[col] = m[r][k].clone();
        }
        Some(Cyc { order: d, coeffs })
    }

    /// Lexicographic comparison of coordinate vectors (after lifting to a
    /// common order).
    pub fn cmp_coords(&self, other: &Cyc) -> Ordering {
        let (a, b) = Cyc::common(self, other);
        a.coeffs.cmp(&b.coeffs)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Cyc) -> bool {
        if self.order == other.order {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = Cyc::common(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for Cyc {}

impl<'a> Add<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, rhs: &Cyc) -> Cyc {
        let (a, b) = Cyc::common(self, rhs);
        Cyc {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<'a> Sub<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &Cyc) -> Cyc {
        let (a, b) = Cyc::common(self, rhs);
        Cyc {
            order: a.order,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Mul<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &Cyc) -> Cyc {
        let (a, b) = Cyc::common(self, rhs);
        let n = a.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyc::from_poly(prod, a.order)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, rhs: Cyc) -> Cyc {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Cyc {
    /// GAP-style rendering, e.g. `-1 - E(3)` for `zeta_3^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let root = match i {
                0 => String::new(),
                1 => format!("E({})", self.order),
                _ => format!("E({})^{}", self.order, i),
            };
            if root.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                f.write_str(&root)?;
            } else {
                write!(f, "{}*{}", mag, root)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycRepr {
    order: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for Cyc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycRepr {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|q| [q.numer().to_string(), q.denom().to_string()])
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Cyc, D::Error> {
        let repr = CycRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|[n, den]| parse_rational(n, den))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Cyc::from_coeffs(repr.order, coeffs).map_err(D::Error::custom)
    }
}

fn parse_rational(num: &str, den: &str) -> Result<BigRational, CycError> {
    let bad = || CycError::BadRational(format!("{num}/{den}"));
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn small_cyclotomic_polys() {
        let as_i = |n| {
            cyclotomic_poly(n)
                .iter()
                .map(|c| i64::try_from(c).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(as_i(1), vec![-1, 1]);
        assert_eq!(as_i(2), vec![1, 1]);
        assert_eq!(as_i(4), vec![1, 0, 1]);
        assert_eq!(as_i(6), vec![1, -1, 1]);
        assert_eq!(as_i(12), vec![1, 0, -1, 0, 1]);
        for n in 1..60 {
            assert_eq!(cyclotomic_poly(n).len() as u32 - 1, totient(n));
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Cyc::reduce([(2, q(1))], 4), Cyc::from_int(-1, 4));
        assert_eq!(Cyc::reduce([(1, q(1)), (2, q(1))], 3), Cyc::from_int(-1, 3));
        assert_eq!(Cyc::reduce([(0, q(1))], 12), Cyc::from_int(1, 12));
        assert_eq!(Cyc::reduce([(-1, q(1))], 5), Cyc::root(5, 4));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&Cyc::root(5, 1) * &Cyc::root(5, 4), Cyc::from_int(1, 5));
        let z3 = Cyc::root(3, 1);
        let sq = &z3 * &z3;
        assert_eq!(sq.coeffs(), &[q(-1), q(-1)]);
        let one = Cyc::from_int(1, 8);
        let z8 = Cyc::root(8, 1);
        assert_eq!(&(&one + &z8) * &(&one - &z8), &one - &Cyc::root(4, 1));
    }

    #[test]
    fn galois_examples() {
        assert_eq!(Cyc::root(5, 1).galois(-1).unwrap(), Cyc::root(5, 4));
        let r = Cyc::from_rational(BigRational::new(3.into(), 7.into()), 9);
        assert_eq!(r.galois(2).unwrap(), r);
        let s = &(&Cyc::root(7, 1) + &Cyc::root(7, 2)) + &Cyc::root(7, 4);
        let t = &(&Cyc::root(7, 3) + &Cyc::root(7, 6)) + &Cyc::root(7, 5);
        assert_eq!(s.galois(3).unwrap(), t);
        assert_eq!(
            Cyc::root(6, 1).galois(3),
            Err(CycError::NonUnit { k: 3, order: 6 })
        );
    }

    #[test]
    fn rationality() {
        assert_eq!((&Cyc::root(6, 1) + &Cyc::root(6, 5)).as_rational(), Some(q(1)));
        assert_eq!(Cyc::root(3, 1).as_rational(), None);
        assert_eq!(Cyc::zero(7).as_rational(), Some(q(0)));
    }

    #[test]
    fn geometric_sums_vanish() {
        for n in 2..=24u32 {
            let s = Cyc::reduce((0..n as i64).map(|j| (j, q(1))), n);
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn cross_order_equality() {
        assert_eq!(Cyc::root(3, 1), Cyc::root(6, 2));
        assert_eq!(Cyc::root(4, 2), Cyc::from_int(-1, 1));
        assert_ne!(Cyc::root(4, 1), Cyc::root(4, 3));
    }

    #[test]
    fn json_shape() {
        let z = Cyc::root(3, 2);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"order":3,"coeffs":[["-1","1"],["-1","1"]]}"#);
        let back: Cyc = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<Cyc>(r#"{"order":3,"coeffs":[["1","1"]]}"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(Cyc::root(3, 2).to_string(), "-1 - E(3)");
        assert_eq!(Cyc::zero(5).to_string(), "0");
        assert_eq!(Cyc::root(7, 3).to_string(), "E(7)^3");
    }

    #[test]
    fn descend_to_subfields() {
        let w = Cyc::root(3, 2).lift(21);
        assert_eq!(w.descend(3).unwrap().coeffs(), Cyc::root(3, 2).coeffs());
        assert!(Cyc::root(21, 1).descend(7).is_none());
        assert_eq!(Cyc::from_int(5, 12).descend(1).unwrap(), Cyc::from_int(5, 1));
        let s = &(&Cyc::root(7, 1) + &Cyc::root(7, 2)) + &Cyc::root(7, 4);
        assert!(s.descend(1).is_none());
        assert_eq!(Cyc::root(4, 1).descend(8).unwrap(), Cyc::root(8, 2));
    }
}
