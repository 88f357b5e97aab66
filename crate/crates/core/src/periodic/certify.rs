use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::{
    euler_quotient, j_quotient_order, predicate_jper, predicate_talpha, talpha_order, PeriodicError,
    Witness, BASIS_NOTE,
};
use crate::lattice::{FgAbGroup, Order};
use crate::repring::{Flavor, FlavoredRep, VirtualChar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CertFlavor {
    /// Orders of t_alpha-elements in complex K-theory.
    K,
    /// Upper bounds for J-orders, from the `RO(G)` Adams relations only.
    #[serde(rename = "Jprime")]
    JPrime,
}

impl fmt::Display for CertFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertFlavor::K => "K",
            CertFlavor::JPrime => "Jprime",
        })
    }
}

impl std::str::FromStr for CertFlavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "K" | "k" => Ok(CertFlavor::K),
            "Jprime" | "jprime" | "J'" | "J" => Ok(CertFlavor::JPrime),
            _ => Err(format!("unknown flavor {s:?} (expected K or Jprime)")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuotientSummary {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_nums")]
    pub torsion: Vec<BigInt>,
}

fn ser_nums<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let vals: Vec<serde_json::Value> = v
        .iter()
        .map(|d| match u64::try_from(d) {
            Ok(x) => serde_json::Value::from(x),
            Err(_) => serde_json::Value::from(d.to_string()),
        })
        .collect();
    vals.serialize(s)
}

impl From<&FgAbGroup> for QuotientSummary {
    fn from(g: &FgAbGroup) -> Self {
        QuotientSummary {
            free_rank: g.free_rank,
            torsion: g.torsion.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodicityCertificate {
    pub group: String,
    pub lambda: String,
    pub lambda_flavor: Flavor,
    pub alpha: String,
    pub power: u32,
    pub flavor: CertFlavor,
    pub exists: bool,
    #[serde(serialize_with = "ser_order")]
    pub order: Order,
    pub order_semantics: &'static str,
    pub order_factorization: BTreeMap<u64, u32>,
    /// Every prime factor of the order divides `|G|`.
    pub smooth: bool,
    pub witnesses: Vec<Witness>,
    pub quotient: QuotientSummary,
    pub basis: &'static str,
    pub warnings: Vec<String>,
}

fn ser_order<S: Serializer>(o: &Order, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&o.to_string())
}

impl fmt::Display for PeriodicityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group      {}", self.group)?;
        writeln!(f, "lambda     {} ({})", self.lambda, self.lambda_flavor)?;
        writeln!(f, "alpha      {}", self.alpha)?;
        writeln!(f, "power      {}", self.power)?;
        writeln!(f, "flavor     {}", self.flavor)?;
        writeln!(f, "exists     {}", self.exists)?;
        writeln!(f, "order      {} [{}]", self.order, self.order_semantics)?;
        if !self.order_factorization.is_empty() {
            let parts: Vec<String> = self
                .order_factorization
                .iter()
                .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
                .collect();
            writeln!(f, "factors    {}", parts.join(" * "))?;
        }
        writeln!(
            f,
            "quotient   {}",
            FgAbGroup {
                free_rank: self.quotient.free_rank,
                torsion: self.quotient.torsion.clone()
            }
        )?;
        writeln!(f, "witnesses  |C|  dim lambda^C  alpha condition")?;
        for w in &self.witnesses {
            writeln!(
                f,
                "           {:<4} {:<13} {}",
                w.cyclic_rep_order, w.lambda_fixed_dim, w.alpha_condition
            )?;
        }
        for w in &self.warnings {
            writeln!(f, "warning    {w}")?;
        }
        Ok(())
    }
}

/// Trial division by primes up to `bound`; the cofactor is returned when
/// it is not 1.
fn factor_smooth(n: &BigInt, bound: u64) -> (BTreeMap<u64, u32>, BigInt) {
    let mut rest = n.clone();
    let mut out = BTreeMap::new();
    for p in 2..=bound.max(1) {
        let bp = BigInt::from(p);
        while !rest.is_zero() && rest.is_multiple_of(&bp) && !rest.is_one() {
            rest /= &bp;
            *out.entry(p).or_insert(0) += 1;
        }
    }
    (out, rest)
}

/// Existence and order of a periodicity for `alpha` over `C(a_lambda^m)`.
///
/// A real `lambda` is handled through its complexification: `m` must be
/// even and the quotient is taken by `e_{lambda_C}^{m/2}`. `odd_only`
/// restricts the Adams indices in the J' flavor.
pub fn certify(
    lambda: &FlavoredRep,
    m: u32,
    alpha: &VirtualChar,
    flavor: CertFlavor,
    odd_only: bool,
) -> Result<PeriodicityCertificate, PeriodicError> {
    let complex_power = match lambda.flavor() {
        Flavor::Complex => m,
        Flavor::Real if m.is_multiple_of(2) => m / 2,
        Flavor::Real => return Err(PeriodicError::OddRealPower(m)),
    };
    let lam = lambda.rep();
    let q = euler_quotient(lam, complex_power)?;
    let mut warnings = Vec::new();
    if !alpha.dim().is_zero() {
        warnings.push(format!("alpha has virtual dimension {}", alpha.dim()));
    }
    let (pred, order, semantics) = match flavor {
        CertFlavor::K => (
            predicate_talpha(lam, alpha)?,
            talpha_order(&q, alpha)?,
            "minimal t_alpha order",
        ),
        CertFlavor::JPrime => (
            predicate_jper(lam, alpha)?,
            j_quotient_order(&q, alpha, odd_only)?,
            "J-prime order (upper bound)",
        ),
    };
    if pred.holds != order.is_finite() {
        return Err(PeriodicError::Invariant(format!(
            "predicate says {} but the order is {order}",
            pred.holds
        )));
    }
    let group_order = lam.table().group().order() as u64;
    let (order_factorization, smooth) = match &order {
        Order::Finite(n) => {
            let (f, rest) = factor_smooth(n, group_order);
            if !rest.is_one() {
                return Err(PeriodicError::Invariant(format!(
                    "order {n} has a prime factor not dividing |G| = {group_order}"
                )));
            }
            (f, true)
        }
        Order::Infinite => (BTreeMap::new(), false),
    };
    Ok(PeriodicityCertificate {
        group: lam.table().group().descriptor(),
        lambda: lam.to_string(),
        lambda_flavor: lambda.flavor(),
        alpha: alpha.to_string(),
        power: m,
        flavor,
        exists: order.is_finite(),
        order,
        order_semantics: semantics,
        order_factorization,
        smooth,
        witnesses: pred.witnesses,
        quotient: q.group().into(),
        basis: BASIS_NOTE,
        warnings,
    })
}

/// `#{0 < k <= m : k = 0, 1, 2, 4 mod 8}`.
pub fn gamma(m: u64) -> u64 {
    let full = (m / 8) * 4;
    let tail = (1..=m % 8).filter(|k| matches!(k, 1 | 2 | 4)).count() as u64;
    full + tail
}
