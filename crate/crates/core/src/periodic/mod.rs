//! Periodicity queries: Euler quotients `RU(G)/(e_lambda^m)`, the
//! existence predicates for t_alpha-elements and J-periodicities, element
//! orders in the relevant lattices, and bundled certificates.

mod certify;
mod karoubi;

use std::sync::Arc;

use log::warn;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chartab::CharacterTable;
use crate::grp::{GroupError, Subgroup};
use crate::lattice::{
    cokernel, element_order, image_basis, kernel_basis, membership, FgAbGroup, IntMatrix,
    LatticeError, Order,
};
use crate::repring::{real_structure, ReprError, VirtualChar};

pub use certify::{certify, gamma, CertFlavor, PeriodicityCertificate, QuotientSummary};
pub use karoubi::karoubi_rank;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PeriodicError {
    #[error(transparent)]
    Repr(#[from] ReprError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("lambda must be an honest representation, got {0}")]
    VirtualLambda(String),
    #[error("power must be at least 1, got {0}")]
    BadPower(u32),
    #[error(
        "odd power {0} of a real representation: only even powers reduce to the complexification, \
         and no general recipe is known for odd ones"
    )]
    OddRealPower(u32),
    #[error("{0} is not in the RO(G) lattice")]
    NotReal(String),
    #[error("Karoubi rank needs honest representations V and W, got {0}")]
    NotHonestDifference(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl PeriodicError {
    /// Failures that indicate a bug in the engine rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            PeriodicError::Invariant(_) | PeriodicError::Repr(ReprError::Inconsistent(_))
        )
    }
}

pub const BASIS_NOTE: &str =
    "coordinates in the Bott-trivialised basis: pi_{m lambda} KU_G = RU(G){beta_lambda^m}";

/// `RU(G) / (e_lambda^m)` presented by the matrix of multiplication by
/// `e_lambda^m` in irreducible coordinates.
#[derive(Clone, Debug)]
pub struct EulerQuotient {
    lambda: VirtualChar,
    power: u32,
    euler: VirtualChar,
    presentation: IntMatrix,
    group: FgAbGroup,
}

impl EulerQuotient {
    pub fn table(&self) -> &Arc<CharacterTable> {
        self.lambda.table()
    }

    pub fn lambda(&self) -> &VirtualChar {
        &self.lambda
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// `e_lambda^m`.
    pub fn euler(&self) -> &VirtualChar {
        &self.euler
    }

    pub fn presentation(&self) -> &IntMatrix {
        &self.presentation
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn basis_note(&self) -> &'static str {
        BASIS_NOTE
    }
}

/// Euler class of an honest representation, with the degenerate cases
/// spelled out: `e_0 = 1`, and `e_lambda = 0` when `lambda` has a trivial
/// summand.
pub fn euler_of(lambda: &VirtualChar) -> Result<VirtualChar, PeriodicError> {
    if !lambda.is_honest() {
        return Err(PeriodicError::VirtualLambda(lambda.to_string()));
    }
    if lambda.is_zero() {
        return Ok(VirtualChar::trivial(lambda.table()));
    }
    if lambda.coords()[0].is_positive() {
        return Ok(VirtualChar::zero(lambda.table()));
    }
    Ok(lambda.euler_class()?)
}

pub fn euler_quotient(lambda: &VirtualChar, m: u32) -> Result<EulerQuotient, PeriodicError> {
    if m < 1 {
        return Err(PeriodicError::BadPower(m));
    }
    let euler = euler_of(lambda)?.pow(m)?;
    let presentation = mult_matrix(&euler)?;
    let group = cokernel(&presentation);
    let nonzero = fixed_dims_by_class(lambda)?
        .iter()
        .filter(|d| !d.is_zero())
        .count();
    if group.free_rank != nonzero {
        return Err(PeriodicError::Invariant(format!(
            "free rank {} of RU/(e^m) differs from the {nonzero} classes with lambda^g != 0",
            group.free_rank
        )));
    }
    Ok(EulerQuotient {
        lambda: lambda.clone(),
        power: m,
        euler,
        presentation,
        group,
    })
}

/// Matrix of multiplication by `a` on `RU(G)`; column `i` is `a * chi_i`.
pub fn mult_matrix(a: &VirtualChar) -> Result<IntMatrix, PeriodicError> {
    let t = a.table();
    let cols = (0..t.len())
        .map(|i| Ok(a.tensor(&VirtualChar::irreducible(t, i))?.coords().to_vec()))
        .collect::<Result<Vec<_>, PeriodicError>>()?;
    Ok(IntMatrix::from_columns(t.len(), &cols))
}

fn warn_dim(alpha: &VirtualChar) {
    if !alpha.dim().is_zero() {
        warn!("alpha = {alpha} has virtual dimension {}, not 0", alpha.dim());
    }
}

fn check_table(q: &EulerQuotient, alpha: &VirtualChar) -> Result<(), PeriodicError> {
    if !Arc::ptr_eq(q.table(), alpha.table()) && q.lambda.plus(alpha).is_err() {
        return Err(ReprError::TableMismatch.into());
    }
    Ok(())
}

/// Minimal order of a t_alpha-element in `pi_{n alpha} C(a_lambda^m)`: the
/// order of `alpha` in `RU(G)/(e_lambda^m)`.
pub fn talpha_order(q: &EulerQuotient, alpha: &VirtualChar) -> Result<Order, PeriodicError> {
    check_table(q, alpha)?;
    warn_dim(alpha);
    Ok(element_order(&q.presentation, alpha.coords())?)
}

/// `fixed_dim(lambda, <g>)` for each conjugacy class, indexed by class.
pub fn fixed_dims_by_class(v: &VirtualChar) -> Result<Vec<BigInt>, PeriodicError> {
    let t = v.table();
    let cc = t.classes();
    (0..cc.len())
        .map(|j| Ok(v.fixed_dim(&Subgroup::cyclic(t.group(), cc.rep(j)))?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub cyclic_rep_order: usize,
    #[serde(serialize_with = "ser_bigint_num")]
    pub lambda_fixed_dim: BigInt,
    #[serde(serialize_with = "ser_bigint_num")]
    pub alpha_condition: BigInt,
}

pub(crate) fn ser_bigint_num<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(x) => s.serialize_i64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateResult {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
}

/// For every cyclic `C` (up to conjugacy): `|lambda^C| != 0` implies
/// `alpha_C = 0`. The witness value counts elements of `C` where
/// `chi_alpha` is nonzero.
pub fn predicate_talpha(lambda: &VirtualChar, alpha: &VirtualChar) -> Result<PredicateResult, PeriodicError> {
    predicate(lambda, alpha, |c| {
        let n = c.elements().iter().filter(|&&x| !alpha.value_at(x).is_zero()).count();
        Ok(BigInt::from(n))
    })
}

/// For every cyclic `C`: `|lambda^C| != 0` implies `|alpha^C| = 0`.
pub fn predicate_jper(lambda: &VirtualChar, alpha: &VirtualChar) -> Result<PredicateResult, PeriodicError> {
    predicate(lambda, alpha, |c| Ok(alpha.fixed_dim(c)?))
}

fn predicate(
    lambda: &VirtualChar,
    alpha: &VirtualChar,
    condition: impl Fn(&Subgroup) -> Result<BigInt, PeriodicError>,
) -> Result<PredicateResult, PeriodicError> {
    if lambda.plus(alpha).is_err() {
        return Err(ReprError::TableMismatch.into());
    }
    let mut holds = true;
    let mut witnesses = Vec::new();
    for c in lambda.table().group().cyclic_subgroups() {
        let d = lambda.fixed_dim(&c)?;
        let v = condition(&c)?;
        if !d.is_zero() && !v.is_zero() {
            holds = false;
        }
        witnesses.push(Witness {
            cyclic_rep_order: c.order(),
            lambda_fixed_dim: d,
            alpha_condition: v,
        });
    }
    Ok(PredicateResult { holds, witnesses })
}

/// `F(alpha) = {H : alpha_H = 0}`, as conjugacy-class representatives.
pub fn family_f(alpha: &VirtualChar) -> Result<Vec<Subgroup>, PeriodicError> {
    let g = alpha.table().group();
    let subs = g.all_subgroups()?;
    let fam: Vec<Subgroup> = subs
        .iter()
        .filter(|h| alpha.restriction_is_zero(h))
        .cloned()
        .collect();
    check_closed(g, &subs, &fam, "F")?;
    Ok(fam)
}

/// `F[alpha] = {H : |alpha^C| = 0 for every cyclic C <= H}`.
pub fn family_fbracket(alpha: &VirtualChar) -> Result<Vec<Subgroup>, PeriodicError> {
    let g = alpha.table().group();
    let cc = g.conjugacy_classes();
    let by_class = fixed_dims_by_class(alpha)?;
    let subs = g.all_subgroups()?;
    let fam: Vec<Subgroup> = subs
        .iter()
        .filter(|h| h.elements().iter().all(|&x| by_class[cc.class_of(x)].is_zero()))
        .cloned()
        .collect();
    check_closed(g, &subs, &fam, "F[]")?;
    Ok(fam)
}

fn check_closed(
    g: &crate::grp::FiniteGroup,
    subs: &[Subgroup],
    fam: &[Subgroup],
    name: &str,
) -> Result<(), PeriodicError> {
    for h in fam {
        for k in subs {
            if k.is_subconjugate_to(g, h) && !fam.iter().any(|f| f.is_conjugate_to(g, k)) {
                return Err(PeriodicError::Invariant(format!(
                    "family {name} is not closed under subconjugacy"
                )));
            }
        }
    }
    Ok(())
}

/// Adams indices used for J-type relations: residues `k` in `1..=2e`
/// coprime to `|G|`, optionally odd only. `psi^k` depends only on `k`
/// modulo the exponent `e`.
pub fn admissible_indices(table: &CharacterTable, odd_only: bool) -> Vec<i64> {
    let n = table.group().order() as i64;
    let e = table.field_order() as i64;
    (1..=2 * e)
        .filter(|k| k.gcd(&n) == 1 && (!odd_only || k % 2 == 1))
        .collect()
}

/// Columns `x - psi^k x` for `x` in the `RO(G)` basis and admissible `k`,
/// in irreducible coordinates.
fn psi_relations(table: &Arc<CharacterTable>, odd_only: bool) -> Vec<Vec<BigInt>> {
    let rs = real_structure(table);
    let mut out = Vec::new();
    for x in rs.ro_basis(table) {
        for k in admissible_indices(table, odd_only) {
            let d = x.minus(&x.adams(k)).expect("same table");
            if !d.is_zero() && !out.contains(&d.coords().to_vec()) {
                out.push(d.coords().to_vec());
            }
        }
    }
    out
}

fn ro_coords_or_err(alpha: &VirtualChar) -> Result<Vec<BigInt>, PeriodicError> {
    real_structure(alpha.table())
        .ro_coords(alpha)
        .ok_or_else(|| PeriodicError::NotReal(alpha.to_string()))
}

/// Order of `alpha` in the J'-group at a point: `RO(G)` modulo
/// `x - psi^k x`.
pub fn j_point_order(alpha: &VirtualChar, odd_only: bool) -> Result<Order, PeriodicError> {
    let t = alpha.table();
    let target = ro_coords_or_err(alpha)?;
    let rs = real_structure(t);
    let rels: Vec<Vec<BigInt>> = psi_relations(t, odd_only)
        .iter()
        .map(|c| {
            rs.ro_coords(&VirtualChar::new(t.clone(), c.clone()).unwrap())
                .expect("psi preserves RO(G)")
        })
        .collect();
    let m = IntMatrix::from_columns(rs.ro_rank(), &rels);
    Ok(element_order(&m, &target)?)
}

/// Upper bound for the J-order of `alpha` over `C(a_lambda^m)`: the order
/// in `RU(G)` modulo `e_lambda^m RU(G)` and the `RO(G)` Adams relations.
pub fn j_quotient_order(q: &EulerQuotient, alpha: &VirtualChar, odd_only: bool) -> Result<Order, PeriodicError> {
    check_table(q, alpha)?;
    ro_coords_or_err(alpha)?;
    warn_dim(alpha);
    let t = q.table();
    let mut cols = q.presentation.columns();
    cols.extend(psi_relations(t, odd_only));
    let m = IntMatrix::from_columns(t.len(), &cols);
    let j = element_order(&m, alpha.coords())?;
    let k = talpha_order(q, alpha)?;
    if !j.divides(&k) {
        return Err(PeriodicError::Invariant(format!(
            "J'-order {j} does not divide the K-order {k}"
        )));
    }
    Ok(j)
}

/// `{rho : chi_rho(g) = 0 whenever lambda^g = 0}`, the annihilator of
/// `e_lambda^n` for every `n >= 1`. Columns form a basis in HNF.
pub fn annihilator_kernel(lambda: &VirtualChar) -> Result<IntMatrix, PeriodicError> {
    if !lambda.is_honest() {
        return Err(PeriodicError::VirtualLambda(lambda.to_string()));
    }
    let t = lambda.table();
    let dims = fixed_dims_by_class(lambda)?;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (j, d) in dims.iter().enumerate() {
        if !d.is_zero() {
            continue;
        }
        let o = t.classes().rep_order(j);
        let width = crate::cyclo::totient(o) as usize;
        for coord in 0..width {
            rows.push(
                (0..t.len())
                    .map(|i| t.value(i, j).lift(o).coeffs()[coord].to_integer())
                    .collect(),
            );
        }
    }
    let m = IntMatrix::from_columns(t.len(), &rows).transpose();
    Ok(kernel_basis(&m))
}

/// `E = M N` through the image lattice of `E`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub m: IntMatrix,
    pub n: IntMatrix,
    pub rank: usize,
    /// Set when the rank equals the caller's expected rank.
    pub applicable: bool,
}

pub fn factor_through_image(e: &IntMatrix, expected_rank: Option<usize>) -> Result<Factorization, PeriodicError> {
    if e.rows() != e.cols() {
        return Err(LatticeError::NotSquare {
            rows: e.rows(),
            cols: e.cols(),
        }
        .into());
    }
    let b = image_basis(e);
    let rank = b.cols();
    let mut n = IntMatrix::zeros(rank, e.cols());
    for j in 0..e.cols() {
        let x = membership(&b, &e.column(j))?
            .ok_or_else(|| PeriodicError::Invariant("column outside its own image".into()))?;
        for (i, xi) in x.into_iter().enumerate() {
            n[(i, j)] = xi;
        }
    }
    if b.mul(&n)? != *e {
        return Err(PeriodicError::Invariant("M N differs from E".into()));
    }
    Ok(Factorization {
        m: b,
        n,
        rank,
        applicable: expected_rank == Some(rank),
    })
}
