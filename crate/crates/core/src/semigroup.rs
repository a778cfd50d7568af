//! The induced operation `m *_f n = g(s_m · s_n)` on rank indices.
//!
//! Every evaluation multiplies the underlying s-values as ordinary integers
//! (checked, in `u128`) and performs a single `count_below` at the end.
//! Index 1 is the identity (s_1 = 1) and index 0 is absorbing (s_0 = 0).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::GroundTable;

/// A finite product `∏ s_index^exponent`, stored as (index, exponent) pairs.
/// The empty monomial is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    pub factors: Vec<(u64, u64)>,
}

impl Monomial {
    pub fn identity() -> Self {
        Monomial::default()
    }

    pub fn single(index: u64) -> Self {
        Monomial {
            factors: vec![(index, 1)],
        }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (u64, u64)>) -> Self {
        Monomial {
            factors: factors.into_iter().collect(),
        }
    }

    pub fn with(mut self, index: u64, exponent: u64) -> Self {
        self.factors.push((index, exponent));
        self
    }

    /// Multiset union of the factor lists.
    pub fn merged(&self, other: &Monomial) -> Monomial {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Monomial { factors }
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 0)
    }
}

/// `base^exp` in u128, `None` on overflow.
pub(crate) fn checked_pow(base: u64, exp: u64) -> Option<u128> {
    match (base, exp) {
        (_, 0) => Some(1),
        (0, _) => Some(0),
        (1, _) => Some(1),
        (_, e) if e >= 128 => None,
        (b, e) => (b as u128).checked_pow(e as u32),
    }
}

fn out_of_range(value: Option<u128>, table: &GroundTable) -> Error {
    Error::OutOfRange {
        value: value.unwrap_or(u128::MAX),
        limit: table.limit(),
    }
}

/// Integer value `∏ s_i^e` of a monomial, required to be below the table limit.
pub fn monomial_value(table: &GroundTable, m: &Monomial) -> Result<u64> {
    let limit = table.limit() as u128;
    let mut terms = Vec::with_capacity(m.factors.len());
    for &(index, exp) in &m.factors {
        if exp == 0 {
            continue;
        }
        let s = table.element(index)?;
        if s == 0 {
            return Ok(0);
        }
        terms.push((s, exp));
    }
    let mut acc: u128 = 1;
    for (s, exp) in terms {
        let next = checked_pow(s, exp).and_then(|t| acc.checked_mul(t));
        acc = match next {
            Some(v) if v < limit => v,
            other => return Err(out_of_range(other, table)),
        };
    }
    Ok(acc as u64)
}

/// Rank of the integer product of a monomial.
pub fn eval_monomial(table: &GroundTable, m: &Monomial) -> Result<u64> {
    let v = monomial_value(table, m)?;
    table.count_below(v)
}

/// `m *_f n`.
pub fn star(table: &GroundTable, m: u64, n: u64) -> Result<u64> {
    let a = table.element(m)?;
    let b = table.element(n)?;
    let p = a as u128 * b as u128;
    if p >= table.limit() as u128 {
        return Err(out_of_range(Some(p), table));
    }
    table.count_below(p as u64)
}

/// `x^(n)`, the n-fold `*_f` power; `power(x, 0) = 1`.
pub fn power(table: &GroundTable, x: u64, n: u64) -> Result<u64> {
    eval_monomial(table, &Monomial::from_factors([(x, n)]))
}

/// Largest sequence accepted by [`finite_products`].
pub const MAX_FP_LEN: usize = 24;

/// All `*_f` products over nonempty subsequences of `xs`, as a set.
pub fn finite_products(table: &GroundTable, xs: &[u64]) -> Result<BTreeSet<u64>> {
    if xs.len() > MAX_FP_LEN {
        return Err(Error::InvalidParameter(format!(
            "finite products over {} generators exceed the cap of {MAX_FP_LEN}",
            xs.len()
        )));
    }
    let limit = table.limit() as u128;
    let s: Vec<u128> = xs
        .iter()
        .map(|&x| table.element(x).map(u128::from))
        .collect::<Result<_>>()?;
    let count = 1usize << xs.len();
    // products[mask] = None once the partial product has left the table.
    let mut products: Vec<Option<u128>> = vec![Some(1); count];
    let mut out = BTreeSet::new();
    for mask in 1..count {
        let low = mask.trailing_zeros() as usize;
        let p = products[mask & (mask - 1)]
            .and_then(|rest| rest.checked_mul(s[low]))
            .filter(|&v| v < limit);
        products[mask] = p;
        match p {
            Some(v) => {
                out.insert(table.count_below(v as u64)?);
            }
            None => {
                let subset = (0..xs.len()).filter(|i| mask >> i & 1 == 1).collect();
                return Err(Error::SubsetOutOfRange {
                    subset,
                    limit: table.limit(),
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum LawViolation {
    Associativity { m: u64, n: u64, k: u64 },
    Commutativity { m: u64, n: u64 },
    Identity { n: u64 },
    Absorber { n: u64 },
    Homomorphism { m: u64, n: u64 },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub range_max: u64,
    pub associativity: u64,
    pub commutativity: u64,
    pub identity: u64,
    pub absorber: u64,
    pub homomorphism: u64,
    /// Checks abandoned because some product left the table.
    pub skipped: u64,
    pub counterexample: Option<LawViolation>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Exhaustively check the monoid laws and the f-homomorphism for all
/// indices `<= range_max`. Out-of-range combinations are counted as skipped.
pub fn verify_laws(table: &GroundTable, range_max: u64) -> LawReport {
    let mut report = LawReport {
        range_max,
        ..LawReport::default()
    };
    let op = |a, b| star(table, a, b).ok();
    let fail = |mut report: LawReport, v| {
        report.counterexample = Some(v);
        report
    };

    for m in 0..=range_max {
        match (op(1, m), op(m, 1)) {
            (Some(l), Some(r)) => {
                report.identity += 1;
                if l != m || r != m {
                    return fail(report, LawViolation::Identity { n: m });
                }
            }
            _ => report.skipped += 1,
        }
        match (op(0, m), op(m, 0)) {
            (Some(l), Some(r)) => {
                report.absorber += 1;
                if l != 0 || r != 0 {
                    return fail(report, LawViolation::Absorber { n: m });
                }
            }
            _ => report.skipped += 1,
        }

        for n in 0..=range_max {
            let Some(mn) = op(m, n) else {
                report.skipped += 1;
                continue;
            };
            match op(n, m) {
                Some(nm) => {
                    report.commutativity += 1;
                    if nm != mn {
                        return fail(report, LawViolation::Commutativity { m, n });
                    }
                }
                None => report.skipped += 1,
            }
            let lhs = table.element(mn).ok();
            let rhs = table
                .element(m)
                .ok()
                .zip(table.element(n).ok())
                .and_then(|(a, b)| a.checked_mul(b));
            report.homomorphism += 1;
            if lhs.is_none() || lhs != rhs {
                return fail(report, LawViolation::Homomorphism { m, n });
            }

            for k in 0..=range_max {
                let left = op(mn, k);
                let right = op(n, k).and_then(|nk| op(m, nk));
                match (left, right) {
                    (Some(l), Some(r)) => {
                        report.associativity += 1;
                        if l != r {
                            return fail(report, LawViolation::Associativity { m, n, k });
                        }
                    }
                    _ => report.skipped += 1,
                }
            }
        }
    }
    report
}
