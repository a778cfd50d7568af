//! The six monochromatic configuration families over `(ℕ₀, *_f)`.
//!
//! Each family is generated from a handful of rank indices and every value
//! is a single monomial evaluation: the s-values are multiplied as integers
//! and ranked once. Generator indices must be at least 1; index 0 would
//! collapse every configuration to {0}.

mod witness;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::colorings::Coloring;
use crate::error::{Error, Result};
use crate::ground::GroundTable;
use crate::semigroup::{eval_monomial, finite_products, Monomial};

pub use witness::{generate, Generators, Witness};

pub type Configuration = BTreeSet<u64>;

/// A configuration family plus its size parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum PatternSpec {
    /// Finite `*_f`-products of a length-`k` sequence.
    Fpf { k: usize },
    /// `{x, z} ∪ {x^(j) *_f z : 1 <= j <= k}`.
    Brauer { k: u64 },
    /// (m, p)-sets generated by `x_0, …, x_m`.
    Deuber { m: usize, p: u64 },
    /// `φ(x_{F_1}, …, x_{F_m})` over all increasing block chains in a
    /// length-`k` sequence.
    Mt { m: usize, k: usize, phi: PhiExpr },
    /// `{s_b (∏_{t∈γ} s_t · s_{a+id})^j : 0 <= i, j <= k}`.
    Geo { k: u64 },
    /// `{s_b s_{a_i1}^c ⋯ s_{a_id}^{c^d} : 1 <= i <= ℓ}` for fixed sets F_i.
    Pvw { d: usize, sets: Vec<Vec<u64>> },
}

impl PatternSpec {
    pub fn family(&self) -> &'static str {
        match self {
            PatternSpec::Fpf { .. } => "fpf",
            PatternSpec::Brauer { .. } => "brauer",
            PatternSpec::Deuber { .. } => "deuber",
            PatternSpec::Mt { .. } => "mt",
            PatternSpec::Geo { .. } => "geo",
            PatternSpec::Pvw { .. } => "pvw",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            PatternSpec::Fpf { k } if *k == 0 => bad("fpf: k must be >= 1".into()),
            PatternSpec::Fpf { k } if *k > crate::semigroup::MAX_FP_LEN => bad(format!(
                "fpf: k must be <= {}",
                crate::semigroup::MAX_FP_LEN
            )),
            PatternSpec::Brauer { k } if *k == 0 => bad("brauer: k must be >= 1".into()),
            PatternSpec::Deuber { m, p } if *m == 0 || *p == 0 => {
                bad("deuber: m and p must be >= 1".into())
            }
            PatternSpec::Mt { m, k, phi } => {
                if *m == 0 || *k < *m {
                    return bad("mt: need 1 <= m <= k".into());
                }
                if *k > crate::semigroup::MAX_FP_LEN {
                    return bad(format!("mt: k must be <= {}", crate::semigroup::MAX_FP_LEN));
                }
                phi.validate(*m)
            }
            PatternSpec::Geo { k } if *k == 0 => bad("geo: k must be >= 1".into()),
            PatternSpec::Pvw { d, sets } => {
                if *d == 0 || sets.is_empty() {
                    return bad("pvw: need d >= 1 and at least one set".into());
                }
                for set in sets {
                    let distinct: BTreeSet<_> = set.iter().collect();
                    if set.len() != *d || distinct.len() != *d {
                        return bad(format!(
                            "pvw: set {set:?} must have exactly {d} distinct members"
                        ));
                    }
                    if set.contains(&0) {
                        return bad("pvw: set members must be >= 1".into());
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternSpec::Fpf { k } => write!(f, "fpf(k={k})"),
            PatternSpec::Brauer { k } => write!(f, "brauer(k={k})"),
            PatternSpec::Deuber { m, p } => write!(f, "deuber(m={m},p={p})"),
            PatternSpec::Mt { m, k, phi } => write!(f, "mt(m={m},k={k},phi={phi})"),
            PatternSpec::Geo { k } => write!(f, "geo(k={k})"),
            PatternSpec::Pvw { d, sets } => write!(f, "pvw(d={d},sets={sets:?})"),
        }
    }
}

/// The closed family of maps `ℕ₀^m → ℕ₀` offered for Milliken–Taylor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PhiExpr {
    /// 1-based coordinate projection.
    Projection {
        index: usize,
    },
    Sum,
    Product,
    Linear {
        coeffs: Vec<u64>,
        constant: u64,
    },
    /// Fold of the arguments by `*_f`.
    StarFold,
}

impl PhiExpr {
    pub fn validate(&self, m: usize) -> Result<()> {
        match self {
            PhiExpr::Projection { index } if *index == 0 || *index > m => Err(
                Error::InvalidParameter(format!("projection index {index} outside 1..={m}")),
            ),
            PhiExpr::Linear { coeffs, .. } if coeffs.len() != m => Err(Error::InvalidParameter(
                format!("linear map needs {m} coefficients, got {}", coeffs.len()),
            )),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, args: &[u64], table: &GroundTable) -> Result<u64> {
        self.validate(args.len())?;
        let overflow = || Error::OutOfRange {
            value: u128::MAX,
            limit: u64::MAX,
        };
        match self {
            PhiExpr::Projection { index } => Ok(args[index - 1]),
            PhiExpr::Sum => args
                .iter()
                .try_fold(0u64, |acc, &v| acc.checked_add(v))
                .ok_or_else(overflow),
            PhiExpr::Product => args
                .iter()
                .try_fold(1u64, |acc, &v| acc.checked_mul(v))
                .ok_or_else(overflow),
            PhiExpr::Linear { coeffs, constant } => args
                .iter()
                .zip(coeffs)
                .try_fold(*constant, |acc, (&v, &c)| {
                    acc.checked_add(c.checked_mul(v)?)
                })
                .ok_or_else(overflow),
            PhiExpr::StarFold => {
                eval_monomial(table, &Monomial::from_factors(args.iter().map(|&v| (v, 1))))
            }
        }
    }
}

impl fmt::Display for PhiExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiExpr::Projection { index } => write!(f, "proj:{index}"),
            PhiExpr::Sum => write!(f, "sum"),
            PhiExpr::Product => write!(f, "product"),
            PhiExpr::Linear { coeffs, constant } => {
                let cs: Vec<String> = coeffs.iter().map(u64::to_string).collect();
                write!(f, "linear:{}+{constant}", cs.join(","))
            }
            PhiExpr::StarFold => write!(f, "star"),
        }
    }
}

impl std::str::FromStr for PhiExpr {
    type Err = Error;

    /// `sum`, `product`, `star`, `proj:I`, or `linear:C1,C2,…+K`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognized phi {s:?}"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        match s {
            "sum" => Ok(PhiExpr::Sum),
            "product" => Ok(PhiExpr::Product),
            "star" | "star-fold" => Ok(PhiExpr::StarFold),
            _ => {
                if let Some(i) = s.strip_prefix("proj:") {
                    Ok(PhiExpr::Projection {
                        index: num(i)? as usize,
                    })
                } else if let Some(rest) = s.strip_prefix("linear:") {
                    let (cs, k) = rest.split_once('+').unwrap_or((rest, "0"));
                    let coeffs = cs.split(',').map(num).collect::<Result<_>>()?;
                    Ok(PhiExpr::Linear {
                        coeffs,
                        constant: num(k)?,
                    })
                } else {
                    Err(bad())
                }
            }
        }
    }
}

fn require_positive(what: &str, indices: impl IntoIterator<Item = u64>) -> Result<()> {
    if indices.into_iter().any(|i| i == 0) {
        return Err(Error::InvalidParameter(format!(
            "{what}: generator indices must be >= 1"
        )));
    }
    Ok(())
}

/// Finite `*_f`-products of `xs`.
pub fn gen_fpf(table: &GroundTable, xs: &[u64]) -> Result<Configuration> {
    require_positive("fpf", xs.iter().copied())?;
    finite_products(table, xs)
}

pub fn gen_brauer(table: &GroundTable, x: u64, z: u64, k: u64) -> Result<Configuration> {
    require_positive("brauer", [x, z])?;
    let mut out = BTreeSet::from([x, z]);
    for j in 1..=k {
        out.insert(eval_monomial(
            table,
            &Monomial::from_factors([(x, j), (z, 1)]),
        )?);
    }
    Ok(out)
}

/// Calls `f` with every tuple in `{0..=p}^len`, lexicographically.
fn for_each_exponent_tuple(
    len: usize,
    p: u64,
    mut f: impl FnMut(&[u64]) -> Result<()>,
) -> Result<()> {
    let mut tuple = vec![0u64; len];
    loop {
        f(&tuple)?;
        let Some(pos) = tuple.iter().rposition(|&e| e < p) else {
            return Ok(());
        };
        tuple[pos] += 1;
        tuple[pos + 1..].iter_mut().for_each(|e| *e = 0);
    }
}

/// `{x_0} ∪ {s_{x_0}^{n_0} ⋯ s_{x_{j-1}}^{n_{j-1}} s_{x_j} : n_i ∈ 0..=p, 1 <= j <= m}`.
pub fn gen_deuber(table: &GroundTable, xs: &[u64], p: u64) -> Result<Configuration> {
    let Some(&x0) = xs.first() else {
        return Err(Error::InvalidParameter("deuber: need at least x_0".into()));
    };
    require_positive("deuber", xs.iter().copied())?;
    let mut out = BTreeSet::from([x0]);
    for j in 1..xs.len() {
        for_each_exponent_tuple(j, p, |ns| {
            let m = Monomial::from_factors(xs[..j].iter().copied().zip(ns.iter().copied()))
                .with(xs[j], 1);
            out.insert(eval_monomial(table, &m)?);
            Ok(())
        })?;
    }
    Ok(out)
}

/// `x_F`: the `*_f`-product of the sequence entries at the (1-based) positions of `block`.
pub fn block_value(table: &GroundTable, xs: &[u64], block: &[usize]) -> Result<u64> {
    let mut m = Monomial::identity();
    for &pos in block {
        let x = pos.checked_sub(1).and_then(|i| xs.get(i)).ok_or_else(|| {
            Error::InvalidParameter(format!("block position {pos} outside 1..={}", xs.len()))
        })?;
        m = m.with(*x, 1);
    }
    eval_monomial(table, &m)
}

/// `φ(x_{F_1}, …, x_{F_m})` for one increasing chain of blocks.
pub fn gen_milliken_taylor(
    table: &GroundTable,
    xs: &[u64],
    blocks: &[Vec<usize>],
    phi: &PhiExpr,
) -> Result<u64> {
    require_positive("mt", xs.iter().copied())?;
    if blocks.is_empty() || blocks.iter().any(Vec::is_empty) {
        return Err(Error::InvalidParameter(
            "mt: blocks must be nonempty".into(),
        ));
    }
    for (i, b) in blocks.iter().enumerate() {
        if b.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!(
                "mt: block {} is not a sorted set",
                i + 1
            )));
        }
    }
    for (i, w) in blocks.windows(2).enumerate() {
        if w[0].last() >= w[1].first() {
            return Err(Error::OrderViolation(i + 1, i + 2));
        }
    }
    let values = blocks
        .iter()
        .map(|b| block_value(table, xs, b))
        .collect::<Result<Vec<_>>>()?;
    phi.eval(&values, table)
}

/// All chains `F_1 < ⋯ < F_m` of nonempty subsets of `{1, …, k}`, as sorted
/// 1-based position lists, in a fixed canonical order.
pub fn block_chains(k: usize, m: usize) -> Vec<Vec<Vec<usize>>> {
    fn extend(
        start: usize,
        k: usize,
        left: usize,
        acc: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        if start > k {
            return;
        }
        let width = k - start + 1;
        // Nonempty subsets of {start..=k} whose max leaves room for the rest.
        for mask in 1u64..(1u64 << width) {
            let block: Vec<usize> = (0..width)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| start + i)
                .collect();
            let max = *block.last().unwrap();
            if k - max < left - 1 {
                continue;
            }
            acc.push(block);
            extend(max + 1, k, left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if m >= 1 && k >= m {
        extend(1, k, m, &mut Vec::new(), &mut out);
    }
    out
}

/// The Milliken–Taylor configuration of a finite sequence: φ over every block chain.
pub fn gen_mt_configuration(
    table: &GroundTable,
    xs: &[u64],
    m: usize,
    phi: &PhiExpr,
) -> Result<Configuration> {
    if m == 0 || xs.len() < m {
        return Err(Error::InvalidParameter(
            "mt: need 1 <= m <= sequence length".into(),
        ));
    }
    block_chains(xs.len(), m)
        .iter()
        .map(|chain| gen_milliken_taylor(table, xs, chain, phi))
        .collect()
}

/// `{s_b (∏_{t∈γ} s_t · s_{a+id})^j : 0 <= i, j <= k}`, with `s_b` given as a monomial.
pub fn gen_geo_arithmetic(
    table: &GroundTable,
    b: &Monomial,
    gamma: &[u64],
    a: u64,
    d: u64,
    k: u64,
) -> Result<Configuration> {
    if gamma.is_empty() {
        return Err(Error::EmptyGamma);
    }
    require_positive("geo", gamma.iter().copied().chain([a]))?;
    let mut out = BTreeSet::new();
    for j in 0..=k {
        for i in 0..=k {
            let t = i
                .checked_mul(d)
                .and_then(|id| id.checked_add(a))
                .ok_or_else(|| Error::InvalidParameter("geo: a + i*d overflows".into()))?;
            let m = b
                .merged(&Monomial::from_factors(gamma.iter().map(|&g| (g, j))))
                .with(t, j);
            out.insert(eval_monomial(table, &m)?);
            if j == 0 {
                // Every i gives the same value when j = 0.
                break;
            }
        }
    }
    Ok(out)
}

/// `{s_b s_{a_i1}^c s_{a_i2}^{c^2} ⋯ s_{a_id}^{c^d} : 1 <= i <= ℓ}`.
pub fn gen_poly_vdw(
    table: &GroundTable,
    b: &Monomial,
    c: u64,
    sets: &[Vec<u64>],
) -> Result<Configuration> {
    if c == 0 {
        return Err(Error::InvalidParameter("pvw: c must be >= 1".into()));
    }
    let mut out = BTreeSet::new();
    for set in sets {
        require_positive("pvw", set.iter().copied())?;
        let mut m = b.clone();
        let mut exp = 1u64;
        for &a in set {
            exp = exp.checked_mul(c).ok_or(Error::OutOfRange {
                value: u128::MAX,
                limit: table.limit(),
            })?;
            m = m.with(a, exp);
        }
        out.insert(eval_monomial(table, &m)?);
    }
    Ok(out)
}

/// The common color of `config`, or `None` if it is mixed or empty.
pub fn check_monochromatic(config: &Configuration, coloring: &Coloring) -> Result<Option<u32>> {
    let mut color = None;
    let mut mixed = false;
    for &v in config {
        let c = coloring.color_of(v)?;
        match color {
            None => color = Some(c),
            Some(prev) if prev != c => mixed = true,
            _ => {}
        }
    }
    Ok(if mixed { None } else { color })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> GroundTable {
        GroundTable::build(1_000_000).unwrap()
    }

    fn set(v: &[u64]) -> Configuration {
        v.iter().copied().collect()
    }

    #[test]
    fn fpf_examples() {
        let t = table();
        assert_eq!(gen_fpf(&t, &[2, 5]).unwrap(), set(&[2, 5, 9]));
        assert_eq!(gen_fpf(&t, &[1]).unwrap(), set(&[1]));
        assert_eq!(gen_fpf(&t, &[2, 5, 8]).unwrap().len(), 7);
        assert!(gen_fpf(&t, &[0, 2]).is_err());
    }

    #[test]
    fn brauer_examples() {
        let t = table();
        assert_eq!(gen_brauer(&t, 2, 2, 2).unwrap(), set(&[2, 3, 5]));
        assert_eq!(gen_brauer(&t, 1, 17, 5).unwrap(), set(&[1, 17]));
        let c = gen_brauer(&t, 3, 7, 1).unwrap();
        assert!(c.contains(&crate::semigroup::star(&t, 3, 7).unwrap()));
    }

    #[test]
    fn deuber_examples() {
        let t = table();
        assert_eq!(gen_deuber(&t, &[2, 2], 1).unwrap(), set(&[2, 3]));
        assert_eq!(gen_deuber(&t, &[4, 6, 9], 0).unwrap(), set(&[4, 6, 9]));
        assert_eq!(gen_deuber(&t, &[1, 11], 1).unwrap(), set(&[1, 11]));
        let c = gen_deuber(&t, &[2, 3, 4], 2).unwrap();
        for x in [2, 3, 4] {
            assert!(c.contains(&x));
        }
    }

    #[test]
    fn milliken_taylor_examples() {
        let t = table();
        let xs = [2, 5];
        assert_eq!(
            gen_milliken_taylor(&t, &xs, &[vec![1], vec![2]], &PhiExpr::Sum).unwrap(),
            7
        );
        let proj = PhiExpr::Projection { index: 1 };
        assert_eq!(
            gen_milliken_taylor(&t, &xs, &[vec![1, 2]], &proj).unwrap(),
            9
        );
        assert_eq!(
            gen_milliken_taylor(&t, &xs, &[vec![1], vec![2]], &PhiExpr::StarFold).unwrap(),
            9
        );
        assert!(matches!(
            gen_milliken_taylor(&t, &xs, &[vec![2], vec![1]], &PhiExpr::Sum),
            Err(Error::OrderViolation(1, 2))
        ));
        assert!(matches!(
            gen_milliken_taylor(&t, &[2, 5, 8], &[vec![1, 3], vec![2]], &PhiExpr::Sum),
            Err(Error::OrderViolation(1, 2))
        ));
        let lin = PhiExpr::Linear {
            coeffs: vec![2, 3],
            constant: 1,
        };
        assert_eq!(
            gen_milliken_taylor(&t, &xs, &[vec![1], vec![2]], &lin).unwrap(),
            2 * 2 + 3 * 5 + 1
        );
    }

    #[test]
    fn block_chain_counts() {
        // m = 1: all nonempty subsets.
        assert_eq!(block_chains(4, 1).len(), 15);
        // m = k: only the singleton chain.
        assert_eq!(block_chains(3, 3), vec![vec![vec![1], vec![2], vec![3]]]);
        // Brute force for k = 5, m = 2: ordered pairs of nonempty sets with max A < min B.
        let mut brute = 0;
        for a in 1u32..32 {
            for b in 1u32..32 {
                let max_a = 31 - a.leading_zeros();
                if b.trailing_zeros() > max_a {
                    brute += 1;
                }
            }
        }
        assert_eq!(block_chains(5, 2).len(), brute);
        assert!(block_chains(2, 3).is_empty());
    }

    #[test]
    fn geo_examples() {
        let t = table();
        let id = Monomial::identity();
        assert_eq!(
            gen_geo_arithmetic(&t, &id, &[2], 1, 1, 1).unwrap(),
            set(&[1, 2, 3])
        );
        let b = Monomial::from_factors([(3, 1), (4, 2)]);
        let only = eval_monomial(&t, &b).unwrap();
        assert_eq!(
            gen_geo_arithmetic(&t, &b, &[2], 2, 3, 0).unwrap(),
            set(&[only])
        );
        assert!(matches!(
            gen_geo_arithmetic(&t, &id, &[], 1, 1, 1),
            Err(Error::EmptyGamma)
        ));
    }

    #[test]
    fn poly_vdw_examples() {
        let t = table();
        let id = Monomial::identity();
        assert_eq!(gen_poly_vdw(&t, &id, 1, &[vec![2]]).unwrap(), set(&[2]));
        assert_eq!(gen_poly_vdw(&t, &id, 2, &[vec![2]]).unwrap(), set(&[3]));
        assert_eq!(
            gen_poly_vdw(&t, &id, 1, &[vec![2], vec![5]]).unwrap(),
            set(&[2, 5])
        );
        // d = 2, c = 2: s_2^2 * s_3^4 = 4 * 256 = 1024 = s_?
        let v = gen_poly_vdw(&t, &id, 2, &[vec![2, 3]]).unwrap();
        assert_eq!(v, set(&[t.rank(1024).unwrap()]));
    }

    #[test]
    fn monochromatic_check() {
        let constant = Coloring::constant(100).unwrap();
        assert_eq!(
            check_monochromatic(&set(&[2, 3, 5]), &constant).unwrap(),
            Some(1)
        );
        let alt = Coloring::periodic_mod(2, 2, 100).unwrap();
        assert_eq!(check_monochromatic(&set(&[2, 3]), &alt).unwrap(), None);
        assert_eq!(check_monochromatic(&set(&[]), &alt).unwrap(), None);
        assert!(check_monochromatic(&set(&[100]), &alt).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(PatternSpec::Brauer { k: 0 }.validate().is_err());
        assert!(PatternSpec::Deuber { m: 1, p: 0 }.validate().is_err());
        assert!(PatternSpec::Mt {
            m: 2,
            k: 1,
            phi: PhiExpr::Sum
        }
        .validate()
        .is_err());
        assert!(PatternSpec::Mt {
            m: 2,
            k: 3,
            phi: PhiExpr::Projection { index: 3 }
        }
        .validate()
        .is_err());
        assert!(PatternSpec::Pvw {
            d: 2,
            sets: vec![vec![2, 2]]
        }
        .validate()
        .is_err());
        assert!(PatternSpec::Pvw {
            d: 2,
            sets: vec![vec![2, 3]]
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn phi_parsing() {
        for s in ["sum", "product", "star", "proj:2", "linear:1,2+3"] {
            let phi: PhiExpr = s.parse().unwrap();
            assert_eq!(phi.to_string(), s);
        }
        assert!("nope".parse::<PhiExpr>().is_err());
    }
}
