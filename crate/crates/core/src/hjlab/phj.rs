//! The polynomial Hales–Jewett grid `X(q, N, d) = ∏_{j=1}^d [q]^{N^j}`.
//!
//! Component `j` of a point is a function `[N]^j → [q]`, stored flat in
//! row-major order of the tuple. Letters are `1..=q` and double as rank
//! indices under the projection [`m_project`].

use serde::{Deserialize, Serialize};

use crate::colorings::{enumerate_all_capped, Coloring};
use crate::error::{Error, Result};
use crate::ground::GroundTable;
use crate::semigroup::{eval_monomial, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PointDoc")]
pub struct PhjPoint {
    q: u32,
    n: u64,
    d: u32,
    components: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct PointDoc {
    q: u32,
    n: u64,
    d: u32,
    components: Vec<Vec<u32>>,
}

impl TryFrom<PointDoc> for PhjPoint {
    type Error = Error;

    fn try_from(doc: PointDoc) -> Result<Self> {
        PhjPoint::new(doc.q, doc.n, doc.d, doc.components)
    }
}

/// `n^j` for every `j` in `1..=d`, failing on overflow or absurd sizes.
fn component_sizes(n: u64, d: u32) -> Result<Vec<usize>> {
    (1..=d)
        .map(|j| {
            n.checked_pow(j)
                .and_then(|s| usize::try_from(s).ok())
                .filter(|&s| s <= 1 << 24)
                .ok_or_else(|| Error::InvalidParameter(format!("grid {n}^{j} too large")))
        })
        .collect()
}

fn check_grid(q: u32, n: u64, d: u32) -> Result<()> {
    if q == 0 || n == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "q, N and d must all be at least 1".into(),
        ));
    }
    Ok(())
}

impl PhjPoint {
    pub fn new(q: u32, n: u64, d: u32, components: Vec<Vec<u32>>) -> Result<Self> {
        check_grid(q, n, d)?;
        let sizes = component_sizes(n, d)?;
        if components.len() != d as usize {
            return Err(Error::Schema(format!(
                "expected {d} components, got {}",
                components.len()
            )));
        }
        for (j, (comp, &size)) in components.iter().zip(&sizes).enumerate() {
            if comp.len() != size {
                return Err(Error::Schema(format!(
                    "component {} has {} entries, expected {size}",
                    j + 1,
                    comp.len()
                )));
            }
            if let Some(&letter) = comp.iter().find(|&&l| l == 0 || l > q) {
                return Err(Error::LetterOutOfAlphabet { letter, q });
            }
        }
        Ok(PhjPoint {
            q,
            n,
            d,
            components,
        })
    }

    /// Every coordinate set to `letter`.
    pub fn constant(q: u32, n: u64, d: u32, letter: u32) -> Result<Self> {
        check_grid(q, n, d)?;
        let comps = component_sizes(n, d)?
            .into_iter()
            .map(|s| vec![letter; s])
            .collect();
        PhjPoint::new(q, n, d, comps)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn components(&self) -> &[Vec<u32>] {
        &self.components
    }

    /// `b_j(tuple)` with 1-based tuple entries.
    pub fn get(&self, tuple: &[u64]) -> Option<u32> {
        let j = tuple.len();
        if j == 0 || j > self.d as usize || tuple.iter().any(|&i| i == 0 || i > self.n) {
            return None;
        }
        let idx = tuple.iter().fold(0u64, |acc, &i| acc * self.n + (i - 1));
        Some(self.components[j - 1][idx as usize])
    }

    /// All letters in component order, row-major within each.
    pub fn letters(&self) -> impl Iterator<Item = u32> + '_ {
        self.components.iter().flatten().copied()
    }

    pub fn coordinate_count(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }
}

/// Flat-index predicate "the tuple at row-major index `idx` of `[n]^j` lies in `γ^j`".
fn in_gamma_power(idx: usize, j: u32, n: u64, in_gamma: &[bool]) -> bool {
    let mut rest = idx as u64;
    for _ in 0..j {
        let coord = rest % n;
        if !in_gamma[coord as usize] {
            return false;
        }
        rest /= n;
    }
    true
}

fn gamma_mask(gamma: &[u64], n: u64) -> Result<Vec<bool>> {
    if gamma.is_empty() {
        return Err(Error::EmptyGamma);
    }
    let mut mask = vec![false; n as usize];
    for &g in gamma {
        if g == 0 || g > n {
            return Err(Error::InvalidParameter(format!(
                "gamma element {g} outside 1..={n}"
            )));
        }
        mask[(g - 1) as usize] = true;
    }
    Ok(mask)
}

/// `a ⊕ x_1γ ⊕ ⋯ ⊕ x_dγ^d`: coordinates of component `j` indexed by `γ^j`
/// become `x_j`, all others keep `a`'s value.
pub fn phj_substitute(a: &PhjPoint, gamma: &[u64], xs: &[u32]) -> Result<PhjPoint> {
    let in_gamma = gamma_mask(gamma, a.n)?;
    if xs.len() != a.d as usize {
        return Err(Error::InvalidParameter(format!(
            "expected {} letters, got {}",
            a.d,
            xs.len()
        )));
    }
    if let Some(&letter) = xs.iter().find(|&&x| x == 0 || x > a.q) {
        return Err(Error::LetterOutOfAlphabet { letter, q: a.q });
    }
    let mut out = a.clone();
    for (j, comp) in out.components.iter_mut().enumerate() {
        for (idx, slot) in comp.iter_mut().enumerate() {
            if in_gamma_power(idx, j as u32 + 1, a.n, &in_gamma) {
                *slot = xs[j];
            }
        }
    }
    Ok(out)
}

/// The `*_f`-fold of every letter of the point.
pub fn m_project(p: &PhjPoint, table: &GroundTable) -> Result<u64> {
    let mut counts = vec![0u64; p.q as usize + 1];
    for l in p.letters() {
        counts[l as usize] += 1;
    }
    let m = Monomial::from_factors(
        counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(l, &c)| (l as u64, c)),
    );
    eval_monomial(table, &m)
}

/// Letters of `a` outside `∪_j γ^j`, as a monomial.
pub fn b_part(a: &PhjPoint, gamma: &[u64]) -> Result<Monomial> {
    let in_gamma = gamma_mask(gamma, a.n)?;
    let mut factors = Vec::new();
    for (j, comp) in a.components.iter().enumerate() {
        for (idx, &l) in comp.iter().enumerate() {
            if !in_gamma_power(idx, j as u32 + 1, a.n, &in_gamma) {
                factors.push((l as u64, 1));
            }
        }
    }
    Ok(Monomial::from_factors(factors))
}

/// `eval(b ⊎ [(x_j, c^j)])` with `c = |γ|`; equals the projection of the
/// substituted point.
pub fn decomposed_projection(
    a: &PhjPoint,
    gamma: &[u64],
    xs: &[u32],
    table: &GroundTable,
) -> Result<u64> {
    let mut m = b_part(a, gamma)?;
    let c = gamma.len() as u64;
    for (j, &x) in xs.iter().enumerate() {
        let e = c.checked_pow(j as u32 + 1).ok_or(Error::OutOfRange {
            value: u128::MAX,
            limit: table.limit(),
        })?;
        m = m.with(x as u64, e);
    }
    eval_monomial(table, &m)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhjInstance {
    /// γ-coordinates are set to 1.
    pub a: PhjPoint,
    pub gamma: Vec<u64>,
    pub color: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PhjOutcome {
    Found {
        instance: PhjInstance,
        candidates: u64,
    },
    Exhausted {
        candidates: u64,
    },
}

impl PhjOutcome {
    pub fn instance(&self) -> Option<&PhjInstance> {
        match self {
            PhjOutcome::Found { instance, .. } => Some(instance),
            PhjOutcome::Exhausted { .. } => None,
        }
    }
}

/// `q^(N + N² + ⋯ + N^d)`, the number of grid points, if it is at most `cap`.
pub fn point_count(q: u32, n: u64, d: u32, cap: u64) -> Result<u64> {
    check_grid(q, n, d)?;
    let coords: u64 = component_sizes(n, d)?.iter().map(|&s| s as u64).sum();
    u32::try_from(coords)
        .ok()
        .and_then(|e| (q as u64).checked_pow(e))
        .filter(|&t| t <= cap)
        .ok_or(Error::CapExceeded {
            r: q,
            bound: coords,
            cap,
        })
}

/// Search for `(a, γ)` whose `q^d` substitutions share a color.
///
/// `γ` runs over nonempty subsets of `[N]` by bitmask; for each, `a` runs
/// over points with γ-coordinates fixed at 1, lexicographically in the
/// flat coordinate order. Refuses grids with more than `cap` points.
pub fn phj_search(
    q: u32,
    d: u32,
    n: u64,
    cap: u64,
    coloring: impl Fn(&PhjPoint) -> Option<u32>,
) -> Result<PhjOutcome> {
    point_count(q, n, d, cap)?;
    if n > 63 {
        return Err(Error::InvalidParameter("window too large".into()));
    }
    let base = PhjPoint::constant(q, n, d, 1)?;
    let mut candidates = 0u64;
    let xs_all = letter_tuples(q, d as usize);
    for mask in 1u64..(1 << n) {
        let gamma: Vec<u64> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| i + 1)
            .collect();
        let in_gamma = gamma_mask(&gamma, n)?;
        // Flat (component, index) pairs left free by γ.
        let free: Vec<(usize, usize)> = base
            .components
            .iter()
            .enumerate()
            .flat_map(|(j, comp)| (0..comp.len()).map(move |i| (j, i)))
            .filter(|&(j, i)| !in_gamma_power(i, j as u32 + 1, n, &in_gamma))
            .collect();
        let mut a = base.clone();
        loop {
            candidates += 1;
            let mut color = None;
            let mono = xs_all.iter().all(|xs| {
                let p = phj_substitute(&a, &gamma, xs).expect("validated");
                match (coloring(&p), color) {
                    (Some(c), None) => {
                        color = Some(c);
                        true
                    }
                    (Some(c), Some(prev)) => c == prev,
                    (None, _) => false,
                }
            });
            if mono {
                return Ok(PhjOutcome::Found {
                    instance: PhjInstance {
                        a,
                        gamma,
                        color: color.expect("q^d >= 1"),
                    },
                    candidates,
                });
            }
            // Odometer over the free coordinates, last one fastest.
            let Some(pos) = free.iter().rposition(|&(j, i)| a.components[j][i] < q) else {
                break;
            };
            let (j, i) = free[pos];
            a.components[j][i] += 1;
            for &(j, i) in &free[pos + 1..] {
                a.components[j][i] = 1;
            }
        }
    }
    Ok(PhjOutcome::Exhausted { candidates })
}

fn letter_tuples(q: u32, d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=q).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Recheck an instance by substituting every `xs ∈ [q]^d`.
pub fn verify_phj(inst: &PhjInstance, coloring: impl Fn(&PhjPoint) -> Option<u32>) -> Result<bool> {
    let a = &inst.a;
    for xs in letter_tuples(a.q, a.d as usize) {
        if coloring(&phj_substitute(a, &inst.gamma, &xs)?) != Some(inst.color) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mixed-radix index of a point among all `q^(coordinates)` points, first
/// coordinate most significant.
pub fn point_index(p: &PhjPoint) -> u64 {
    p.letters()
        .fold(0u64, |acc, l| acc * p.q as u64 + (l - 1) as u64)
}

/// Color points by the numeric color of their projection `m`.
pub fn projected_point_coloring<'a>(
    coloring: &'a Coloring,
    table: &'a GroundTable,
) -> impl Fn(&PhjPoint) -> Option<u32> + 'a {
    move |p| m_project(p, table).ok().and_then(|v| coloring.get(v))
}

/// `None` if every r-coloring of `X(q, n, d)` has an instance, otherwise
/// the first one (indexed by [`point_index`]) that has none.
pub fn every_point_coloring_has_instance(
    q: u32,
    r: u32,
    d: u32,
    n: u64,
    cap: u64,
) -> Result<Option<Coloring>> {
    let points = point_count(q, n, d, cap)?;
    for c in enumerate_all_capped(r, points, cap)? {
        let out = phj_search(q, d, n, cap, |p| c.get(point_index(p)))?;
        if out.instance().is_none() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Least `N <= max_n` such that every r-coloring of `X(q, N, d)` has an instance.
pub fn phj_threshold(q: u32, r: u32, d: u32, max_n: u64, cap: u64) -> Result<Option<u64>> {
    for n in 1..=max_n {
        if every_point_coloring_has_instance(q, r, d, n, cap)?.is_none() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(q: u32, n: u64, d: u32, comps: &[&[u32]]) -> PhjPoint {
        PhjPoint::new(q, n, d, comps.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn substitution_examples() {
        let a = point(2, 2, 2, &[&[1, 2], &[2, 1, 1, 2]]);
        let full = phj_substitute(&a, &[1, 2], &[2, 1]).unwrap();
        assert_eq!(full.components(), &[vec![2, 2], vec![1, 1, 1, 1]]);

        let once = phj_substitute(&a, &[2], &[1, 1]).unwrap();
        let twice =
            phj_substitute(&phj_substitute(&a, &[2], &[2, 2]).unwrap(), &[2], &[1, 1]).unwrap();
        assert_eq!(once, twice);
        // γ = {2}: component 1 index 1, component 2 tuple (2,2) only.
        assert_eq!(once.components(), &[vec![1, 1], vec![2, 1, 1, 1]]);
        assert!(matches!(
            phj_substitute(&a, &[], &[1, 1]),
            Err(Error::EmptyGamma)
        ));
        assert!(phj_substitute(&a, &[3], &[1, 1]).is_err());
        assert!(phj_substitute(&a, &[1], &[3, 1]).is_err());
    }

    #[test]
    fn tuple_lookup_row_major() {
        let a = point(3, 2, 2, &[&[1, 2], &[1, 2, 3, 1]]);
        assert_eq!(a.get(&[2]), Some(2));
        assert_eq!(a.get(&[1, 2]), Some(2));
        assert_eq!(a.get(&[2, 1]), Some(3));
        assert_eq!(a.get(&[3]), None);
    }

    #[test]
    fn projection_examples() {
        let t = GroundTable::build(100_000).unwrap();
        assert_eq!(m_project(&point(2, 1, 1, &[&[2]]), &t).unwrap(), 2);
        assert_eq!(
            m_project(&PhjPoint::constant(2, 3, 2, 1).unwrap(), &t).unwrap(),
            1
        );
        // Two 2-letters: s_2^2 = 4, rank 3.
        assert_eq!(m_project(&point(2, 2, 1, &[&[2, 2]]), &t).unwrap(), 3);
    }

    #[test]
    fn one_color_least_instance() {
        let out = phj_search(2, 2, 2, 1 << 20, |_| Some(1)).unwrap();
        let inst = out.instance().unwrap();
        assert_eq!(inst.gamma, vec![1]);
        assert_eq!(inst.a, PhjPoint::constant(2, 2, 2, 1).unwrap());
        assert!(verify_phj(inst, |_| Some(1)).unwrap());
    }

    #[test]
    fn cap_refuses_large_grids() {
        assert!(matches!(
            phj_search(2, 2, 3, 1 << 10, |_| Some(1)),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn document_round_trip() {
        let a = point(2, 2, 1, &[&[1, 2]]);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"q":2,"n":2,"d":1,"components":[[1,2]]}"#);
        assert_eq!(serde_json::from_str::<PhjPoint>(&text).unwrap(), a);
        assert!(
            serde_json::from_str::<PhjPoint>(r#"{"q":2,"n":2,"d":1,"components":[[1]]}"#).is_err()
        );
    }
}
