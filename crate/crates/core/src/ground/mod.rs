//! The ground set: sums of two squares (or another multiplicatively closed
//! subset of ℕ₀) enumerated in increasing order below a fixed limit.
//!
//! A [`GroundTable`] answers `element` (n ↦ s_n), `rank` (s ↦ number of
//! members below s) and `count_below` for arbitrary x, all by binary search
//! over the sorted member list. Nothing is answered past the limit; callers
//! get [`Error::OutOfRange`] and have to rebuild.

mod cache;
pub(crate) mod sieve;

use crate::error::{Error, Result};

pub use cache::{CACHE_MAGIC, CACHE_VERSION};

/// Identifier of the builtin sums-of-two-squares predicate.
pub const SIGMA_ID: &str = "sigma";

/// Default in-memory budget for a table build.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// A total membership rule on ℕ₀ whose member set is closed under
/// multiplication.
pub trait GroundPredicate: Sync {
    fn id(&self) -> &str;

    fn contains(&self, n: u64) -> bool;

    /// All members strictly below `limit`, ascending.
    fn members_below(&self, limit: u64) -> Vec<u64> {
        (0..limit).filter(|&n| self.contains(n)).collect()
    }
}

/// Σ = {a² + b² : a, b ∈ ℕ₀}.
#[derive(Debug, Clone, Copy, Default)]
pub struct SumsOfTwoSquares;

impl GroundPredicate for SumsOfTwoSquares {
    fn id(&self) -> &str {
        SIGMA_ID
    }

    fn contains(&self, n: u64) -> bool {
        is_member(n)
    }

    fn members_below(&self, limit: u64) -> Vec<u64> {
        sieve::sums_of_two_squares_below(limit)
    }
}

/// The perfect squares, a second multiplicatively closed ground set.
#[derive(Debug, Clone, Copy, Default)]
pub struct Squares;

impl GroundPredicate for Squares {
    fn id(&self) -> &str {
        "squares"
    }

    fn contains(&self, n: u64) -> bool {
        let r = sieve::isqrt(n);
        r * r == n
    }

    fn members_below(&self, limit: u64) -> Vec<u64> {
        (0..)
            .map(|r: u64| r * r)
            .take_while(|&sq| sq < limit)
            .collect()
    }
}

/// A predicate backed by an arbitrary closure.
pub struct FnPredicate<F> {
    id: String,
    rule: F,
}

impl<F: Fn(u64) -> bool + Sync> FnPredicate<F> {
    pub fn new(id: impl Into<String>, rule: F) -> Self {
        FnPredicate {
            id: id.into(),
            rule,
        }
    }
}

impl<F: Fn(u64) -> bool + Sync> GroundPredicate for FnPredicate<F> {
    fn id(&self) -> &str {
        &self.id
    }

    fn contains(&self, n: u64) -> bool {
        (self.rule)(n)
    }
}

/// Look up a builtin predicate by identifier.
pub fn builtin_predicate(id: &str) -> Option<&'static dyn GroundPredicate> {
    match id {
        SIGMA_ID => Some(&SumsOfTwoSquares),
        "squares" => Some(&Squares),
        _ => None,
    }
}

/// Whether `n` is a sum of two squares: every prime ≡ 3 (mod 4) divides `n`
/// to an even power. Zero is a member.
pub fn is_member(n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let mut m = n >> n.trailing_zeros();
    let mut p = 3u64;
    while p <= m / p {
        if m.is_multiple_of(p) {
            let mut e = 0u32;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            if p % 4 == 3 && e % 2 == 1 {
                return false;
            }
        }
        p += 2;
    }
    m % 4 != 3
}

/// Sample up to `samples` member pairs and check their products (when below
/// the table limit) are members again. Returns the first failing pair.
pub fn check_closure_sample(
    table: &GroundTable,
    predicate: &dyn GroundPredicate,
    samples: usize,
    seed: u64,
) -> Option<(u64, u64)> {
    use rand::{Rng, SeedableRng};
    let elems = table.elements();
    if elems.is_empty() {
        return None;
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut tested = 0;
    let mut attempts = 0;
    while tested < samples && attempts < samples * 50 {
        attempts += 1;
        let a = elems[rng.random_range(0..elems.len())];
        let b = elems[rng.random_range(0..elems.len())];
        let Some(p) = a.checked_mul(b) else { continue };
        if p >= table.limit() {
            continue;
        }
        tested += 1;
        if !predicate.contains(p) {
            return Some((a, b));
        }
    }
    None
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub memory_budget: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

/// Sorted enumeration of the ground set below `limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTable {
    limit: u64,
    elements: Vec<u64>,
    predicate_id: String,
    index: BucketIndex,
}

/// `starts[i]` is the number of elements below `i << shift`, so a rank
/// query only searches one short run of `elements`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BucketIndex {
    shift: u32,
    starts: Vec<u64>,
}

impl BucketIndex {
    fn new(limit: u64, elements: &[u64]) -> Self {
        // About one bucket per 16 elements keeps the index small.
        let target = (elements.len() as u64 / 16).max(1);
        let mut shift = 4;
        while (limit >> shift) + 1 > target {
            shift += 1;
        }
        let buckets = (limit >> shift) as usize + 2;
        let mut starts = Vec::with_capacity(buckets);
        let mut i = 0;
        for b in 0..buckets as u64 {
            let edge = b
                .checked_shl(shift)
                .filter(|e| e >> shift == b)
                .unwrap_or(u64::MAX);
            while i < elements.len() && elements[i] < edge {
                i += 1;
            }
            starts.push(i as u64);
        }
        BucketIndex { shift, starts }
    }
}

// Loose upper estimate of the table footprint, only used for the budget check.
fn estimated_bytes(limit: u64) -> u64 {
    let x = limit as f64;
    let count = if limit < 16 {
        x
    } else {
        1.5 * x / x.ln().sqrt()
    };
    (count as u64).saturating_add(1024).saturating_mul(8)
}

impl GroundTable {
    /// Build the Σ table with default options.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with(limit, &SumsOfTwoSquares, BuildOptions::default())
    }

    pub fn build_with(
        limit: u64,
        predicate: &dyn GroundPredicate,
        options: BuildOptions,
    ) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidParameter(format!(
                "table limit must be at least 2, got {limit}"
            )));
        }
        let needed = estimated_bytes(limit);
        if needed > options.memory_budget || usize::try_from(needed).is_err() {
            return Err(Error::ResourceExhausted {
                limit,
                needed,
                budget: options.memory_budget,
            });
        }
        let elements = predicate.members_below(limit);
        Ok(GroundTable {
            index: BucketIndex::new(limit, &elements),
            limit,
            elements,
            predicate_id: predicate.id().to_string(),
        })
    }

    /// Assemble a table from parts, checking the structural invariants.
    pub fn from_parts(limit: u64, predicate_id: String, elements: Vec<u64>) -> Result<Self> {
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Schema("elements must be strictly increasing".into()));
        }
        if elements.last().is_some_and(|&e| e >= limit) {
            return Err(Error::Schema("element at or above the limit".into()));
        }
        Ok(GroundTable {
            index: BucketIndex::new(limit, &elements),
            limit,
            elements,
            predicate_id,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn predicate_id(&self) -> &str {
        &self.predicate_id
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    /// Number of stored members.
    pub fn len(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// s_n.
    pub fn element(&self, n: u64) -> Result<u64> {
        usize::try_from(n)
            .ok()
            .and_then(|i| self.elements.get(i).copied())
            .ok_or(Error::IndexOutOfRange {
                index: n,
                size: self.len(),
            })
    }

    /// g(s): the number of members strictly below the member `s`.
    pub fn rank(&self, s: u64) -> Result<u64> {
        if s >= self.limit {
            return Err(Error::OutOfRange {
                value: s as u128,
                limit: self.limit,
            });
        }
        let i = self.count_below(s)?;
        match self.elements.get(i as usize) {
            Some(&e) if e == s => Ok(i),
            _ => Err(Error::NotMember(s)),
        }
    }

    /// Number of members strictly below `x`, for any `x <= limit`.
    pub fn count_below(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::OutOfRange {
                value: x as u128,
                limit: self.limit,
            });
        }
        let b = (x >> self.index.shift) as usize;
        let lo = self.index.starts[b] as usize;
        let hi = self.index.starts[b + 1] as usize;
        Ok((lo + self.elements[lo..hi].partition_point(|&e| e < x)) as u64)
    }
}
