//! Finite witness search over a fixed coloring.
//!
//! Candidates are generator tuples enumerated in lexicographic order, each
//! generator index starting at 2 (1 with `include_one`). A candidate's
//! configuration is produced value by value and abandoned at the first color
//! mismatch; values at or above `value_bound`, or products leaving the table,
//! make the candidate "skipped" rather than failed.
//!
//! [`verify_witness`] re-derives configurations through
//! [`patterns::generate`](crate::patterns::generate) and shares nothing with
//! the incremental evaluation below.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::colorings::{enumerate_all_capped, Coloring, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::ground::GroundTable;
use crate::patterns::{
    self, block_chains, check_monochromatic, Generators, PatternSpec, PhiExpr, Witness,
};
use crate::semigroup::{checked_pow, Monomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    /// Largest generator index tried.
    pub generator_max: u64,
    /// Every configuration value must be below this.
    pub value_bound: u64,
    /// Maximum number of candidate tuples examined.
    pub node_budget: u64,
    /// Let generators take the identity index 1.
    pub include_one: bool,
}

impl SearchBounds {
    pub fn new(generator_max: u64, value_bound: u64) -> Self {
        SearchBounds {
            generator_max,
            value_bound,
            node_budget: u64::MAX,
            include_one: false,
        }
    }

    pub fn with_budget(mut self, node_budget: u64) -> Self {
        self.node_budget = node_budget;
        self
    }

    fn lowest_index(&self) -> u64 {
        if self.include_one {
            1
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Serial; returns the lexicographically least witness.
    Det,
    /// Parallel over the first generator; returns any witness.
    Fast,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outcome {
    Witness {
        witness: Witness,
    },
    Exhausted {
        nodes: u64,
        skipped_out_of_range: u64,
    },
    BudgetHit {
        nodes: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: Outcome,
    pub mode: SearchMode,
    pub nodes: u64,
    pub skipped_out_of_range: u64,
    /// Candidates dropped because of a color mismatch.
    pub rejected: u64,
    pub elapsed: Duration,
}

impl SearchReport {
    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Witness { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Per-coordinate inclusive ranges of a family's generator tuple.
#[derive(Debug, Clone)]
struct Space {
    ranges: Vec<(u64, u64)>,
    /// Sequence families require strictly increasing tuples.
    increasing: bool,
}

fn space_for(spec: &PatternSpec, bounds: &SearchBounds) -> Space {
    let lo = bounds.lowest_index();
    let g = bounds.generator_max;
    let idx = |n: usize| vec![(lo, g); n];
    match spec {
        PatternSpec::Fpf { k } => Space {
            ranges: idx(*k),
            increasing: true,
        },
        PatternSpec::Brauer { .. } => Space {
            ranges: idx(2),
            increasing: false,
        },
        PatternSpec::Deuber { m, .. } => Space {
            ranges: idx(m + 1),
            increasing: false,
        },
        PatternSpec::Mt { k, .. } => Space {
            ranges: idx(*k),
            increasing: true,
        },
        // (b, t, a, d) with γ = {t}
        PatternSpec::Geo { .. } => Space {
            ranges: vec![(lo, g), (lo, g), (lo, g), (1, g)],
            increasing: false,
        },
        // (b, c)
        PatternSpec::Pvw { .. } => Space {
            ranges: vec![(lo, g), (1, g)],
            increasing: false,
        },
    }
}

/// Lexicographic walk over a [`Space`], optionally with the first coordinate pinned.
struct Tuples {
    space: Space,
    current: Option<Vec<u64>>,
    pinned: bool,
}

impl Tuples {
    fn new(space: Space, first: Option<u64>) -> Self {
        let mut tuple = Vec::with_capacity(space.ranges.len());
        let mut ok = true;
        for (i, &(lo, hi)) in space.ranges.iter().enumerate() {
            let mut v = if i == 0 { first.unwrap_or(lo) } else { lo };
            if space.increasing && i > 0 {
                v = v.max(tuple[i - 1] + 1);
            }
            if v < lo || v > hi {
                ok = false;
                break;
            }
            tuple.push(v);
        }
        let pinned = first.is_some();
        Tuples {
            current: ok.then_some(tuple),
            space,
            pinned,
        }
    }

    fn advance(&mut self) {
        let Some(t) = self.current.as_mut() else {
            return;
        };
        let floor = usize::from(self.pinned);
        let n = t.len();
        let mut pos = n;
        while pos > floor {
            pos -= 1;
            let hi = self.space.ranges[pos].1;
            if t[pos] >= hi {
                continue;
            }
            t[pos] += 1;
            // Reset the tail to its smallest admissible values.
            let mut ok = true;
            for i in pos + 1..n {
                let mut v = self.space.ranges[i].0;
                if self.space.increasing {
                    v = v.max(t[i - 1] + 1);
                }
                if v > self.space.ranges[i].1 {
                    ok = false;
                    break;
                }
                t[i] = v;
            }
            if ok {
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for Tuples {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        self.advance();
        Some(out)
    }
}

/// The generator tuples a search would examine, in canonical order.
pub fn candidate_generators(
    spec: &PatternSpec,
    bounds: &SearchBounds,
) -> impl Iterator<Item = Generators> {
    let spec = spec.clone();
    Tuples::new(space_for(&spec, bounds), None).map(move |t| generators_from_tuple(&spec, &t, None))
}

fn generators_from_tuple(spec: &PatternSpec, t: &[u64], y: Option<u64>) -> Generators {
    match spec {
        PatternSpec::Fpf { .. } => Generators::Fpf { xs: t.to_vec() },
        PatternSpec::Brauer { .. } => Generators::Brauer {
            x: t[0],
            z: t[1],
            y,
        },
        PatternSpec::Deuber { .. } => Generators::Deuber { xs: t.to_vec() },
        PatternSpec::Mt { .. } => Generators::Mt { xs: t.to_vec() },
        PatternSpec::Geo { .. } => Generators::Geo {
            b: Monomial::single(t[0]),
            gamma: vec![t[1]],
            a: t[2],
            d: t[3],
        },
        PatternSpec::Pvw { .. } => Generators::Pvw {
            b: Monomial::single(t[0]),
            c: t[1],
        },
    }
}

enum Stop {
    Skip,
    Reject,
}

/// Collects configuration values, stopping at the first one that cannot be part of a witness.
struct Probe<'a> {
    coloring: &'a Coloring,
    value_bound: u64,
    color: Option<u32>,
    values: Vec<u64>,
}

impl Probe<'_> {
    #[inline]
    fn push(&mut self, v: u64) -> Result<(), Stop> {
        if v >= self.value_bound {
            return Err(Stop::Skip);
        }
        let c = self.coloring.get(v).ok_or(Stop::Skip)?;
        match self.color {
            Some(prev) if prev != c => return Err(Stop::Reject),
            None => self.color = Some(c),
            _ => {}
        }
        self.values.push(v);
        Ok(())
    }
}

struct Evaluator<'a> {
    table: &'a GroundTable,
    coloring: &'a Coloring,
    spec: &'a PatternSpec,
    value_bound: u64,
    /// Milliken–Taylor block chains as position bitmasks.
    chains: Vec<Vec<usize>>,
}

enum Check {
    Found(Vec<u64>, u32),
    Skipped,
    Rejected,
}

impl<'a> Evaluator<'a> {
    fn new(
        table: &'a GroundTable,
        coloring: &'a Coloring,
        spec: &'a PatternSpec,
        value_bound: u64,
    ) -> Self {
        let chains = match spec {
            PatternSpec::Mt { m, k, .. } => block_chains(*k, *m)
                .into_iter()
                .map(|chain| {
                    chain
                        .iter()
                        .map(|block| block.iter().fold(0usize, |acc, &p| acc | 1 << (p - 1)))
                        .collect()
                })
                .collect(),
            _ => Vec::new(),
        };
        Evaluator {
            table,
            coloring,
            spec,
            value_bound,
            chains,
        }
    }

    #[inline]
    fn s(&self, index: u64) -> Result<u128, Stop> {
        self.table
            .element(index)
            .map(u128::from)
            .map_err(|_| Stop::Skip)
    }

    #[inline]
    fn rank(&self, product: Option<u128>) -> Result<u64, Stop> {
        match product {
            Some(p) if p < self.table.limit() as u128 => {
                Ok(self.table.count_below(p as u64).expect("below limit"))
            }
            _ => Err(Stop::Skip),
        }
    }

    fn check(&self, t: &[u64]) -> Check {
        let mut probe = Probe {
            coloring: self.coloring,
            value_bound: self.value_bound,
            color: None,
            values: Vec::new(),
        };
        match self.fill(t, &mut probe) {
            Ok(()) => match probe.color {
                Some(c) => {
                    let mut values = probe.values;
                    values.sort_unstable();
                    values.dedup();
                    Check::Found(values, c)
                }
                None => Check::Skipped,
            },
            Err(Stop::Skip) => Check::Skipped,
            Err(Stop::Reject) => Check::Rejected,
        }
    }

    fn fill(&self, t: &[u64], probe: &mut Probe) -> Result<(), Stop> {
        match self.spec {
            PatternSpec::Brauer { k } => {
                let (sx, sz) = (self.s(t[0])?, self.s(t[1])?);
                probe.push(t[0])?;
                probe.push(t[1])?;
                let mut p = Some(sz);
                for _ in 0..*k {
                    p = p.and_then(|v| v.checked_mul(sx));
                    probe.push(self.rank(p)?)?;
                }
                Ok(())
            }
            PatternSpec::Fpf { .. } => {
                for (mask, p) in self.subset_products(t)?.into_iter().enumerate().skip(1) {
                    probe.push(self.rank(p)?)?;
                    let _ = mask;
                }
                Ok(())
            }
            PatternSpec::Deuber { m, p } => {
                probe.push(t[0])?;
                let s: Vec<u128> = t.iter().map(|&x| self.s(x)).collect::<Result<_, _>>()?;
                // pows[i][n] = s_{x_i}^n
                let pows: Vec<Vec<Option<u128>>> = s
                    .iter()
                    .map(|&si| {
                        let mut row = Vec::with_capacity(*p as usize + 1);
                        let mut acc = Some(1u128);
                        for _ in 0..=*p {
                            row.push(acc);
                            acc = acc.and_then(|a| a.checked_mul(si));
                        }
                        row
                    })
                    .collect();
                for (j, &sj) in s.iter().enumerate().take(*m + 1).skip(1) {
                    let mut ns = vec![0usize; j];
                    loop {
                        let prod = ns.iter().enumerate().try_fold(sj, |acc, (i, &n)| {
                            pows[i][n].and_then(|pw| acc.checked_mul(pw))
                        });
                        probe.push(self.rank(prod)?)?;
                        let Some(pos) = ns.iter().rposition(|&n| (n as u64) < *p) else {
                            break;
                        };
                        ns[pos] += 1;
                        ns[pos + 1..].iter_mut().for_each(|n| *n = 0);
                    }
                }
                Ok(())
            }
            PatternSpec::Mt { phi, .. } => {
                let ranks: Vec<Option<u64>> = self
                    .subset_products(t)?
                    .into_iter()
                    .map(|p| self.rank(p).ok())
                    .collect();
                let mut args = Vec::new();
                for chain in &self.chains {
                    args.clear();
                    for &mask in chain {
                        args.push(ranks[mask].ok_or(Stop::Skip)?);
                    }
                    let v = match phi {
                        PhiExpr::StarFold => {
                            let prod = args.iter().try_fold(1u128, |acc, &v| {
                                acc.checked_mul(self.table.element(v).ok()? as u128)
                            });
                            self.rank(prod)?
                        }
                        other => other.eval(&args, self.table).map_err(|_| Stop::Skip)?,
                    };
                    probe.push(v)?;
                }
                Ok(())
            }
            PatternSpec::Geo { k } => {
                let (b, tt, a, d) = (t[0], t[1], t[2], t[3]);
                let (sb, st) = (self.s(b)?, self.s(tt)?);
                probe.push(b)?;
                for j in 1..=*k {
                    for i in 0..=*k {
                        let idx = i
                            .checked_mul(d)
                            .and_then(|v| v.checked_add(a))
                            .ok_or(Stop::Skip)?;
                        let base = st.checked_mul(self.s(idx)?);
                        let prod = base
                            .and_then(|v| u64::try_from(v).ok())
                            .and_then(|v| checked_pow(v, j))
                            .and_then(|v| v.checked_mul(sb));
                        probe.push(self.rank(prod)?)?;
                    }
                }
                Ok(())
            }
            PatternSpec::Pvw { sets, .. } => {
                let (sb, c) = (self.s(t[0])?, t[1]);
                for set in sets {
                    let mut prod = Some(sb);
                    let mut exp = Some(1u64);
                    for &a in set {
                        exp = exp.and_then(|e| e.checked_mul(c));
                        let sa = self.s(a)? as u64;
                        prod = prod
                            .zip(exp.and_then(|e| checked_pow(sa, e)))
                            .and_then(|(acc, pw)| acc.checked_mul(pw));
                    }
                    probe.push(self.rank(prod)?)?;
                }
                Ok(())
            }
        }
    }

    /// Integer products over all subsets of the tuple, indexed by bitmask.
    fn subset_products(&self, t: &[u64]) -> Result<Vec<Option<u128>>, Stop> {
        let s: Vec<u128> = t.iter().map(|&x| self.s(x)).collect::<Result<_, _>>()?;
        let count = 1usize << t.len();
        let limit = self.table.limit() as u128;
        let mut out = vec![Some(1u128); count];
        for mask in 1..count {
            let low = mask.trailing_zeros() as usize;
            out[mask] = out[mask & (mask - 1)]
                .and_then(|rest| rest.checked_mul(s[low]))
                .filter(|&v| v < limit);
        }
        Ok(out)
    }

    fn witness(&self, t: &[u64], values: Vec<u64>, color: u32) -> Witness {
        let y = match self.spec {
            PatternSpec::Brauer { .. } => self.brauer_cofactor(t[0], t[1]),
            _ => None,
        };
        Witness {
            spec: self.spec.clone(),
            generators: generators_from_tuple(self.spec, t, y),
            configuration: values,
            color,
            coloring_provenance: self.coloring.provenance().to_string(),
            table_limit: self.table.limit(),
        }
    }

    /// Some `y` with `x *_f y = z`, if `s_x` divides `s_z` within Σ.
    fn brauer_cofactor(&self, x: u64, z: u64) -> Option<u64> {
        let sx = self.table.element(x).ok()?;
        let sz = self.table.element(z).ok()?;
        if sx == 0 || sz % sx != 0 {
            return None;
        }
        self.table.rank(sz / sx).ok()
    }
}

fn validate(spec: &PatternSpec, coloring: &Coloring, bounds: &SearchBounds) -> Result<()> {
    spec.validate()?;
    if bounds.generator_max < 2 {
        return Err(Error::InvalidParameter(
            "generator_max must be at least 2".into(),
        ));
    }
    if bounds.value_bound > coloring.bound() {
        return Err(Error::InvalidParameter(format!(
            "value bound {} exceeds coloring bound {}",
            bounds.value_bound,
            coloring.bound()
        )));
    }
    Ok(())
}

/// Search `coloring` for a monochromatic instance of `spec` within `bounds`.
pub fn find_witness(
    table: &GroundTable,
    coloring: &Coloring,
    spec: &PatternSpec,
    bounds: &SearchBounds,
    mode: SearchMode,
) -> Result<SearchReport> {
    validate(spec, coloring, bounds)?;
    let start = Instant::now();
    let eval = Evaluator::new(table, coloring, spec, bounds.value_bound);
    let space = space_for(spec, bounds);
    let mut report = match mode {
        SearchMode::Det => search_serial(&eval, space, bounds.node_budget),
        SearchMode::Fast => search_parallel(&eval, space, bounds.node_budget),
    };
    report.elapsed = start.elapsed();
    Ok(report)
}

fn search_serial(eval: &Evaluator, space: Space, budget: u64) -> SearchReport {
    let mut nodes = 0;
    let mut skipped = 0;
    let mut rejected = 0;
    let finish = |outcome, nodes, skipped, rejected| SearchReport {
        outcome,
        mode: SearchMode::Det,
        nodes,
        skipped_out_of_range: skipped,
        rejected,
        elapsed: Duration::ZERO,
    };
    for t in Tuples::new(space, None) {
        if nodes >= budget {
            return finish(Outcome::BudgetHit { nodes }, nodes, skipped, rejected);
        }
        nodes += 1;
        match eval.check(&t) {
            Check::Found(values, color) => {
                let witness = eval.witness(&t, values, color);
                return finish(Outcome::Witness { witness }, nodes, skipped, rejected);
            }
            Check::Skipped => skipped += 1,
            Check::Rejected => rejected += 1,
        }
    }
    finish(
        Outcome::Exhausted {
            nodes,
            skipped_out_of_range: skipped,
        },
        nodes,
        skipped,
        rejected,
    )
}

fn search_parallel(eval: &Evaluator, space: Space, budget: u64) -> SearchReport {
    let nodes = AtomicU64::new(0);
    let skipped = AtomicU64::new(0);
    let rejected = AtomicU64::new(0);
    let out_of_budget = AtomicBool::new(false);
    let (lo, hi) = space.ranges[0];
    let found = (lo..=hi).into_par_iter().find_map_any(|first| {
        for t in Tuples::new(space.clone(), Some(first)) {
            if out_of_budget.load(Ordering::Relaxed) {
                return None;
            }
            if nodes.fetch_add(1, Ordering::Relaxed) >= budget {
                out_of_budget.store(true, Ordering::Relaxed);
                return None;
            }
            match eval.check(&t) {
                Check::Found(values, color) => return Some(eval.witness(&t, values, color)),
                Check::Skipped => skipped.fetch_add(1, Ordering::Relaxed),
                Check::Rejected => rejected.fetch_add(1, Ordering::Relaxed),
            };
        }
        None
    });
    let nodes = nodes.into_inner().min(budget);
    let skipped = skipped.into_inner();
    let outcome = match found {
        Some(witness) => Outcome::Witness { witness },
        None if out_of_budget.into_inner() => Outcome::BudgetHit { nodes },
        None => Outcome::Exhausted {
            nodes,
            skipped_out_of_range: skipped,
        },
    };
    SearchReport {
        outcome,
        mode: SearchMode::Fast,
        nodes,
        skipped_out_of_range: skipped,
        rejected: rejected.into_inner(),
        elapsed: Duration::ZERO,
    }
}

/// Re-derive a witness from its generators and check it against `coloring`.
///
/// `Ok(false)` means the document is well-formed but wrong (tampered
/// configuration, mixed colors, wrong color). Structural problems are
/// [`Error::MalformedWitness`]; a table too small to regenerate it is an
/// out-of-range error.
pub fn verify_witness(w: &Witness, coloring: &Coloring, table: &GroundTable) -> Result<bool> {
    if w.configuration.is_empty() {
        return Err(Error::MalformedWitness("empty configuration".into()));
    }
    if w.configuration.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::MalformedWitness(
            "configuration is not sorted and distinct".into(),
        ));
    }
    if let Some(&v) = w.configuration.iter().find(|&&v| v >= coloring.bound()) {
        return Err(Error::MalformedWitness(format!(
            "value {v} outside coloring bound {}",
            coloring.bound()
        )));
    }
    let regenerated = patterns::generate(&w.spec, &w.generators, table)?;
    if !regenerated.iter().eq(w.configuration.iter()) {
        return Ok(false);
    }
    Ok(check_monochromatic(&regenerated, coloring)? == Some(w.color))
}

#[derive(Debug, Clone, Copy)]
pub struct ThresholdOptions {
    pub cap: u64,
    pub include_one: bool,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions {
            cap: ENUMERATION_CAP,
            include_one: false,
        }
    }
}

/// Least `N` in `start_bound..=max_bound` such that every r-coloring of
/// `{1, …, N}` has a witness with all generators and values `<= N`.
pub fn threshold(
    spec: &PatternSpec,
    r: u32,
    start_bound: u64,
    max_bound: u64,
    table: &GroundTable,
    options: ThresholdOptions,
) -> Result<Option<u64>> {
    spec.validate()?;
    for n in start_bound.max(2)..=max_bound {
        if every_coloring_has_witness(spec, r, n, table, options)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Whether every r-coloring of `{1, …, n}` contains a witness.
pub fn every_coloring_has_witness(
    spec: &PatternSpec,
    r: u32,
    n: u64,
    table: &GroundTable,
    options: ThresholdOptions,
) -> Result<bool> {
    let bounds = SearchBounds {
        generator_max: n,
        value_bound: n + 1,
        node_budget: u64::MAX,
        include_one: options.include_one,
    };
    for c in enumerate_all_capped(r, n, options.cap)? {
        // Position 0 is never probed; give it color 1.
        let mut colors = Vec::with_capacity(n as usize + 1);
        colors.push(1);
        colors.extend_from_slice(c.colors());
        let coloring = Coloring::from_assignment(r, colors, c.provenance())?;
        let report = find_witness(table, &coloring, spec, &bounds, SearchMode::Det)?;
        if report.witness().is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
