//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use twosq::ground::GroundTable;
use twosq::patterns::{Generators, PatternSpec, PhiExpr};
use twosq::semigroup::{power, star};

/// `n == a² + b²` for some a, b, by direct search.
pub fn brute_is_sum_of_two_squares(n: u64) -> bool {
    let mut a = 0u64;
    while a * a <= n {
        let rest = n - a * a;
        let b = (rest as f64).sqrt() as u64;
        if (b.saturating_sub(1)..=b + 1).any(|b| b * b == rest) {
            return true;
        }
        a += 1;
    }
    false
}

/// All sums of two squares below `limit`, by marking `a² + b²`.
pub fn brute_members(limit: u64) -> Vec<u64> {
    let mut hit = vec![false; limit as usize];
    let mut a = 0u64;
    while a * a < limit {
        let mut b = a;
        while a * a + b * b < limit {
            hit[(a * a + b * b) as usize] = true;
            b += 1;
        }
        a += 1;
    }
    (0..limit).filter(|&n| hit[n as usize]).collect()
}

pub fn brute_table(limit: u64) -> GroundTable {
    GroundTable::from_parts(limit, "sigma".into(), brute_members(limit)).unwrap()
}

/// `m *_f n` straight from the definition over a brute-force member list.
pub fn brute_star(members: &[u64], m: usize, n: usize) -> Option<usize> {
    let p = members.get(m)?.checked_mul(*members.get(n)?)?;
    if p >= *members.last()? {
        return None;
    }
    Some(members.iter().take_while(|&&s| s < p).count())
}

fn fold_star(t: &GroundTable, xs: impl IntoIterator<Item = u64>) -> Option<u64> {
    xs.into_iter().try_fold(1u64, |acc, x| star(t, acc, x).ok())
}

fn fold_power_product(t: &GroundTable, factors: &[(u64, u64)]) -> Option<u64> {
    factors.iter().try_fold(1u64, |acc, &(x, e)| {
        let p = power(t, x, e).ok()?;
        star(t, acc, p).ok()
    })
}

/// The configuration of `spec` recomputed by chaining `star` and `power`
/// one step at a time. `None` if any step leaves the table.
pub fn fold_configuration(
    t: &GroundTable,
    spec: &PatternSpec,
    gens: &Generators,
) -> Option<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    match (spec, gens) {
        (PatternSpec::Fpf { .. }, Generators::Fpf { xs }) => {
            for mask in 1usize..1 << xs.len() {
                let chosen = xs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &x)| x);
                out.insert(fold_star(t, chosen)?);
            }
        }
        (PatternSpec::Brauer { k }, Generators::Brauer { x, z, .. }) => {
            out.insert(*x);
            out.insert(*z);
            for j in 1..=*k {
                out.insert(star(t, power(t, *x, j).ok()?, *z).ok()?);
            }
        }
        (PatternSpec::Deuber { p, .. }, Generators::Deuber { xs }) => {
            out.insert(xs[0]);
            for j in 1..xs.len() {
                let mut ns = vec![0u64; j];
                loop {
                    let factors: Vec<(u64, u64)> =
                        xs[..j].iter().copied().zip(ns.iter().copied()).collect();
                    let head = fold_power_product(t, &factors)?;
                    out.insert(star(t, head, xs[j]).ok()?);
                    let Some(pos) = ns.iter().rposition(|&n| n < *p) else {
                        break;
                    };
                    ns[pos] += 1;
                    ns[pos + 1..].iter_mut().for_each(|n| *n = 0);
                }
            }
        }
        (PatternSpec::Mt { m, phi, .. }, Generators::Mt { xs }) => {
            let k = xs.len();
            // Every assignment of positions to blocks 1..=m or none, keeping blocks in order.
            let mut labels = vec![0usize; k];
            loop {
                let blocks: Vec<Vec<usize>> = (1..=*m)
                    .map(|b| (0..k).filter(|&i| labels[i] == b).collect())
                    .collect();
                let ordered = blocks.iter().all(|b| !b.is_empty())
                    && blocks.windows(2).all(|w| w[0].last() < w[1].first());
                if ordered {
                    let vals: Vec<u64> = blocks
                        .iter()
                        .map(|b| fold_star(t, b.iter().map(|&i| xs[i])))
                        .collect::<Option<_>>()?;
                    let v = match phi {
                        PhiExpr::Projection { index } => vals[index - 1],
                        PhiExpr::Sum => vals.iter().sum(),
                        PhiExpr::Product => vals.iter().product(),
                        PhiExpr::Linear { coeffs, constant } => {
                            constant + vals.iter().zip(coeffs).map(|(v, c)| v * c).sum::<u64>()
                        }
                        PhiExpr::StarFold => fold_star(t, vals.iter().copied())?,
                    };
                    out.insert(v);
                }
                let Some(pos) = labels.iter().rposition(|&l| l < *m) else {
                    break;
                };
                labels[pos] += 1;
                labels[pos + 1..].iter_mut().for_each(|l| *l = 0);
            }
        }
        (PatternSpec::Geo { k }, Generators::Geo { b, gamma, a, d }) => {
            let head = fold_power_product(t, &b.factors)?;
            for j in 0..=*k {
                for i in 0..=*k {
                    let mut v = head;
                    for &g in gamma {
                        v = star(t, v, power(t, g, j).ok()?).ok()?;
                    }
                    v = star(t, v, power(t, a + i * d, j).ok()?).ok()?;
                    out.insert(v);
                }
            }
        }
        (PatternSpec::Pvw { sets, .. }, Generators::Pvw { b, c }) => {
            let head = fold_power_product(t, &b.factors)?;
            for set in sets {
                let mut v = head;
                for (i, &a) in set.iter().enumerate() {
                    v = star(t, v, power(t, a, c.checked_pow(i as u32 + 1)?).ok()?).ok()?;
                }
                out.insert(v);
            }
        }
        _ => return None,
    }
    Some(out)
}

/// Every set of located words `{α ∪ γ×{s} : s}` over `{1..n}`, as word
/// codes (digit per position: 0 absent, 1 + letter otherwise, position 1
/// least significant).
pub fn hj_lines(q: u32, n: u32) -> Vec<Vec<usize>> {
    let states = q as usize + 2; // absent, letters, variable
    let var = states - 1;
    let base = q as usize + 1;
    let mut lines = Vec::new();
    for code in 0..states.pow(n) {
        let digits: Vec<usize> = (0..n).map(|i| code / states.pow(i) % states).collect();
        if !digits.contains(&var) {
            continue;
        }
        let line = (0..q as usize)
            .map(|s| {
                digits
                    .iter()
                    .enumerate()
                    .map(|(i, &dg)| if dg == var { s + 1 } else { dg } * base.pow(i as u32))
                    .sum()
            })
            .collect();
        lines.push(line);
    }
    lines
}

/// Every combinatorial line of `[q]^n` (points coded base q, first coordinate most significant).
pub fn phj_lines_d1(q: u32, n: u32) -> Vec<Vec<usize>> {
    let q = q as usize;
    let states = q + 1; // letters 0..q-1, then variable
    let mut lines = Vec::new();
    for code in 0..states.pow(n) {
        let digits: Vec<usize> = (0..n)
            .rev()
            .map(|i| code / states.pow(i) % states)
            .collect();
        if !digits.contains(&q) {
            continue;
        }
        let line = (0..q)
            .map(|s| {
                digits
                    .iter()
                    .fold(0, |acc, &dg| acc * q + if dg == q { s } else { dg })
            })
            .collect();
        lines.push(line);
    }
    lines
}

/// Least `n` in `1..=max_n` such that every r-coloring of `points(n)` points leaves a line monochromatic.
pub fn brute_line_threshold(
    r: u32,
    max_n: u32,
    points: impl Fn(u32) -> usize,
    lines: impl Fn(u32) -> Vec<Vec<usize>>,
) -> Option<u32> {
    (1..=max_n).find(|&n| {
        let p = points(n);
        let ls = lines(n);
        let total = (r as u64).pow(p as u32);
        (0..total).all(|code| {
            let color = |i: usize| code / (r as u64).pow(i as u32) % r as u64;
            ls.iter()
                .any(|l| l.iter().all(|&i| color(i) == color(l[0])))
        })
    })
}

/// Least N such that every 2-coloring of {1..N} has x, z in 2..=N with
/// x, z and x *_f z all ≤ N and one color (brute-force membership).
pub fn brute_brauer1_threshold(max_n: usize) -> Option<usize> {
    let members = brute_members(10_000);
    (2..=max_n).find(|&n| {
        (0u32..1 << n).all(|bits| {
            let color = |i: usize| bits >> (i - 1) & 1;
            (2..=n).any(|x| {
                (2..=n).any(|z| {
                    brute_star(&members, x, z)
                        .is_some_and(|y| y <= n && color(x) == color(z) && color(z) == color(y))
                })
            })
        })
    })
}
