mod common;

use common::phj_lines_d1;
use twosq::colorings::Coloring;
use twosq::ground::GroundTable;
use twosq::hjlab::*;
use twosq::semigroup::star;

/// Every located word over `q` letters with domain inside `{1..=n}`.
fn all_words(q: u32, n: u64) -> Vec<LocatedWord> {
    let states = q as u64 + 1;
    (0..states.pow(n as u32))
        .map(|code| {
            let pairs = (1..=n).filter_map(|p| {
                let digit = code / states.pow(p as u32 - 1) % states;
                (digit > 0).then(|| (p, digit as u32 - 1))
            });
            LocatedWord::new(q, pairs).unwrap()
        })
        .collect()
}

fn all_points(q: u32, n: u64, d: u32) -> Vec<PhjPoint> {
    let sizes: Vec<usize> = (1..=d).map(|j| n.pow(j) as usize).collect();
    let total: usize = sizes.iter().sum();
    (0..(q as u64).pow(total as u32))
        .map(|code| {
            let mut flat: Vec<u32> = (0..total)
                .map(|i| (code / (q as u64).pow(i as u32) % q as u64) as u32 + 1)
                .collect();
            let mut comps = Vec::new();
            for &s in &sizes {
                comps.push(flat.drain(..s).collect());
            }
            PhjPoint::new(q, n, d, comps).unwrap()
        })
        .collect()
}

fn subsets(n: u64) -> Vec<Vec<u64>> {
    (1u64..1 << n)
        .map(|m| (1..=n).filter(|p| m >> (p - 1) & 1 == 1).collect())
        .collect()
}

fn disjoint(a: &LocatedWord, b: &LocatedWord) -> bool {
    a.domain().all(|p| b.get(p).is_none())
}

#[test]
fn concat_partial_semigroup_laws() {
    for q in 1..=2 {
        let words = all_words(q, 3);
        for a in &words {
            for b in &words {
                if !disjoint(a, b) {
                    assert!(matches!(a.concat(b), Err(twosq::Error::DomainOverlap(_))));
                    continue;
                }
                let ab = a.concat(b).unwrap();
                assert_eq!(ab, b.concat(a).unwrap());
                for c in &words {
                    if disjoint(a, c) && disjoint(b, c) {
                        assert_eq!(
                            ab.concat(c).unwrap(),
                            a.concat(&b.concat(c).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn h_is_a_homomorphism() {
    let t = GroundTable::build(10_000_000).unwrap();
    let mut checked = 0u64;
    for q in 1..=3 {
        let words = all_words(q, 4);
        for a in &words {
            let Ok(ha) = h_project(a, &t) else { continue };
            for b in words.iter().filter(|b| disjoint(a, b)) {
                let (Ok(hb), Ok(hab)) = (h_project(b, &t), h_project(&a.concat(b).unwrap(), &t))
                else {
                    continue;
                };
                assert_eq!(hab, star(&t, ha, hb).unwrap());
                checked += 1;
            }
        }
    }
    // Disjoint pairs over 4 positions: each position is empty, in a, or in b.
    assert_eq!(checked, (1..=3u64).map(|q| (2 * q + 1).pow(4)).sum::<u64>());
}

#[test]
fn substitution_touches_only_gamma_powers() {
    for q in 1..=2 {
        for n in 1..=3u64 {
            for d in 1..=2u32 {
                for a in all_points(q, n, d) {
                    for gamma in subsets(n) {
                        let xs = vec![q; d as usize];
                        let b = phj_substitute(&a, &gamma, &xs).unwrap();
                        for j in 1..=d as usize {
                            for idx in 0..(n as usize).pow(j as u32) {
                                let tuple: Vec<u64> = (0..j)
                                    .rev()
                                    .map(|k| (idx / (n as usize).pow(k as u32)) as u64 % n + 1)
                                    .collect();
                                let inside = tuple.iter().all(|i| gamma.contains(i));
                                let expect = if inside {
                                    xs[j - 1]
                                } else {
                                    a.get(&tuple).unwrap()
                                };
                                assert_eq!(b.get(&tuple), Some(expect));
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn projection_of_substituted_point_decomposes() {
    let t = GroundTable::build(10_000_000).unwrap();
    let mut checked = 0u64;
    for q in 1..=2 {
        for n in 1..=3u64 {
            for d in 1..=2u32 {
                let letter_tuples: Vec<Vec<u32>> = (0..(q as u64).pow(d))
                    .map(|c| {
                        (0..d)
                            .map(|i| (c / (q as u64).pow(i) % q as u64) as u32 + 1)
                            .collect()
                    })
                    .collect();
                for a in all_points(q, n, d) {
                    for gamma in subsets(n) {
                        for xs in &letter_tuples {
                            let p = phj_substitute(&a, &gamma, xs).unwrap();
                            match (m_project(&p, &t), decomposed_projection(&a, &gamma, xs, &t)) {
                                (Ok(x), Ok(y)) => assert_eq!(x, y),
                                (Err(e), Err(f)) => {
                                    assert!(e.is_out_of_range() && f.is_out_of_range())
                                }
                                (x, y) => panic!("{x:?} vs {y:?}"),
                            }
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 100_000);
}

#[test]
fn searches_reverify_through_substitution() {
    let t = GroundTable::build(10_000_000).unwrap();
    for seed in 0..40 {
        let c = Coloring::random(seed, 2, 200_000).unwrap();
        let color_word = projected_coloring(&c, &t);
        for (q, n, ap) in [(2, 3, None), (3, 3, None), (2, 5, Some(1)), (2, 6, Some(2))] {
            if let Some(inst) = hj_search(q, n, ap, &color_word).unwrap().instance() {
                assert!(verify_hj(q, inst, &color_word).unwrap());
            }
        }
        let color_point = projected_point_coloring(&c, &t);
        for (q, d, n) in [(2, 1, 3), (2, 2, 2), (3, 1, 2)] {
            if let Some(inst) = phj_search(q, d, n, 1 << 24, &color_point)
                .unwrap()
                .instance()
            {
                assert!(verify_phj(inst, &color_point).unwrap());
                assert!(inst.gamma.iter().all(|&g| inst.a.get(&[g]) == Some(1)));
            }
        }
    }
}

#[test]
fn one_dimensional_grid_is_plain_hales_jewett() {
    // With d = 1 an instance is a combinatorial line of [q]^N.
    for (q, n) in [(2u32, 3u64), (3, 2)] {
        let lines = phj_lines_d1(q, n as u32);
        let points = (q as u64).pow(n as u32);
        for seed in 0..60 {
            let c = Coloring::random(seed, 2, points).unwrap();
            let found = phj_search(q, 1, n, 1 << 20, |p| c.get(point_index(p))).unwrap();
            let expected = lines
                .iter()
                .any(|l| l.iter().all(|&i| c.get(i as u64) == c.get(l[0] as u64)));
            assert_eq!(
                found.instance().is_some(),
                expected,
                "q {q} n {n} seed {seed}"
            );
        }
    }
}
