//! Segmented exponent-parity sieve for sums of two squares.
//!
//! A positive integer is a sum of two squares exactly when every prime
//! `p ≡ 3 (mod 4)` divides it to an even power. For every prime `p` up to
//! `√limit` the sieve walks the multiples of each power `p^e` inside a
//! segment, multiplying `p` into a per-slot "smooth part" and flagging the
//! slot when `p ≡ 3 (mod 4)` occurs to exactly an odd power. What is left
//! after dividing the odd part of `n` by its smooth part is either 1 or a
//! single prime above `√limit`, which is then tested mod 4.

use rayon::prelude::*;

const SEGMENT: u64 = 1 << 16;

/// Primes `<= n`, plain Eratosthenes. Only used for the sieving primes.
pub(crate) fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

pub(crate) fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// All sums of two squares strictly below `limit`, ascending.
pub(crate) fn sums_of_two_squares_below(limit: u64) -> Vec<u64> {
    if limit == 0 {
        return Vec::new();
    }
    // Odd sieving primes only; powers of two are removed with trailing_zeros.
    let primes: Vec<u64> = primes_up_to(isqrt(limit - 1))
        .into_iter()
        .filter(|&p| p != 2)
        .collect();
    let segments = limit.div_ceil(SEGMENT);
    let parts: Vec<Vec<u64>> = (0..segments)
        .into_par_iter()
        .map(|s| {
            let lo = s * SEGMENT;
            let hi = (lo + SEGMENT).min(limit);
            sieve_segment(lo, hi, &primes)
        })
        .collect();
    let total = parts.iter().map(Vec::len).sum();
    let mut out = Vec::with_capacity(total);
    for part in parts {
        out.extend_from_slice(&part);
    }
    out
}

fn sieve_segment(lo: u64, hi: u64, primes: &[u64]) -> Vec<u64> {
    let len = (hi - lo) as usize;
    let mut smooth = vec![1u64; len];
    let mut rejected = vec![false; len];

    for &p in primes {
        let flag_odd = p % 4 == 3;
        let mut pe = p;
        let mut e = 1u32;
        while pe < hi {
            let mut k = lo.div_ceil(pe).max(1);
            let mut kmod = k % p;
            let mut n = k * pe;
            while n < hi {
                let slot = (n - lo) as usize;
                smooth[slot] *= p;
                // v_p(n) == e exactly when p does not divide the cofactor k.
                if flag_odd && e % 2 == 1 && kmod != 0 {
                    rejected[slot] = true;
                }
                kmod += 1;
                if kmod == p {
                    kmod = 0;
                }
                k += 1;
                n += pe;
            }
            match pe.checked_mul(p) {
                Some(next) => pe = next,
                None => break,
            }
            e += 1;
        }
    }

    let mut out = Vec::with_capacity(len / 3 + 16);
    for (slot, n) in (lo..hi).enumerate() {
        if n == 0 {
            out.push(0);
            continue;
        }
        if rejected[slot] {
            continue;
        }
        let odd = n >> n.trailing_zeros();
        let rest = if odd == smooth[slot] {
            1
        } else if odd <= u32::MAX as u64 {
            (odd as u32 / smooth[slot] as u32) as u64
        } else {
            odd / smooth[slot]
        };
        if rest % 4 != 3 {
            out.push(n);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(limit: u64) -> Vec<u64> {
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

    #[test]
    fn matches_brute_force_across_segment_boundaries() {
        for limit in [
            1,
            2,
            3,
            33,
            1000,
            SEGMENT - 1,
            SEGMENT,
            SEGMENT + 1,
            3 * SEGMENT + 17,
        ] {
            assert_eq!(
                sums_of_two_squares_below(limit),
                brute(limit),
                "limit {limit}"
            );
        }
    }

    #[test]
    fn isqrt_exact() {
        for n in 0..10_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
    }

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(primes_up_to(1).is_empty());
    }
}
