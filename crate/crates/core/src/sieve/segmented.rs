//! Odd-only segmented sieve of Eratosthenes.

use rayon::prelude::*;

pub const DEFAULT_SEGMENT: usize = 1 << 18;

/// Primes `≤ n` by a plain odd-only sieve. Used for base primes.
fn simple_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    // composite[i] marks 2i + 1
    let mut composite = vec![false; n / 2 + 1];
    let mut i = 1;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = p * p / 2;
            while j <= n / 2 {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut out = vec![2u64];
    out.extend((1..=(n - 1) / 2).filter(|&i| !composite[i]).map(|i| (2 * i + 1) as u64));
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Primes in `[lo, hi)` given every prime up to `sqrt(hi)`.
fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    if hi <= lo {
        return out;
    }
    if lo <= 2 && 2 < hi {
        out.push(2);
    }
    // odd numbers first_odd, first_odd + 2, ...
    let first_odd = (lo.max(3)) | 1;
    if first_odd >= hi {
        return out;
    }
    let len = ((hi - first_odd) as usize).div_ceil(2);
    let mut composite = vec![false; len];
    for &p in base.iter().skip(1) {
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(first_odd.div_ceil(p) * p);
        if start % 2 == 0 {
            start += p;
        }
        let mut j = ((start - first_odd) / 2) as usize;
        while j < len {
            composite[j] = true;
            j += p as usize;
        }
    }
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| first_odd + 2 * i as u64),
    );
    out
}

/// Primes in `[lo, hi)`, sieving fixed-size segments in parallel and
/// concatenating them in order, so the result does not depend on the
/// segment size or the thread count.
pub fn primes_in_range(lo: u64, hi: u64, segment_size: usize) -> Vec<u64> {
    if hi <= lo {
        return Vec::new();
    }
    let base = simple_primes(isqrt(hi - 1) + 1);
    let seg = segment_size.max(64) as u64;
    let count = (hi - lo).div_ceil(seg);
    let pieces: Vec<Vec<u64>> = (0..count)
        .into_par_iter()
        .map(|s| {
            let a = lo + s * seg;
            sieve_segment(a, (a + seg).min(hi), &base)
        })
        .collect();
    pieces.concat()
}

/// All primes `≤ n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    primes_in_range(0, n + 1, DEFAULT_SEGMENT)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> Vec<u64> {
        (2..=n).filter(|&m| (2..m).take_while(|d| d * d <= m).all(|d| m % d != 0)).collect()
    }

    #[test]
    fn small_limits() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2), vec![2]);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(100).len(), 25);
        assert_eq!(primes_up_to(3000), trial_division(3000));
    }

    #[test]
    fn segmentation_does_not_change_the_result() {
        let reference = primes_in_range(0, 200_001, 1 << 20);
        for seg in [64, 1000, 4096, 65_537] {
            assert_eq!(primes_in_range(0, 200_001, seg), reference, "segment {seg}");
        }
        let tail: Vec<u64> = reference.iter().copied().filter(|&p| p >= 150_000).collect();
        assert_eq!(primes_in_range(150_000, 200_001, 777), tail);
    }

    #[test]
    fn known_counts() {
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
        assert_eq!(isqrt(99), 9);
        assert_eq!(isqrt(100), 10);
    }
}
