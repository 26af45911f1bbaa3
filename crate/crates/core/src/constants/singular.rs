//! Twin-prime constant and the Hardy–Littlewood singular series.

use crate::error::{domain, Error, Result};
use crate::sieve::primes_up_to;

/// Truncation settings for the Euler products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularSeriesConfig {
    /// Primes `p ≤ prime_cutoff` enter the truncated products.
    pub prime_cutoff: u64,
    /// Smallest-prime-factor table size; `n` up to `spf_limit²` can be factored.
    pub spf_limit: u64,
}

impl Default for SingularSeriesConfig {
    fn default() -> Self {
        Self { prime_cutoff: 10_000_000, spf_limit: 1 << 20 }
    }
}

impl SingularSeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prime_cutoff < 1_000_000 {
            return domain(format!("prime_cutoff {} below 10^6", self.prime_cutoff));
        }
        if self.spf_limit < 2 || self.spf_limit > u32::MAX as u64 {
            return domain(format!("spf_limit {} outside [2, 2^32)", self.spf_limit));
        }
        Ok(())
    }
}

/// A truncated Euler product together with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProduct {
    pub value: f64,
    /// Bound on `|log(full product) − log(truncated product)|`.
    pub tail_bound: f64,
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `2 Π_{2 < p ≤ cutoff} (1 − 1/(p−1)²)`, with tail bound `2/cutoff`.
pub fn twin_prime_product(cutoff: u64) -> EulerProduct {
    let mut log = CompensatedSum::default();
    for p in primes_up_to(cutoff).into_iter().skip(1) {
        let q = (p - 1) as f64;
        log.add((-1.0 / (q * q)).ln_1p());
    }
    EulerProduct { value: 2.0 * log.total().exp(), tail_bound: 2.0 / cutoff.max(1) as f64 }
}

/// The twin-prime constant `2c₀`.
pub fn twin_prime_constant(cfg: &SingularSeriesConfig) -> Result<EulerProduct> {
    cfg.validate()?;
    Ok(twin_prime_product(cfg.prime_cutoff))
}

/// Evaluator for `𝔖(n) = 2c₀ Π_{p | n, p > 2} (p−1)/(p−2)`.
///
/// Holds the truncated twin-prime constant and a smallest-prime-factor
/// table, so repeated evaluations cost one factorization each.
#[derive(Debug, Clone)]
pub struct SingularSeries {
    twin: EulerProduct,
    spf: Vec<u32>,
    spf_primes: Vec<u64>,
}

impl SingularSeries {
    pub fn new(cfg: &SingularSeriesConfig) -> Result<Self> {
        let twin = twin_prime_constant(cfg)?;
        let limit = cfg.spf_limit as usize;
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        let spf_primes = (2..=limit).filter(|&i| spf[i] as usize == i).map(|i| i as u64).collect();
        Ok(Self { twin, spf, spf_primes })
    }

    pub fn twin_prime_constant(&self) -> EulerProduct {
        self.twin
    }

    fn spf_limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Distinct prime factors of `n`.
    pub fn prime_factors(&self, mut n: u64) -> Result<Vec<u64>> {
        let limit = self.spf_limit();
        if n > limit.saturating_mul(limit) {
            return Err(Error::Factoring { n, limit });
        }
        let mut factors = Vec::new();
        if n > limit {
            for &p in &self.spf_primes {
                if p * p > n {
                    break;
                }
                if n.is_multiple_of(p) {
                    factors.push(p);
                    while n.is_multiple_of(p) {
                        n /= p;
                    }
                }
                if n <= limit {
                    break;
                }
            }
            if n > limit {
                // no factor up to sqrt(n): n is prime
                factors.push(n);
                return Ok(factors);
            }
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            factors.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        factors.sort_unstable();
        factors.dedup();
        Ok(factors)
    }

    pub fn value(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return domain("singular series needs n >= 1");
        }
        let mut v = self.twin.value;
        for p in self.prime_factors(n)? {
            if p > 2 {
                v *= (p - 1) as f64 / (p - 2) as f64;
            }
        }
        Ok(v)
    }
}

/// One-shot `𝔖(n)`; prefer [`SingularSeries`] for repeated use.
pub fn singular_series(n: u64, cfg: &SingularSeriesConfig) -> Result<f64> {
    SingularSeries::new(cfg)?.value(n)
}

/// `𝔖(h₁,…,h_r) = Π_p (1−1/p)^{−r} (1 − ν_p/p)`.
///
/// Primes up to the largest pairwise difference use the exact residue count
/// `ν_p`; beyond it `ν_p = r` and the product is truncated at `prime_cutoff`
/// with tail bound `r²/prime_cutoff` on its logarithm.
pub fn singular_series_tuple(offsets: &[u64], cfg: &SingularSeriesConfig) -> Result<EulerProduct> {
    cfg.validate()?;
    if offsets.is_empty() {
        return domain("singular series needs at least one offset");
    }
    let mut sorted = offsets.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return domain("offsets must be distinct");
    }
    let r = sorted.len() as u64;
    let spread = sorted[sorted.len() - 1] - sorted[0];
    let primes = primes_up_to(cfg.prime_cutoff.max(spread));
    let rf = r as f64;

    let mut log = CompensatedSum::default();
    let mut residues = Vec::with_capacity(sorted.len());
    for &p in &primes {
        let nu = if p <= spread {
            residues.clear();
            residues.extend(sorted.iter().map(|h| h % p));
            residues.sort_unstable();
            residues.dedup();
            residues.len() as u64
        } else if p > cfg.prime_cutoff {
            break;
        } else {
            r
        };
        if nu == p {
            return Ok(EulerProduct { value: 0.0, tail_bound: 0.0 });
        }
        let pf = p as f64;
        log.add((-(nu as f64) / pf).ln_1p() - rf * (-1.0 / pf).ln_1p());
    }
    let tail = if r == 1 { 0.0 } else { rf * rf / cfg.prime_cutoff as f64 };
    Ok(EulerProduct { value: log.total().exp(), tail_bound: tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::LazyLock;

    static SERIES: LazyLock<SingularSeries> =
        LazyLock::new(|| SingularSeries::new(&SingularSeriesConfig::default()).unwrap());

    #[test]
    fn short_truncations() {
        assert_eq!(twin_prime_product(3).value, 1.5);
        assert!((twin_prime_product(5).value - 1.40625).abs() < 1e-15);
    }

    #[test]
    fn twin_prime_constant_is_stable_under_refinement() {
        let a = SERIES.twin_prime_constant();
        let b = twin_prime_product(20_000_000);
        assert!((a.value - 1.3203236).abs() < 1e-6, "{}", a.value);
        assert!((a.value - b.value).abs() < 1e-7);
        assert!(a.tail_bound <= 2e-7);
    }

    #[test]
    fn config_is_validated() {
        let cfg = SingularSeriesConfig { prime_cutoff: 1000, ..Default::default() };
        assert!(twin_prime_constant(&cfg).is_err());
    }

    #[test]
    fn series_values() {
        let two_c0 = SERIES.twin_prime_constant().value;
        assert_eq!(SERIES.value(1).unwrap(), two_c0);
        assert_eq!(SERIES.value(1 << 40).unwrap(), two_c0);
        assert_eq!(SERIES.value(3).unwrap(), 2.0 * two_c0);
        assert!((SERIES.value(15).unwrap() - two_c0 * 2.0 * 4.0 / 3.0).abs() < 1e-14);
        assert!(SERIES.value(0).is_err());
    }

    #[test]
    fn factoring_beyond_the_table() {
        let limit = 1u64 << 20;
        // 1048573 is prime, so its square is the hardest admissible input
        let p = 1_048_573u64;
        assert_eq!(SERIES.prime_factors(p * p).unwrap(), vec![p]);
        assert_eq!(SERIES.prime_factors(3 * p).unwrap(), vec![3, p]);
        assert_eq!(SERIES.prime_factors(2 * 3 * 5 * 1_000_003).unwrap(), vec![2, 3, 5, 1_000_003]);
        assert!(matches!(SERIES.prime_factors(limit * limit + 1), Err(Error::Factoring { .. })));
    }

    #[test]
    fn series_bounded_below_by_twin_constant() {
        let two_c0 = SERIES.twin_prime_constant().value;
        for n in 1..2000u64 {
            let v = SERIES.value(n).unwrap();
            if n.is_power_of_two() {
                assert_eq!(v, two_c0);
            } else {
                assert!(v > two_c0, "n={n}");
            }
        }
    }

    #[test]
    fn tuple_series() {
        let cfg = SingularSeriesConfig::default();
        let one = singular_series_tuple(&[0], &cfg).unwrap();
        assert_eq!(one.value, 1.0);
        assert_eq!(singular_series_tuple(&[0, 1, 2], &cfg).unwrap().value, 0.0);
        assert_eq!(singular_series_tuple(&[0, 1], &cfg).unwrap().value, 0.0);
        assert!(singular_series_tuple(&[0, 0], &cfg).is_err());
        assert!(singular_series_tuple(&[], &cfg).is_err());
        for n in 1..=100u64 {
            let pair = singular_series_tuple(&[0, 2 * n], &cfg).unwrap();
            let single = SERIES.value(n).unwrap();
            assert!((pair.value - single).abs() < 1e-6, "n={n}");
        }
        // admissible triple: {0, 2, 6}
        assert!(singular_series_tuple(&[0, 2, 6], &cfg).unwrap().value > 0.0);
    }
}
