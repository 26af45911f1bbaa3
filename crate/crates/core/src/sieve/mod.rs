//! Sieved prime data and the empirical counting quantities built on it.
//!
//! `Λ(n)` is stored in fixed point: `round(log p · 2^30)` for every prime
//! power `p^m` up to the coverage bound. Prefix sums of these integers give
//! `ψ`, and window sums `ψ(b) − ψ(a)` are then exact integers, which is what
//! lets fast paths and brute-force oracles agree bit for bit.

mod cache;
mod counts;
mod segmented;
mod tuples;

pub use cache::{decode_primes, encode_primes, CACHE_MAGIC, CACHE_VERSION};
pub use counts::{GapQuery, GapSide, GapTotals, SetCardinalities, TwinCount};
pub use segmented::{primes_in_range, primes_up_to, DEFAULT_SEGMENT};
pub use tuples::{fixed_to_rational, for_each_tuple, PsiKProfile, TupleWindow, BRUTE_FORCE_LIMIT};

use crate::error::{Error, Result};

pub const LOG_SCALE_BITS: u32 = 30;
pub const LOG_SCALE: f64 = (1u64 << LOG_SCALE_BITS) as f64;

/// Fixed-point `log q`.
pub fn log_weight(q: u64) -> u64 {
    ((q as f64).ln() * LOG_SCALE).round() as u64
}

/// Converts a fixed-point sum of logarithms back to a real.
pub fn weight_to_f64(w: u64) -> f64 {
    w as f64 / LOG_SCALE
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveOptions {
    pub segment_size: usize,
    /// Integers sieved beyond `X`; raised to at least `10 log X`, and further
    /// if needed to reach the first prime above `X`.
    pub extension: u64,
    pub memory_budget_bytes: u64,
}

impl Default for SieveOptions {
    fn default() -> Self {
        Self { segment_size: DEFAULT_SEGMENT, extension: 0, memory_budget_bytes: 4 << 30 }
    }
}

/// Primes up to `X`, plus a margin beyond it, with the `Λ` support and the
/// prefix sums of `ψ`. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDataset {
    limit: u64,
    coverage: u64,
    // every prime <= coverage
    primes: Vec<u64>,
    pi_limit: usize,
    // prime powers <= coverage and their cumulative fixed-point Λ
    support: Vec<u64>,
    psi_prefix: Vec<u64>,
}

/// Sieves every prime `≤ x` with default options and the given segment size.
pub fn sieve_primes(x: u64, segment_size: usize) -> Result<PrimeDataset> {
    PrimeDataset::build(x, &SieveOptions { segment_size, ..Default::default() })
}

impl PrimeDataset {
    pub fn build(limit: u64, opts: &SieveOptions) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit {limit} below 2")));
        }
        let coverage = limit + initial_extension(limit, opts.extension);
        check_budget(coverage, opts)?;
        let primes = primes_in_range(0, coverage + 1, opts.segment_size);
        Self::assemble(limit, coverage, primes, opts)
    }

    /// Rebuilds a dataset from the primes `≤ limit` (e.g. read from a cache
    /// file), sieving only the extension beyond `limit`.
    pub fn from_primes(limit: u64, mut primes: Vec<u64>, opts: &SieveOptions) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!("sieve limit {limit} below 2")));
        }
        let coverage = limit + initial_extension(limit, opts.extension);
        check_budget(coverage, opts)?;
        primes.extend(primes_in_range(limit + 1, coverage + 1, opts.segment_size));
        Self::assemble(limit, coverage, primes, opts)
    }

    fn assemble(limit: u64, mut coverage: u64, mut primes: Vec<u64>, opts: &SieveOptions) -> Result<Self> {
        // make sure the gap that straddles X is visible
        while primes.last().is_none_or(|&p| p <= limit) {
            let more = coverage.max(64);
            primes.extend(primes_in_range(coverage + 1, coverage + more + 1, opts.segment_size));
            coverage += more;
            check_budget(coverage, opts)?;
        }
        let pi_limit = primes.partition_point(|&p| p <= limit);

        let mut powers = Vec::new();
        for &p in &primes {
            let Some(mut q) = p.checked_mul(p) else { break };
            if q > coverage {
                break;
            }
            while q <= coverage {
                powers.push((q, p));
                match q.checked_mul(p) {
                    Some(next) => q = next,
                    None => break,
                }
            }
        }
        powers.sort_unstable();

        let mut support = Vec::with_capacity(primes.len() + powers.len());
        let mut psi_prefix = Vec::with_capacity(primes.len() + powers.len());
        let mut total = 0u64;
        let (mut i, mut j) = (0, 0);
        while i < primes.len() || j < powers.len() {
            let take_prime = j == powers.len() || (i < primes.len() && primes[i] < powers[j].0);
            let (n, base) = if take_prime {
                i += 1;
                (primes[i - 1], primes[i - 1])
            } else {
                j += 1;
                powers[j - 1]
            };
            total += log_weight(base);
            support.push(n);
            psi_prefix.push(total);
        }

        Ok(Self { limit, coverage, primes, pi_limit, support, psi_prefix })
    }

    /// `X`.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Largest integer whose primality is known.
    pub fn coverage(&self) -> u64 {
        self.coverage
    }

    /// Primes `≤ X`.
    pub fn primes(&self) -> &[u64] {
        &self.primes[..self.pi_limit]
    }

    /// Primes `≤ coverage`.
    pub fn all_primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn pi_limit(&self) -> u64 {
        self.pi_limit as u64
    }

    /// `p_{π(X)+1}`, the first prime above `X`.
    pub fn next_prime_after_limit(&self) -> u64 {
        self.primes[self.pi_limit]
    }

    /// `p_{i+1} − p_i` for every `p_i ≤ X`, the last one reaching past `X`.
    pub fn gaps(&self) -> Vec<u64> {
        self.primes[..=self.pi_limit].windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Prime powers up to the coverage bound, the support of `Λ`.
    pub fn support(&self) -> &[u64] {
        &self.support
    }

    /// Fixed-point `Λ` at `support()[i]`.
    pub fn support_weight(&self, i: usize) -> u64 {
        self.psi_prefix[i] - if i == 0 { 0 } else { self.psi_prefix[i - 1] }
    }

    pub(crate) fn ensure_covered(&self, u: f64) -> Result<()> {
        if !(u >= 0.0) || u.floor() > self.coverage as f64 {
            return Err(Error::Coverage { need: u, have: self.coverage });
        }
        Ok(())
    }

    /// Number of support points `≤ n`.
    pub(crate) fn support_rank(&self, n: u64) -> usize {
        self.support.partition_point(|&s| s <= n)
    }

    /// Fixed-point `ψ(n)` for an integer `n` within coverage.
    pub(crate) fn psi_int(&self, n: u64) -> u64 {
        match self.support_rank(n) {
            0 => 0,
            r => self.psi_prefix[r - 1],
        }
    }

    /// Fixed-point Chebyshev function `ψ(u)`.
    pub fn psi_weight(&self, u: f64) -> Result<u64> {
        self.ensure_covered(u)?;
        Ok(self.psi_int(u.floor() as u64))
    }

    /// Chebyshev `ψ(u) = Σ_{n ≤ u} Λ(n)`, prime powers included.
    pub fn psi(&self, u: f64) -> Result<f64> {
        self.psi_weight(u).map(weight_to_f64)
    }

    /// `π(u)`.
    pub fn pi(&self, u: f64) -> Result<u64> {
        self.ensure_covered(u)?;
        let n = u.floor() as u64;
        Ok(self.primes.partition_point(|&p| p <= n) as u64)
    }
}

fn initial_extension(limit: u64, requested: u64) -> u64 {
    let ten_log = (10.0 * (limit as f64).ln()).ceil() as u64;
    requested.max(ten_log).max(16)
}

fn check_budget(coverage: u64, opts: &SieveOptions) -> Result<()> {
    let c = coverage.max(16) as f64;
    // primes plus support plus prefix sums, 8 bytes each, with headroom
    let estimate = 1.3 * c / c.ln() * 24.0 + opts.segment_size as f64;
    if estimate > opts.memory_budget_bytes as f64 {
        return Err(Error::Resource(format!(
            "sieving to {coverage} needs about {:.0} MiB, budget is {} MiB",
            estimate / (1 << 20) as f64,
            opts.memory_budget_bytes >> 20
        )));
    }
    Ok(())
}
