//! Counting queries on a [`PrimeDataset`]: twin counts, moments of ψ over
//! short windows, Selberg integrals, the `A`/`B` set sizes and gap moments.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::scalar::Scalar;

use super::{weight_to_f64, PrimeDataset, LOG_SCALE};

/// Prime pairs `(p, p + 2n)` with both members `≤ X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwinCount {
    /// `Z₁(X; 2n)`.
    pub pairs: u64,
    /// `Z(X; 2n)` in fixed point, scale `2^60`.
    pub weighted: u128,
}

impl TwinCount {
    pub fn weighted_f64(&self) -> f64 {
        self.weighted as f64 / (LOG_SCALE * LOG_SCALE)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCardinalities {
    pub a: u64,
    pub a1: u64,
    pub b: u64,
    pub b1: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapSide {
    /// `p_{i+1} − p_i ≤ λ log X`.
    AtMost,
    /// `p_{i+1} − p_i > λ log X`.
    Above,
}

/// Selects gaps by comparing them with `λ log X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapQuery {
    pub lambda: f64,
    pub alpha: f64,
    pub side: GapSide,
}

/// Integer gap statistics on one side of a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GapTotals {
    pub count: u64,
    pub sum: u64,
    pub sum_squares: u128,
}

impl PrimeDataset {
    fn log_limit(&self) -> f64 {
        (self.limit() as f64).ln()
    }

    pub fn twin_pairs(&self, n: u64) -> Result<TwinCount> {
        if n == 0 || 2 * n > self.limit() {
            return domain(format!("twin offset n = {n} outside [1, X/2]"));
        }
        let primes = self.primes();
        let d = 2 * n;
        let mut out = TwinCount { pairs: 0, weighted: 0 };
        let mut j = 0;
        for &p in primes {
            let target = p + d;
            if target > self.limit() {
                break;
            }
            while j < primes.len() && primes[j] < target {
                j += 1;
            }
            if j < primes.len() && primes[j] == target {
                out.pairs += 1;
                out.weighted += super::log_weight(p) as u128 * super::log_weight(target) as u128;
            }
        }
        Ok(out)
    }

    /// `Z(X; 2n)` when `weighted`, otherwise `Z₁(X; 2n)`.
    pub fn twin_counts(&self, n: u64, weighted: bool) -> Result<f64> {
        let t = self.twin_pairs(n)?;
        Ok(if weighted { t.weighted_f64() } else { t.pairs as f64 })
    }

    fn check_window(&self, h: f64) -> Result<()> {
        if !(h >= 0.0) || !h.is_finite() {
            return domain(format!("window length h = {h} must be non-negative"));
        }
        self.ensure_covered(self.limit() as f64 + h)
    }

    /// Fixed-point `ψ(p + h) − ψ(p)` for every prime `p ≤ X`, by a two-pointer
    /// sweep over the support of `Λ`.
    pub fn prime_window_weights(&self, h: f64) -> Result<Vec<u64>> {
        self.check_window(h)?;
        let support = self.support();
        let mut hi = 0usize;
        let mut out = Vec::with_capacity(self.primes().len());
        for &p in self.primes() {
            let right = (p as f64 + h).floor() as u64;
            while hi < support.len() && support[hi] <= right {
                hi += 1;
            }
            out.push(self.psi_window(p, hi));
        }
        Ok(out)
    }

    // ψ(support[hi-1]) − ψ(p) with hi the rank of the right end
    fn psi_window(&self, left: u64, hi_rank: usize) -> u64 {
        let top = if hi_rank == 0 { 0 } else { self.psi_prefix[hi_rank - 1] };
        top - self.psi_int(left).min(top)
    }

    /// `Σ_{p ≤ X} (ψ(p + h) − ψ(p))^k`.
    pub fn moment_sum_over_primes(&self, h: f64, k: u32) -> Result<f64> {
        if k == 0 {
            return domain("moment order must be positive");
        }
        let weights = self.prime_window_weights(h)?;
        let mut total = 0.0;
        for w in weights {
            total += weight_to_f64(w).powi(k as i32);
        }
        Ok(total)
    }

    /// `Σ_{p ≤ X} (π(p + h) − π(p))^k`, exact.
    pub fn prime_count_moment(&self, h: f64, k: u32) -> Result<u128> {
        self.check_window(h)?;
        let all = self.all_primes();
        let mut hi = 0usize;
        let mut total = 0u128;
        for (i, &p) in self.primes().iter().enumerate() {
            let right = (p as f64 + h).floor() as u64;
            while hi < all.len() && all[hi] <= right {
                hi += 1;
            }
            total += ((hi - i - 1) as u128).pow(k);
        }
        Ok(total)
    }

    /// `Σ_{p ≤ X} (π(min(p + K, X)) − π(p))`, counting pairs `p < p' ≤ X`
    /// with `p' − p ≤ K`. With `odd_only` the prime 2 is skipped as the
    /// smaller member, matching the even differences counted by `Z₁`.
    pub fn capped_pair_count(&self, k: f64, odd_only: bool) -> u64 {
        let primes = self.primes();
        let mut hi = 0usize;
        let mut total = 0u64;
        for (i, &p) in primes.iter().enumerate() {
            let right = (p as f64 + k).floor() as u64;
            while hi < primes.len() && primes[hi] <= right {
                hi += 1;
            }
            if odd_only && p == 2 {
                continue;
            }
            total += (hi - i - 1) as u64;
        }
        total
    }

    /// Discrete and continuous Selberg integrals in scalar type `S`.
    ///
    /// `J̃_k(X,h) = Σ_{1 ≤ m ≤ X} (ψ(m+h) − ψ(m))^k` and
    /// `J_k(X,h) = ∫_0^X (ψ(t+h) − ψ(t))^k dt`. The integrand is a step
    /// function: on `[m, m+1)` it equals `(ψ(m+⌊h⌋) − ψ(m))^k` for
    /// `τ < 1 − β` and `(ψ(m+⌊h⌋+1) − ψ(m))^k` after, where `β = h − ⌊h⌋`.
    /// With an exact `S` both results are exact for the fixed-point `Λ`.
    pub fn selberg_integrals_in<S: Scalar>(&self, x: f64, h: f64, k: u32) -> Result<(S, S)> {
        if !(x >= 0.0) || x > self.limit() as f64 {
            return domain(format!("integration limit {x} outside [0, X]"));
        }
        if !(h >= 0.0) || !h.is_finite() {
            return domain(format!("window length h = {h} must be non-negative"));
        }
        self.ensure_covered(x + h + 1.0)?;
        let whole = h.floor() as u64;
        let beta = S::of_f64(h - h.floor());
        let one_minus_beta = S::one() - beta.clone();
        let scale = S::of_f64(LOG_SCALE);
        let power = |w: u64| {
            let v = S::of_u64(w) / scale.clone();
            let mut acc = S::one();
            for _ in 0..k {
                acc = acc * v.clone();
            }
            acc
        };
        let n = x.floor() as u64;
        let mut discrete = S::zero();
        let mut continuous = S::zero();
        for m in 0..=n {
            let base = self.psi_int(m);
            let a = power(self.psi_int(m + whole) - base);
            let b = power(self.psi_int(m + whole + 1) - base);
            if m >= 1 {
                discrete = discrete + a.clone();
            }
            if m < n {
                continuous = continuous + one_minus_beta.clone() * a + beta.clone() * b;
            } else {
                // partial last cell [n, x]
                let frac = S::of_f64(x) - S::of_u64(n);
                let first = if frac < one_minus_beta { frac.clone() } else { one_minus_beta.clone() };
                let rest = frac - first.clone();
                continuous = continuous + first * a;
                if rest > S::zero() {
                    continuous = continuous + rest * b;
                }
            }
        }
        Ok((continuous, discrete))
    }

    /// `(J_k(X, h), J̃_k(X, h))` over the whole dataset range.
    pub fn selberg_integrals(&self, h: f64, k: u32) -> Result<(f64, f64)> {
        self.selberg_integrals_in::<f64>(self.limit() as f64, h, k)
    }

    /// `|A(K)|, |A₁(K)|, |B(K)|, |B₁(K)|`.
    ///
    /// With `prime_prime_capped` the partner prime of `A(K)` must also be
    /// `≤ X`.
    pub fn set_cardinalities(&self, k: f64, prime_prime_capped: bool) -> Result<SetCardinalities> {
        if !(k > 0.0) || !k.is_finite() {
            return domain(format!("K = {k} must be positive"));
        }
        let x = self.limit();
        let primes = self.primes();
        let next = |i: usize| self.all_primes()[i + 1];
        let mut a = 0u64;
        for (i, &p) in primes.iter().enumerate() {
            let q = next(i);
            if (q - p) as f64 <= k && (!prime_prime_capped || q <= x) {
                a += 1;
            }
        }
        // m in [lo, hi] all have next prime `q`; m counts iff m >= q − K
        let mut b = 0u64;
        let mut count_cell = |lo: u64, hi: u64, q: u64| {
            let from = ((q as f64 - k).ceil().max(lo as f64)) as u64;
            let to = hi.min(x);
            if to >= from {
                b += to - from + 1;
            }
        };
        count_cell(1, 1, 2);
        for (i, &p) in primes.iter().enumerate() {
            count_cell(p, next(i) - 1, next(i));
        }
        let pi = primes.len() as u64;
        Ok(SetCardinalities { a, a1: pi - a, b, b1: x - b })
    }

    /// `Σ (p_{i+1} − p_i)^α` over `p_i ≤ X` with the gap on the chosen side
    /// of `λ log X`.
    pub fn gap_moment_sum(&self, q: &GapQuery) -> Result<f64> {
        let threshold = q.lambda * self.log_limit();
        if !(threshold > 0.0) {
            return domain(format!("gap threshold {threshold} must be positive"));
        }
        if !(q.alpha >= 0.0) {
            return domain(format!("alpha = {} must be non-negative", q.alpha));
        }
        let mut total = 0.0;
        for g in self.gaps() {
            let below = (g as f64) <= threshold;
            if below == (q.side == GapSide::AtMost) {
                total += (g as f64).powf(q.alpha);
            }
        }
        Ok(total)
    }

    /// Exact count, sum and sum of squares of the gaps on each side of a
    /// threshold, returned as `(at_most, above)`.
    pub fn gap_totals(&self, threshold: f64) -> (GapTotals, GapTotals) {
        let mut le = GapTotals::default();
        let mut gt = GapTotals::default();
        for g in self.gaps() {
            let t = if (g as f64) <= threshold { &mut le } else { &mut gt };
            t.count += 1;
            t.sum += g;
            t.sum_squares += (g as u128) * (g as u128);
        }
        (le, gt)
    }
}
