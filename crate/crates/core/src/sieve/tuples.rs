//! `ψ_k(X, u)`: weighted counts of `k`-tuples of prime powers with
//! `min ≤ X` and `max − min ≤ u`.
//!
//! Weights are products of fixed-point `Λ` values, so everything here is an
//! exact integer at scale `2^(30k)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

use super::{PrimeDataset, LOG_SCALE_BITS};

/// Largest `X` accepted by the brute-force tuple routines.
pub const BRUTE_FORCE_LIMIT: u64 = 2000;

/// All ordered tuples whose smallest entry is `a` and largest is `b`,
/// with their total weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleWindow {
    pub a: u64,
    pub b: u64,
    pub weight: BigUint,
}

/// `ψ_k(X, u)` as a step function of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiKProfile {
    pub k: u32,
    pub x: u64,
    /// `(span, weight)` sorted by span; `ψ_k(X, u)` is the sum over `span ≤ u`.
    pub steps: Vec<(u64, BigUint)>,
}

pub(crate) fn scale_rational(k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(1u8) << (LOG_SCALE_BITS * k) as usize)
}

pub fn fixed_to_rational(w: &BigUint, k: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(w.clone())) / scale_rational(k)
}

fn to_f64(w: &BigUint, k: u32) -> f64 {
    w.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi((LOG_SCALE_BITS * k) as i32)
}

impl PsiKProfile {
    pub fn psi_k_weight(&self, u: f64) -> BigUint {
        self.steps
            .iter()
            .take_while(|(s, _)| (*s as f64) <= u)
            .fold(BigUint::zero(), |acc, (_, w)| acc + w)
    }

    pub fn psi_k(&self, u: f64) -> f64 {
        to_f64(&self.psi_k_weight(u), self.k)
    }

    /// `∫_lo^hi ψ_k(X, u) du`, exact.
    pub fn integral(&self, lo: f64, hi: f64) -> BigRational {
        let lo_r = BigRational::from_float(lo).expect("finite bound");
        let hi_r = BigRational::from_float(hi).expect("finite bound");
        let mut total = BigRational::zero();
        for (s, w) in &self.steps {
            let s_r = BigRational::from_integer(BigInt::from(*s));
            let from = if s_r > lo_r { s_r } else { lo_r.clone() };
            if from < hi_r {
                total += fixed_to_rational(w, self.k) * (hi_r.clone() - from);
            }
        }
        total
    }
}

fn check_order(k: u32) -> Result<()> {
    if !(1..=4).contains(&k) {
        return domain(format!("tuple order k = {k} outside [1, 4]"));
    }
    Ok(())
}

fn check_scale(x: u64) -> Result<()> {
    if x > BRUTE_FORCE_LIMIT {
        return Err(Error::Resource(format!(
            "tuple enumeration limited to X ≤ {BRUTE_FORCE_LIMIT}, got {x}"
        )));
    }
    Ok(())
}

/// Calls `f` once for every pair `a ≤ b` of support points with `a ≤ min_hi`
/// and `b − a ≤ span_max`, passing the total weight of the ordered `k`-tuples
/// with minimum `a` and maximum `b` (inclusion–exclusion on window sums).
pub fn for_each_tuple<F: FnMut(&TupleWindow)>(
    ds: &PrimeDataset,
    k: u32,
    min_hi: f64,
    span_max: f64,
    mut f: F,
) -> Result<()> {
    check_order(k)?;
    if !(span_max >= 0.0) {
        return domain(format!("span bound {span_max} must be non-negative"));
    }
    ds.ensure_covered(min_hi.max(0.0) + span_max)?;
    let support = ds.support();
    let prefix = |i: usize| -> u64 { if i == 0 { 0 } else { ds.psi_prefix[i - 1] } };
    // window sum of support indices [i, j)
    let window = |i: usize, j: usize| -> BigInt { BigInt::from(prefix(j) - prefix(i.min(j))) };
    let pow = |v: BigInt| -> BigInt { num_traits::pow(v, k as usize) };
    for i in 0..support.len() {
        let a = support[i];
        if a as f64 > min_hi {
            break;
        }
        for (j, &b) in support.iter().enumerate().skip(i) {
            if (b - a) as f64 > span_max {
                break;
            }
            let weight = if i == j {
                pow(BigInt::from(ds.support_weight(i)))
            } else {
                pow(window(i, j + 1)) - pow(window(i + 1, j + 1)) - pow(window(i, j))
                    + pow(window(i + 1, j))
            };
            let weight = weight.to_biguint().expect("inclusion-exclusion weight is non-negative");
            f(&TupleWindow { a, b, weight });
        }
    }
    Ok(())
}

impl PrimeDataset {
    /// Step profile of `ψ_k(x, ·)` on `[0, u_max]`.
    pub fn psi_k_profile(&self, k: u32, x: u64, u_max: f64) -> Result<PsiKProfile> {
        check_scale(x)?;
        let mut by_span = std::collections::BTreeMap::<u64, BigUint>::new();
        for_each_tuple(self, k, x as f64, u_max, |t| {
            *by_span.entry(t.b - t.a).or_default() += &t.weight;
        })?;
        Ok(PsiKProfile { k, x, steps: by_span.into_iter().collect() })
    }

    /// `ψ_k(x, u)` in fixed point by literal enumeration of ordered tuples.
    pub fn psi_k_bruteforce_weight(&self, u: f64, k: u32, x: u64) -> Result<BigUint> {
        check_scale(x)?;
        if !(2..=3).contains(&k) {
            return domain(format!("brute force supports k ∈ {{2, 3}}, got {k}"));
        }
        if !(u >= 0.0) {
            return domain(format!("span bound {u} must be non-negative"));
        }
        self.ensure_covered(x as f64 + u)?;
        let top = self.support_rank((x as f64 + u).floor() as u64);
        let pts: Vec<(u64, u64)> = (0..top).map(|i| (self.support()[i], self.support_weight(i))).collect();
        let fits = |ms: &[u64]| {
            let lo = *ms.iter().min().unwrap();
            let hi = *ms.iter().max().unwrap();
            lo <= x && ((hi - lo) as f64) <= u
        };
        let mut total = BigUint::zero();
        for &(m1, w1) in &pts {
            for &(m2, w2) in &pts {
                if k == 2 {
                    if fits(&[m1, m2]) {
                        total += BigUint::from(w1) * w2;
                    }
                    continue;
                }
                for &(m3, w3) in &pts {
                    if fits(&[m1, m2, m3]) {
                        total += BigUint::from(w1) * w2 * w3;
                    }
                }
            }
        }
        Ok(total)
    }

    pub fn psi_k_bruteforce(&self, u: f64, k: u32, x: u64) -> Result<f64> {
        Ok(to_f64(&self.psi_k_bruteforce_weight(u, k, x)?, k))
    }

    /// `Σ_{m ≤ x} Λ(m) (ψ(m + h) − ψ(m))^k` in fixed point, scale `2^(30(k+1))`.
    pub fn lambda_window_moment(&self, x: u64, h: f64, k: u32) -> Result<BigUint> {
        if !(h >= 0.0) {
            return domain(format!("window length h = {h} must be non-negative"));
        }
        self.ensure_covered(x as f64 + h)?;
        let mut total = BigUint::zero();
        for i in 0..self.support_rank(x) {
            let m = self.support()[i];
            let window = self.psi_int((m as f64 + h).floor() as u64) - self.psi_int(m);
            total += BigUint::from(self.support_weight(i)) * num_traits::pow(BigUint::from(window), k as usize);
        }
        Ok(total)
    }
}
