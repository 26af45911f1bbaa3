//! Independent oracles shared by the integration tests: trial division,
//! direct Λ summation and set-partition enumeration.

#![allow(dead_code)]

use pil_core::sieve::log_weight;

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn primes_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&m| is_prime(m)).collect()
}

/// `p` when `n = p^m`, else `None`.
pub fn prime_power_base(n: u64) -> Option<u64> {
    let p = (2..=n).find(|d| n.is_multiple_of(*d))?;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    (m == 1).then_some(p)
}

pub fn lambda(n: u64) -> f64 {
    prime_power_base(n).map_or(0.0, |p| (p as f64).ln())
}

/// Fixed-point `Λ(n)`, rounded the same way as the library.
pub fn lambda_fixed(n: u64) -> u64 {
    prime_power_base(n).map_or(0, log_weight)
}

/// `ψ(m)` for `m ≤ n` in fixed point.
pub fn psi_fixed_table(n: u64) -> Vec<u64> {
    let mut out = vec![0u64; n as usize + 1];
    for m in 1..=n {
        out[m as usize] = out[m as usize - 1] + lambda_fixed(m);
    }
    out
}

/// `ψ(m)` for `m ≤ n`.
pub fn psi_float_table(n: u64) -> Vec<f64> {
    let mut out = vec![0.0; n as usize + 1];
    for m in 1..=n {
        out[m as usize] = out[m as usize - 1] + lambda(m);
    }
    out
}

/// Block counts of every set partition of `{1..k}`, via restricted growth strings.
pub fn partition_block_counts(k: usize) -> Vec<usize> {
    fn go(i: usize, k: usize, max: usize, out: &mut Vec<usize>) {
        if i == k {
            out.push(max);
            return;
        }
        for b in 0..=max.min(k) {
            go(i + 1, k, if b == max { max + 1 } else { max }, out);
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(0);
    } else {
        go(1, k, 1, &mut out);
    }
    out
}

/// `S(k, r)` by enumeration.
pub fn stirling_enum(k: usize, r: usize) -> u64 {
    partition_block_counts(k).into_iter().filter(|&b| b == r).count() as u64
}

/// `Σ_r S(k,r) w(r) y^r` with `S` from enumeration.
pub fn poly_enum(k: usize, y: f64, weight: impl Fn(usize) -> f64) -> f64 {
    (1..=k).map(|r| stirling_enum(k, r) as f64 * weight(r) * y.powi(r as i32)).sum()
}

pub fn gallagher_weight(r: usize) -> f64 {
    2f64.powi(r as i32) * (1..=r).product::<usize>() as f64
}
