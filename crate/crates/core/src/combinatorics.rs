//! Exact Stirling numbers of the second kind and the weighted coefficient
//! rows of the moment polynomials.

use std::sync::LazyLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::scalar::Scalar;

/// Largest `ℓ` searched by the optimizer.
pub const DEFAULT_ELL_MAX: usize = 64;
/// The optimizer evaluates `R_{ℓ+1}`, so the table reaches one past `ℓ_max`.
pub const DEFAULT_K_MAX: usize = DEFAULT_ELL_MAX + 1;

static TABLE: LazyLock<StirlingTable> = LazyLock::new(|| StirlingTable::new(DEFAULT_K_MAX));

/// The process-wide table, built on first use and immutable afterwards.
pub fn stirling_table() -> &'static StirlingTable {
    &TABLE
}

/// Coefficient weighting applied to a row of Stirling numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `2^r · r!`, the unconditional (sieve upper bound) moment polynomial.
    Sieve,
    /// Unit weights, the polynomial obtained under the k-tuple conjecture.
    Unit,
}

/// Triangular table of `S(k, r)` for `1 ≤ r ≤ k ≤ k_max`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    k_max: usize,
    // rows[k - 1][r - 1] = S(k, r)
    rows: Vec<Vec<BigUint>>,
    sieve_weights: Vec<BigUint>,
}

impl StirlingTable {
    pub fn new(k_max: usize) -> Self {
        assert!(k_max >= 1, "k_max must be positive");
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(k_max);
        rows.push(vec![BigUint::one()]);
        for k in 2..=k_max {
            let prev = &rows[k - 2];
            let mut row = Vec::with_capacity(k);
            for r in 1..=k {
                let stay = if r < k { &prev[r - 1] * BigUint::from(r) } else { BigUint::zero() };
                let join = if r > 1 { prev[r - 2].clone() } else { BigUint::zero() };
                row.push(stay + join);
            }
            rows.push(row);
        }

        // 2^r r! = 2r · (2^{r-1} (r-1)!)
        let mut sieve_weights = Vec::with_capacity(k_max);
        let mut w = BigUint::one();
        for r in 1..=k_max {
            w *= BigUint::from(2 * r);
            sieve_weights.push(w.clone());
        }
        Self { k_max, rows, sieve_weights }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn stirling2(&self, k: usize, r: usize) -> Result<&BigUint> {
        if k == 0 || r == 0 || r > k || k > self.k_max {
            return domain(format!("S({k}, {r}) needs 1 <= r <= k <= {}", self.k_max));
        }
        Ok(&self.rows[k - 1][r - 1])
    }

    pub fn row(&self, k: usize) -> Result<&[BigUint]> {
        if k == 0 || k > self.k_max {
            return domain(format!("row {k} outside 1..={}", self.k_max));
        }
        Ok(&self.rows[k - 1])
    }

    /// Coefficients `(S(k,r)·w_r)_{r=1..k}` of the moment polynomial of degree `k`.
    pub fn weighted_row(&self, k: usize, weight: Weight) -> Result<Vec<BigUint>> {
        let row = self.row(k)?;
        Ok(match weight {
            Weight::Unit => row.to_vec(),
            Weight::Sieve => row.iter().zip(&self.sieve_weights).map(|(s, w)| s * w).collect(),
        })
    }
}

/// Weighted rows of a [`StirlingTable`] converted to a scalar type, so that
/// polynomial evaluation does no big-integer work.
#[derive(Debug, Clone)]
pub struct MomentCoefficients<T> {
    sieve: Vec<Vec<T>>,
    unit: Vec<Vec<T>>,
}

impl<T: Scalar> MomentCoefficients<T> {
    pub fn from_table(table: &StirlingTable) -> Self {
        let convert = |weight| {
            (1..=table.k_max())
                .map(|k| {
                    table
                        .weighted_row(k, weight)
                        .expect("k within table")
                        .iter()
                        .map(T::of_biguint)
                        .collect()
                })
                .collect()
        };
        Self { sieve: convert(Weight::Sieve), unit: convert(Weight::Unit) }
    }

    pub fn k_max(&self) -> usize {
        self.sieve.len()
    }

    pub fn row(&self, k: usize, weight: Weight) -> Result<&[T]> {
        if k == 0 || k > self.k_max() {
            return domain(format!("polynomial degree {k} outside 1..={}", self.k_max()));
        }
        Ok(match weight {
            Weight::Sieve => &self.sieve[k - 1],
            Weight::Unit => &self.unit[k - 1],
        })
    }
}
