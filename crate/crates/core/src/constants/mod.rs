//! Closed-form quantities: moment polynomials, the `R` and `Δ` constants,
//! the singular series and the explicit bound coefficients.

mod moments;
mod singular;
mod theorems;

pub use moments::{delta, delta_tilde, moment_r, moment_r_tilde, poly_p, poly_p_tilde};
pub use singular::{
    singular_series, singular_series_tuple, twin_prime_constant, twin_prime_product, EulerProduct,
    SingularSeries, SingularSeriesConfig,
};
pub use theorems::{
    c2_closed_form, c2_from_delta, c3_integrals, c3_integrals_from_delta, c4_from_delta,
    c4_optimal_eta, gallagher_floor, lambda_interval, lambda_interval_from_delta,
    lambda_star_from_delta, rhs_objective, thm1_bound, thm5_bound, thm7_bound, thm7_optimal_eta,
    u_maximizers, u_maximizers_from_delta, C3Integrals, DeltaDomain, Thm7Bound,
};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::scalar::RealScalar;

/// Admissible values of the Bombieri–Davenport constant `B` from the literature.
pub mod literature {
    /// Chen.
    pub const B_CHEN: f64 = 3.9171;
    /// Wu, valid for every `n`.
    pub const B_WU: f64 = 3.91045;
    /// Fouvry–Grupp, valid for `n ≤ log^A X`.
    pub const B_FOUVRY_GRUPP: f64 = 3.454;
    /// Conjectural optimum, implied by the k-tuple conjecture.
    pub const B_CONJECTURAL: f64 = 1.0;
}

/// Which family of moment polynomials the bounds are built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Sieve upper bounds (`P_k`, `Δ`) with a literature value of `B`.
    #[default]
    Unconditional,
    /// The k-tuple conjecture (`P̃_k`, `Δ̃`) with `B = 1`.
    KTuple,
}

/// Parameters shared by every bound evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundContext<T> {
    pub b: T,
    pub epsilon: T,
    pub x: T,
    pub mode: Mode,
}

impl<T: RealScalar> BoundContext<T> {
    /// Validates `B ∈ [1, 4]`, `ε ∈ [0, 1]` and `X > 1`. In k-tuple mode `B`
    /// is forced to 1 whatever value is passed.
    pub fn new(b: T, epsilon: T, x: T, mode: Mode) -> Result<Self> {
        let b = if mode == Mode::KTuple { T::one() } else { b };
        if !(b >= T::one() && b <= T::of_f64(4.0)) {
            return domain(format!("B = {b:?} outside [1, 4]"));
        }
        if !(epsilon >= T::zero() && epsilon <= T::one()) {
            return domain(format!("epsilon = {epsilon:?} outside [0, 1]"));
        }
        if !(x > T::one()) || !x.is_finite() {
            return domain(format!("X = {x:?} must be finite and > 1"));
        }
        Ok(Self { b, epsilon, x, mode })
    }

    pub fn unconditional(b: T) -> Result<Self> {
        Self::new(b, T::zero(), T::of_f64(1e8), Mode::Unconditional)
    }

    pub fn k_tuple() -> Self {
        Self::new(T::one(), T::zero(), T::of_f64(1e8), Mode::KTuple).expect("valid defaults")
    }

    pub fn with_epsilon(self, epsilon: T) -> Result<Self> {
        Self::new(self.b, epsilon, self.x, self.mode)
    }

    pub fn with_x(self, x: T) -> Result<Self> {
        Self::new(self.b, self.epsilon, x, self.mode)
    }

    /// `Δ_{ℓ,ω}(λ)` or `Δ̃_{ℓ,ω}(λ)` according to the mode.
    pub fn delta(&self, ell: usize, omega: T, lambda: T) -> Result<T> {
        match self.mode {
            Mode::Unconditional => delta(ell, omega, lambda),
            Mode::KTuple => delta_tilde(ell, omega, lambda),
        }
    }

    /// Lower threshold for `λ` in `Δ` (1/2, or 0 under the k-tuple conjecture).
    pub fn lambda_threshold(&self) -> T {
        match self.mode {
            Mode::Unconditional => T::of_f64(0.5),
            Mode::KTuple => T::zero(),
        }
    }

    /// Open interval of admissible `ν`: `(1/2, 1 − 1/(2B))`, or `(0, 1/2)`.
    pub fn nu_range(&self) -> (T, T) {
        let two = T::of_f64(2.0);
        match self.mode {
            Mode::Unconditional => (T::of_f64(0.5), T::one() - T::one() / (two * self.b)),
            Mode::KTuple => (T::zero(), T::of_f64(0.5)),
        }
    }
}
