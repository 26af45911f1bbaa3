//! Explicit bound coefficients: the moment bound, the `c_2`/`c_3`/`c_4`
//! constants and their closed-form maximizers, and the small-`λ` bounds.

use crate::error::{domain, Result};
use crate::scalar::RealScalar;

use super::{poly_p, BoundContext};

/// Whether `Δ = 0` is accepted. It lies outside `(0, 1)`, but plugging it
/// in reproduces the earlier baselines the improved constants are compared
/// against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaDomain {
    #[default]
    Open,
    AllowZero,
}

fn check_delta<T: RealScalar>(delta: T, allowed: DeltaDomain) -> Result<()> {
    let ok = match allowed {
        DeltaDomain::Open => delta > T::zero() && delta < T::one(),
        DeltaDomain::AllowZero => delta >= T::zero() && delta < T::one(),
    };
    if ok {
        Ok(())
    } else {
        domain(format!("delta = {delta:?} outside (0, 1)"))
    }
}

fn two<T: RealScalar>() -> T {
    T::of_f64(2.0)
}

/// Right-hand side of the moment bound over primes:
/// `(P_{k+1}(ωh/log X) + ε) · X log^k X / (h(ω−1))`.
///
/// `exponent_slack` is the `ε` of the admissible range `1 ≤ h ≤ X^{1−ε}`;
/// the additive `ε` comes from `ctx`.
pub fn thm1_bound<T: RealScalar>(
    k: usize,
    omega: T,
    h: T,
    x: T,
    exponent_slack: T,
    ctx: &BoundContext<T>,
) -> Result<T> {
    if k < 2 {
        return domain(format!("k = {k} must be at least 2"));
    }
    if !(omega > T::one()) {
        return domain(format!("omega = {omega:?} must exceed 1"));
    }
    if !(x > T::one()) {
        return domain(format!("X = {x:?} must exceed 1"));
    }
    let h_max = x.powf(T::one() - exponent_slack);
    if !(h >= T::one() && h <= h_max) {
        return domain(format!("h = {h:?} outside [1, X^(1-eps)] = [1, {h_max:?}]"));
    }
    let log_x = x.ln();
    let p = poly_p(k + 1, omega * h / log_x)?;
    Ok((p + ctx.epsilon) * x * log_x.powi(k as i32) / (h * (omega - T::one())))
}

/// Coefficient `1 − λ(B+ε)/2` of `X/log X` in the lower bound for `|A₁(λ log X)|`.
pub fn thm5_bound<T: RealScalar>(lambda: T, ctx: &BoundContext<T>) -> Result<T> {
    let upper = two::<T>() / ctx.b - ctx.epsilon;
    if !(lambda > T::zero() && lambda < upper) {
        return domain(format!("lambda = {lambda:?} outside (0, 2/B - eps) = (0, {upper:?})"));
    }
    Ok(T::one() - lambda * (ctx.b + ctx.epsilon) / two())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm7Bound<T> {
    pub value: T,
    /// The bracket `c₅ − c₆/η` is not positive, so the bound says nothing.
    pub vacuous: bool,
}

/// `X/(η log X) · (c₅ − c₆/η)` for the conditional lower bound on `|A₁|`.
pub fn thm7_bound<T: RealScalar>(lambda: T, c5: T, c6: T, eta: T, x: T) -> Result<Thm7Bound<T>> {
    if !(c5 > T::zero() && c6 > T::zero()) {
        return domain("c5 and c6 must be positive");
    }
    if !(eta > lambda) {
        return domain(format!("eta = {eta:?} must exceed lambda = {lambda:?}"));
    }
    if !(x > T::one()) {
        return domain(format!("X = {x:?} must exceed 1"));
    }
    let bracket = c5 - c6 / eta;
    Ok(Thm7Bound { value: x / (eta * x.ln()) * bracket, vacuous: bracket <= T::zero() })
}

/// Maximizer of `η ↦ (c₅ − c₆/η)/η` subject to `η > λ`.
///
/// The unconstrained maximum sits at `η = 2c₆/c₅`. When that is not above
/// `λ` the objective decreases on `(λ, ∞)` and the supremum is approached
/// as `η → λ⁺`; `λ` itself is returned in that case.
pub fn thm7_optimal_eta<T: RealScalar>(lambda: T, c5: T, c6: T) -> T {
    let eta = two::<T>() * c6 / c5;
    if eta > lambda {
        eta
    } else {
        lambda
    }
}

/// Gallagher's lower bound `1 − λ` for `λ ∈ (0, 1)`, zero beyond.
pub fn gallagher_floor<T: RealScalar>(lambda: T) -> T {
    (T::one() - lambda).max(T::zero())
}

/// `(λ₁, λ₂)`, the `λ`-interval on which the improved `c₂` bound holds.
pub fn lambda_interval_from_delta<T: RealScalar>(
    delta: T,
    nu: T,
    b: T,
    allowed: DeltaDomain,
) -> Result<(T, T)> {
    check_delta(delta, allowed)?;
    let centre = (T::one() - nu * delta) / (T::one() - delta);
    let half_width = (T::one() - delta) / (two::<T>() * b);
    Ok((centre - half_width, centre + half_width))
}

pub fn lambda_interval<T: RealScalar>(
    ell: usize,
    omega: T,
    nu: T,
    ctx: &BoundContext<T>,
) -> Result<(T, T)> {
    let delta = ctx.delta(ell, omega, nu)?;
    lambda_interval_from_delta(delta, nu, ctx.b, DeltaDomain::Open)
}

/// `(1−Δ)^{-1}(1 − νΔ + (1−Δ)²/(2B))`, the largest admissible `λ` for a
/// given `Δ(ν)`. It coincides with the right end `λ₂` of the interval.
pub fn lambda_star_from_delta<T: RealScalar>(delta: T, nu: T, b: T, allowed: DeltaDomain) -> Result<T> {
    check_delta(delta, allowed)?;
    let one_minus = T::one() - delta;
    Ok((T::one() - nu * delta + one_minus * one_minus / (two::<T>() * b)) / one_minus)
}

/// The `c₂` bound for one parameter triple.
///
/// Inside `(λ₁, λ₂]` this is
/// `max(B/(2(1−Δ)²) · (1 − λ + (1−Δ)²/(2B) + (λ−ν)Δ)², 1 − λ)`.
/// Outside the interval the parabola is not a valid bound and only
/// [`gallagher_floor`] is returned.
pub fn c2_from_delta<T: RealScalar>(delta: T, nu: T, lambda: T, b: T, allowed: DeltaDomain) -> Result<T> {
    let (lo, hi) = lambda_interval_from_delta(delta, nu, b, allowed)?;
    let floor = gallagher_floor(lambda);
    if !(lambda > lo && lambda <= hi) {
        return Ok(floor);
    }
    let one_minus = T::one() - delta;
    let inner = T::one() - lambda + one_minus * one_minus / (two::<T>() * b) + (lambda - nu) * delta;
    let parabola = b / (two::<T>() * one_minus * one_minus) * inner * inner;
    Ok(parabola.max(floor))
}

pub fn c2_closed_form<T: RealScalar>(
    ell: usize,
    omega: T,
    nu: T,
    lambda: T,
    ctx: &BoundContext<T>,
) -> Result<T> {
    let delta = ctx.delta(ell, omega, nu)?;
    c2_from_delta(delta, nu, lambda, ctx.b, DeltaDomain::Open)
}

/// The expression maximized over `(u₁, u₂)` to obtain `c₂`:
/// `[1 + u₁ − λ − (B/2)(1+u₂)u₁² + (λ−u₁−ν)Δ] · u₂/(u₂+1)`.
pub fn rhs_objective<T: RealScalar>(u1: T, u2: T, delta: T, nu: T, lambda: T, b: T) -> T {
    let bracket = T::one() + u1 - lambda - b / two::<T>() * (T::one() + u2) * u1 * u1
        + (lambda - u1 - nu) * delta;
    bracket * u2 / (u2 + T::one())
}

/// Closed-form maximizers `(u₁, u₂)` of [`rhs_objective`].
pub fn u_maximizers_from_delta<T: RealScalar>(
    delta: T,
    nu: T,
    lambda: T,
    b: T,
    allowed: DeltaDomain,
) -> Result<(T, T)> {
    check_delta(delta, allowed)?;
    let sq = (T::one() - delta) * (T::one() - delta);
    let shift = two::<T>() * b * (lambda - T::one() - (lambda - nu) * delta);
    let denom = sq + shift;
    if !(denom > T::zero()) {
        return domain(format!("lambda = {lambda:?} is at or below the left end of its interval"));
    }
    let u2 = (sq - shift) / denom;
    let u1 = (T::one() - delta) / (b * (T::one() + u2));
    Ok((u1, u2))
}

pub fn u_maximizers<T: RealScalar>(
    ell: usize,
    omega: T,
    nu: T,
    lambda: T,
    ctx: &BoundContext<T>,
) -> Result<(T, T)> {
    let delta = ctx.delta(ell, omega, nu)?;
    u_maximizers_from_delta(delta, nu, lambda, ctx.b, DeltaDomain::Open)
}

/// Lower bounds for the three pieces of `2∫ c₂(B, λ) dλ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C3Integrals<T> {
    pub i1: T,
    pub i2: T,
    pub i3: T,
}

impl<T: RealScalar> C3Integrals<T> {
    /// Lower bound for the constant in front of `X log X` in `Σ (p_{i+1} − p_i)²`.
    pub fn sum(&self) -> T {
        self.i1 + self.i2 + self.i3
    }

    /// The earlier constant `1 + 1/(12B²)`, recovered at `Δ = 0`.
    pub fn baseline(b: T) -> T {
        T::one() + T::one() / (T::of_f64(12.0) * b * b)
    }

    /// `c₃ = I₁ + I₂ + I₃ − 1 − 1/(12B²)`.
    pub fn c3(&self, b: T) -> T {
        self.sum() - Self::baseline(b)
    }
}

pub fn c3_integrals_from_delta<T: RealScalar>(
    delta: T,
    nu: T,
    b: T,
    allowed: DeltaDomain,
) -> Result<C3Integrals<T>> {
    check_delta(delta, allowed)?;
    let three = T::of_f64(3.0);
    let b2 = b * b;
    let one_minus = T::one() - delta;
    let i1 = T::one() - T::one() / (T::of_f64(4.0) * b2);
    let cube_arg = delta * (nu - T::one()) / one_minus + (two::<T>() - delta) / (two::<T>() * b);
    let i2 = T::one() / (three * b2) - b / three * cube_arg.powi(3);
    let i3 = one_minus.powi(3) / (three * b2);
    Ok(C3Integrals { i1, i2, i3 })
}

pub fn c3_integrals<T: RealScalar>(
    ell: usize,
    omega: T,
    nu: T,
    ctx: &BoundContext<T>,
) -> Result<C3Integrals<T>> {
    let (lo, hi) = ctx.nu_range();
    if !(nu > lo && nu < hi) {
        return domain(format!("nu = {nu:?} outside ({lo:?}, {hi:?}) for {:?} mode", ctx.mode));
    }
    let delta = ctx.delta(ell, omega, nu)?;
    c3_integrals_from_delta(delta, nu, ctx.b, DeltaDomain::Open)
}

/// `(2αΔ/((α+1)B))^α · Δ/(α+1)` for `α > 0`; `Δ` itself at `α = 0`.
pub fn c4_from_delta<T: RealScalar>(delta: T, alpha: T, b: T) -> Result<T> {
    if !(alpha >= T::zero()) {
        return domain(format!("alpha = {alpha:?} must be non-negative"));
    }
    if alpha == T::zero() {
        return Ok(delta);
    }
    let eta = c4_optimal_eta(delta, alpha, b);
    Ok(eta.powf(alpha) * delta / (alpha + T::one()))
}

/// `η = 2αΔ/((α+1)B)`, the maximizer of `η^α (Δ − ηB/2)`.
pub fn c4_optimal_eta<T: RealScalar>(delta: T, alpha: T, b: T) -> T {
    two::<T>() * alpha * delta / ((alpha + T::one()) * b)
}
