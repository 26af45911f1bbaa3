//! Nested searches over `(ℓ, ω, ν)` for the optimized constants.
//!
//! For each `ℓ` the `ω` search runs on `t = log(ω − 1)`: a coarse grid
//! brackets the best point and golden-section refines inside the bracket.
//! `ν` is scanned on a grid and then refined by successively finer grids.
//! Work over `ℓ` is spread across threads; results are merged in `ℓ` order
//! so the tie-break (smallest `ℓ`, then smallest `ω`) is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{
    c2_closed_form, c3_integrals, c4_from_delta, c4_optimal_eta, lambda_interval,
    lambda_star_from_delta, BoundContext, C3Integrals, DeltaDomain, Mode,
};
use crate::error::{domain, Result};
use crate::scalar::RealScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    C1,
    C2,
    C3,
    C4,
    LambdaStar,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::C1 => "c1",
            Objective::C2 => "c2",
            Objective::C3 => "c3",
            Objective::C4 => "c4",
            Objective::LambdaStar => "lambda_star",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaStrategy {
    /// Coarse bracket then golden-section.
    #[default]
    Golden,
    /// Dense grid then golden-section in the neighbouring cells.
    DenseGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig<T> {
    pub ell_range: (usize, usize),
    pub omega_range: (T, T),
    pub nu_grid_step: T,
    pub nu_refine_step: T,
    pub tol: T,
    pub mode: Mode,
    pub omega_strategy: OmegaStrategy,
}

const COARSE_POINTS: usize = 48;
const DENSE_POINTS: usize = 2048;
const MAX_GOLDEN_STEPS: usize = 200;
const BOUNDARY_CLAMP: f64 = 1e-6;

impl<T: RealScalar> Default for SearchConfig<T> {
    fn default() -> Self {
        Self {
            ell_range: (2, 64),
            omega_range: (T::of_f64(1.0 + BOUNDARY_CLAMP), T::of_f64(16.0)),
            nu_grid_step: T::of_f64(1e-3),
            nu_refine_step: T::of_f64(1e-6),
            tol: T::of_f64(1e-9),
            mode: Mode::Unconditional,
            omega_strategy: OmegaStrategy::Golden,
        }
    }
}

impl<T: RealScalar> SearchConfig<T> {
    pub fn for_mode(mode: Mode) -> Self {
        Self { mode, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let (l0, l1) = self.ell_range;
        if l0 < 2 || l1 < l0 || l1 + 1 > crate::combinatorics::DEFAULT_K_MAX {
            return domain(format!("ell range [{l0}, {l1}] must lie in [2, 64]"));
        }
        let (w0, w1) = self.omega_range;
        if !(w0 > T::one() && w1 > w0 && w1.is_finite()) {
            return domain(format!("omega range ({w0:?}, {w1:?}] must satisfy 1 < lo < hi"));
        }
        if !(self.tol > T::zero()) || !(self.nu_grid_step > T::zero()) || !(self.nu_refine_step > T::zero()) {
            return domain("tolerance and grid steps must be positive");
        }
        Ok(())
    }
}

/// An optimized constant with the parameters that attain it.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchPoint<T> {
    pub objective: Objective,
    pub ell: usize,
    pub omega: T,
    pub nu: Option<T>,
    pub lambda: Option<T>,
    pub alpha: Option<T>,
    pub value: T,
    /// `Δ` (or `Δ̃`) at the argmax.
    pub delta: T,
    /// False when no parameter triple made the improved bound applicable.
    pub admissible: bool,
    /// Secondary quantities such as the `c₃` lower bound or the optimal `η`.
    pub extra: BTreeMap<&'static str, T>,
}

#[derive(Debug, Clone, Copy)]
struct Best<T> {
    ell: usize,
    omega: T,
    nu: Option<T>,
    value: T,
}

fn better<T: RealScalar>(cand: &Best<T>, cur: &Best<T>) -> bool {
    cand.value > cur.value
        || (cand.value == cur.value && (cand.ell, cand.omega) < (cur.ell, cur.omega))
}

fn check_mode<T: RealScalar>(cfg: &SearchConfig<T>, ctx: &BoundContext<T>) -> Result<()> {
    cfg.validate()?;
    if cfg.mode != ctx.mode {
        return domain(format!("search mode {:?} differs from context mode {:?}", cfg.mode, ctx.mode));
    }
    Ok(())
}

/// Best `ω` for a fixed `ℓ` (and `ν`). Evaluations that fail count as `−∞`.
fn search_omega<T, F>(cfg: &SearchConfig<T>, f: F) -> Option<(T, T)>
where
    T: RealScalar,
    F: Fn(T) -> Option<T>,
{
    let (w0, w1) = cfg.omega_range;
    let t0 = (w0 - T::one()).ln();
    let t1 = (w1 - T::one()).ln();
    let omega_at = |t: T| (T::one() + t.exp()).max(w0).min(w1);
    let mut best: Option<(T, T)> = None;
    let mut consider = |omega: T, value: Option<T>| -> Option<T> {
        let v = value?;
        if !v.is_finite() {
            return None;
        }
        if best.is_none_or(|(bw, bv)| v > bv || (v == bv && omega < bw)) {
            best = Some((omega, v));
        }
        Some(v)
    };

    let points = match cfg.omega_strategy {
        OmegaStrategy::Golden => COARSE_POINTS,
        OmegaStrategy::DenseGrid => DENSE_POINTS,
    };
    let step = (t1 - t0) / T::of_u64((points - 1) as u64);
    let mut grid_best = (0usize, None::<T>);
    for i in 0..points {
        let t = if i + 1 == points { t1 } else { t0 + step * T::of_u64(i as u64) };
        let omega = omega_at(t);
        if let Some(v) = consider(omega, f(omega)) {
            if grid_best.1.is_none_or(|bv| v > bv) {
                grid_best = (i, Some(v));
            }
        }
    }
    grid_best.1?;

    let i = grid_best.0;
    let mut a = if i == 0 { t0 } else { t0 + step * T::of_u64((i - 1) as u64) };
    let mut b = if i + 1 >= points { t1 } else { t0 + step * T::of_u64((i + 1) as u64) };
    let ratio = (T::of_f64(5.0).sqrt() - T::one()) / T::of_f64(2.0);
    let eval = |t: T, consider: &mut dyn FnMut(T, Option<T>) -> Option<T>| {
        let omega = omega_at(t);
        consider(omega, f(omega)).unwrap_or(T::neg_infinity())
    };
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let mut fc = eval(c, &mut consider);
    let mut fd = eval(d, &mut consider);
    for _ in 0..MAX_GOLDEN_STEPS {
        if b.exp() - a.exp() < cfg.tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = eval(c, &mut consider);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = eval(d, &mut consider);
        }
    }
    best
}

/// Best `(ℓ, ω)` for a fixed `ν`.
fn search_ell_omega<T, F>(cfg: &SearchConfig<T>, nu: Option<T>, f: &F) -> Option<Best<T>>
where
    T: RealScalar,
    F: Fn(usize, T, Option<T>) -> Option<T> + Sync,
{
    let (l0, l1) = cfg.ell_range;
    let per_ell: Vec<Option<Best<T>>> = (l0..=l1)
        .into_par_iter()
        .map(|ell| {
            search_omega(cfg, |omega| f(ell, omega, nu)).map(|(omega, value)| Best { ell, omega, nu, value })
        })
        .collect();
    let mut best: Option<Best<T>> = None;
    for cand in per_ell.into_iter().flatten() {
        if best.as_ref().is_none_or(|cur| better(&cand, cur)) {
            best = Some(cand);
        }
    }
    best
}

/// Grid over `ν` with successive refinement, around [`search_ell_omega`].
fn search_full<T, F>(cfg: &SearchConfig<T>, ctx: &BoundContext<T>, f: &F) -> Result<Option<Best<T>>>
where
    T: RealScalar,
    F: Fn(usize, T, Option<T>) -> Option<T> + Sync,
{
    let (lo, hi) = ctx.nu_range();
    let clamp = T::of_f64(BOUNDARY_CLAMP);
    let (lo, hi) = (lo + clamp, hi - clamp);
    if !(hi > lo) {
        return domain(format!("empty nu range for B = {:?} in {:?} mode", ctx.b, ctx.mode));
    }
    let mut best: Option<Best<T>> = None;
    let visit = |nu: T, best: &mut Option<Best<T>>| {
        if let Some(cand) = search_ell_omega(cfg, Some(nu), f) {
            if best.as_ref().is_none_or(|cur| cand.value > cur.value) {
                *best = Some(cand);
            }
        }
    };
    let mut nu = lo;
    let mut i = 0u64;
    while nu < hi {
        visit(nu, &mut best);
        i += 1;
        nu = lo + cfg.nu_grid_step * T::of_u64(i);
    }
    visit(hi, &mut best);

    let mut step = cfg.nu_grid_step;
    while step > cfg.nu_refine_step * T::of_f64(1.5) {
        let Some(centre) = best.and_then(|b| b.nu) else { break };
        step = (step / T::of_f64(10.0)).max(cfg.nu_refine_step);
        for j in -10i32..=10 {
            let cand = centre + step * T::of_f64(j as f64);
            if j != 0 && cand >= lo && cand <= hi {
                visit(cand, &mut best);
            }
        }
    }
    Ok(best)
}

fn point<T: RealScalar>(objective: Objective, b: Best<T>, delta: T) -> SearchPoint<T> {
    SearchPoint {
        objective,
        ell: b.ell,
        omega: b.omega,
        nu: b.nu,
        lambda: None,
        alpha: None,
        value: b.value,
        delta,
        admissible: true,
        extra: BTreeMap::new(),
    }
}

fn no_point() -> crate::Error {
    crate::Error::Range("no finite objective value in the search region".into())
}

/// `c₁(λ) = sup_{ℓ,ω} Δ_{ℓ,ω}(λ)`.
pub fn optimize_c1<T: RealScalar>(lambda: T, cfg: &SearchConfig<T>, ctx: &BoundContext<T>) -> Result<SearchPoint<T>> {
    check_mode(cfg, ctx)?;
    if !(lambda > ctx.lambda_threshold()) {
        return domain(format!("lambda = {lambda:?} must exceed {:?}", ctx.lambda_threshold()));
    }
    let f = |ell, omega, _| ctx.delta(ell, omega, lambda).ok();
    let best = search_ell_omega(cfg, None, &f).ok_or_else(no_point)?;
    let mut p = point(Objective::C1, best, best.value);
    p.lambda = Some(lambda);
    Ok(p)
}

/// [`optimize_c1`] at several `λ`, in parallel.
pub fn sweep_c1<T: RealScalar>(
    lambdas: &[T],
    cfg: &SearchConfig<T>,
    ctx: &BoundContext<T>,
) -> Result<Vec<SearchPoint<T>>> {
    lambdas.par_iter().map(|&l| optimize_c1(l, cfg, ctx)).collect()
}

/// The best `λ` for which the `c₂` parabola applies.
pub fn optimize_lambda_star<T: RealScalar>(cfg: &SearchConfig<T>, ctx: &BoundContext<T>) -> Result<SearchPoint<T>> {
    check_mode(cfg, ctx)?;
    let f = |ell, omega, nu: Option<T>| {
        let nu = nu?;
        let d = ctx.delta(ell, omega, nu).ok()?;
        lambda_star_from_delta(d, nu, ctx.b, DeltaDomain::Open).ok()
    };
    let best = search_full(cfg, ctx, &f)?.ok_or_else(no_point)?;
    let nu = best.nu.expect("nu searched");
    let d = ctx.delta(best.ell, best.omega, nu)?;
    let mut p = point(Objective::LambdaStar, best, d);
    p.lambda = Some(best.value);
    Ok(p)
}

/// `c₂(B, λ)`, never below the Gallagher floor.
pub fn optimize_c2<T: RealScalar>(lambda: T, cfg: &SearchConfig<T>, ctx: &BoundContext<T>) -> Result<SearchPoint<T>> {
    check_mode(cfg, ctx)?;
    if !(lambda > T::zero()) {
        return domain(format!("lambda = {lambda:?} must be positive"));
    }
    let f = |ell, omega, nu: Option<T>| c2_closed_form(ell, omega, nu?, lambda, ctx).ok();
    let best = search_full(cfg, ctx, &f)?.ok_or_else(no_point)?;
    let nu = best.nu.expect("nu searched");
    let d = ctx.delta(best.ell, best.omega, nu)?;
    let (l1, l2) = lambda_interval(best.ell, best.omega, nu, ctx)?;
    let mut p = point(Objective::C2, best, d);
    p.lambda = Some(lambda);
    p.admissible = lambda > l1 && lambda <= l2;
    p.extra.insert("lambda1", l1);
    p.extra.insert("lambda2", l2);
    Ok(p)
}

/// `c₃(B)`, with the full lower bound `I₁ + I₂ + I₃` in `extra["bound"]`.
pub fn optimize_c3<T: RealScalar>(cfg: &SearchConfig<T>, ctx: &BoundContext<T>) -> Result<SearchPoint<T>> {
    check_mode(cfg, ctx)?;
    let f = |ell, omega, nu: Option<T>| c3_integrals(ell, omega, nu?, ctx).ok().map(|i| i.c3(ctx.b));
    let best = search_full(cfg, ctx, &f)?.ok_or_else(no_point)?;
    let nu = best.nu.expect("nu searched");
    let i = c3_integrals(best.ell, best.omega, nu, ctx)?;
    let d = ctx.delta(best.ell, best.omega, nu)?;
    let mut p = point(Objective::C3, best, d);
    p.extra.insert("bound", i.sum());
    p.extra.insert("baseline", C3Integrals::baseline(ctx.b));
    p.extra.insert("i1", i.i1);
    p.extra.insert("i2", i.i2);
    p.extra.insert("i3", i.i3);
    Ok(p)
}

/// `c₄(λ, α)`, with the optimal `η` in `extra["eta"]`.
pub fn optimize_c4<T: RealScalar>(
    lambda: T,
    alpha: T,
    cfg: &SearchConfig<T>,
    ctx: &BoundContext<T>,
) -> Result<SearchPoint<T>> {
    if !(alpha >= T::zero()) {
        return domain(format!("alpha = {alpha:?} must be non-negative"));
    }
    let mut p = if alpha == T::zero() {
        optimize_c1(lambda, cfg, ctx)?
    } else {
        check_mode(cfg, ctx)?;
        if !(lambda > ctx.lambda_threshold()) {
            return domain(format!("lambda = {lambda:?} must exceed {:?}", ctx.lambda_threshold()));
        }
        let f = |ell, omega, _| c4_from_delta(ctx.delta(ell, omega, lambda).ok()?, alpha, ctx.b).ok();
        let best = search_ell_omega(cfg, None, &f).ok_or_else(no_point)?;
        let d = ctx.delta(best.ell, best.omega, lambda)?;
        let mut p = point(Objective::C4, best, d);
        p.lambda = Some(lambda);
        p
    };
    p.objective = Objective::C4;
    p.alpha = Some(alpha);
    p.extra.insert("eta", c4_optimal_eta(p.delta, alpha, ctx.b));
    Ok(p)
}

/// Re-evaluates a reported argmax through the closed forms.
pub fn evaluate<T: RealScalar>(p: &SearchPoint<T>, ctx: &BoundContext<T>) -> Result<T> {
    let need = |v: Option<T>, name: &str| v.ok_or_else(|| crate::Error::Domain(format!("{name} missing")));
    match p.objective {
        Objective::C1 => ctx.delta(p.ell, p.omega, need(p.lambda, "lambda")?),
        Objective::LambdaStar => {
            let nu = need(p.nu, "nu")?;
            lambda_star_from_delta(ctx.delta(p.ell, p.omega, nu)?, nu, ctx.b, DeltaDomain::Open)
        }
        Objective::C2 => c2_closed_form(p.ell, p.omega, need(p.nu, "nu")?, need(p.lambda, "lambda")?, ctx),
        Objective::C3 => Ok(c3_integrals(p.ell, p.omega, need(p.nu, "nu")?, ctx)?.c3(ctx.b)),
        Objective::C4 => {
            let d = ctx.delta(p.ell, p.omega, need(p.lambda, "lambda")?)?;
            c4_from_delta(d, need(p.alpha, "alpha")?, ctx.b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::literature::B_FOUVRY_GRUPP;

    fn small_cfg(mode: Mode) -> SearchConfig<f64> {
        SearchConfig { ell_range: (8, 14), nu_grid_step: 1e-2, ..SearchConfig::for_mode(mode) }
    }

    #[test]
    fn c1_at_two() {
        let ctx = BoundContext::unconditional(B_FOUVRY_GRUPP).unwrap();
        let p = optimize_c1(2.0, &small_cfg(Mode::Unconditional), &ctx).unwrap();
        assert_eq!(p.ell, 11);
        assert!((p.value - 0.012664565697).abs() < 1e-10, "{}", p.value);
        assert!((p.omega - 1.10059).abs() < 1e-3);
        assert_eq!(evaluate(&p, &ctx).unwrap(), p.value);
    }

    #[test]
    fn c1_rejects_small_lambda() {
        let ctx = BoundContext::unconditional(B_FOUVRY_GRUPP).unwrap();
        assert!(optimize_c1(0.5, &SearchConfig::default(), &ctx).is_err());
        let kt = BoundContext::k_tuple();
        assert!(optimize_c1(0.3, &SearchConfig::for_mode(Mode::KTuple), &kt).is_ok());
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let ctx = BoundContext::k_tuple();
        assert!(optimize_c1(1.0, &SearchConfig::default(), &ctx).is_err());
    }

    #[test]
    fn dense_grid_agrees_with_golden() {
        let ctx = BoundContext::unconditional(B_FOUVRY_GRUPP).unwrap();
        let golden = optimize_c1(1.5, &small_cfg(Mode::Unconditional), &ctx).unwrap();
        let dense_cfg = SearchConfig { omega_strategy: OmegaStrategy::DenseGrid, ..small_cfg(Mode::Unconditional) };
        let dense = optimize_c1(1.5, &dense_cfg, &ctx).unwrap();
        assert_eq!(golden.ell, dense.ell);
        assert!((golden.value - dense.value).abs() < 1e-12);
    }

    #[test]
    fn lambda_star_unconditional() {
        let ctx = BoundContext::unconditional(B_FOUVRY_GRUPP).unwrap();
        let p = optimize_lambda_star(&small_cfg(Mode::Unconditional), &ctx).unwrap();
        assert!(p.value >= 1.145358 - 1e-6, "{}", p.value);
        assert_eq!(p.ell, 12);
        assert!((p.nu.unwrap() - 0.666856).abs() < 1e-2);
    }

    #[test]
    fn c4_collapses_to_c1() {
        let ctx = BoundContext::unconditional(B_FOUVRY_GRUPP).unwrap();
        let cfg = small_cfg(Mode::Unconditional);
        let c1 = optimize_c1(1.0, &cfg, &ctx).unwrap();
        let c4 = optimize_c4(1.0, 0.0, &cfg, &ctx).unwrap();
        assert_eq!(c1.value, c4.value);
        let c4_one = optimize_c4(1.0, 1.0, &cfg, &ctx).unwrap();
        let expected = c1.value / B_FOUVRY_GRUPP * c1.value / 2.0;
        assert!((c4_one.value - expected).abs() < 1e-14);
        assert!((c4_one.extra["eta"] - c1.value / B_FOUVRY_GRUPP).abs() < 1e-14);
    }

    #[test]
    fn empty_nu_range() {
        let ctx = BoundContext::unconditional(1.0).unwrap();
        assert!(optimize_c3(&SearchConfig::default(), &ctx).is_err());
    }
}
