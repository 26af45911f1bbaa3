//! Finite-`X` checks of the lemmas and theorems on sieved data.
//!
//! Each check returns one or more [`CheckReport`]s. Exact checks compare
//! integers or rationals built from the fixed-point `Λ` weights and never use
//! slack. Asymptotic checks take their slack from the context and options,
//! and a failure below [`VerifyOptions::scale_threshold`] is reported as
//! inconclusive rather than as a hard failure.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::{c2_closed_form, c3_integrals, moment_r, thm5_bound, BoundContext, Mode, SingularSeries};
use crate::constants::literature::B_FOUVRY_GRUPP;
use crate::error::{domain, Error, Result};
use crate::optimizer::{optimize_c1, optimize_c3, optimize_c4, optimize_lambda_star, SearchConfig};
use crate::sieve::{for_each_tuple, log_weight, PrimeDataset};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Lt,
    Ge,
    Gt,
    /// `|lhs − rhs| ≤ tol`.
    Within(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    /// Gates the exit code.
    Hard,
    /// Depends on a conjectural constant; reported only.
    Conjectural,
    /// Asymptotic statement that failed at a scale too small to be meaningful.
    InconclusiveScale,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relation: Relation,
    /// Positive when the relation holds with room to spare.
    pub margin: f64,
    pub pass: bool,
    pub params: BTreeMap<String, f64>,
    pub provenance: String,
    pub status: CheckStatus,
}

impl CheckReport {
    /// Report whose verdict follows from comparing `lhs` and `rhs` as floats.
    pub fn compare(name: &str, lhs: f64, relation: Relation, rhs: f64, provenance: &str) -> Self {
        let margin = match relation {
            Relation::Le | Relation::Lt => rhs - lhs,
            Relation::Ge | Relation::Gt => lhs - rhs,
            Relation::Within(tol) => tol - (lhs - rhs).abs(),
        };
        let pass = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Within(tol) => (lhs - rhs).abs() <= tol,
        };
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            relation,
            margin,
            pass,
            params: BTreeMap::new(),
            provenance: provenance.to_string(),
            status: CheckStatus::Hard,
        }
    }

    /// Report whose verdict was decided exactly by the caller; `lhs`/`rhs`
    /// are informational approximations.
    fn exact(name: &str, lhs: f64, relation: Relation, rhs: f64, pass: bool, provenance: &str) -> Self {
        Self { pass, ..Self::compare(name, lhs, relation, rhs, provenance) }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// Marks a failing asymptotic check as inconclusive when `x` is small.
    fn asymptotic(mut self, x: u64, opts: &VerifyOptions) -> Self {
        if !self.pass && (x as f64) < opts.scale_threshold {
            self.status = CheckStatus::InconclusiveScale;
        }
        self
    }

    fn conjectural_if(mut self, cond: bool) -> Self {
        if cond {
            self.status = CheckStatus::Conjectural;
        }
        self
    }

    /// True unless this is a hard failure.
    pub fn gates_ok(&self) -> bool {
        self.pass || self.status != CheckStatus::Hard
    }
}

/// Slack constants and default parameters for the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub singseries_c: f64,
    /// Largest `X` used for the averaged singular series.
    pub singseries_limit: u64,
    /// `T` for the lower Bombieri–Davenport check; `⌊log X⌋` when `None`.
    pub bd_t: Option<u64>,
    pub bd_n_max: u64,
    pub z1_n: u64,
    pub z1_delta: f64,
    pub z1_slack: f64,
    pub thm1_k: u32,
    pub thm1_lambdas: Vec<f64>,
    pub thm1_omega: f64,
    pub thm2_lambda: f64,
    pub thm4_lambda: f64,
    pub thm4_alpha: f64,
    pub thm5_lambda: f64,
    pub prime_prime_capped: bool,
    pub proof_x: u64,
    pub proof_h: f64,
    pub proof_k: u32,
    pub proof_omega: f64,
    pub scale_threshold: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            singseries_c: 5.0,
            singseries_limit: 1_000_000,
            bd_t: None,
            bd_n_max: 20,
            z1_n: 1,
            z1_delta: 0.5,
            z1_slack: 0.01,
            thm1_k: 2,
            thm1_lambdas: vec![0.5, 1.0, 2.0],
            thm1_omega: 1.1,
            thm2_lambda: 1.0,
            thm4_lambda: 1.0,
            thm4_alpha: 1.0,
            thm5_lambda: 0.5,
            prime_prime_capped: true,
            proof_x: 500,
            proof_h: 10.0,
            proof_k: 2,
            proof_omega: 2.0,
            scale_threshold: 1e5,
        }
    }
}

fn log_x(ds: &PrimeDataset) -> f64 {
    (ds.limit() as f64).ln()
}

/// `D(X) = Σ_{h≤X} 𝔖(h) − X − ½ log X` against `C (log X)^{2/3}`.
///
/// The average is taken over differences `h`: `𝔖(n)` belongs to the
/// difference `2n` and odd differences contribute nothing, so the sum runs
/// over `n ≤ X/2`. Summed over `n ≤ X` instead, the mean would be 2. The
/// deviation from `X − ½ log X` is reported as well.
pub fn check_singseries_average(x: u64, series: &SingularSeries, c: f64) -> Result<CheckReport> {
    if x < 100 {
        return domain(format!("X = {x} below 100"));
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for n in 1..=x / 2 {
        let y = series.value(n)? - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let lx = (x as f64).ln();
    let d = sum - x as f64 - 0.5 * lx;
    let scale = lx.powf(2.0 / 3.0);
    Ok(CheckReport::compare("singseries_average", d.abs(), Relation::Le, c * scale, "averaged singular series")
        .with("X", x as f64)
        .with("C", c)
        .with("D", d)
        .with("D_minus_half_log", sum - x as f64 + 0.5 * lx)
        .with("normalized", d.abs() / scale)
        .with("mean", sum / x as f64))
}

/// `Σ_{n≤T} Z(X;2n) > X Σ_{n≤T} 𝔖(n) − (1/4 + ε) X log X`.
pub fn check_bd_lower(
    ds: &PrimeDataset,
    series: &SingularSeries,
    t: u64,
    ctx: &BoundContext<f64>,
    opts: &VerifyOptions,
) -> Result<CheckReport> {
    let x = ds.limit() as f64;
    if t == 0 || 2 * t > ds.limit() {
        return domain(format!("T = {t} outside [1, X/2]"));
    }
    let mut z = 0.0;
    let mut s = 0.0;
    for n in 1..=t {
        z += ds.twin_pairs(n)?.weighted_f64();
        s += series.value(n)?;
    }
    let rhs = x * s - (0.25 + ctx.epsilon) * x * log_x(ds);
    Ok(CheckReport::compare("bd_lower", z, Relation::Gt, rhs, "Bombieri–Davenport lower bound for twin sums")
        .with("X", x)
        .with("T", t as f64)
        .with("epsilon", ctx.epsilon)
        .with("singular_sum", s)
        .asymptotic(ds.limit(), opts))
}

/// `Z(X;2n) < (B+ε) 𝔖(n) X` for every `n ≤ n_max`; reports the worst `n`.
pub fn check_bd_upper(
    ds: &PrimeDataset,
    series: &SingularSeries,
    n_max: u64,
    ctx: &BoundContext<f64>,
    opts: &VerifyOptions,
) -> Result<CheckReport> {
    let x = ds.limit() as f64;
    if n_max == 0 || 2 * n_max > ds.limit() {
        return domain(format!("n_max = {n_max} outside [1, X/2]"));
    }
    let mut worst = (0u64, f64::NEG_INFINITY, 0.0, 0.0);
    for n in 1..=n_max {
        let z = ds.twin_pairs(n)?.weighted_f64();
        let main = series.value(n)? * x;
        let ratio = z / main;
        if ratio > worst.1 {
            worst = (n, ratio, z, main);
        }
    }
    let (n, ratio, z, main) = worst;
    let bound = ctx.b + ctx.epsilon;
    Ok(CheckReport::compare("bd_upper", z, Relation::Lt, bound * main, "Bombieri–Davenport upper bound for twin counts")
        .with("X", x)
        .with("n_max", n_max as f64)
        .with("worst_n", n as f64)
        .with("worst_ratio", ratio)
        .with("B", ctx.b)
        .with("epsilon", ctx.epsilon)
        .asymptotic(ds.limit(), opts)
        .conjectural_if(ctx.b < B_FOUVRY_GRUPP))
}

/// `Z/log²X ≤ Z₁` exactly, and `Z₁ ≤ (1+δ) Z/log²X + slack · X/log²X`.
pub fn check_z1_sandwich(ds: &PrimeDataset, n: u64, opts: &VerifyOptions) -> Result<Vec<CheckReport>> {
    let t = ds.twin_pairs(n)?;
    let x = ds.limit() as f64;
    let l2 = log_x(ds).powi(2);
    let w_x = log_weight(ds.limit()) as u128;
    let exact_ok = t.weighted <= t.pairs as u128 * w_x * w_x;
    let z_norm = t.weighted_f64() / l2;
    let left = CheckReport::exact(
        "z1_sandwich.left",
        z_norm,
        Relation::Le,
        t.pairs as f64,
        exact_ok,
        "weighted versus unweighted twin counts",
    )
    .with("X", x)
    .with("n", n as f64);
    let rhs = (1.0 + opts.z1_delta) * z_norm + opts.z1_slack * x / l2;
    let right = CheckReport::compare(
        "z1_sandwich.right",
        t.pairs as f64,
        Relation::Le,
        rhs,
        "weighted versus unweighted twin counts",
    )
    .with("X", x)
    .with("n", n as f64)
    .with("delta", opts.z1_delta)
    .with("slack", opts.z1_slack)
    .asymptotic(ds.limit(), opts);
    Ok(vec![left, right])
}

/// Moment bound over primes with `h = λ log X`, for `ψ` and for `π`.
pub fn check_thm1(
    ds: &PrimeDataset,
    lambda: f64,
    k: u32,
    omega: f64,
    ctx: &BoundContext<f64>,
    opts: &VerifyOptions,
) -> Result<Vec<CheckReport>> {
    if k < 2 {
        return domain(format!("k = {k} must be at least 2"));
    }
    if !(lambda > 0.0) {
        return domain(format!("lambda = {lambda} must be positive"));
    }
    let x = ds.limit() as f64;
    let lx = log_x(ds);
    let h = lambda * lx;
    let r = moment_r(k as usize + 1, omega, lambda)? + ctx.epsilon;
    let psi_sum = ds.moment_sum_over_primes(h, k)?;
    let psi_rhs = r * x * lx.powi(k as i32 - 1);
    let pi_sum = ds.prime_count_moment(h, k)? as f64;
    let pi_rhs = r * x / lx;
    let tag = format!("lambda={lambda}");
    let mk = |name: &str, lhs: f64, rhs: f64| {
        CheckReport::compare(&format!("{name}[{tag}]"), lhs, Relation::Le, rhs, "moment bound for primes in short intervals")
            .with("X", x)
            .with("lambda", lambda)
            .with("k", k as f64)
            .with("omega", omega)
            .with("epsilon", ctx.epsilon)
            .with("ratio", lhs / rhs)
            .asymptotic(ds.limit(), opts)
    };
    Ok(vec![mk("thm1.psi", psi_sum, psi_rhs), mk("thm1.pi", pi_sum, pi_rhs)])
}

/// `Σ_{n≤K/2} Z₁(X;2n) = Σ_{p≤X, p odd} (π(min(p+K, X)) − π(p))`, exact.
pub fn check_a_z1_link(ds: &PrimeDataset, k: f64) -> Result<CheckReport> {
    if !(k >= 2.0) {
        return domain(format!("K = {k} must be at least 2"));
    }
    let half = (k / 2.0).floor() as u64;
    let mut z1 = 0u64;
    for n in 1..=half.min(ds.limit() / 2) {
        z1 += ds.twin_pairs(n)?.pairs;
    }
    let pairs = ds.capped_pair_count(k, true);
    Ok(CheckReport::exact("a_z1_link", z1 as f64, Relation::Within(0.0), pairs as f64, z1 == pairs, "pair counts by difference")
        .with("X", ds.limit() as f64)
        .with("K", k))
}

/// `|A(λ log X)| ≥ (c₁(λ) − ε) X/log X`, plus the bracket estimate
/// `Σ_{n≤λ log X/2} Z₁ > (λ/2 − 1/4 − ε/2) X/log X` and the exact pair link.
pub fn check_thm2(
    ds: &PrimeDataset,
    lambda: f64,
    cfg: &SearchConfig<f64>,
    ctx: &BoundContext<f64>,
    opts: &VerifyOptions,
) -> Result<Vec<CheckReport>> {
    let x = ds.limit() as f64;
    let lx = log_x(ds);
    let k = lambda * lx;
    let c1 = optimize_c1(lambda, cfg, ctx)?;
    let card = ds.set_cardinalities(k, opts.prime_prime_capped)?;
    let main = CheckReport::compare(
        "thm2.a_lower",
        card.a as f64,
        Relation::Ge,
        (c1.value - ctx.epsilon) * x / lx,
        "positive proportion of primes followed by a prime within λ log X",
    )
    .with("X", x)
    .with("lambda", lambda)
    .with("c1", c1.value)
    .with("ell", c1.ell as f64)
    .with("omega", c1.omega)
    .with("epsilon", ctx.epsilon)
    .with("proportion", card.a as f64 * lx / x)
    .with("capped", opts.prime_prime_capped as u8 as f64)
    .asymptotic(ds.limit(), opts);

    let half = (k / 2.0).floor() as u64;
    let mut z1 = 0u64;
    for n in 1..=half.min(ds.limit() / 2) {
        z1 += ds.twin_pairs(n)?.pairs;
    }
    let shift = if ctx.mode == Mode::KTuple { 0.0 } else { 0.25 };
    let brackets = CheckReport::compare(
        "thm2.brackets",
        z1 as f64,
        Relation::Gt,
        (lambda / 2.0 - shift - ctx.epsilon / 2.0) * x / lx,
        "twin counts summed over differences up to λ log X",
    )
    .with("X", x)
    .with("lambda", lambda)
    .with("epsilon", ctx.epsilon)
    .asymptotic(ds.limit(), opts);
    Ok(vec![main, brackets, check_a_z1_link(ds, k)?])
}

/// The `B₁`, squared-gap and gap-moment bounds, with the exact
/// Cauchy–Schwarz floor for the squared gaps.
pub fn check_thm3_thm4(
    ds: &PrimeDataset,
    cfg: &SearchConfig<f64>,
    ctx: &BoundContext<f64>,
    opts: &VerifyOptions,
) -> Result<Vec<CheckReport>> {
    let x = ds.limit() as f64;
    let lx = log_x(ds);
    let mut out = Vec::new();

    let star = optimize_lambda_star(cfg, ctx)?;
    let nu = star.nu.expect("nu is searched");
    let baseline_lambda = 1.0 + 1.0 / (2.0 * ctx.b);
    for (tag, lambda) in [("lambda_star", star.value), ("baseline_lambda", baseline_lambda)] {
        let c2 = c2_closed_form(star.ell, star.omega, nu, lambda, ctx)?;
        let card = ds.set_cardinalities(lambda * lx, opts.prime_prime_capped)?;
        out.push(
            CheckReport::compare(
                &format!("thm3.b1_lower[{tag}]"),
                card.b1 as f64,
                Relation::Ge,
                (c2 - ctx.epsilon) * x,
                "positive proportion of prime-free intervals",
            )
            .with("X", x)
            .with("lambda", lambda)
            .with("c2", c2)
            .with("ell", star.ell as f64)
            .with("omega", star.omega)
            .with("nu", nu)
            .with("epsilon", ctx.epsilon)
            .with("proportion", card.b1 as f64 / x)
            .asymptotic(ds.limit(), opts),
        );
    }

    let c3 = optimize_c3(cfg, ctx)?;
    let bound = c3.extra["bound"];
    let c3_check = c3_integrals(c3.ell, c3.omega, c3.nu.expect("nu is searched"), ctx)?;
    let (le, gt) = ds.gap_totals(f64::INFINITY);
    debug_assert_eq!(gt.count, 0);
    let sq = le.sum_squares;
    out.push(
        CheckReport::compare(
            "thm3.gap_squares",
            sq as f64,
            Relation::Ge,
            (bound - ctx.epsilon) * x * lx,
            "second moment of prime gaps",
        )
        .with("X", x)
        .with("B", ctx.b)
        .with("c3", c3_check.c3(ctx.b))
        .with("bound", bound)
        .with("epsilon", ctx.epsilon)
        .with("normalized", sq as f64 / (x * lx))
        .asymptotic(ds.limit(), opts),
    );
    let cs_ok = (le.sum as u128) * (le.sum as u128) <= (le.count as u128) * sq;
    out.push(
        CheckReport::exact(
            "thm3.cauchy_schwarz",
            sq as f64,
            Relation::Ge,
            (le.sum as f64).powi(2) / le.count as f64,
            cs_ok,
            "Cauchy–Schwarz on the telescoping gap sum",
        )
        .with("X", x)
        .with("gap_sum", le.sum as f64)
        .with("gap_count", le.count as f64),
    );

    let (lambda, alpha) = (opts.thm4_lambda, opts.thm4_alpha);
    let c4 = optimize_c4(lambda, alpha, cfg, ctx)?;
    let moment = ds.gap_moment_sum(&crate::sieve::GapQuery {
        lambda,
        alpha,
        side: crate::sieve::GapSide::AtMost,
    })?;
    out.push(
        CheckReport::compare(
            "thm4.gap_moment",
            moment,
            Relation::Ge,
            (c4.value - ctx.epsilon) * x * lx.powf(alpha - 1.0),
            "moments of short prime gaps",
        )
        .with("X", x)
        .with("lambda", lambda)
        .with("alpha", alpha)
        .with("c4", c4.value)
        .with("eta", c4.extra["eta"])
        .with("epsilon", ctx.epsilon)
        .asymptotic(ds.limit(), opts),
    );
    Ok(out)
}

/// Lower bound for `|A₁(λ log X)|`, the intermediate upper bound for
/// `|A(K)|`, and the chain from gaps to `|B(λ log X)|`.
pub fn check_thm5_cor6(
    ds: &PrimeDataset,
    lambda: f64,
    ctx: &BoundContext<f64>,
    opts: &VerifyOptions,
) -> Result<Vec<CheckReport>> {
    let coeff = thm5_bound(lambda, ctx)?;
    let x = ds.limit() as f64;
    let lx = log_x(ds);
    let k = lambda * lx;
    let card = ds.set_cardinalities(k, opts.prime_prime_capped)?;
    let conj = ctx.b < B_FOUVRY_GRUPP;
    let mut out = vec![
        CheckReport::compare(
            "thm5.a1_lower",
            card.a1 as f64,
            Relation::Ge,
            coeff * x / lx,
            "primes not followed by a prime within λ log X",
        )
        .with("X", x)
        .with("lambda", lambda)
        .with("B", ctx.b)
        .with("epsilon", ctx.epsilon)
        .with("capped", opts.prime_prime_capped as u8 as f64)
        .asymptotic(ds.limit(), opts)
        .conjectural_if(conj),
        CheckReport::compare(
            "thm5.a_upper",
            card.a as f64,
            Relation::Lt,
            (ctx.b + ctx.epsilon) * k * x / (2.0 * lx * lx),
            "primes followed by a prime within λ log X",
        )
        .with("X", x)
        .with("K", k)
        .with("B", ctx.b)
        .asymptotic(ds.limit(), opts)
        .conjectural_if(conj),
    ];

    // every prime p_i ≤ X sees min(p_i − p_{i−1}, ⌊K⌋) integers m of B(K)
    // below it, and shifting the index costs at most one term
    let kf = k.floor() as u64;
    let chain: u64 = ds.gaps().iter().map(|&g| g.min(kf)).sum::<u64>() - kf.min(ds.gaps()[ds.gaps().len() - 1]);
    out.push(
        CheckReport::exact(
            "cor6.b_chain",
            card.b as f64,
            Relation::Ge,
            chain as f64,
            card.b >= chain,
            "integers followed by a prime within λ log X",
        )
        .with("X", x)
        .with("K", k),
    );
    out.push(
        CheckReport::compare(
            "cor6.b_lower",
            card.b as f64,
            Relation::Ge,
            lambda * coeff * x - k,
            "integers followed by a prime within λ log X",
        )
        .with("X", x)
        .with("lambda", lambda)
        .with("proportion", card.b as f64 / x)
        .asymptotic(ds.limit(), opts)
        .conjectural_if(conj),
    );
    Ok(out)
}

/// `Σ_{p_i ≤ X} (p_{i+1} − p_i) = p_{π(X)+1} − 2`, exact.
pub fn check_telescoping(ds: &PrimeDataset) -> CheckReport {
    let sum: u64 = ds.gaps().iter().sum();
    let rhs = ds.next_prime_after_limit() - 2;
    CheckReport::exact("telescoping", sum as f64, Relation::Within(0.0), rhs as f64, sum == rhs, "telescoping gap sum")
        .with("X", ds.limit() as f64)
}

/// `π(X) > X/log X` for `X ≥ 17`.
pub fn check_rosser_schoenfeld(ds: &PrimeDataset) -> Result<CheckReport> {
    if ds.limit() < 17 {
        return domain("the prime counting lower bound needs X ≥ 17");
    }
    let x = ds.limit() as f64;
    Ok(CheckReport::compare("rosser_schoenfeld", ds.pi_limit() as f64, Relation::Gt, x / x.ln(), "Rosser–Schoenfeld")
        .with("X", x))
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn fixed(w: &BigUint, k: u32) -> BigRational {
    crate::sieve::fixed_to_rational(w, k)
}

/// The exact first steps behind the moment bound: monotonicity averaging
/// of `ψ_k`, the tuple expansion of `J_k`, and the average over primes.
pub fn check_proof_machinery(
    ds: &PrimeDataset,
    x: u64,
    h: f64,
    k: u32,
    omega: f64,
) -> Result<Vec<CheckReport>> {
    if !(2..=3).contains(&k) {
        return domain(format!("k = {k} outside {{2, 3}}"));
    }
    if !(h > 0.0) || !(omega > 1.0) {
        return domain(format!("need h > 0 and omega > 1, got h = {h}, omega = {omega}"));
    }
    if (x as f64) < h {
        return domain(format!("X = {x} below h = {h}"));
    }
    let params = |r: CheckReport| r.with("X", x as f64).with("h", h).with("k", k as f64).with("omega", omega);

    // (i) ψ_k(X,h) ≤ ((ω−1)h)^{-1} ∫_h^{ωh} ψ_k(X,u) du
    let profile = ds.psi_k_profile(k, x, omega * h)?;
    let psi = fixed(&profile.psi_k_weight(h), k);
    let integral = profile.integral(h, omega * h);
    let width = BigRational::from_float((omega - 1.0) * h).ok_or_else(|| Error::Range("window".into()))?;
    let average = integral / width;
    let mono = params(CheckReport::exact(
        "proof.monotonicity",
        to_f64(&psi),
        Relation::Le,
        to_f64(&average),
        psi <= average,
        "ψ_k is non-decreasing in the window length",
    ));

    // (ii) J_k(X,h) = Σ₁ + Σ₂ − Σ₀, where Σ₀ removes the part of the
    // expansion that would need t < 0
    let (j, _) = ds.selberg_integrals_in::<BigRational>(x as f64, h, k)?;
    let h_r = BigRational::from_float(h).expect("finite h");
    let x_r = BigRational::from_integer(x.into());
    let (mut s1, mut s2, mut s0) = (BigRational::zero(), BigRational::zero(), BigRational::zero());
    for_each_tuple(ds, k, x as f64 + h, h, |t| {
        let w = fixed(&t.weight, k);
        let big_n = BigRational::from_integer(t.b.into());
        let span = BigRational::from_integer((t.b - t.a).into());
        if t.a <= x {
            s1 += w.clone() * (h_r.clone() - span);
            if big_n < h_r {
                s0 += w * (h_r.clone() - big_n);
            }
        } else if big_n <= x_r.clone() + h_r.clone() {
            s2 += w * (x_r.clone() + h_r.clone() - big_n);
        }
    })?;
    let expansion = s1.clone() + s2.clone() - s0.clone();
    let integral_form = ds.psi_k_profile(k, x, h)?.integral(0.0, h);
    let media = params(CheckReport::exact(
        "proof.tuple_expansion",
        to_f64(&j),
        Relation::Within(0.0),
        to_f64(&expansion),
        j == expansion && s1 == integral_form,
        "expansion of the Selberg integral over tuples",
    ))
    .with("sigma0", to_f64(&s0))
    .with("sigma1", to_f64(&s1))
    .with("sigma2", to_f64(&s2));

    // (iii) Σ_{m≤X} Λ(m)(ψ(m+h)−ψ(m))^k ≤ ψ_{k+1}(X,h)
    let lhs = ds.lambda_window_moment(x, h, k)?;
    let rhs = ds.psi_k_profile(k + 1, x, h)?.psi_k_weight(h);
    let avg = params(CheckReport::exact(
        "proof.average_over_primes",
        to_f64(&fixed(&lhs, k + 1)),
        Relation::Le,
        to_f64(&fixed(&rhs, k + 1)),
        lhs <= rhs,
        "weighted window moment bounded by tuple count",
    ));
    Ok(vec![mono, media, avg])
}

/// Settings for [`run_all`].
#[derive(Debug, Clone)]
pub struct Suite<'a> {
    pub ds: &'a PrimeDataset,
    pub series: &'a SingularSeries,
    pub ctx: BoundContext<f64>,
    pub cfg: SearchConfig<f64>,
    pub opts: VerifyOptions,
}

/// Every check, run in parallel and sorted by name.
pub fn run_all(suite: &Suite<'_>) -> Result<Vec<CheckReport>> {
    let Suite { ds, series, ctx, cfg, opts } = suite;
    let lx = log_x(ds);
    type Job<'b> = Box<dyn Fn() -> Result<Vec<CheckReport>> + Send + Sync + 'b>;
    let mut jobs: Vec<Job<'_>> = vec![
        Box::new(|| Ok(vec![check_singseries_average(opts.singseries_limit.min(ds.limit()), series, opts.singseries_c)?])),
        Box::new(|| {
            let t = opts.bd_t.unwrap_or(lx.floor() as u64).max(1);
            Ok(vec![check_bd_lower(ds, series, t, ctx, opts)?])
        }),
        Box::new(|| Ok(vec![check_bd_upper(ds, series, opts.bd_n_max, ctx, opts)?])),
        Box::new(|| check_z1_sandwich(ds, opts.z1_n, opts)),
        Box::new(|| check_thm2(ds, opts.thm2_lambda, cfg, ctx, opts)),
        Box::new(|| check_thm3_thm4(ds, cfg, ctx, opts)),
        Box::new(|| check_thm5_cor6(ds, opts.thm5_lambda, ctx, opts)),
        Box::new(|| Ok(vec![check_telescoping(ds)])),
        Box::new(|| Ok(vec![check_rosser_schoenfeld(ds)?])),
    ];
    for &lambda in &opts.thm1_lambdas {
        jobs.push(Box::new(move || check_thm1(ds, lambda, opts.thm1_k, opts.thm1_omega, ctx, opts)));
    }
    if ds.coverage() >= opts.proof_x + 2 * opts.proof_h.ceil() as u64 {
        jobs.push(Box::new(|| check_proof_machinery(ds, opts.proof_x, opts.proof_h, opts.proof_k, opts.proof_omega)));
    }
    let results: Vec<Result<Vec<CheckReport>>> = jobs.par_iter().map(|job| job()).collect();
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(reports)
}

/// True when no report is a hard failure.
pub fn suite_passes(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::gates_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::SingularSeriesConfig;
    use crate::sieve::sieve_primes;

    fn series() -> SingularSeries {
        SingularSeries::new(&SingularSeriesConfig::default()).unwrap()
    }

    #[test]
    fn margins_follow_relations() {
        let r = CheckReport::compare("a", 1.0, Relation::Le, 3.0, "");
        assert!(r.pass && r.margin == 2.0);
        let r = CheckReport::compare("a", 1.0, Relation::Ge, 3.0, "");
        assert!(!r.pass && r.margin == -2.0);
        let r = CheckReport::compare("a", 1.0, Relation::Within(0.5), 1.25, "");
        assert!(r.pass && r.margin == 0.25);
        assert!(!CheckReport::compare("a", 1.0, Relation::Lt, 1.0, "").pass);
    }

    #[test]
    fn small_scale_failures_are_inconclusive() {
        let opts = VerifyOptions::default();
        let r = CheckReport::compare("a", 2.0, Relation::Le, 1.0, "").asymptotic(1000, &opts);
        assert_eq!(r.status, CheckStatus::InconclusiveScale);
        assert!(r.gates_ok());
        let r = CheckReport::compare("a", 2.0, Relation::Le, 1.0, "").asymptotic(1_000_000, &opts);
        assert_eq!(r.status, CheckStatus::Hard);
        assert!(!r.gates_ok());
    }

    #[test]
    fn singseries_small() {
        let r = check_singseries_average(100, &series(), 5.0).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(check_singseries_average(99, &series(), 5.0).is_err());
    }

    #[test]
    fn z1_left_is_exact_even_when_empty() {
        let ds = sieve_primes(1000, 256).unwrap();
        let opts = VerifyOptions::default();
        for n in [1, 7, 100, 499] {
            let r = check_z1_sandwich(&ds, n, &opts).unwrap();
            assert!(r[0].pass);
        }
        let r = check_z1_sandwich(&ds, 499, &opts).unwrap();
        assert_eq!((r[0].lhs, r[0].rhs), (0.0, 0.0));
    }

    #[test]
    fn proof_machinery_at_small_scale() {
        let ds = sieve_primes(600, 256).unwrap();
        for k in [2, 3] {
            for r in check_proof_machinery(&ds, 200, 5.5, k, 2.0).unwrap() {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn telescoping_and_prime_counting() {
        let ds = sieve_primes(100_000, 4096).unwrap();
        assert!(check_telescoping(&ds).pass);
        assert!(check_rosser_schoenfeld(&ds).unwrap().pass);
        let r = check_a_z1_link(&ds, 12.0).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn thm5_range() {
        let ds = sieve_primes(100_000, 4096).unwrap();
        let ctx = BoundContext::new(B_FOUVRY_GRUPP, 0.01, 1e5, Mode::Unconditional).unwrap();
        let opts = VerifyOptions::default();
        assert!(check_thm5_cor6(&ds, 0.6, &ctx, &opts).is_err());
        for r in check_thm5_cor6(&ds, 0.5, &ctx, &opts).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }
}
