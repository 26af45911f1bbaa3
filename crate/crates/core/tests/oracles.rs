//! Library results against independent oracles: enumeration, trial
//! division, direct Λ summation and grid searches.

mod common;

use common::*;
use pil_core::combinatorics::{stirling_table, Weight};
use pil_core::constants::{
    delta, delta_tilde, moment_r, poly_p, poly_p_tilde, rhs_objective, singular_series, singular_series_tuple,
    thm1_bound, thm5_bound, thm7_bound, thm7_optimal_eta, twin_prime_product, u_maximizers, c2_closed_form,
    c4_from_delta, c4_optimal_eta, SingularSeries, SingularSeriesConfig,
};
use pil_core::optimizer::{optimize_c1, optimize_c4};
use pil_core::sieve::{GapQuery, GapSide};
use pil_core::verify::check_singseries_average;
use pil_core::{BoundContext, PrimeDataset, SearchConfig, SieveOptions};

fn dataset(x: u64) -> PrimeDataset {
    PrimeDataset::build(x, &SieveOptions::default()).unwrap()
}

fn unconditional() -> BoundContext<f64> {
    BoundContext::unconditional(3.454).unwrap()
}

#[test]
fn stirling_matches_partition_enumeration() {
    let table = stirling_table();
    for k in 1..=9 {
        for r in 1..=k {
            assert_eq!(table.stirling2(k, r).unwrap().to_string(), stirling_enum(k, r).to_string(), "S({k},{r})");
        }
    }
    assert_eq!(stirling_enum(4, 2), 7);
}

#[test]
fn weighted_row_matches_enumeration() {
    let row: Vec<String> = stirling_table().weighted_row(3, Weight::Sieve).unwrap().iter().map(|v| v.to_string()).collect();
    let oracle: Vec<String> = (1..=3).map(|r| (stirling_enum(3, r) as f64 * gallagher_weight(r)).to_string()).collect();
    assert_eq!(row, oracle);
    assert_eq!(row, ["2", "24", "48"]);
}

#[test]
fn polynomials_match_enumeration() {
    assert_eq!(poly_p(3, 1.0).unwrap(), poly_enum(3, 1.0, gallagher_weight));
    assert_eq!(poly_p(3, 1.0).unwrap(), 74.0);
    let bell4 = partition_block_counts(4).len() as f64;
    assert_eq!(poly_p_tilde(4, 1.0).unwrap(), bell4);
    assert_eq!(bell4, 15.0);
    for k in 1..=8 {
        for y in [0.3, 1.0, 2.5] {
            let a = poly_p(k, y).unwrap();
            let b = poly_enum(k, y, gallagher_weight);
            assert!((a - b).abs() <= 1e-12 * b, "P_{k}({y})");
            let a = poly_p_tilde(k, y).unwrap();
            let b = poly_enum(k, y, |_| 1.0);
            assert!((a - b).abs() <= 1e-12 * b, "P~_{k}({y})");
        }
    }
}

#[test]
fn moment_r_cross_checks_polynomial() {
    let want = poly_enum(3, 0.75, gallagher_weight) / (0.5 * 0.5);
    assert!((moment_r(3, 1.5, 0.5).unwrap() - want).abs() <= 1e-12 * want);
}

#[test]
fn delta_at_two_two_one() {
    // R_{3,2}(1) = P₃(2) = 484 and R̃_{3,2}(1) = P̃₃(2) = 22
    let r = poly_enum(3, 2.0, gallagher_weight);
    let rt = poly_enum(3, 2.0, |_| 1.0);
    assert_eq!((r, rt), (484.0, 22.0));
    assert!((delta(2, 2.0, 1.0).unwrap() - 0.0625 / r).abs() < 1e-15);
    assert!((delta_tilde(2, 2.0, 1.0).unwrap() - 0.25 / rt).abs() < 1e-15);
}

#[test]
fn twin_constant_is_stable_under_refinement() {
    let a = twin_prime_product(10_000_000);
    let b = twin_prime_product(20_000_000);
    assert_eq!(format!("{:.6}", a.value), format!("{:.6}", b.value));
    assert!((a.value - b.value).abs() <= a.tail_bound);
    assert_eq!(format!("{:.6}", a.value), "1.320324");
    // direct product over trial-division primes up to 10⁴
    let direct: f64 = 2.0 * primes_to(10_000).iter().skip(1).map(|&p| 1.0 - 1.0 / ((p - 1) * (p - 1)) as f64).product::<f64>();
    assert!((direct - a.value).abs() <= 2.0 / 10_000.0);
}

#[test]
fn pair_offsets_match_singular_series() {
    let cfg = SingularSeriesConfig::default();
    for n in [1u64, 3, 5, 15] {
        let pair = singular_series_tuple(&[0, 2 * n], &cfg).unwrap();
        let s = singular_series(n, &cfg).unwrap();
        let tol = pair.tail_bound * pair.value + 2.0 / cfg.prime_cutoff as f64;
        assert!((pair.value - s).abs() <= tol, "n = {n}: {} vs {s}", pair.value);
    }
}

#[test]
fn thm1_bound_by_direct_substitution() {
    let ctx = unconditional();
    let (x, h, omega) = (1e6f64, 10.0, 1.1);
    let lx = x.ln();
    let want = poly_enum(3, omega * h / lx, gallagher_weight) * x * lx * lx / (h * (omega - 1.0));
    let got = thm1_bound(2, omega, h, x, 0.0, &ctx).unwrap();
    assert!(got > 0.0 && (got - want).abs() <= 1e-12 * want);
}

#[test]
fn thm5_at_half() {
    let got = thm5_bound(0.5, &unconditional()).unwrap();
    assert!((got - (1.0 - 0.5 * 1.727)).abs() < 1e-12);
}

#[test]
fn thm7_eta_maximizes_on_a_grid() {
    let (lambda, c5, c6, x) = (1.0, 0.1, 1.0, 1e9);
    let eta = thm7_optimal_eta(lambda, c5, c6);
    assert_eq!(eta, 20.0);
    let best = thm7_bound(lambda, c5, c6, eta, x).unwrap().value;
    for i in 1..=4000 {
        let e = lambda + i as f64 * 0.01;
        assert!(thm7_bound(lambda, c5, c6, e, x).unwrap().value <= best * (1.0 + 1e-12));
    }
}

#[test]
fn u_maximizers_beat_a_grid() {
    let ctx = unconditional();
    let (ell, omega, nu, lambda) = (12, 2491.0 / 2250.0, 0.666856, 1.14);
    let d = ctx.delta(ell, omega, nu).unwrap();
    let (u1, u2) = u_maximizers(ell, omega, nu, lambda, &ctx).unwrap();
    let best = rhs_objective(u1, u2, d, nu, lambda, ctx.b);
    let closed = c2_closed_form(ell, omega, nu, lambda, &ctx).unwrap();
    assert!((best - closed).abs() <= 1e-12);
    let mut grid_max = f64::NEG_INFINITY;
    for i in 0..=400 {
        for j in 0..=400 {
            let (a, b) = (i as f64 * 0.002, j as f64 * 0.005);
            grid_max = grid_max.max(rhs_objective(a, b, d, nu, lambda, ctx.b));
        }
    }
    assert!(grid_max <= best + 1e-15);
    assert!(best - grid_max < 1e-6);
}

#[test]
fn c4_eta_maximizes_on_a_grid() {
    let ctx = unconditional();
    let cfg = SearchConfig::default();
    let c1 = optimize_c1(1.0, &cfg, &ctx).unwrap();
    let p = optimize_c4(1.0, 1.0, &cfg, &ctx).unwrap();
    let d = c1.delta;
    assert!((p.value - (d / ctx.b) * d / 2.0).abs() <= 1e-15);
    let eta = c4_optimal_eta(d, 1.0, ctx.b);
    let f = |e: f64| e * (d - e * ctx.b / 2.0);
    for i in 0..=1000 {
        assert!(f(i as f64 * eta / 500.0) <= f(eta) + 1e-18);
    }
    assert!((c4_from_delta(d, 1.0, ctx.b).unwrap() - f(eta)).abs() <= 1e-15);
}

#[test]
fn primes_and_psi_against_trial_division() {
    assert_eq!(dataset(10).primes(), [2, 3, 5, 7]);
    assert_eq!(dataset(100).pi_limit(), 25);
    assert_eq!(dataset(2).primes(), [2]);
    let ds = dataset(5000);
    assert_eq!(ds.primes(), primes_to(5000).as_slice());
    let psi = psi_float_table(5000);
    for u in [1u64, 10, 97, 1000, 4999, 5000] {
        assert!((ds.psi(u as f64).unwrap() - psi[u as usize]).abs() < 1e-8, "psi({u})");
    }
    assert!((dataset(100).psi(10.0).unwrap() - 2520f64.ln()).abs() < 1e-8);
}

#[test]
fn twin_counts_against_brute_force() {
    let ds = dataset(100);
    assert_eq!(ds.twin_pairs(1).unwrap().pairs, 8);
    for x in [100u64, 1000, 3001] {
        let ds = dataset(x);
        for n in 1..=20 {
            let want = primes_to(x).iter().filter(|&&p| p + 2 * n <= x && is_prime(p + 2 * n)).count() as u64;
            assert_eq!(ds.twin_pairs(n).unwrap().pairs, want, "X = {x}, n = {n}");
        }
    }
}

fn window_moment_oracle(x: u64, h: f64, k: i32) -> f64 {
    let psi = psi_float_table(x + h.ceil() as u64 + 1);
    primes_to(x)
        .into_iter()
        .map(|p| {
            let top = (p as f64 + h).floor() as u64;
            let inc: f64 = (p + 1..=top).map(|m| psi[m as usize] - psi[m as usize - 1]).sum();
            inc.powi(k)
        })
        .sum()
}

#[test]
fn moment_sum_against_double_loop() {
    let ds = dataset(100);
    let want = window_moment_oracle(100, 10.0, 2);
    assert!((ds.moment_sum_over_primes(10.0, 2).unwrap() - want).abs() <= 1e-9 * want);
    let tiny = dataset(10);
    assert_eq!(tiny.moment_sum_over_primes(0.5, 2).unwrap(), 0.0);
    assert_eq!(window_moment_oracle(10, 0.5, 2), 0.0);
}

#[test]
fn psi2_small_example_by_double_loop() {
    let ds = dataset(20);
    let support: Vec<u64> = (1..=22).filter(|&m| prime_power_base(m).is_some()).collect();
    assert_eq!(&support[..12], [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]);
    let mut want = 0u128;
    for &a in &support {
        for &b in &support {
            if a.min(b) <= 20 && a.abs_diff(b) <= 2 {
                want += lambda_fixed(a) as u128 * lambda_fixed(b) as u128;
            }
        }
    }
    let got = ds.psi_k_profile(2, 20, 2.0).unwrap().psi_k_weight(2.0);
    assert_eq!(got.to_string(), want.to_string());
    assert_eq!(ds.psi_k_bruteforce_weight(2.0, 2, 20).unwrap(), got);
}

#[test]
fn set_cardinalities_against_direct_loops() {
    for (x, k) in [(30u64, 6.0), (1000, 7.5), (2000, 20.0)] {
        let ds = dataset(x);
        let ps = primes_to(x + 200);
        let next = |p: u64| *ps.iter().find(|&&q| q > p).unwrap();
        let a = primes_to(x).iter().filter(|&&p| (next(p) - p) as f64 <= k && next(p) <= x).count() as u64;
        let b = (1..=x).filter(|&m| (next(m) - m) as f64 <= k).count() as u64;
        let c = ds.set_cardinalities(k, true).unwrap();
        assert_eq!((c.a, c.b, c.b + c.b1), (a, b, x), "X = {x}, K = {k}");
    }
}

#[test]
fn gap_moment_against_direct_loop() {
    let ds = dataset(100);
    let mut ps = primes_to(100);
    ps.push(101);
    let t = 100f64.ln();
    let want: f64 = ps.windows(2).map(|w| (w[1] - w[0]) as f64).filter(|&g| g <= t).map(|g| g * g).sum();
    let q = GapQuery { lambda: 1.0, alpha: 2.0, side: GapSide::AtMost };
    assert_eq!(ds.gap_moment_sum(&q).unwrap(), want);
    assert_eq!(ps.len() - 1, 25);
}

#[test]
fn singular_series_average_at_100() {
    let series = SingularSeries::new(&SingularSeriesConfig::default()).unwrap();
    let r = check_singseries_average(100, &series, 5.0).unwrap();
    // 𝔖(n) = 2c₀ Π_{p | n, p > 2} (p−1)/(p−2), with factors by trial division
    let c = twin_prime_product(10_000_000).value;
    let sum: f64 = (1..=50u64)
        .map(|n| c * (3..=n).filter(|&p| is_prime(p) && n % p == 0).map(|p| (p - 1) as f64 / (p - 2) as f64).product::<f64>())
        .sum();
    let d = sum - 100.0 - 0.5 * 100f64.ln();
    assert!((r.params["D"] - d).abs() < 1e-9);
}
