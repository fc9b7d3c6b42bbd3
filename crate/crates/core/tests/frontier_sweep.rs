//! Known-answer tests for the two-asset frontier sweep.

mod common;

use common::assert_close;
use cvrisk_core::frontier::{
    min_risk_row, risk_return_tradeoff_report, two_asset_frontier, two_asset_sigma,
    MinCriterion, SecurityParams, WeightGrid, PAPER_WEIGHT_GRID,
};
use cvrisk_core::round_half_up;

fn pair() -> (SecurityParams, SecurityParams) {
    // The reference security pair used across these tests: A = (12, 20),
    // B = (4, 9), in percent.
    (SecurityParams::new(12.0, 20.0).unwrap(), SecurityParams::new(4.0, 9.0).unwrap())
}

fn row_at<'a>(
    rows: &'a [cvrisk_core::frontier::FrontierRow],
    w1: f64,
) -> &'a cvrisk_core::frontier::FrontierRow {
    rows.iter().find(|r| (r.w1 - w1).abs() < 1e-12).expect("grid row")
}

#[test]
fn uncorrelated_sweep_matches_reference_rows() {
    let (a, b) = pair();
    let rows = two_asset_frontier(&a, &b, 0.0, WeightGrid::Paper).unwrap();
    let r = row_at(&rows, 0.20);
    assert_eq!(round_half_up(r.sigma_p, 2), 8.24);
    assert_eq!(round_half_up(r.mu_p, 2), 5.60);
    assert_eq!(round_half_up(r.cv_p.value().unwrap(), 2), 1.47);
    assert_eq!(round_half_up(r.risk.value(), 2), 24.83);
}

#[test]
fn fully_correlated_sweep_matches_reference_rows() {
    let (a, b) = pair();
    let rows = two_asset_frontier(&a, &b, 1.0, WeightGrid::Paper).unwrap();
    let r = row_at(&rows, 0.85);
    assert_eq!(round_half_up(r.sigma_p, 2), 18.35);
    assert_eq!(round_half_up(r.mu_p, 2), 10.80);
    assert_eq!(round_half_up(r.cv_p.value().unwrap(), 2), 1.70);
    assert_eq!(round_half_up(r.risk.value(), 2), 27.81);
}

#[test]
fn perfect_correlation_collapses_sigma_to_a_line() {
    let (a, b) = pair();
    let rows = two_asset_frontier(&a, &b, 1.0, WeightGrid::Paper).unwrap();
    for r in &rows {
        let linear = r.w1 * a.sigma() + r.w2 * b.sigma();
        assert_close(r.sigma_p, linear, 1e-12, "sigma linear in w1");
    }
}

#[test]
fn anti_correlated_pinch_sits_at_the_hedge_ratio() {
    let (a, b) = pair();
    // Fine grid: the minimum-volatility node must land within one step
    // of sigma2/(sigma1+sigma2) = 9/29, where sigma is (almost) zero.
    let step = 0.01;
    let rows = two_asset_frontier(&a, &b, -1.0, WeightGrid::Uniform { step }).unwrap();
    let min = min_risk_row(&rows, MinCriterion::MinSigma).unwrap();
    let hedge = 9.0 / 29.0;
    assert!((min.w1 - hedge).abs() <= step + 1e-12, "pinch at {}", min.w1);
    assert!(min.sigma_p < 0.15);
}

#[test]
fn risk_is_monotone_in_correlation_for_positive_means() {
    let (a, b) = pair();
    for &w1 in PAPER_WEIGHT_GRID.iter() {
        let mut prev: Option<f64> = None;
        for i in 0..=20 {
            let rho = -1.0 + 2.0 * i as f64 / 20.0;
            let rows = two_asset_frontier(&a, &b, rho, WeightGrid::Paper).unwrap();
            let risk = row_at(&rows, w1).risk.value();
            if let Some(p) = prev {
                assert!(risk >= p - 1e-9, "w1 {w1} rho {rho}: {risk} < {p}");
            }
            prev = Some(risk);
        }
    }
}

#[test]
fn diversification_bound_holds_across_rho() {
    let (a, b) = pair();
    for i in 0..=10 {
        let rho = -1.0 + 2.0 * i as f64 / 10.0;
        let rows = two_asset_frontier(&a, &b, rho, WeightGrid::Paper).unwrap();
        for r in &rows {
            let linear = r.w1 * a.sigma() + r.w2 * b.sigma();
            assert!(r.sigma_p <= linear + 1e-9);
            if rho == 1.0 {
                assert_close(r.sigma_p, linear, 1e-9, "equality at rho 1");
            }
        }
    }
}

#[test]
fn min_rows_on_reference_tables() {
    let (a, b) = pair();
    let hedged = two_asset_frontier(&a, &b, -1.0, WeightGrid::Paper).unwrap();
    assert_eq!(min_risk_row(&hedged, MinCriterion::MinSigma).unwrap().w1, 0.30);
    assert_eq!(min_risk_row(&hedged, MinCriterion::MinCv).unwrap().w1, 0.30);
    assert_eq!(
        round_half_up(min_risk_row(&hedged, MinCriterion::MinSigma).unwrap().sigma_p, 2),
        0.30
    );
    let correlated = two_asset_frontier(&a, &b, 1.0, WeightGrid::Paper).unwrap();
    let least_risky = min_risk_row(&correlated, MinCriterion::MinRisk).unwrap();
    assert_eq!(least_risky.w1, 1.00);
    assert_eq!(round_half_up(least_risky.risk.value(), 2), 27.43);
}

#[test]
fn tradeoff_report_on_the_uncorrelated_table() {
    let (a, b) = pair();
    let rows = two_asset_frontier(&a, &b, 0.0, WeightGrid::Paper).unwrap();
    let report = risk_return_tradeoff_report(&rows).unwrap();
    let at = |mu: f64| report.iter().find(|r| (r.mu_p - mu).abs() < 1e-9).unwrap();
    // Tripling the weight on the high-return leg almost doubles the
    // expected return while risk moves only ~23% -> ~27%.
    assert_eq!(round_half_up(at(6.40).risk.value(), 2), 23.10);
    assert_eq!(round_half_up(at(12.0).risk.value(), 2), 27.43);
    assert_eq!(report[0].marginal_risk_per_unit_return, 0.0);
}

#[test]
fn two_row_marginal_is_the_slope_between_them() {
    let (a, b) = pair();
    let rows = two_asset_frontier(&a, &b, 0.0, WeightGrid::Uniform { step: 0.5 }).unwrap();
    let endpoints = [rows[0], rows[2]];
    let report = risk_return_tradeoff_report(&endpoints).unwrap();
    let expected =
        (endpoints[1].risk.value() - endpoints[0].risk.value()) / (12.0 - 4.0);
    assert_close(report[1].marginal_risk_per_unit_return, expected, 1e-12, "marginal");
    // Anchored to the published endpoint risks.
    assert_eq!(round_half_up(endpoints[0].risk.value(), 2), 32.84);
    assert_eq!(round_half_up(endpoints[1].risk.value(), 2), 27.43);
    assert_close(
        report[1].marginal_risk_per_unit_return,
        (27.43 - 32.84) / 8.0,
        1e-3,
        "rounded marginal",
    );
}

#[test]
fn zero_mean_row_carries_undefined_cv_and_even_odds() {
    // Opposite-sign means cross μ_p = 0 mid-sweep.
    let long = SecurityParams::new(10.0, 15.0).unwrap();
    let short = SecurityParams::new(-10.0, 15.0).unwrap();
    let rows = two_asset_frontier(&long, &short, 0.0, WeightGrid::Uniform { step: 0.5 }).unwrap();
    let mid = &rows[1];
    assert_eq!(mid.mu_p, 0.0);
    assert!(!mid.cv_p.is_defined());
    assert_eq!(mid.risk.value(), 50.0);
    // Undefined CV rows never win the MinCv criterion.
    assert!(min_risk_row(&rows, MinCriterion::MinCv).unwrap().cv_p.is_defined());
}

#[test]
fn slightly_negative_correlation_still_sweeps_cleanly() {
    let (a, b) = pair();
    let rows = two_asset_frontier(&a, &b, -0.3, WeightGrid::Uniform { step: 0.05 }).unwrap();
    for pair in rows.windows(2) {
        assert!(pair[1].mu_p > pair[0].mu_p);
        let direct = two_asset_sigma(pair[1].w1, &a, &b, -0.3).unwrap();
        assert_close(pair[1].sigma_p, direct, 0.0, "sweep vs direct");
    }
}
