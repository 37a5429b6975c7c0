use std::f64::consts::{E, LN_2, PI};

use infoaging::oracle::{cross_check, empirical_acf, empirical_hlog, empirical_mmse, simulate, DEFAULT_BURN_IN};
use infoaging::{ArModel, LogBase, SourceStats};

const N: usize = 1_000_000;
const SEED: u64 = 42;

#[test]
fn white_noise_variance_and_lag_one() {
    let model = ArModel::new(vec![0.0], 1.0, 0.0).unwrap();
    let traj = simulate(&model, N, DEFAULT_BURN_IN, SEED).unwrap();
    let acf = empirical_acf(&traj, 5).unwrap();
    assert!((acf.gamma[0] - 1.0).abs() < 0.01);
    assert!(acf.gamma[1].abs() <= 5.0 * acf.stderr);
}

#[test]
fn ar1_lag_one_correlation() {
    let model = ArModel::new(vec![0.5], 0.75, 0.0).unwrap();
    let traj = simulate(&model, N, DEFAULT_BURN_IN, SEED).unwrap();
    let acf = empirical_acf(&traj, 3).unwrap();
    assert!((acf.gamma[1] / acf.gamma[0] - 0.5).abs() < 0.01);
    assert!((acf.gamma[0] - 1.0).abs() <= 5.0 * acf.stderr);
}

#[test]
fn empirical_acf_obeys_recursion() {
    let model = ArModel::seasonal_ar4();
    let traj = simulate(&model, N, DEFAULT_BURN_IN, SEED).unwrap();
    let acf = empirical_acf(&traj, 10).unwrap();
    let g = &acf.gamma;
    let a = model.coeffs();
    for k in 1..=10usize {
        let pred: f64 = a.iter().enumerate().map(|(i, ai)| ai * g[k.abs_diff(i + 1)]).sum();
        assert!((g[k] - pred).abs() <= 5.0 * acf.stderr, "k={k}");
    }
}

#[test]
fn regression_on_current_sample_leaves_observation_noise() {
    let model = ArModel::seasonal_ar4();
    let traj = simulate(&model, N, DEFAULT_BURN_IN, SEED).unwrap();
    let est = empirical_mmse(&traj, 0, 1).unwrap();
    assert!((est.mse - 0.001).abs() <= 5.0 * est.stderr, "{est:?}");

    let hl = empirical_hlog(&traj, 0, 1, LogBase::Natural).unwrap();
    let target = 0.5 * (2.0 * PI * E * 0.001).ln();
    // delta method: d/dm ½ ln m = 1 / (2m)
    assert!((hl - target).abs() <= 5.0 * est.stderr / (2.0 * est.mse));
    let h2 = empirical_hlog(&traj, 0, 1, LogBase::Two).unwrap();
    assert!((h2 - hl / LN_2).abs() < 1e-12);
}

#[test]
fn plug_in_entropy_mirrors_mse() {
    let model = ArModel::seasonal_ar4();
    let traj = simulate(&model, 200_000, DEFAULT_BURN_IN, SEED).unwrap();
    for (d, l) in [(1, 1), (5, 2), (9, 3)] {
        let est = empirical_mmse(&traj, d, l).unwrap();
        let hl = empirical_hlog(&traj, d, l, LogBase::Natural).unwrap();
        assert!((hl - 0.5 * (2.0 * PI * E * est.mse).ln()).abs() < 1e-12);
    }
}

#[test]
fn closed_form_mmse_within_three_standard_errors() {
    let model = ArModel::seasonal_ar4();
    let stats = SourceStats::from_model(&model, 40).unwrap();
    let traj = simulate(&model, N, DEFAULT_BURN_IN, SEED).unwrap();
    let est = empirical_mmse(&traj, 5, 2).unwrap();
    let closed = stats.h2_conditional(5, 2).unwrap();
    assert!((est.mse - closed).abs() <= 3.0 * est.stderr, "{} vs {closed}", est.mse);

    let grid: Vec<(usize, usize)> = [0, 2, 5, 10, 20].iter().flat_map(|&d| [1, 2, 3, 5].map(|l| (d, l))).collect();
    assert_eq!(grid.len(), 20);
    let rows = cross_check(&traj, &grid, |d, l| stats.h2_conditional(d, l)).unwrap();
    let inside = rows.iter().filter(|r| r.z.abs() <= 3.0).count();
    assert!(inside * 100 >= 95 * rows.len(), "{inside}/20 inside 3 s.e.");
}

#[test]
fn standard_error_shrinks_like_root_n() {
    let model = ArModel::seasonal_ar4();
    let small = simulate(&model, 1_000, DEFAULT_BURN_IN, SEED).unwrap();
    let large = simulate(&model, N, DEFAULT_BURN_IN, SEED).unwrap();
    let ratio = empirical_mmse(&small, 3, 2).unwrap().stderr / empirical_mmse(&large, 3, 2).unwrap().stderr;
    let expected = 1000f64.sqrt();
    assert!(ratio > expected / 2.0 && ratio < expected * 2.0, "ratio {ratio}");
}

#[test]
fn burn_in_prefix_is_discarded() {
    let model = ArModel::seasonal_ar4();
    let long = simulate(&model, 500, 100, 7).unwrap();
    let short = simulate(&model, 400, 200, 7).unwrap();
    assert_eq!(&long.x[100..], &short.x[..]);
}

#[test]
fn single_sample_mmse_across_ages() {
    let model = ArModel::seasonal_ar4();
    let stats = SourceStats::from_model(&model, 40).unwrap();
    let traj = simulate(&model, N, DEFAULT_BURN_IN, SEED).unwrap();
    let grid: Vec<(usize, usize)> = (1..=30).map(|d| (d, 1)).collect();
    let rows = cross_check(&traj, &grid, |d, l| stats.h2_conditional(d, l)).unwrap();
    for r in &rows {
        assert!(r.z.abs() <= 3.0, "δ={}: closed {} empirical {} z {:.2}", r.delta, r.closed_form, r.empirical, r.z);
    }
}
