//! Seeded simulation of the noisy AR(p) source and empirical estimators.
//!
//! These never touch the closed-form machinery in [`crate::information`]
//! (only the small SPD solver is shared), so agreement between the two is a
//! real check rather than a restatement.
//!
//! Random numbers come from ChaCha8 (`rand_chacha`) seeded with
//! `seed_from_u64`, stream 0 for the innovations `W_t` and stream 1 for the
//! observation noise `N_t`; normals use `rand_distr::StandardNormal`
//! (ziggurat). See [`GENERATOR`].

use std::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ar_model::ArModel;
use crate::error::{Error, Result};
use crate::information::LogBase;
use crate::matrix::{solve_spd, SymMatrix};

/// Pinned generator description, recorded alongside simulated output.
pub const GENERATOR: &str = "chacha8(rand_chacha 0.9, seed_from_u64; stream 0 = W, stream 1 = N) + StandardNormal ziggurat (rand_distr 0.5)";

pub const DEFAULT_BURN_IN: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub seed: u64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs the AR recursion from `X = 0` for `burn_in + n` steps and keeps the
/// last `n`, together with `Y_t = X_t + σ_N · ξ_t`.
pub fn simulate(model: &ArModel, n: usize, burn_in: usize, seed: u64) -> Result<Trajectory> {
    model.ensure_stationary()?;
    if n == 0 {
        return Err(Error::InvalidQuery("sample count must be >= 1".into()));
    }
    let a = model.coeffs();
    let p = a.len();
    let sw = model.sigma2_w().sqrt();
    let sn = model.sigma2_n().sqrt();
    let mut w_rng = rng_for(seed, 0);
    let mut n_rng = rng_for(seed, 1);

    let total = burn_in + n;
    // History padded with p zeros so the recursion needs no branches.
    let mut hist = vec![0.0; p + total];
    for t in p..hist.len() {
        let w: f64 = w_rng.sample(StandardNormal);
        let ar: f64 = a.iter().enumerate().map(|(i, ai)| ai * hist[t - i - 1]).sum();
        hist[t] = ar + sw * w;
    }
    let x = hist.split_off(p + burn_in);
    let y = x
        .iter()
        .map(|xt| {
            let e: f64 = n_rng.sample(StandardNormal);
            xt + sn * e
        })
        .collect();
    Ok(Trajectory { x, y, seed })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalAcf {
    pub gamma: Vec<f64>,
    /// `γ̂(0)·sqrt(2/n)`. A rough i.i.d.-Gaussian heuristic, applied to every
    /// lag; it ignores serial correlation and so understates the spread for
    /// slowly mixing processes.
    pub stderr: f64,
}

/// `γ̂(k) = (1/n) Σ_t x_t x_{t-k}` for `k = 0..=max_lag`; requires
/// `max_lag < n / 10`.
pub fn empirical_acf(traj: &Trajectory, max_lag: usize) -> Result<EmpiricalAcf> {
    let n = traj.len();
    if max_lag * 10 >= n {
        return Err(Error::InvalidQuery(format!("max lag {max_lag} too large for {n} samples")));
    }
    let x = &traj.x;
    let gamma: Vec<f64> = (0..=max_lag)
        .map(|k| x[k..].iter().zip(x).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect();
    let stderr = gamma[0] * (2.0 / n as f64).sqrt();
    Ok(EmpiricalAcf { gamma, stderr })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MmseEstimate {
    pub mse: f64,
    /// Sample s.d. of the squared residuals over `sqrt(rows)`.
    pub stderr: f64,
    pub rows: usize,
}

/// Least-squares fit of `Y_t` on `[X_{t-δ}, ..., X_{t-δ-l+1}]` through the
/// normal equations; returns the mean squared residual.
pub fn empirical_mmse(traj: &Trajectory, delta: usize, l: usize) -> Result<MmseEstimate> {
    if l == 0 {
        return Err(Error::InvalidQuery("feature length l must be >= 1".into()));
    }
    let n = traj.len();
    let first = delta + l - 1;
    if first + 2 * l + 2 > n {
        return Err(Error::InvalidQuery(format!("delta {delta} + l {l} too large for {n} samples")));
    }
    let (x, y) = (&traj.x, &traj.y);
    let feature = |t: usize, j: usize| x[t - delta - j];

    let mut gram = vec![0.0; l * l];
    let mut rhs = vec![0.0; l];
    for t in first..n {
        for i in 0..l {
            let fi = feature(t, i);
            rhs[i] += fi * y[t];
            for j in 0..=i {
                gram[i * l + j] += fi * feature(t, j);
            }
        }
    }
    let gram = SymMatrix::from_fn(l, |i, j| gram[i * l + j])?;
    let beta = solve_spd(&gram, &rhs).map_err(|e| match e {
        Error::NotPositiveDefinite { .. } => Error::DegenerateData("singular empirical Gram matrix".into()),
        other => other,
    })?;

    let rows = n - first;
    let sq: Vec<f64> = (first..n)
        .map(|t| {
            let pred: f64 = (0..l).map(|j| beta[j] * feature(t, j)).sum();
            (y[t] - pred).powi(2)
        })
        .collect();
    let mse = sq.iter().sum::<f64>() / rows as f64;
    let var = sq.iter().map(|s| (s - mse).powi(2)).sum::<f64>() / (rows - 1) as f64;
    Ok(MmseEstimate {
        mse,
        stderr: (var / rows as f64).sqrt(),
        rows,
    })
}

/// Gaussian plug-in `½ log(2πe · mse)` built on [`empirical_mmse`].
pub fn empirical_hlog(traj: &Trajectory, delta: usize, l: usize, base: LogBase) -> Result<f64> {
    let est = empirical_mmse(traj, delta, l)?;
    if !(est.mse > 0.0) {
        return Err(Error::DegenerateData(format!("non-positive residual variance {}", est.mse)));
    }
    Ok(base.from_nats(0.5 * (2.0 * PI * E * est.mse).ln()))
}

/// One closed-form vs simulation comparison of `H_2(Y_t | X^l_{t-δ})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationRow {
    pub delta: usize,
    pub l: usize,
    pub closed_form: f64,
    pub empirical: f64,
    pub stderr: f64,
    /// `(empirical - closed_form) / stderr`.
    pub z: f64,
}

/// Compares `closed_form(δ, l)` against [`empirical_mmse`] at every grid point.
pub fn cross_check<F>(traj: &Trajectory, grid: &[(usize, usize)], closed_form: F) -> Result<Vec<ValidationRow>>
where
    F: Fn(usize, usize) -> Result<f64>,
{
    grid.iter()
        .map(|&(delta, l)| {
            let closed_form = closed_form(delta, l)?;
            let est = empirical_mmse(traj, delta, l)?;
            Ok(ValidationRow {
                delta,
                l,
                closed_form,
                empirical: est.mse,
                stderr: est.stderr,
                z: (est.mse - closed_form) / est.stderr,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_samples() {
        let m = ArModel::seasonal_ar4();
        let a = simulate(&m, 1000, 100, 9).unwrap();
        let b = simulate(&m, 1000, 100, 9).unwrap();
        assert_eq!(a, b);
        let c = simulate(&m, 1000, 100, 10).unwrap();
        assert_ne!(a.x, c.x);
    }

    #[test]
    fn rejects_bad_inputs() {
        let unit = ArModel::new(vec![1.0], 1.0, 0.0).unwrap();
        assert!(matches!(simulate(&unit, 10, 0, 1), Err(Error::NonStationary { .. })));
        let m = ArModel::seasonal_ar4();
        assert!(simulate(&m, 0, 0, 1).is_err());
        let t = simulate(&m, 100, 0, 1).unwrap();
        assert!(empirical_acf(&t, 10).is_err());
        assert!(empirical_acf(&t, 9).is_ok());
        assert!(empirical_mmse(&t, 95, 2).is_err());
        assert!(empirical_mmse(&t, 1, 0).is_err());
    }

    #[test]
    fn noiseless_observation_has_no_noise() {
        let m = ArModel::new(vec![0.3], 1.0, 0.0).unwrap();
        let t = simulate(&m, 50, 5, 3).unwrap();
        assert_eq!(t.x, t.y);
    }

    #[test]
    fn constant_features_are_degenerate() {
        let t = Trajectory { x: vec![0.0; 100], y: vec![1.0; 100], seed: 0 };
        assert!(matches!(empirical_mmse(&t, 0, 1), Err(Error::DegenerateData(_))));
    }
}
