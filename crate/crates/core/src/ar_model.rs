//! The noisy AR(p) source and its exact stationary second-order statistics.
//!
//! ```text
//! X_t = a_1 X_{t-1} + ... + a_p X_{t-p} + W_t,   W_t ~ N(0, σ²_W)
//! Y_t = X_t + N_t,                               N_t ~ N(0, σ²_N)
//! ```

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{solve_general, SymMatrix};

/// Roots must satisfy `|z| < 1 - STATIONARITY_TOL`.
pub const STATIONARITY_TOL: f64 = 1e-9;

/// Smallest Yule-Walker elimination pivot accepted before the model is
/// declared degenerate.
const YW_PIVOT_TOL: f64 = 1e-14;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    coeffs: Vec<f64>,
    sigma2_w: f64,
    sigma2_n: f64,
}

/// AR(p) coefficients plus innovation and observation noise variances.
///
/// Serialized as `{"coeffs": [..], "sigma2_w": r, "sigma2_n": r}`; unknown
/// fields are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct ArModel {
    coeffs: Vec<f64>,
    sigma2_w: f64,
    sigma2_n: f64,
}

impl TryFrom<RawModel> for ArModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        Self::new(raw.coeffs, raw.sigma2_w, raw.sigma2_n)
    }
}

impl ArModel {
    /// Checks `p ≥ 1`, finiteness, `σ²_W > 0` and `σ²_N ≥ 0`. Stationarity is
    /// checked separately by [`validate_model`].
    pub fn new(coeffs: Vec<f64>, sigma2_w: f64, sigma2_n: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidModel("coefficient list is empty".into()));
        }
        if let Some(a) = coeffs.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidModel(format!("non-finite coefficient {a}")));
        }
        if !(sigma2_w.is_finite() && sigma2_w > 0.0) {
            return Err(Error::InvalidModel(format!("sigma2_w must be > 0, got {sigma2_w}")));
        }
        if !(sigma2_n.is_finite() && sigma2_n >= 0.0) {
            return Err(Error::InvalidModel(format!("sigma2_n must be >= 0, got {sigma2_n}")));
        }
        Ok(Self { coeffs, sigma2_w, sigma2_n })
    }

    /// `X_t = 0.1 X_{t-1} + 0.8 X_{t-4} + W_t` with `σ²_W = 0.01`,
    /// `σ²_N = 0.001`: a seasonal AR(4) whose short windows are far from
    /// Markov. Used as the default workload across examples and tests.
    pub fn seasonal_ar4() -> Self {
        Self {
            coeffs: vec![0.1, 0.0, 0.0, 0.8],
            sigma2_w: 0.01,
            sigma2_n: 0.001,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn sigma2_w(&self) -> f64 {
        self.sigma2_w
    }

    pub fn sigma2_n(&self) -> f64 {
        self.sigma2_n
    }

    /// Errors with [`Error::NonStationary`] unless every characteristic root
    /// lies strictly inside `1 - STATIONARITY_TOL`.
    pub fn ensure_stationary(&self) -> Result<()> {
        let report = validate_model(self)?;
        if report.stationary {
            Ok(())
        } else {
            Err(Error::NonStationary { max_root: report.max_root() })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub stationary: bool,
    /// `|z_i|` for every root of `z^p - a_1 z^{p-1} - ... - a_p`, descending.
    pub root_magnitudes: Vec<f64>,
}

impl ValidationReport {
    pub fn for_coeffs(coeffs: &[f64]) -> Result<Self> {
        let p = coeffs.len();
        if p == 0 {
            return Err(Error::InvalidModel("coefficient list is empty".into()));
        }
        // Companion matrix: first row holds the coefficients, ones on the subdiagonal.
        let companion = DMatrix::from_fn(p, p, |i, j| {
            if i == 0 {
                coeffs[j]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let mut root_magnitudes: Vec<f64> = companion.complex_eigenvalues().iter().map(|z| z.norm()).collect();
        root_magnitudes.sort_by(|a, b| b.total_cmp(a));
        let stationary = root_magnitudes[0] < 1.0 - STATIONARITY_TOL;
        Ok(Self { stationary, root_magnitudes })
    }

    pub fn max_root(&self) -> f64 {
        self.root_magnitudes[0]
    }
}

pub fn validate_model(model: &ArModel) -> Result<ValidationReport> {
    ValidationReport::for_coeffs(model.coeffs())
}

/// Stationary autocovariances `γ(0..=K)` of `X`.
#[derive(Clone, Debug, PartialEq)]
pub struct AutocovTable {
    gamma: Vec<f64>,
}

impl AutocovTable {
    /// Wraps precomputed values; requires `γ(0) > 0`.
    pub fn from_values(gamma: Vec<f64>) -> Result<Self> {
        match gamma.first() {
            Some(&g0) if g0 > 0.0 && g0.is_finite() => Ok(Self { gamma }),
            _ => Err(Error::InvalidModel("autocovariance table needs gamma(0) > 0".into())),
        }
    }

    pub fn max_lag(&self) -> usize {
        self.gamma.len() - 1
    }

    /// `γ(k)`; panics if `k > max_lag`.
    pub fn gamma(&self, k: usize) -> f64 {
        self.gamma[k]
    }

    pub fn get(&self, k: usize) -> Result<f64> {
        self.gamma
            .get(k)
            .copied()
            .ok_or(Error::OffsetOutOfRange { offset: k, max_lag: self.max_lag() })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.gamma
    }

    pub fn variance(&self) -> f64 {
        self.gamma[0]
    }

    /// Toeplitz matrix `[γ(|i-j|)]` of size `m + 1`.
    pub fn toeplitz(&self, m: usize) -> Result<SymMatrix> {
        self.get(m)?;
        SymMatrix::from_fn(m + 1, |i, j| self.gamma[i.abs_diff(j)])
    }
}

/// Solves the Yule-Walker system for `γ(0..=p)` and extends by the AR
/// recursion up to `max_lag`.
pub fn autocovariance(model: &ArModel, max_lag: usize) -> Result<AutocovTable> {
    model.ensure_stationary()?;
    let a = model.coeffs();
    let p = a.len();

    // Row k: γ(k) - Σ_i a_i γ(|k-i|) = σ²_W·[k = 0]
    let mut system = vec![vec![0.0; p + 1]; p + 1];
    for (k, row) in system.iter_mut().enumerate() {
        row[k] += 1.0;
        for (i, &ai) in a.iter().enumerate() {
            row[k.abs_diff(i + 1)] -= ai;
        }
    }
    let mut rhs = vec![0.0; p + 1];
    rhs[0] = model.sigma2_w();
    let (mut gamma, min_pivot) = solve_general(system, rhs);
    if !(min_pivot >= YW_PIVOT_TOL) {
        return Err(Error::DegenerateModel { pivot: min_pivot });
    }

    for k in (p + 1)..=max_lag {
        let next = a.iter().enumerate().map(|(i, ai)| ai * gamma[k - i - 1]).sum();
        gamma.push(next);
    }
    gamma.truncate(max_lag + 1);
    AutocovTable::from_values(gamma)
}

/// `E[Y_t²] = γ(0) + σ²_N`. Cross terms need no correction:
/// `E[Y_t X_{t-k}] = γ(k)` because `N_t` is independent of `X`.
pub fn target_second_moment(model: &ArModel, acf: &AutocovTable) -> f64 {
    acf.variance() + model.sigma2_n()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Cholesky;

    fn ar1(a: f64, s2w: f64) -> ArModel {
        ArModel::new(vec![a], s2w, 0.0).unwrap()
    }

    /// Largest real root of z⁴ - 0.1 z³ - 0.8 by bisection.
    fn bisect_quartic() -> f64 {
        let f = |z: f64| z.powi(4) - 0.1 * z.powi(3) - 0.8;
        let (mut lo, mut hi) = (0.5, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        lo
    }

    #[test]
    fn ar1_root_is_coefficient() {
        let r = validate_model(&ar1(0.5, 1.0)).unwrap();
        assert!(r.stationary);
        assert!((r.root_magnitudes[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn seasonal_ar4_is_stationary_near_unit_root() {
        let r = validate_model(&ArModel::seasonal_ar4()).unwrap();
        assert!(r.stationary);
        assert_eq!(r.root_magnitudes.len(), 4);
        let oracle = bisect_quartic();
        assert!(oracle > 0.97 && oracle < 0.98);
        assert!((r.max_root() - oracle).abs() < 1e-10);
        assert!(r.root_magnitudes.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn unit_root_is_not_stationary() {
        let m = ar1(1.0, 1.0);
        assert!(!validate_model(&m).unwrap().stationary);
        assert!(matches!(autocovariance(&m, 3), Err(Error::NonStationary { .. })));
    }

    #[test]
    fn empty_coeffs_rejected() {
        assert!(matches!(ValidationReport::for_coeffs(&[]), Err(Error::InvalidModel(_))));
        assert!(matches!(ArModel::new(vec![], 1.0, 0.0), Err(Error::InvalidModel(_))));
        assert!(ArModel::new(vec![0.1], 0.0, 0.0).is_err());
        assert!(ArModel::new(vec![0.1], 1.0, -1.0).is_err());
    }

    #[test]
    fn ar1_closed_form() {
        let acf = autocovariance(&ar1(0.5, 0.75), 2).unwrap();
        assert!((acf.gamma(0) - 1.0).abs() < 1e-14);
        assert!((acf.gamma(1) - 0.5).abs() < 1e-14);
        assert!((acf.gamma(2) - 0.25).abs() < 1e-14);

        for a in [-0.9, -0.5, 0.0, 0.5, 0.9] {
            let s2w = 1.3;
            let acf = autocovariance(&ar1(a, s2w), 30).unwrap();
            for k in 0..=30 {
                let expect = a.powi(k as i32) * s2w / (1.0 - a * a);
                assert!((acf.gamma(k) - expect).abs() < 1e-12, "a={a} k={k}");
            }
        }
    }

    #[test]
    fn white_noise() {
        let acf = autocovariance(&ar1(0.0, 2.0), 5).unwrap();
        assert_eq!(acf.gamma(0), 2.0);
        assert!((1..=5).all(|k| acf.gamma(k) == 0.0));
    }

    #[test]
    fn seasonal_ar4_yule_walker_residual_and_toeplitz_pd() {
        let m = ArModel::seasonal_ar4();
        let acf = autocovariance(&m, 60).unwrap();
        let g = acf.as_slice();
        let a = m.coeffs();
        for k in 1..=60usize {
            let pred: f64 = (0..4).map(|i| a[i] * g[k.abs_diff(i + 1)]).sum();
            assert!((g[k] - pred).abs() <= 1e-10 * g[0], "k={k}");
        }
        let g0_pred: f64 = (0..4).map(|i| a[i] * g[i + 1]).sum::<f64>() + m.sigma2_w();
        assert!((g[0] - g0_pred).abs() <= 1e-10 * g[0]);
        assert!(g.iter().all(|v| v.abs() <= g[0]));
        for size in [0, 5, 20, 60] {
            Cholesky::factor(&acf.toeplitz(size).unwrap()).unwrap();
        }
    }

    #[test]
    fn truncated_table_for_small_lag() {
        let acf = autocovariance(&ArModel::seasonal_ar4(), 1).unwrap();
        assert_eq!(acf.max_lag(), 1);
        assert!(matches!(acf.get(2), Err(Error::OffsetOutOfRange { offset: 2, max_lag: 1 })));
    }

    #[test]
    fn second_moment() {
        let m = ArModel::new(vec![0.5], 0.75, 0.1).unwrap();
        let acf = autocovariance(&m, 1).unwrap();
        assert!((target_second_moment(&m, &acf) - 1.1).abs() < 1e-14);
        let m0 = ArModel::new(vec![0.5], 0.75, 0.0).unwrap();
        assert_eq!(target_second_moment(&m0, &acf), acf.gamma(0));
        let ar4 = ArModel::seasonal_ar4();
        let acf4 = autocovariance(&ar4, 4).unwrap();
        assert_eq!(target_second_moment(&ar4, &acf4), acf4.gamma(0) + 0.001);
    }

    #[test]
    fn json_schema() {
        let m = ArModel::from_json_str(r#"{"coeffs":[0.1,0,0,0.8],"sigma2_w":0.01,"sigma2_n":0.001}"#).unwrap();
        assert_eq!(m, ArModel::seasonal_ar4());
        assert!(ArModel::from_json_str(r#"{"coeffs":[0.1],"sigma2_w":0.01,"sigma2_n":0.001,"x":1}"#).is_err());
        assert!(ArModel::from_json_str(r#"{"coeffs":[],"sigma2_w":0.01,"sigma2_n":0.001}"#).is_err());
        assert!(ArModel::from_json_str(r#"{"coeffs":[0.5],"sigma2_w":0.01}"#).is_err());
        let back = serde_json::to_string(&m).unwrap();
        assert_eq!(ArModel::from_json_str(&back).unwrap(), m);
    }
}
