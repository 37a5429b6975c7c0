//! Closed-form L-entropies, L-conditional entropies and conditional mutual
//! information for the jointly Gaussian `(Y_t, X_{t-j}...)` system.
//!
//! Two losses are supported:
//!
//! * [`Loss::Quadratic`]: `H_2(Y | X) = E[(Y - E[Y|X])²]`, the MMSE residual;
//! * [`Loss::Log`]: `H_log(Y | X)`, the conditional differential entropy.
//!
//! For Gaussians the two are tied by `H_log = ½ ln(2πe · H_2)`, which the
//! tests exploit as a cross-check between independent formulas.
//!
//! All matrices are built from a deduplicated [`JointIndexSet`]. Conditional
//! entropies are invariant under repeating a coordinate, but the correlation
//! matrix of a vector with repeated coordinates is singular, so overlapping
//! windows must be merged before anything is factored.

use std::collections::BTreeSet;
use std::f64::consts::{E, LN_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::ar_model::{autocovariance, ArModel, AutocovTable};
use crate::error::{Error, Result};
use crate::matrix::{logdet_spd, solve_spd, Cholesky, SymMatrix};

/// CMI values in `[-CMI_ROUNDOFF, 0)` are treated as round-off and clamped.
pub const CMI_ROUNDOFF: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Loss {
    Quadratic,
    Log,
}

impl Loss {
    pub fn as_str(self) -> &'static str {
        match self {
            Loss::Quadratic => "quadratic",
            Loss::Log => "log",
        }
    }
}

impl fmt::Display for Loss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Loss {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadratic" => Ok(Loss::Quadratic),
            "log" => Ok(Loss::Log),
            other => Err(Error::InvalidQuery(format!("unknown loss '{other}'"))),
        }
    }
}

/// Logarithm base for log-loss quantities. Everything is computed in nats and
/// converted on the way out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Two => nats / LN_2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Natural => "e",
            LogBase::Two => "2",
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "natural" => Ok(LogBase::Natural),
            "2" | "two" => Ok(LogBase::Two),
            other => Err(Error::InvalidQuery(format!("unknown log base '{other}'"))),
        }
    }
}

/// A deduplicated set of lags `{j : X_{t-j} included}` plus whether `Y_t`
/// is part of the vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct JointIndexSet {
    x_offsets: Vec<usize>,
    include_y: bool,
}

impl JointIndexSet {
    pub fn new(offsets: impl IntoIterator<Item = usize>, include_y: bool) -> Self {
        let set: BTreeSet<usize> = offsets.into_iter().collect();
        Self {
            x_offsets: set.into_iter().collect(),
            include_y,
        }
    }

    /// The feature vector `X^l_{t-start}`, i.e. lags `start..start+len`.
    pub fn window(start: usize, len: usize) -> Self {
        Self::new(start..start + len, false)
    }

    pub fn with_y(mut self) -> Self {
        self.include_y = true;
        self
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(
            self.x_offsets.iter().chain(&other.x_offsets).copied(),
            self.include_y || other.include_y,
        )
    }

    pub fn x_offsets(&self) -> &[usize] {
        &self.x_offsets
    }

    pub fn include_y(&self) -> bool {
        self.include_y
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        (!self.include_y || other.include_y)
            && self.x_offsets.iter().all(|j| other.x_offsets.binary_search(j).is_ok())
    }

    pub fn dim(&self) -> usize {
        self.x_offsets.len() + usize::from(self.include_y)
    }

    pub fn max_offset(&self) -> Option<usize> {
        self.x_offsets.last().copied()
    }
}

/// One point query `H_L(Y_t | X^l_{t-δ})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyQuery {
    pub delta: usize,
    pub l: usize,
    pub loss: Loss,
    /// Ignored for quadratic loss.
    pub base: LogBase,
}

/// `H_L(Y_t | X^l_{t-δ})` tabulated over `δ = 0..=δ_max` for one `(l, loss)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyCurve {
    pub l: usize,
    pub loss: Loss,
    pub base: LogBase,
    pub points: Vec<(usize, f64)>,
}

impl EntropyCurve {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, h)| h)
    }

    /// Largest single-step drop `max_δ (H(δ) - H(δ+1))`; positive means the
    /// curve is not monotone.
    pub fn max_drop(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[0].1 - w[1].1)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Second-order statistics of `(Y_t, X_t, X_{t-1}, ...)`: the autocovariance
/// table of `X` plus the observation noise variance.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceStats {
    acf: AutocovTable,
    sigma2_n: f64,
}

fn check_l(l: usize) -> Result<()> {
    if l == 0 {
        Err(Error::InvalidQuery("feature length l must be >= 1".into()))
    } else {
        Ok(())
    }
}

fn clamp_round_off(value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CMI_ROUNDOFF {
        Ok(0.0)
    } else {
        Err(Error::NegativeInformation { value })
    }
}

fn half_log_2pi_e() -> f64 {
    0.5 * (2.0 * PI * E).ln()
}

impl SourceStats {
    pub fn new(acf: AutocovTable, sigma2_n: f64) -> Result<Self> {
        if !(sigma2_n.is_finite() && sigma2_n >= 0.0) {
            return Err(Error::InvalidModel(format!("sigma2_n must be >= 0, got {sigma2_n}")));
        }
        Ok(Self { acf, sigma2_n })
    }

    /// Autocovariances up to `max_lag` plus the model's observation noise.
    pub fn from_model(model: &ArModel, max_lag: usize) -> Result<Self> {
        Self::new(autocovariance(model, max_lag)?, model.sigma2_n())
    }

    pub fn acf(&self) -> &AutocovTable {
        &self.acf
    }

    pub fn sigma2_n(&self) -> f64 {
        self.sigma2_n
    }

    pub fn max_lag(&self) -> usize {
        self.acf.max_lag()
    }

    /// `E[Y_t²] = γ(0) + σ²_N`.
    pub fn target_second_moment(&self) -> f64 {
        self.acf.variance() + self.sigma2_n
    }

    fn check_range(&self, idx: &JointIndexSet) -> Result<()> {
        match idx.max_offset() {
            Some(m) if m > self.max_lag() => Err(Error::OffsetOutOfRange { offset: m, max_lag: self.max_lag() }),
            _ => Ok(()),
        }
    }

    /// Correlation matrix of the vector described by `idx`, with `Y_t` (when
    /// present) in the first row and column followed by `X_{t-j}` in
    /// increasing `j`.
    pub fn corr_matrix(&self, idx: &JointIndexSet) -> Result<SymMatrix> {
        self.check_range(idx)?;
        self.joint_matrix(idx.x_offsets(), idx.include_y(), true)
    }

    fn joint_matrix(&self, offsets: &[usize], include_y: bool, y_first: bool) -> Result<SymMatrix> {
        let n = offsets.len();
        let g = self.acf.as_slice();
        let ey2 = self.target_second_moment();
        if !include_y {
            return SymMatrix::from_fn(n, |i, j| g[offsets[i].abs_diff(offsets[j])]);
        }
        let (y, shift) = if y_first { (0, 1) } else { (n, 0) };
        SymMatrix::from_fn(n + 1, |i, j| match (i == y, j == y) {
            (true, true) => ey2,
            (true, false) => g[offsets[j - shift]],
            (false, true) => g[offsets[i - shift]],
            (false, false) => g[offsets[i - shift].abs_diff(offsets[j - shift])],
        })
    }

    /// MMSE of `Y_t` given the `X` coordinates of `cond`:
    /// `E[Y²] - c R⁻¹ cᵀ` with `c_j = γ(j)`.
    fn mmse(&self, cond: &JointIndexSet) -> Result<f64> {
        self.check_range(cond)?;
        let ey2 = self.target_second_moment();
        if cond.x_offsets().is_empty() {
            return Ok(ey2);
        }
        let r = self.joint_matrix(cond.x_offsets(), false, true)?;
        let c: Vec<f64> = cond.x_offsets().iter().map(|&j| self.acf.gamma(j)).collect();
        let w = solve_spd(&r, &c)?;
        let explained: f64 = c.iter().zip(&w).map(|(a, b)| a * b).sum();
        Ok(ey2 - explained)
    }

    /// Conditional differential entropy in nats from the log-det ratio
    /// `½ ln(det R_[Y,X] / det R_X) + ½ ln 2πe`.
    fn hlog_nats(&self, cond: &JointIndexSet) -> Result<f64> {
        self.check_range(cond)?;
        let log_ratio = if cond.x_offsets().is_empty() {
            self.target_second_moment().ln()
        } else {
            let joint = self.joint_matrix(cond.x_offsets(), true, true)?;
            let marginal = self.joint_matrix(cond.x_offsets(), false, true)?;
            logdet_spd(&joint)? - logdet_spd(&marginal)?
        };
        Ok(0.5 * log_ratio + half_log_2pi_e())
    }

    /// `H_L(Y_t | X_{t-j}, j ∈ cond)`. `include_y` on `cond` is ignored.
    pub fn conditional_entropy(&self, loss: Loss, cond: &JointIndexSet, base: LogBase) -> Result<f64> {
        match loss {
            Loss::Quadratic => self.mmse(cond),
            Loss::Log => Ok(base.from_nats(self.hlog_nats(cond)?)),
        }
    }

    /// `H_2(Y_t | X^l_{t-δ})`, the MMSE of a linear predictor fed data that is
    /// `δ` slots old. At `δ = 0` this is exactly `σ²_N`.
    pub fn h2_conditional(&self, delta: usize, l: usize) -> Result<f64> {
        check_l(l)?;
        self.mmse(&JointIndexSet::window(delta, l))
    }

    /// Single-sample form `E[Y²] - γ(δ)² / γ(0)`.
    pub fn h2_l1(&self, delta: usize) -> Result<f64> {
        let gd = self.acf.get(delta)?;
        Ok(self.target_second_moment() - gd * gd / self.acf.variance())
    }

    /// `½ log(2πe E[Y²])`.
    pub fn hlog_marginal(&self, base: LogBase) -> f64 {
        base.from_nats(0.5 * (2.0 * PI * E * self.target_second_moment()).ln())
    }

    pub fn hlog_conditional(&self, delta: usize, l: usize, base: LogBase) -> Result<f64> {
        check_l(l)?;
        Ok(base.from_nats(self.hlog_nats(&JointIndexSet::window(delta, l))?))
    }

    pub fn hlog_l1(&self, delta: usize, base: LogBase) -> Result<f64> {
        let resid = self.h2_l1(delta)?;
        Ok(base.from_nats(0.5 * (resid.ln() + (2.0 * PI * E).ln())))
    }

    pub fn evaluate(&self, q: &EntropyQuery) -> Result<f64> {
        match q.loss {
            Loss::Quadratic => self.h2_conditional(q.delta, q.l),
            Loss::Log => self.hlog_conditional(q.delta, q.l, q.base),
        }
    }

    /// `I_L(Y_t; extra | cond) = H_L(Y_t | cond) - H_L(Y_t | cond ∪ extra)`.
    ///
    /// Evaluated from one Cholesky factorization of the joint matrix ordered
    /// `[cond, extra \ cond, Y]`. With `L` the factor, the last pivot squared
    /// is the residual given everything and the entries of the `Y` row under
    /// the new coordinates carry the variance they explain, so
    ///
    /// ```text
    /// I_2   = Σ_z L[Y,z]²
    /// I_log = ½ ln(1 + Σ_z L[Y,z]² / L[Y,Y]²)
    /// ```
    ///
    /// Both are non-negative by construction and stay at round-off scale
    /// (rather than `sqrt(ε_machine)`-ish) when the true value is zero.
    pub fn cmi(&self, loss: Loss, cond: &JointIndexSet, extra: &JointIndexSet, base: LogBase) -> Result<f64> {
        self.check_range(cond)?;
        self.check_range(extra)?;
        let new: Vec<usize> = extra
            .x_offsets()
            .iter()
            .copied()
            .filter(|j| cond.x_offsets().binary_search(j).is_err())
            .collect();
        if new.is_empty() {
            return Ok(0.0);
        }
        let ordered: Vec<usize> = cond.x_offsets().iter().chain(&new).copied().collect();
        let chol = Cholesky::factor(&self.joint_matrix(&ordered, true, false)?)?;
        let y = ordered.len();
        let explained: f64 = (cond.x_offsets().len()..y).map(|z| chol.entry(y, z).powi(2)).sum();
        let residual = chol.entry(y, y).powi(2);
        let value = match loss {
            Loss::Quadratic => explained,
            Loss::Log => base.from_nats(0.5 * (explained / residual).ln_1p()),
        };
        clamp_round_off(value)
    }

    /// Log-loss CMI from the four-determinant ratio
    /// `½ ln(det R_[X,Z] det R_[Y,Z] / (det R_Z det R_[Y,X,Z]))`, with `Z = cond`
    /// and `X = extra`. Independent of [`SourceStats::cmi`]; kept as its
    /// cross-check.
    pub fn cmi_log_det_ratio(&self, cond: &JointIndexSet, extra: &JointIndexSet, base: LogBase) -> Result<f64> {
        self.check_range(cond)?;
        self.check_range(extra)?;
        let both = cond.union(extra);
        let logdet_of = |idx: &JointIndexSet, with_y: bool| -> Result<f64> {
            if idx.x_offsets().is_empty() {
                return Ok(if with_y { self.target_second_moment().ln() } else { 0.0 });
            }
            logdet_spd(&self.joint_matrix(idx.x_offsets(), with_y, true)?)
        };
        let nats = 0.5
            * (logdet_of(&both, false)? + logdet_of(cond, true)? - logdet_of(cond, false)? - logdet_of(&both, true)?);
        clamp_round_off(base.from_nats(nats))
    }

    /// `H_L(Y_t | X^l_{t-δ})` for `δ = 0..=δ_max`.
    pub fn entropy_curve(&self, loss: Loss, l: usize, delta_max: usize, base: LogBase) -> Result<EntropyCurve> {
        check_l(l)?;
        let points = (0..=delta_max)
            .map(|d| {
                let q = EntropyQuery { delta: d, l, loss, base };
                self.evaluate(&q).map(|h| (d, h))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EntropyCurve { l, loss, base, points })
    }

    /// The Markov-bound curve
    /// `g₁(δ) = H_L(Y_t | X^l_t) + Σ_{k<δ} I_L(Y_t; X^l_{t-k} | X^l_{t-k-1})`.
    /// Non-decreasing by construction; equals `H_L(Y_t | X^l_{t-δ})` whenever
    /// the windows form an exact Markov chain (`l ≥ p`).
    pub fn g1_curve(&self, loss: Loss, l: usize, delta_max: usize, base: LogBase) -> Result<EntropyCurve> {
        check_l(l)?;
        let mut g = self.conditional_entropy(loss, &JointIndexSet::window(0, l), base)?;
        let mut points = Vec::with_capacity(delta_max + 1);
        points.push((0, g));
        for k in 0..delta_max {
            let newer = JointIndexSet::window(k, l);
            let older = JointIndexSet::window(k + 1, l);
            g += self.cmi(loss, &older, &newer, base)?;
            points.push((k + 1, g));
        }
        Ok(EntropyCurve { l, loss, base, points })
    }
}
