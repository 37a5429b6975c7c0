//! ε-Markov divergence of the windowed process.
//!
//! `Y_t ↔ X^l_{t-μ} ↔ X^l_{t-μ-ν}` is an ε-Markov chain when
//! `I_log(Y_t; X^l_{t-μ-ν} | X^l_{t-μ}) ≤ ε²`. The smallest such ε for one
//! `(μ, ν)` is `ε_{μ,ν}(l)`; `ε(l)` is its supremum over all `μ, ν ≥ 0`,
//! approximated here by an exhaustive search over `[0, M]²`.
//!
//! When `l ≥ p` the newer window already contains the full AR state, so the
//! older window adds nothing and `ε(l) = 0`.

use crate::ar_model::ArModel;
use crate::error::{Error, Result};
use crate::information::{JointIndexSet, LogBase, Loss, SourceStats};

/// Threshold below which ε is treated as an exact zero.
pub const ZERO_EPSILON_TOL: f64 = 1e-9;

/// Default grid limit on `μ` and `ν`.
pub const DEFAULT_SEARCH_BOUND: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonQuery {
    pub l: usize,
    /// Grid limit `M`: both `μ` and `ν` range over `0..=M`.
    pub search_bound: usize,
    pub base: LogBase,
    /// Keep the full `ε_{μ,ν}` table in the report.
    pub keep_grid: bool,
}

impl EpsilonQuery {
    pub fn new(l: usize, search_bound: usize, base: LogBase) -> Self {
        Self { l, search_bound, base, keep_grid: false }
    }

    /// Largest lag the query touches: `2M + l - 1`.
    pub fn max_offset(&self) -> usize {
        2 * self.search_bound + self.l.saturating_sub(1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonReport {
    pub l: usize,
    pub epsilon: f64,
    pub argmax_mu: usize,
    pub argmax_nu: usize,
    /// `grid[μ][ν] = ε_{μ,ν}(l)` when requested.
    pub grid: Option<Vec<Vec<f64>>>,
}

/// `ε_{μ,ν}(l) = sqrt(I_log(Y_t; X^l_{t-μ-ν} | X^l_{t-μ}))`, the CMI taken in
/// `base` units. Overlapping windows (`ν < l`) are merged before any matrix
/// is formed.
pub fn epsilon_mu_nu(stats: &SourceStats, mu: usize, nu: usize, l: usize, base: LogBase) -> Result<f64> {
    if l == 0 {
        return Err(Error::InvalidQuery("feature length l must be >= 1".into()));
    }
    let newer = JointIndexSet::window(mu, l);
    let older = JointIndexSet::window(mu + nu, l);
    Ok(stats.cmi(Loss::Log, &newer, &older, base)?.sqrt())
}

/// `ε(l) = max_{0 ≤ μ, ν ≤ M} ε_{μ,ν}(l)`. Ties go to the lexicographically
/// smallest `(μ, ν)`.
pub fn epsilon_l(stats: &SourceStats, query: &EpsilonQuery) -> Result<EpsilonReport> {
    if query.l == 0 {
        return Err(Error::InvalidQuery("feature length l must be >= 1".into()));
    }
    if query.max_offset() > stats.max_lag() {
        return Err(Error::OffsetOutOfRange { offset: query.max_offset(), max_lag: stats.max_lag() });
    }
    let m = query.search_bound;
    let mut grid = query.keep_grid.then(|| Vec::with_capacity(m + 1));
    let (mut best, mut arg) = (0.0, (0, 0));
    for mu in 0..=m {
        let mut row = Vec::with_capacity(if grid.is_some() { m + 1 } else { 0 });
        for nu in 0..=m {
            let e = epsilon_mu_nu(stats, mu, nu, query.l, query.base)?;
            if e > best {
                best = e;
                arg = (mu, nu);
            }
            if grid.is_some() {
                row.push(e);
            }
        }
        if let Some(g) = grid.as_mut() {
            g.push(row);
        }
    }
    Ok(EpsilonReport {
        l: query.l,
        epsilon: best,
        argmax_mu: arg.0,
        argmax_nu: arg.1,
        grid,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WindowCheck {
    pub l: usize,
    pub epsilon: f64,
    /// `l < p`, or `ε(l)` is numerically zero.
    pub pass: bool,
}

/// Evaluates `ε(l)` for `l = 1..=l_max` and confirms that every window at
/// least as long as the AR order is exactly Markov.
pub fn certify_markov_windows(model: &ArModel, l_max: usize, search_bound: usize) -> Result<Vec<WindowCheck>> {
    let q_max = EpsilonQuery::new(l_max.max(1), search_bound, LogBase::Natural);
    let stats = SourceStats::from_model(model, q_max.max_offset())?;
    (1..=l_max)
        .map(|l| {
            let report = epsilon_l(&stats, &EpsilonQuery::new(l, search_bound, LogBase::Natural))?;
            Ok(WindowCheck {
                l,
                epsilon: report.epsilon,
                pass: l < model.order() || report.epsilon <= ZERO_EPSILON_TOL,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ar4() -> SourceStats {
        SourceStats::from_model(&ArModel::seasonal_ar4(), 2 * 50 + 8).unwrap()
    }

    #[test]
    fn nu_zero_is_exactly_zero() {
        let st = ar4();
        for mu in [0, 3, 17] {
            for l in 1..=5 {
                assert_eq!(epsilon_mu_nu(&st, mu, 0, l, LogBase::Natural).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn long_windows_are_markov() {
        let st = ar4();
        for l in 4..=6 {
            for mu in [0, 1, 5, 20] {
                for nu in [1, 2, 3, 4, 9, 30] {
                    let e = epsilon_mu_nu(&st, mu, nu, l, LogBase::Natural).unwrap();
                    assert!(e <= ZERO_EPSILON_TOL, "l={l} mu={mu} nu={nu} e={e}");
                }
            }
        }
    }

    #[test]
    fn zero_search_bound() {
        let r = epsilon_l(&ar4(), &EpsilonQuery::new(1, 0, LogBase::Natural)).unwrap();
        assert_eq!((r.epsilon, r.argmax_mu, r.argmax_nu), (0.0, 0, 0));
    }

    #[test]
    fn ar1_has_zero_epsilon() {
        for a in [-0.9, 0.3, 0.95] {
            let m = ArModel::new(vec![a], 1.0, 0.2).unwrap();
            let checks = certify_markov_windows(&m, 3, 10).unwrap();
            assert!(checks.iter().all(|c| c.pass && c.epsilon <= ZERO_EPSILON_TOL));
        }
    }

    #[test]
    fn grid_is_kept_on_request_and_max_matches() {
        let st = ar4();
        let mut q = EpsilonQuery::new(2, 8, LogBase::Two);
        q.keep_grid = true;
        let r = epsilon_l(&st, &q).unwrap();
        let grid = r.grid.as_ref().unwrap();
        assert_eq!(grid.len(), 9);
        let max = grid.iter().flatten().copied().fold(0.0, f64::max);
        assert_eq!(max, r.epsilon);
        assert_eq!(grid[r.argmax_mu][r.argmax_nu], r.epsilon);
        assert!(grid.iter().all(|row| row[0] == 0.0));
    }

    #[test]
    fn query_range_is_checked() {
        let st = SourceStats::from_model(&ArModel::seasonal_ar4(), 20).unwrap();
        assert!(matches!(
            epsilon_l(&st, &EpsilonQuery::new(1, 50, LogBase::Natural)),
            Err(Error::OffsetOutOfRange { .. })
        ));
        assert!(epsilon_l(&st, &EpsilonQuery::new(0, 5, LogBase::Natural)).is_err());
    }
}
