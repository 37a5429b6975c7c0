//! Remote-estimation error of a noisy Gaussian AR(p) source as a function of
//! Age of Information (AoI).
//!
//! A sensor observes `X_t`, an AR(p) process driven by Gaussian innovations,
//! and the estimator wants `Y_t = X_t + N_t`. The estimator only holds the
//! feature window `[X_{t-δ}, ..., X_{t-δ-l+1}]`, i.e. data that is `δ` slots
//! old. This crate computes, in closed form:
//!
//! * the minimum expected loss `H_L(Y_t | X^l_{t-δ})` under quadratic loss
//!   (MMSE) and log loss (differential entropy), see [`SourceStats`];
//! * the Markov-bound curve `g₁(δ)`, a non-decreasing telescoping sum of
//!   conditional mutual informations;
//! * the ε-Markov divergence `ε(l)`, which measures how far the windowed
//!   process is from a Markov chain and so governs whether the error can be
//!   non-monotone in `δ` ([`epsilon`]).
//!
//! Every closed form can be checked against a seeded simulation with
//! [`oracle`].
//!
//! ```
//! use infoaging::{ArModel, SourceStats};
//!
//! let model = ArModel::new(vec![0.5], 0.75, 0.1).unwrap();
//! let stats = SourceStats::from_model(&model, 16).unwrap();
//! // AR(1): E[Y²] - γ(1)²/γ(0) = 1.1 - 0.25
//! let h2 = stats.h2_conditional(1, 1).unwrap();
//! assert!((h2 - 0.85).abs() < 1e-12);
//! ```

// NaN must fail the `!(x > tol)` guards; index loops mirror the formulas.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod ar_model;
pub mod cli;
pub mod epsilon;
pub mod error;
pub mod information;
pub mod matrix;
pub mod oracle;

pub use ar_model::{autocovariance, target_second_moment, validate_model, ArModel, AutocovTable, ValidationReport};
pub use epsilon::{epsilon_l, epsilon_mu_nu, EpsilonQuery, EpsilonReport};
pub use error::{Error, Result};
pub use information::{EntropyCurve, EntropyQuery, JointIndexSet, LogBase, Loss, SourceStats};
pub use matrix::{logdet_spd, solve_spd, SymMatrix};
pub use oracle::{cross_check, empirical_acf, empirical_hlog, empirical_mmse, simulate, Trajectory, ValidationRow};
