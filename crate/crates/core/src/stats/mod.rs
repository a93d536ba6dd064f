//! Correlation coefficients, least-squares lines and LOWESS smoothing.

mod correlation;
mod lowess;
mod regression;

pub use correlation::{average_ranks, kendall, pearson, spearman, strength_label, Strength};
pub use lowess::{lowess, LowessFit, DEFAULT_FRACTION, DEFAULT_ROBUSTNESS_ITERATIONS};
pub use regression::{linear_regression, RegressionFit};
