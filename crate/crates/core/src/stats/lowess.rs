//! Locally weighted scatterplot smoothing with robustifying passes.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_FRACTION: f64 = 2.0 / 3.0;
pub const DEFAULT_ROBUSTNESS_ITERATIONS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowessFit<T> {
    /// `(x, fitted y)` for every input point, in input order.
    pub fitted: Vec<(T, T)>,
    pub fraction: T,
    pub robustness_iterations: usize,
    /// Robustifying passes actually run; fewer than requested once the
    /// residuals vanish.
    pub passes_run: usize,
}

impl<T: Scalar> LowessFit<T> {
    pub fn values(&self) -> Vec<T> {
        self.fitted.iter().map(|&(_, y)| y).collect()
    }
}

fn tricube<T: Scalar>(u: T) -> T {
    if u >= T::one() {
        T::zero()
    } else {
        let c = T::one() - u * u * u;
        c * c * c
    }
}

fn bisquare<T: Scalar>(u: T) -> T {
    if u.abs() >= T::one() {
        T::zero()
    } else {
        let c = T::one() - u * u;
        c * c
    }
}

fn median<T: Scalar>(mut v: Vec<T>) -> T {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / T::lit(2.0)
    }
}

/// Fits a weighted local line at every input `x` over its `ceil(fraction * n)`
/// nearest neighbors, using tricube weights on distance scaled by the
/// distance to the farthest of those neighbors. Each robustifying pass
/// multiplies in bisquare weights of the residuals over six median absolute
/// residuals. Input order of `x` does not matter.
pub fn lowess<T: Scalar>(
    x: &[T],
    y: &[T],
    fraction: T,
    robustness_iterations: usize,
) -> Result<LowessFit<T>> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::TooShort {
            required: 3,
            actual: n,
        });
    }
    if !(fraction > T::zero() && fraction <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "fraction must be in (0, 1], got {fraction}"
        )));
    }
    let window = (fraction * T::from_count(n))
        .ceil()
        .to_usize()
        .expect("window size fits usize")
        .min(n);
    if window < 2 {
        return Err(Error::InvalidParameter(format!(
            "window of {window} point(s) is too small"
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite input".into()));
    }

    let lo = x.iter().copied().fold(T::infinity(), T::min);
    let hi = x.iter().copied().fold(T::neg_infinity(), T::max);
    let range = hi - lo;

    // Per-point bandwidth: distance to the window-th nearest neighbor.
    let bandwidth: Vec<T> = x
        .iter()
        .map(|&xi| {
            let mut d: Vec<T> = x.iter().map(|&xj| (xj - xi).abs()).collect();
            d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            d[window - 1]
        })
        .collect();

    let mut robustness = vec![T::one(); n];
    let mut fitted = local_fits(x, y, &bandwidth, &robustness, range)?;
    let mean_abs_y = y.iter().map(|v| v.abs()).sum::<T>() / T::from_count(n);
    let mut passes_run = 0;
    for _ in 0..robustness_iterations {
        let residuals: Vec<T> = y.iter().zip(&fitted).map(|(&yi, &fi)| yi - fi).collect();
        let mad = median(residuals.iter().map(|r| r.abs()).collect());
        if mad <= T::lit(1e-7) * mean_abs_y {
            break;
        }
        let scale = T::lit(6.0) * mad;
        robustness = residuals.iter().map(|&r| bisquare(r / scale)).collect();
        fitted = local_fits(x, y, &bandwidth, &robustness, range)?;
        passes_run += 1;
    }

    Ok(LowessFit {
        fitted: x.iter().copied().zip(fitted).collect(),
        fraction,
        robustness_iterations,
        passes_run,
    })
}

fn local_fits<T: Scalar>(
    x: &[T],
    y: &[T],
    bandwidth: &[T],
    robustness: &[T],
    range: T,
) -> Result<Vec<T>> {
    x.iter()
        .zip(bandwidth)
        .map(|(&xi, &h)| {
            let weights: Vec<T> = x
                .iter()
                .zip(robustness)
                .map(|(&xj, &r)| {
                    let d = (xj - xi).abs();
                    let w = if h > T::zero() {
                        tricube(d / h)
                    } else if d == T::zero() {
                        T::one()
                    } else {
                        T::zero()
                    };
                    w * r
                })
                .collect();
            weighted_line_at(x, y, &weights, xi, range)
        })
        .collect()
}

/// Weighted least-squares line evaluated at `at`; falls back to the
/// weighted mean when the weighted spread of `x` is negligible.
fn weighted_line_at<T: Scalar>(x: &[T], y: &[T], w: &[T], at: T, range: T) -> Result<T> {
    let total: T = w.iter().copied().sum();
    if !(total > T::zero()) {
        return Err(Error::Numeric(format!(
            "zero local weight mass at x = {at}"
        )));
    }
    let xbar = x.iter().zip(w).map(|(&xi, &wi)| wi * xi).sum::<T>() / total;
    let ybar = y.iter().zip(w).map(|(&yi, &wi)| wi * yi).sum::<T>() / total;
    let (mut sxx, mut sxy) = (T::zero(), T::zero());
    for ((&xi, &yi), &wi) in x.iter().zip(y).zip(w) {
        let dx = xi - xbar;
        sxx = sxx + wi * dx * dx;
        sxy = sxy + wi * dx * (yi - ybar);
    }
    if (sxx / total).sqrt() <= T::lit(1e-10) * range {
        return Ok(ybar);
    }
    Ok(ybar + sxy / sxx * (at - xbar))
}
