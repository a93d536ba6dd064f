//! Rules for picking the number of clusters from validation series.

use serde::{Deserialize, Serialize};

use super::dispersion::SswCurve;
use super::gap::GapResult;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_consecutive(k_values: &[usize]) -> Result<()> {
    if k_values.windows(2).any(|w| w[1] != w[0] + 1) {
        return Err(Error::InvalidParameter(format!(
            "k values must be consecutive: {k_values:?}"
        )));
    }
    Ok(())
}

/// The k whose overall silhouette drops the most to its successor,
/// `argmax overall(k) - overall(k + 1)`. Ties go to the smallest k.
pub fn select_k_silhouette<T: Scalar>(k_values: &[usize], overall: &[T]) -> Result<usize> {
    if k_values.len() != overall.len() {
        return Err(Error::LengthMismatch {
            left: k_values.len(),
            right: overall.len(),
        });
    }
    if overall.len() < 2 {
        return Err(Error::TooShort {
            required: 2,
            actual: overall.len(),
        });
    }
    check_consecutive(k_values)?;
    let mut best = (k_values[0], overall[0] - overall[1]);
    for (i, w) in overall.windows(2).enumerate().skip(1) {
        let drop = w[0] - w[1];
        if drop > best.1 {
            best = (k_values[i], drop);
        }
    }
    Ok(best.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSelection {
    pub k: usize,
    /// No k met the criterion; `k` is the largest evaluated.
    pub fallback: bool,
}

/// Smallest k with `gap(k) > gap(k + 1) - s(k + 1)`.
pub fn select_k_gap<T: Scalar>(gap: &GapResult<T>) -> Result<GapSelection> {
    let ks = &gap.k_values;
    if ks.len() < 2 {
        return Err(Error::TooShort {
            required: 2,
            actual: ks.len(),
        });
    }
    if gap.gap.len() != ks.len() || gap.s.len() != ks.len() {
        return Err(Error::LengthMismatch {
            left: ks.len(),
            right: gap.gap.len().min(gap.s.len()),
        });
    }
    check_consecutive(ks)?;
    let chosen = (0..ks.len() - 1).find(|&i| gap.gap[i] > gap.gap[i + 1] - gap.s[i + 1]);
    Ok(match chosen {
        Some(i) => GapSelection {
            k: ks[i],
            fallback: false,
        },
        None => GapSelection {
            k: *ks.last().expect("non-empty"),
            fallback: true,
        },
    })
}

/// Knee of an SSW curve: the interior point farthest from the chord through
/// the first and last points. Distances within a relative `1e-12` of the
/// maximum count as ties, resolved to the smallest k.
pub fn select_k_elbow<T: Scalar>(curve: &SswCurve<T>) -> Result<usize> {
    let ks = &curve.k_values;
    let ys = &curve.ssw;
    if ks.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: ks.len(),
            right: ys.len(),
        });
    }
    if ks.len() < 3 {
        return Err(Error::TooShort {
            required: 3,
            actual: ks.len(),
        });
    }
    let last = ks.len() - 1;
    let (x0, y0) = (T::from_count(ks[0]), ys[0]);
    let (x1, y1) = (T::from_count(ks[last]), ys[last]);
    let (dx, dy) = (x1 - x0, y1 - y0);
    let norm = (dx * dx + dy * dy).sqrt();
    if norm == T::zero() {
        return Err(Error::InvalidParameter("curve endpoints coincide".into()));
    }
    let distances: Vec<T> = (1..last)
        .map(|i| (dy * T::from_count(ks[i]) - dx * ys[i] + x1 * y0 - y1 * x0).abs() / norm)
        .collect();
    let max = distances.iter().copied().fold(T::zero(), T::max);
    let scale = ys.iter().map(|v| v.abs()).fold(T::one(), T::max);
    let tol = T::lit(1e-12) * scale;
    let i = distances
        .iter()
        .position(|&d| d >= max - tol)
        .expect("at least one interior point");
    Ok(ks[i + 1])
}
