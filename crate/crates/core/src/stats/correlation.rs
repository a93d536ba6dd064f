use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::centered_correlation;
use crate::scalar::Scalar;

fn check_pair<T>(x: &[T], y: &[T]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooShort {
            required: 2,
            actual: x.len(),
        });
    }
    Ok(())
}

/// Sample Pearson product-moment correlation.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    check_pair(x, y)?;
    centered_correlation(x, y)
}

/// 1-based ranks; tied values share the average of the ranks they span.
pub fn average_ranks<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
    let mut ranks = vec![T::zero(); values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = T::from_count(start + 1 + end) / T::lit(2.0);
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Spearman's rho: Pearson correlation of the average ranks.
pub fn spearman<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    check_pair(x, y)?;
    centered_correlation(&average_ranks(x), &average_ranks(y))
}

/// Kendall's tau-b with tie corrections, by direct pair enumeration.
pub fn kendall<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    check_pair(x, y)?;
    let n = x.len();
    let (mut concordant, mut discordant, mut tied_x, mut tied_y) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let sx = x[i].partial_cmp(&x[j]).unwrap_or(Ordering::Equal);
            let sy = y[i].partial_cmp(&y[j]).unwrap_or(Ordering::Equal);
            match (sx, sy) {
                (Ordering::Equal, Ordering::Equal) => {
                    tied_x += 1;
                    tied_y += 1;
                }
                (Ordering::Equal, _) => tied_x += 1,
                (_, Ordering::Equal) => tied_y += 1,
                (a, b) if a == b => concordant += 1,
                _ => discordant += 1,
            }
        }
    }
    let pairs = (n * (n - 1) / 2) as u64;
    if tied_x == pairs {
        return Err(Error::ConstantInput("first"));
    }
    if tied_y == pairs {
        return Err(Error::ConstantInput("second"));
    }
    let num = T::lit(concordant as f64) - T::lit(discordant as f64);
    let den = (T::lit((pairs - tied_x) as f64) * T::lit((pairs - tied_y) as f64)).sqrt();
    Ok((num / den).max(-T::one()).min(T::one()))
}

/// Verbal strength of a correlation by its magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strength {
    Weak,
    Moderate,
    Strong,
    VeryStrong,
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strength::Weak => "weak",
            Strength::Moderate => "moderate",
            Strength::Strong => "strong",
            Strength::VeryStrong => "very strong",
        })
    }
}

/// `|r| < 0.4` weak, `[0.4, 0.7)` moderate, `[0.7, 0.9]` strong, above 0.9 very strong.
pub fn strength_label<T: Scalar>(r: T) -> Result<Strength> {
    if !(r >= -T::one() && r <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "correlation {r} outside [-1, 1]"
        )));
    }
    let a = r.abs();
    Ok(if a > T::lit(0.9) {
        Strength::VeryStrong
    } else if a >= T::lit(0.7) {
        Strength::Strong
    } else if a >= T::lit(0.4) {
        Strength::Moderate
    } else {
        Strength::Weak
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pearson_examples() {
        let x = [1.0f64, 2.0, 3.0, 4.0, 5.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let y: Vec<f64> = x.iter().map(|v| -2.0 * v + 7.0).collect();
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(
            pearson(&[1.0, 1.0], &[1.0, 2.0]),
            Err(Error::ConstantInput("first"))
        );
        assert!(pearson(&[1.0], &[1.0]).is_err());
        // x=(1,2,3,4), y=(1,3,2,4): cov 1.0 / sqrt(1.25 * 1.25) = 0.8
        assert!(
            (pearson(&[1.0f64, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap() - 0.8).abs() < 1e-15
        );
    }

    #[test]
    fn ranks_average_ties() {
        assert_eq!(
            average_ranks(&[10.0, 20.0, 10.0, 5.0]),
            vec![2.5, 4.0, 2.5, 1.0]
        );
    }

    #[test]
    fn spearman_examples() {
        let x = [0.5, 1.0, 2.0, 3.5, 9.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| v.exp()).collect();
        assert_eq!(spearman(&x, &y).unwrap(), 1.0);
        let rev: Vec<f64> = x.iter().rev().copied().collect();
        assert_eq!(spearman(&x, &rev).unwrap(), -1.0);
        // ranks (1.5, 1.5, 3) vs (1, 3, 2): centered cross products cancel
        let tied = spearman(&[1.0, 1.0, 2.0], &[3.0, 5.0, 4.0]).unwrap();
        assert_eq!(tied, 0.0);
        // ranks (1.5, 1.5, 3) vs (1, 2, 3): 1.5 / sqrt(1.5 * 2)
        let tied = spearman(&[1.0, 1.0, 2.0], &[3.0, 4.0, 5.0]).unwrap();
        assert!((tied - 1.5 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kendall_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall(&x, &x).unwrap(), 1.0);
        let one_swap: f64 = kendall(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
        assert!((one_swap - 1.0 / 3.0).abs() < 1e-15);
        assert!(kendall(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn strength_bands() {
        assert_eq!(strength_label(0.9915637).unwrap(), Strength::VeryStrong);
        assert_eq!(strength_label(0.7262442).unwrap(), Strength::Strong);
        assert_eq!(strength_label(0.9).unwrap(), Strength::Strong);
        assert_eq!(strength_label(-0.7).unwrap(), Strength::Strong);
        assert_eq!(strength_label(0.4).unwrap(), Strength::Moderate);
        assert_eq!(strength_label(0.3994967).unwrap(), Strength::Weak);
        assert_eq!(strength_label(0.0).unwrap(), Strength::Weak);
        assert!(strength_label(1.2).is_err());
        assert!(strength_label(f64::NAN).is_err());
    }
}
