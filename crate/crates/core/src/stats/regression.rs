use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{mean, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

impl<T: Scalar> RegressionFit<T> {
    pub fn predict(&self, x: T) -> T {
        self.intercept + self.slope * x
    }
}

/// Ordinary least squares line `y = intercept + slope * x`.
pub fn linear_regression<T: Scalar>(x: &[T], y: &[T]) -> Result<RegressionFit<T>> {
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
    let mx = mean(x);
    let my = mean(y);
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() {
        return Err(Error::ConstantInput("first"));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == T::zero() {
        T::zero()
    } else {
        (sxy * sxy / (sxx * syy)).min(T::one())
    };
    Ok(RegressionFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v + 2.0).collect();
        let fit = linear_regression(&x, &y).unwrap();
        assert_eq!((fit.slope, fit.intercept, fit.r_squared), (3.0, 2.0, 1.0));
        assert_eq!(fit.predict(10.0), 32.0);
    }

    #[test]
    fn constant_response() {
        let fit = linear_regression(&[1.0, 2.0, 3.0], &[4.0, 4.0, 4.0]).unwrap();
        assert_eq!((fit.slope, fit.r_squared), (0.0, 0.0));
        assert_eq!(fit.intercept, 4.0);
    }

    #[test]
    fn constant_predictor_fails() {
        assert!(linear_regression(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(linear_regression(&[1.0], &[1.0]).is_err());
    }
}
