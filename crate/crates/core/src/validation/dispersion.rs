use serde::{Deserialize, Serialize};

use crate::clustering::{centroids_of, ClusterAssignment, KMeansResult};
use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, FeatureMatrix};
use crate::scalar::{squared_euclidean, Scalar};

/// Pooled within-cluster dispersion `W = sum_r (1 / 2 n_r) sum_{i,j in r} d(i,j)^2`.
///
/// With a Euclidean matrix this is the within-cluster sum of squares.
pub fn pooled_within_dispersion<T: Scalar>(
    d: &DistanceMatrix<T>,
    assignment: &ClusterAssignment,
) -> Result<T> {
    if assignment.len() != d.len() {
        return Err(Error::LengthMismatch {
            left: assignment.len(),
            right: d.len(),
        });
    }
    assignment.dense_labels()?;
    let mut total = T::zero();
    for members in assignment.members() {
        if members.is_empty() {
            return Err(Error::InvalidAssignment("empty cluster".into()));
        }
        let mut pair_sum = T::zero();
        for &i in &members {
            for &j in &members {
                let v = d.get(i, j);
                pair_sum = pair_sum + v * v;
            }
        }
        total = total + pair_sum / (T::lit(2.0) * T::from_count(members.len()));
    }
    Ok(total)
}

/// Sum of squared Euclidean distances from each point to its assigned centroid.
pub fn ssw<T: Scalar>(x: &FeatureMatrix<T>, result: &KMeansResult<T>) -> Result<T> {
    ssw_with_centroids(x, &result.assignment, &result.centroids)
}

/// SSW for any noise-free assignment, using the cluster means as centroids.
pub fn ssw_of_assignment<T: Scalar>(
    x: &FeatureMatrix<T>,
    assignment: &ClusterAssignment,
) -> Result<T> {
    let centroids = centroids_of(x, assignment)?;
    ssw_with_centroids(x, assignment, &centroids)
}

fn ssw_with_centroids<T: Scalar>(
    x: &FeatureMatrix<T>,
    assignment: &ClusterAssignment,
    centroids: &[Vec<T>],
) -> Result<T> {
    if assignment.len() != x.n_rows() {
        return Err(Error::LengthMismatch {
            left: assignment.len(),
            right: x.n_rows(),
        });
    }
    let labels = assignment.dense_labels()?;
    labels
        .iter()
        .enumerate()
        .try_fold(T::zero(), |acc, (i, &l)| {
            let c = centroids.get(l).ok_or(Error::LabelOutOfRange {
                label: l,
                clusters: centroids.len(),
            })?;
            if c.len() != x.n_cols() {
                return Err(Error::LengthMismatch {
                    left: c.len(),
                    right: x.n_cols(),
                });
            }
            Ok(acc + squared_euclidean(x.row(i), c))
        })
}

/// SSW as a function of k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SswCurve<T> {
    pub k_values: Vec<usize>,
    pub ssw: Vec<T>,
}

impl<T: Scalar> SswCurve<T> {
    pub fn new(k_values: Vec<usize>, ssw: Vec<T>) -> Result<Self> {
        if k_values.len() != ssw.len() {
            return Err(Error::LengthMismatch {
                left: k_values.len(),
                right: ssw.len(),
            });
        }
        if ssw.iter().any(|v| !(*v >= T::zero())) {
            return Err(Error::InvalidParameter(
                "ssw values must be non-negative".into(),
            ));
        }
        Ok(Self { k_values, ssw })
    }

    /// Whether the curve never increases with k.
    pub fn is_non_increasing(&self) -> bool {
        self.ssw.windows(2).all(|w| w[1] <= w[0])
    }
}
