use serde::{Deserialize, Serialize};

use crate::clustering::ClusterAssignment;
use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use crate::scalar::{mean, Scalar};

/// Sign convention for the per-point silhouette.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// `(b - a) / max(a, b)`: near 1 when points sit well inside their cluster.
    #[default]
    Standard,
    /// `(a - b) / max(a, b)`, the mirrored form, kept for comparison only.
    Reversed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SilhouetteResult<T> {
    pub per_point: Vec<T>,
    /// Mean distance to the other members of the point's own cluster.
    pub cohesion: Vec<T>,
    /// Smallest mean distance to the members of another cluster.
    pub separation: Vec<T>,
    pub per_cluster: Vec<T>,
    /// Mean of the per-cluster means.
    pub overall: T,
}

pub fn silhouette<T: Scalar>(
    d: &DistanceMatrix<T>,
    assignment: &ClusterAssignment,
) -> Result<SilhouetteResult<T>> {
    silhouette_with(d, assignment, Orientation::Standard)
}

pub fn silhouette_with<T: Scalar>(
    d: &DistanceMatrix<T>,
    assignment: &ClusterAssignment,
    orientation: Orientation,
) -> Result<SilhouetteResult<T>> {
    if assignment.len() != d.len() {
        return Err(Error::LengthMismatch {
            left: assignment.len(),
            right: d.len(),
        });
    }
    let labels = assignment.dense_labels()?;
    let k = assignment.k();
    if k < 2 {
        return Err(Error::InvalidAssignment(format!(
            "silhouette needs at least 2 clusters, got {k}"
        )));
    }
    let sizes = assignment.cluster_sizes();
    let n = d.len();
    let mut per_point = Vec::with_capacity(n);
    let mut cohesion = Vec::with_capacity(n);
    let mut separation = Vec::with_capacity(n);

    for i in 0..n {
        let mut sums = vec![T::zero(); k];
        for (j, &lj) in labels.iter().enumerate() {
            if j != i {
                sums[lj] = sums[lj] + d.get(i, j);
            }
        }
        let own = labels[i];
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| sums[c] / T::from_count(sizes[c]))
            .fold(T::infinity(), T::min);
        if sizes[own] == 1 {
            cohesion.push(T::zero());
            separation.push(b);
            per_point.push(T::zero());
            continue;
        }
        let a = sums[own] / T::from_count(sizes[own] - 1);
        let denom = a.max(b);
        let s = if denom == T::zero() {
            T::zero()
        } else {
            match orientation {
                Orientation::Standard => (b - a) / denom,
                Orientation::Reversed => (a - b) / denom,
            }
        };
        cohesion.push(a);
        separation.push(b);
        per_point.push(s);
    }

    let per_cluster: Vec<T> = assignment
        .members()
        .iter()
        .map(|m| mean(&m.iter().map(|&i| per_point[i]).collect::<Vec<_>>()))
        .collect();
    let overall = mean(&per_cluster);
    Ok(SilhouetteResult {
        per_point,
        cohesion,
        separation,
        per_cluster,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{distance_matrix, Axis, DistanceMetric, FeatureMatrix};

    fn euclid(points: Vec<Vec<f64>>) -> DistanceMatrix<f64> {
        distance_matrix(
            &FeatureMatrix::from_rows(points).unwrap(),
            DistanceMetric::Euclidean,
            Axis::Rows,
        )
        .unwrap()
    }

    #[test]
    fn two_far_pairs() {
        let d = euclid(vec![
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![100.0, 0.0],
            vec![100.0, 1.0],
        ]);
        let a = ClusterAssignment::from_labels(vec![0, 0, 1, 1]).unwrap();
        let s = silhouette(&d, &a).unwrap();
        let b = (100.0 + 10001f64.sqrt()) / 2.0;
        let expected = (b - 1.0) / b;
        for v in &s.per_point {
            assert!((v - expected).abs() < 1e-15);
        }
        assert!((s.overall - expected).abs() < 1e-15);
        assert!(s.overall > 0.99);

        let r = silhouette_with(&d, &a, Orientation::Reversed).unwrap();
        assert!((r.overall + expected).abs() < 1e-15);
    }

    #[test]
    fn singleton_scores_zero() {
        let d = euclid(vec![vec![0.0], vec![1.0], vec![9.0]]);
        let a = ClusterAssignment::from_labels(vec![0, 0, 1]).unwrap();
        let s = silhouette(&d, &a).unwrap();
        assert_eq!(s.per_point[2], 0.0);
        assert_eq!(s.per_cluster[1], 0.0);
        assert_eq!(s.overall, (s.per_cluster[0] + 0.0) / 2.0);
    }

    #[test]
    fn collapsed_clusters_score_one() {
        let d = euclid(vec![vec![2.0], vec![2.0], vec![2.0], vec![7.0], vec![7.0]]);
        let a = ClusterAssignment::from_labels(vec![0, 0, 0, 1, 1]).unwrap();
        assert_eq!(silhouette(&d, &a).unwrap().overall, 1.0);
    }

    #[test]
    fn needs_two_clusters() {
        let d = euclid(vec![vec![0.0], vec![1.0]]);
        let a = ClusterAssignment::from_labels(vec![0, 0]).unwrap();
        assert!(silhouette(&d, &a).is_err());
    }
}
