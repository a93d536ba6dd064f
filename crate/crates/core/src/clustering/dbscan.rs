use serde::{Deserialize, Serialize};

use super::{Algorithm, ClusterAssignment, Provenance};
use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, DistanceMetric};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbscanConfig<T> {
    /// Neighborhood radius (inclusive).
    pub eps: T,
    /// Neighbors within `eps`, the point itself included, needed for a core point.
    pub min_pts: usize,
    pub metric: DistanceMetric,
}

impl<T: Scalar> DbscanConfig<T> {
    pub fn new(eps: T, min_pts: usize) -> Self {
        Self {
            eps,
            min_pts,
            metric: DistanceMetric::Euclidean,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps > T::zero()) || !self.eps.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "eps must be positive, got {}",
                self.eps
            )));
        }
        if self.min_pts == 0 {
            return Err(Error::InvalidParameter("min_pts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Density clustering on a precomputed distance matrix.
///
/// Clusters are the connected components of core points, numbered by their
/// lowest core index. A border point joins the lowest-numbered cluster that
/// has a core point within `eps`; everything else is noise.
pub fn dbscan<T: Scalar>(
    d: &DistanceMatrix<T>,
    config: &DbscanConfig<T>,
) -> Result<ClusterAssignment> {
    config.validate()?;
    if d.metric() != config.metric {
        return Err(Error::InvalidParameter(format!(
            "distance matrix uses {}, config asks for {}",
            d.metric(),
            config.metric
        )));
    }
    let n = d.len();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| d.get(i, j) <= config.eps).collect())
        .collect();
    let core: Vec<bool> = neighbors
        .iter()
        .map(|nb| nb.len() >= config.min_pts)
        .collect();

    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut next = 0;
    for seed in 0..n {
        if !core[seed] || labels[seed].is_some() {
            continue;
        }
        labels[seed] = Some(next);
        let mut stack = vec![seed];
        while let Some(p) = stack.pop() {
            for &q in &neighbors[p] {
                if core[q] && labels[q].is_none() {
                    labels[q] = Some(next);
                    stack.push(q);
                }
            }
        }
        next += 1;
    }

    for i in (0..n).filter(|&i| !core[i]) {
        labels[i] = neighbors[i]
            .iter()
            .filter(|&&j| core[j])
            .filter_map(|&j| labels[j])
            .min();
    }

    let provenance = Provenance::new(Algorithm::Dbscan)
        .with("eps", config.eps)
        .with("min_pts", config.min_pts)
        .with("metric", config.metric);
    ClusterAssignment::new(labels, provenance)
}
