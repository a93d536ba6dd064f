//! The gap statistic: observed log within-cluster dispersion against its
//! expectation under a uniform reference distribution.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dispersion::pooled_within_dispersion;
use crate::clustering::{
    cut_dendrogram, hierarchical, kmeans, ClusterAssignment, KMeansConfig, Linkage,
};
use crate::error::{Error, Result};
use crate::metric::{distance_matrix, Axis, DistanceMetric, FeatureMatrix};
use crate::scalar::{mean, Scalar};
use crate::seed::rng_for;

/// Anything that partitions a matrix into exactly `k` clusters.
pub trait Clusterer<T: Scalar> {
    fn cluster(&self, x: &FeatureMatrix<T>, k: usize) -> Result<ClusterAssignment>;
}

impl<T: Scalar> Clusterer<T> for KMeansConfig<T> {
    fn cluster(&self, x: &FeatureMatrix<T>, k: usize) -> Result<ClusterAssignment> {
        let config = KMeansConfig { k, ..self.clone() };
        Ok(kmeans(x, &config)?.assignment)
    }
}

/// Agglomerative clustering cut at `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchicalClusterer {
    pub linkage: Linkage,
    pub metric: DistanceMetric,
}

impl<T: Scalar> Clusterer<T> for HierarchicalClusterer {
    fn cluster(&self, x: &FeatureMatrix<T>, k: usize) -> Result<ClusterAssignment> {
        let d = distance_matrix(x, self.metric, Axis::Rows)?;
        cut_dendrogram(&hierarchical(&d, self.linkage)?, k)
    }
}

/// Generates one null-reference dataset shaped like `x`.
pub trait ReferenceSampler<T: Scalar> {
    fn sample(&self, x: &FeatureMatrix<T>, rng: &mut ChaCha8Rng) -> Result<FeatureMatrix<T>>;
}

/// Independent uniform draws over each column's observed `[min, max]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformBox;

impl<T: Scalar> ReferenceSampler<T> for UniformBox {
    fn sample(&self, x: &FeatureMatrix<T>, rng: &mut ChaCha8Rng) -> Result<FeatureMatrix<T>> {
        let ranges = (0..x.n_cols())
            .map(|j| {
                let col = x.column(j);
                let lo = col.iter().copied().fold(T::infinity(), T::min);
                let hi = col.iter().copied().fold(T::neg_infinity(), T::max);
                if lo == hi {
                    Err(Error::DegenerateRange(x.column_names()[j].clone()))
                } else {
                    Ok((lo, hi))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = (0..x.n_rows())
            .map(|_| {
                ranges
                    .iter()
                    .map(|&(lo, hi)| lo + (hi - lo) * T::lit(rng.random::<f64>()))
                    .collect()
            })
            .collect();
        FeatureMatrix::new(rows, x.row_ids().to_vec(), x.column_names().to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapResult<T> {
    pub k_values: Vec<usize>,
    pub gap: Vec<T>,
    /// Simulation error `sd * sqrt(1 + 1/B)` of the reference log-dispersions.
    pub s: Vec<T>,
    pub log_w_observed: Vec<T>,
    pub log_w_reference: Vec<T>,
    pub b_copies: usize,
    pub seed: u64,
}

/// Gap statistic with the uniform-box reference.
pub fn gap_statistic<T: Scalar, C: Clusterer<T>>(
    x: &FeatureMatrix<T>,
    k_values: &[usize],
    b_copies: usize,
    seed: u64,
    clusterer: &C,
) -> Result<GapResult<T>> {
    gap_statistic_with(x, k_values, b_copies, seed, clusterer, &UniformBox)
}

/// Gap statistic with a caller-chosen reference sampler. Copy `b` draws from
/// a stream derived from `(seed, b)`.
pub fn gap_statistic_with<T: Scalar, C: Clusterer<T>, R: ReferenceSampler<T>>(
    x: &FeatureMatrix<T>,
    k_values: &[usize],
    b_copies: usize,
    seed: u64,
    clusterer: &C,
    sampler: &R,
) -> Result<GapResult<T>> {
    if b_copies == 0 {
        return Err(Error::InvalidParameter(
            "need at least one reference copy".into(),
        ));
    }
    if k_values.is_empty() {
        return Err(Error::InvalidParameter("no k values to evaluate".into()));
    }
    let n = x.n_rows();
    if let Some(&bad) = k_values.iter().find(|&&k| k == 0 || k > n) {
        return Err(Error::InvalidParameter(format!(
            "k must be in [1, {n}], got {bad}"
        )));
    }

    let log_w_observed = log_dispersions(x, k_values, clusterer)?;
    let mut reference: Vec<Vec<T>> = vec![Vec::with_capacity(b_copies); k_values.len()];
    for b in 0..b_copies {
        let mut rng = rng_for(seed, b as u64);
        let xr = sampler.sample(x, &mut rng)?;
        for (slot, lw) in reference
            .iter_mut()
            .zip(log_dispersions(&xr, k_values, clusterer)?)
        {
            slot.push(lw);
        }
    }

    let inflation = (T::one() + T::one() / T::from_count(b_copies)).sqrt();
    let mut gap = Vec::with_capacity(k_values.len());
    let mut s = Vec::with_capacity(k_values.len());
    let mut log_w_reference = Vec::with_capacity(k_values.len());
    for (lws, &obs) in reference.iter().zip(&log_w_observed) {
        let m = mean(lws);
        let sd = if lws.len() < 2 {
            T::zero()
        } else {
            let ss: T = lws.iter().map(|&v| (v - m) * (v - m)).sum();
            (ss / T::from_count(lws.len() - 1)).sqrt()
        };
        log_w_reference.push(m);
        gap.push(m - obs);
        s.push(sd * inflation);
    }
    Ok(GapResult {
        k_values: k_values.to_vec(),
        gap,
        s,
        log_w_observed,
        log_w_reference,
        b_copies,
        seed,
    })
}

fn log_dispersions<T: Scalar, C: Clusterer<T>>(
    x: &FeatureMatrix<T>,
    k_values: &[usize],
    clusterer: &C,
) -> Result<Vec<T>> {
    let d = distance_matrix(x, DistanceMetric::Euclidean, Axis::Rows)?;
    k_values
        .iter()
        .map(|&k| {
            let w = pooled_within_dispersion(&d, &clusterer.cluster(x, k)?)?;
            if w > T::zero() {
                Ok(w.ln())
            } else {
                Err(Error::Numeric(format!(
                    "zero within-cluster dispersion at k = {k}"
                )))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Identity;

    impl ReferenceSampler<f64> for Identity {
        fn sample(
            &self,
            x: &FeatureMatrix<f64>,
            _rng: &mut ChaCha8Rng,
        ) -> Result<FeatureMatrix<f64>> {
            Ok(x.clone())
        }
    }

    fn small() -> FeatureMatrix<f64> {
        FeatureMatrix::from_rows(vec![
            vec![0.0, 0.0],
            vec![0.5, 0.2],
            vec![5.0, 5.0],
            vec![5.3, 4.8],
            vec![9.0, 0.5],
            vec![9.2, 0.1],
        ])
        .unwrap()
    }

    #[test]
    fn identity_reference_gives_zero_gap() {
        let r = gap_statistic_with(&small(), &[1, 2, 3], 1, 5, &KMeansConfig::new(1), &Identity)
            .unwrap();
        assert_eq!(r.gap, vec![0.0; 3]);
        assert_eq!(r.s, vec![0.0; 3]);
    }

    #[test]
    fn single_copy_has_zero_spread() {
        let r = gap_statistic(&small(), &[1, 2], 1, 9, &KMeansConfig::new(1)).unwrap();
        assert_eq!(r.s, vec![0.0, 0.0]);
        assert_eq!(r.gap.len(), 2);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let c = KMeansConfig::new(1).with_restarts(5);
        let a = gap_statistic(&small(), &[1, 2, 3], 8, 42, &c).unwrap();
        let b = gap_statistic(&small(), &[1, 2, 3], 8, 42, &c).unwrap();
        assert_eq!(a, b);
        assert!(a.s.iter().all(|&v| v >= 0.0));
        let other = gap_statistic(&small(), &[1, 2, 3], 8, 43, &c).unwrap();
        assert_ne!(a.log_w_reference, other.log_w_reference);
    }

    #[test]
    fn degenerate_column_named() {
        let x = FeatureMatrix::new(
            vec![vec![1.0, 3.0], vec![2.0, 3.0], vec![4.0, 3.0]],
            vec!["a".into(), "b".into(), "c".into()],
            vec!["POP".into(), "FLAT".into()],
        )
        .unwrap();
        assert_eq!(
            gap_statistic(&x, &[1], 2, 0, &KMeansConfig::new(1)),
            Err(Error::DegenerateRange("FLAT".into()))
        );
    }

    #[test]
    fn hierarchical_clusterer_works() {
        let h = HierarchicalClusterer {
            linkage: Linkage::Single,
            metric: DistanceMetric::Manhattan,
        };
        let r = gap_statistic(&small(), &[1, 2, 3], 4, 1, &h).unwrap();
        assert_eq!(r.k_values, vec![1, 2, 3]);
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = KMeansConfig::new(1);
        assert!(gap_statistic(&small(), &[1], 0, 0, &c).is_err());
        assert!(gap_statistic(&small(), &[], 1, 0, &c).is_err());
        assert!(gap_statistic(&small(), &[7], 1, 0, &c).is_err());
    }
}
