//! Lloyd's K-means with a pluggable assignment metric and seeded restarts.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::{Algorithm, ClusterAssignment, Provenance};
use crate::error::{Error, Result};
use crate::metric::{distance, DistanceMetric, FeatureMatrix};
use crate::scalar::{squared_euclidean, Scalar};
use crate::seed::rng_for;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansConfig<T> {
    pub k: usize,
    pub metric: DistanceMetric,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Stop once no centroid moves further than this (Euclidean).
    pub tolerance: T,
}

impl<T: Scalar> KMeansConfig<T> {
    pub const DEFAULT_MAX_ITERATIONS: usize = 100;
    pub const DEFAULT_RESTARTS: usize = 25;

    pub fn new(k: usize) -> Self {
        Self {
            k,
            metric: DistanceMetric::Euclidean,
            max_iterations: Self::DEFAULT_MAX_ITERATIONS,
            restarts: Self::DEFAULT_RESTARTS,
            seed: 0,
            tolerance: T::lit(1e-8),
        }
    }

    pub fn with_metric(mut self, metric: DistanceMetric) -> Self {
        self.metric = metric;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > n {
            return Err(Error::InvalidParameter(format!(
                "k must be in [1, {n}], got {}",
                self.k
            )));
        }
        if self.restarts == 0 {
            return Err(Error::InvalidParameter(
                "restarts must be at least 1".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "max_iterations must be at least 1".into(),
            ));
        }
        if !(self.tolerance >= T::zero()) {
            return Err(Error::InvalidParameter(
                "tolerance must be non-negative".into(),
            ));
        }
        Ok(())
    }

    fn provenance(&self) -> Provenance {
        Provenance::new(Algorithm::KMeans)
            .with("k", self.k)
            .with("metric", self.metric)
            .with("max_iterations", self.max_iterations)
            .with("restarts", self.restarts)
            .with("seed", self.seed)
            .with("tolerance", self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansResult<T> {
    pub assignment: ClusterAssignment,
    /// `k x p` cluster means.
    pub centroids: Vec<Vec<T>>,
    /// Sum of squared Euclidean distances to the assigned centroids.
    pub objective: T,
    pub iterations_used: usize,
    pub converged: bool,
    /// Objective after each iteration of the winning restart.
    pub objective_trace: Vec<T>,
    /// Index of the restart that produced this result.
    pub restart: usize,
}

struct Run<T> {
    labels: Vec<usize>,
    centroids: Vec<Vec<T>>,
    objective: T,
    iterations: usize,
    converged: bool,
    trace: Vec<T>,
}

/// Best-of-restarts K-means. Restart `r` draws its initial centroids from a
/// stream derived from `(seed, r)`; the lowest objective wins, ties going to
/// the earliest restart.
pub fn kmeans<T: Scalar>(
    x: &FeatureMatrix<T>,
    config: &KMeansConfig<T>,
) -> Result<KMeansResult<T>> {
    config.validate(x.n_rows())?;
    let mut best: Option<(usize, Run<T>)> = None;
    for restart in 0..config.restarts {
        let run = single_run(x, config, restart)?;
        if best
            .as_ref()
            .is_none_or(|(_, b)| run.objective < b.objective)
        {
            best = Some((restart, run));
        }
    }
    let (restart, run) = best.expect("at least one restart");
    let provenance = config.provenance();
    Ok(KMeansResult {
        assignment: ClusterAssignment::new(run.labels.into_iter().map(Some).collect(), provenance)?,
        centroids: run.centroids,
        objective: run.objective,
        iterations_used: run.iterations,
        converged: run.converged,
        objective_trace: run.trace,
        restart,
    })
}

fn single_run<T: Scalar>(
    x: &FeatureMatrix<T>,
    config: &KMeansConfig<T>,
    restart: usize,
) -> Result<Run<T>> {
    let n = x.n_rows();
    let k = config.k;
    let mut rng = rng_for(config.seed, restart as u64);
    let mut centroids: Vec<Vec<T>> = sample(&mut rng, n, k)
        .into_iter()
        .map(|i| x.row(i).to_vec())
        .collect();

    let mut labels: Option<Vec<usize>> = None;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < config.max_iterations {
        iterations += 1;
        let mut new_labels = assign(x, &centroids, config.metric)?;
        let changed = labels.as_ref() != Some(&new_labels);
        let mut updated = means(x, &new_labels, k);
        repair_empty(x, &mut new_labels, &mut updated, &centroids, config.metric)?;

        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| squared_euclidean(a, b).sqrt())
            .fold(T::zero(), T::max);
        centroids = updated;
        trace.push(sse(x, &new_labels, &centroids));
        labels = Some(new_labels);

        if !changed || shift <= config.tolerance {
            converged = true;
            break;
        }
    }

    let labels = labels.expect("at least one iteration");
    let objective = *trace.last().expect("trace has one entry per iteration");
    Ok(Run {
        labels,
        centroids,
        objective,
        iterations,
        converged,
        trace,
    })
}

/// Nearest centroid per point under `metric`; ties go to the lower index.
fn assign<T: Scalar>(
    x: &FeatureMatrix<T>,
    centroids: &[Vec<T>],
    metric: DistanceMetric,
) -> Result<Vec<usize>> {
    x.rows()
        .map(|row| {
            let mut best = (0, T::infinity());
            for (c, centroid) in centroids.iter().enumerate() {
                let d = distance(row, centroid, metric)?;
                if d < best.1 {
                    best = (c, d);
                }
            }
            Ok(best.0)
        })
        .collect()
}

fn means<T: Scalar>(x: &FeatureMatrix<T>, labels: &[usize], k: usize) -> Vec<Vec<T>> {
    let p = x.n_cols();
    let mut sums = vec![vec![T::zero(); p]; k];
    let mut counts = vec![0usize; k];
    for (row, &l) in x.rows().zip(labels) {
        counts[l] += 1;
        for (s, &v) in sums[l].iter_mut().zip(row) {
            *s = *s + v;
        }
    }
    for (sum, &count) in sums.iter_mut().zip(&counts) {
        if count > 0 {
            let c = T::from_count(count);
            sum.iter_mut().for_each(|s| *s = *s / c);
        }
    }
    sums
}

/// Reseeds each empty cluster at the point farthest from its previous
/// centroid, taking that point from a cluster that keeps at least one member.
fn repair_empty<T: Scalar>(
    x: &FeatureMatrix<T>,
    labels: &mut [usize],
    centroids: &mut [Vec<T>],
    previous: &[Vec<T>],
    metric: DistanceMetric,
) -> Result<()> {
    let k = centroids.len();
    loop {
        let mut counts = vec![0usize; k];
        labels.iter().for_each(|&l| counts[l] += 1);
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return Ok(());
        };
        let mut far: Option<(usize, T)> = None;
        for (i, row) in x.rows().enumerate() {
            if counts[labels[i]] < 2 {
                continue;
            }
            let d = distance(row, &previous[empty], metric)?;
            if far.is_none_or(|(_, best)| d > best) {
                far = Some((i, d));
            }
        }
        let (i, _) =
            far.ok_or_else(|| Error::Numeric("no donor point for empty cluster".into()))?;
        let donor = labels[i];
        labels[i] = empty;
        let refreshed = means(x, labels, k);
        centroids[empty] = refreshed[empty].clone();
        centroids[donor] = refreshed[donor].clone();
    }
}

fn sse<T: Scalar>(x: &FeatureMatrix<T>, labels: &[usize], centroids: &[Vec<T>]) -> T {
    x.rows()
        .zip(labels)
        .map(|(row, &l)| squared_euclidean(row, &centroids[l]))
        .sum()
}

/// Sum over clusters of squared Euclidean distances from members to their
/// centroid, whatever metric drove the assignment.
pub fn kmeans_objective<T: Scalar>(
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
    if let Some(bad) = centroids.iter().find(|c| c.len() != x.n_cols()) {
        return Err(Error::LengthMismatch {
            left: bad.len(),
            right: x.n_cols(),
        });
    }
    let labels = assignment.dense_labels()?;
    let mut total = T::zero();
    for (row, &l) in x.rows().zip(&labels) {
        let centroid = centroids.get(l).ok_or(Error::LabelOutOfRange {
            label: l,
            clusters: centroids.len(),
        })?;
        total = total + squared_euclidean(row, centroid);
    }
    Ok(total)
}

/// Component-wise means of the clusters of a noise-free assignment.
pub fn centroids_of<T: Scalar>(
    x: &FeatureMatrix<T>,
    assignment: &ClusterAssignment,
) -> Result<Vec<Vec<T>>> {
    if assignment.len() != x.n_rows() {
        return Err(Error::LengthMismatch {
            left: assignment.len(),
            right: x.n_rows(),
        });
    }
    Ok(means(x, &assignment.dense_labels()?, assignment.k()))
}
