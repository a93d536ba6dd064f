//! Clustering and cluster-validation toolkit.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`, which is what the pipeline
//! uses.

// `!(a >= b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clustering;
pub mod error;
pub mod metric;
mod scalar;
pub mod seed;
pub mod stats;
pub mod validation;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use clustering::{
    cut_dendrogram, dbscan, hierarchical, kmeans, kmeans_objective, Algorithm, ClusterAssignment,
    DbscanConfig, Dendrogram, KMeansConfig, KMeansResult, Linkage, Merge, Provenance,
};
pub use metric::{
    distance, distance_matrix, standardize, Axis, DistanceMatrix, DistanceMetric, FeatureMatrix,
};
pub use stats::{
    kendall, linear_regression, lowess, pearson, spearman, strength_label, LowessFit,
    RegressionFit, Strength,
};
pub use validation::{
    gap_statistic, pooled_within_dispersion, select_k_elbow, select_k_gap, select_k_silhouette,
    silhouette, ssw, GapResult, GapSelection, SilhouetteResult, SswCurve,
};

pub type FeatureMatrix64 = FeatureMatrix<f64>;
pub type FeatureMatrix32 = FeatureMatrix<f32>;
pub type DistanceMatrix64 = DistanceMatrix<f64>;
pub type DistanceMatrix32 = DistanceMatrix<f32>;
pub type KMeansConfig64 = KMeansConfig<f64>;
pub type KMeansResult64 = KMeansResult<f64>;
pub type Dendrogram64 = Dendrogram<f64>;
pub type DbscanConfig64 = DbscanConfig<f64>;
pub type SilhouetteResult64 = SilhouetteResult<f64>;
pub type GapResult64 = GapResult<f64>;
pub type SswCurve64 = SswCurve<f64>;
pub type RegressionFit64 = RegressionFit<f64>;
pub type LowessFit64 = LowessFit<f64>;
