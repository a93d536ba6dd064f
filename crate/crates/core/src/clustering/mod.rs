//! K-means, agglomerative hierarchical clustering and DBSCAN.

mod assignment;
mod dbscan;
mod hierarchical;
mod kmeans;

pub use assignment::{Algorithm, ClusterAssignment, Provenance};
pub use dbscan::{dbscan, DbscanConfig};
pub use hierarchical::{cut_dendrogram, hierarchical, Dendrogram, Linkage, Merge};
pub use kmeans::{centroids_of, kmeans, kmeans_objective, KMeansConfig, KMeansResult};
