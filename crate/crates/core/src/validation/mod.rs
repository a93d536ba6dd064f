//! Internal cluster-validity indices and k-selection rules.

mod dispersion;
mod gap;
mod select;
mod silhouette;

pub use dispersion::{pooled_within_dispersion, ssw, ssw_of_assignment, SswCurve};
pub use gap::{
    gap_statistic, gap_statistic_with, Clusterer, GapResult, HierarchicalClusterer,
    ReferenceSampler, UniformBox,
};
pub use select::{select_k_elbow, select_k_gap, select_k_silhouette, GapSelection};
pub use silhouette::{silhouette, silhouette_with, Orientation, SilhouetteResult};
