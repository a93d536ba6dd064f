//! Agglomerative clustering over a distance matrix, and dendrogram cuts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Algorithm, ClusterAssignment, Provenance};
use crate::error::{Error, Result};
use crate::metric::{DistanceMatrix, DistanceMetric};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    /// Minimum pairwise distance between members.
    Single,
    /// Maximum pairwise distance between members.
    Complete,
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
        })
    }
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            other => Err(Error::InvalidParameter(format!("unknown linkage: {other}"))),
        }
    }
}

/// One agglomeration step. Leaves are nodes `0..n`; the cluster created by
/// merge `i` is node `n + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge<T> {
    pub left: usize,
    pub right: usize,
    pub height: T,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram<T> {
    pub merges: Vec<Merge<T>>,
    pub n_leaves: usize,
    pub linkage: Linkage,
    pub metric: DistanceMetric,
}

impl<T: Scalar> Dendrogram<T> {
    pub fn heights(&self) -> Vec<T> {
        self.merges.iter().map(|m| m.height).collect()
    }

    /// Leaf order that draws the tree without crossing branches.
    pub fn leaf_order(&self) -> Vec<usize> {
        let n = self.n_leaves;
        if self.merges.is_empty() {
            return (0..n).collect();
        }
        let mut out = Vec::with_capacity(n);
        let mut stack = vec![n + self.merges.len() - 1];
        while let Some(node) = stack.pop() {
            if node < n {
                out.push(node);
            } else {
                let m = &self.merges[node - n];
                stack.push(m.right);
                stack.push(m.left);
            }
        }
        out
    }
}

/// Bottom-up merging: each step joins the two active clusters with the
/// smallest linkage dissimilarity (ties go to the lowest-numbered pair).
/// Naive O(n^3).
pub fn hierarchical<T: Scalar>(d: &DistanceMatrix<T>, linkage: Linkage) -> Result<Dendrogram<T>> {
    let n = d.len();
    if n < 2 {
        return Err(Error::InvalidMatrix(
            "hierarchical clustering needs at least 2 entities".into(),
        ));
    }
    // Slot i holds an active cluster; dist is the inter-cluster linkage table.
    let mut dist = d.to_rows();
    let mut node: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut merges = Vec::with_capacity(n - 1);

    for step in 0..n - 1 {
        let mut best: Option<(usize, usize, T)> = None;
        for i in (0..n).filter(|&i| active[i]) {
            for j in (i + 1..n).filter(|&j| active[j]) {
                if best.is_none_or(|(_, _, h)| dist[i][j] < h) {
                    best = Some((i, j, dist[i][j]));
                }
            }
        }
        let (i, j, height) = best.expect("two active clusters remain");
        let (left, right) = if node[i] < node[j] {
            (node[i], node[j])
        } else {
            (node[j], node[i])
        };
        merges.push(Merge {
            left,
            right,
            height,
            size: size[i] + size[j],
        });

        for m in (0..n).filter(|&m| active[m] && m != i && m != j) {
            let updated = match linkage {
                Linkage::Single => dist[i][m].min(dist[j][m]),
                Linkage::Complete => dist[i][m].max(dist[j][m]),
            };
            dist[i][m] = updated;
            dist[m][i] = updated;
        }
        active[j] = false;
        size[i] += size[j];
        node[i] = n + step;
    }

    Ok(Dendrogram {
        merges,
        n_leaves: n,
        linkage,
        metric: d.metric(),
    })
}

/// Undoes the last `k - 1` merges. Labels are numbered by first appearance
/// in leaf index order.
pub fn cut_dendrogram<T: Scalar>(
    dendrogram: &Dendrogram<T>,
    k: usize,
) -> Result<ClusterAssignment> {
    let n = dendrogram.n_leaves;
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "cut k must be in [1, {n}], got {k}"
        )));
    }
    let mut parent: Vec<usize> = (0..2 * n - 1).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (step, m) in dendrogram.merges.iter().take(n - k).enumerate() {
        let created = n + step;
        let a = find(&mut parent, m.left);
        let b = find(&mut parent, m.right);
        parent[a] = created;
        parent[b] = created;
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let provenance = Provenance::new(Algorithm::Hierarchical)
        .with("k", k)
        .with("linkage", dendrogram.linkage)
        .with("metric", dendrogram.metric);
    Ok(ClusterAssignment::canonical(&roots, provenance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{distance_matrix, Axis, FeatureMatrix};

    fn line(points: &[f64]) -> DistanceMatrix<f64> {
        let x = FeatureMatrix::from_rows(points.iter().map(|&v| vec![v]).collect()).unwrap();
        distance_matrix(&x, DistanceMetric::Manhattan, Axis::Rows).unwrap()
    }

    #[test]
    fn three_points_single_linkage() {
        let h = hierarchical(&line(&[0.0, 1.0, 10.0]), Linkage::Single).unwrap();
        assert_eq!(
            h.merges,
            vec![
                Merge {
                    left: 0,
                    right: 1,
                    height: 1.0,
                    size: 2
                },
                Merge {
                    left: 2,
                    right: 3,
                    height: 9.0,
                    size: 3
                },
            ]
        );
        let cut = cut_dendrogram(&h, 2).unwrap();
        assert_eq!(cut.dense_labels().unwrap(), vec![0, 0, 1]);
        assert_eq!(h.leaf_order(), vec![2, 0, 1]);
    }

    #[test]
    fn three_points_complete_linkage() {
        let h = hierarchical(&line(&[0.0, 1.0, 10.0]), Linkage::Complete).unwrap();
        assert_eq!(h.heights(), vec![1.0, 10.0]);
    }

    #[test]
    fn two_points() {
        let h = hierarchical(&line(&[2.0, 5.5]), Linkage::Single).unwrap();
        assert_eq!(h.merges.len(), 1);
        assert_eq!(h.merges[0].height, 3.5);
    }

    #[test]
    fn cut_extremes_and_range() {
        let h = hierarchical(&line(&[0.0, 1.0, 10.0, 12.0, 30.0]), Linkage::Complete).unwrap();
        assert_eq!(
            cut_dendrogram(&h, 1).unwrap().dense_labels().unwrap(),
            vec![0; 5]
        );
        assert_eq!(
            cut_dendrogram(&h, 5).unwrap().dense_labels().unwrap(),
            vec![0, 1, 2, 3, 4]
        );
        assert!(cut_dendrogram(&h, 0).is_err());
        assert!(cut_dendrogram(&h, 6).is_err());
    }

    #[test]
    fn linkage_parses() {
        assert_eq!("Single".parse::<Linkage>().unwrap(), Linkage::Single);
        assert!("ward".parse::<Linkage>().is_err());
    }
}
