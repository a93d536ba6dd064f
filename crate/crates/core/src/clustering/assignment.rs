use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    KMeans,
    Hierarchical,
    Dbscan,
    /// Labels supplied by the caller rather than produced here.
    External,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::KMeans => "kmeans",
            Algorithm::Hierarchical => "hierarchical",
            Algorithm::Dbscan => "dbscan",
            Algorithm::External => "external",
        })
    }
}

/// Which algorithm produced an assignment, and with what parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub algorithm: Algorithm,
    pub params: BTreeMap<String, String>,
}

impl Provenance {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }
}

/// Per-entity cluster labels. `None` marks a DBSCAN noise point.
///
/// Non-noise labels always form the contiguous range `0..k` with every
/// cluster occupied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    labels: Vec<Option<usize>>,
    k: usize,
    provenance: Provenance,
}

impl ClusterAssignment {
    pub fn new(labels: Vec<Option<usize>>, provenance: Provenance) -> Result<Self> {
        let has_noise = labels.iter().any(Option::is_none);
        if has_noise && provenance.algorithm != Algorithm::Dbscan {
            return Err(Error::InvalidAssignment(format!(
                "noise labels are only produced by dbscan, not {}",
                provenance.algorithm
            )));
        }
        let k = labels.iter().flatten().max().map_or(0, |&m| m + 1);
        let mut occupied = vec![false; k];
        for &l in labels.iter().flatten() {
            occupied[l] = true;
        }
        if let Some(empty) = occupied.iter().position(|&o| !o) {
            return Err(Error::InvalidAssignment(format!(
                "cluster {empty} has no members"
            )));
        }
        Ok(Self {
            labels,
            k,
            provenance,
        })
    }

    /// Labels from an external source, with no noise.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        Self::new(
            labels.into_iter().map(Some).collect(),
            Provenance::new(Algorithm::External),
        )
    }

    /// Renumbers arbitrary labels by order of first appearance.
    pub fn canonical(labels: &[usize], provenance: Provenance) -> Self {
        let mut map = BTreeMap::new();
        let relabeled = labels
            .iter()
            .map(|l| {
                let next = map.len();
                Some(*map.entry(*l).or_insert(next))
            })
            .collect();
        Self::new(relabeled, provenance).expect("first-appearance labels are contiguous")
    }

    pub fn labels(&self) -> &[Option<usize>] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Option<usize> {
        self.labels[i]
    }

    /// Number of non-noise clusters.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn noise_count(&self) -> usize {
        self.labels.iter().filter(|l| l.is_none()).count()
    }

    pub fn has_noise(&self) -> bool {
        self.noise_count() > 0
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in self.labels.iter().flatten() {
            sizes[l] += 1;
        }
        sizes
    }

    /// Member indices for each cluster.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                out[*l].push(i);
            }
        }
        out
    }

    /// Labels with noise removed, plus the original indices they belong to.
    pub fn without_noise(&self) -> (Vec<usize>, Vec<usize>) {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.map(|l| (i, l)))
            .unzip()
    }

    /// Dense labels, failing on noise.
    pub fn dense_labels(&self) -> Result<Vec<usize>> {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                l.ok_or_else(|| Error::InvalidAssignment(format!("entity {i} is labeled noise")))
            })
            .collect()
    }
}
