//! End-to-end runs: correlate, regress, cluster, validate.

use std::time::Instant;

use clustat_core::validation::{gap_statistic, ssw_of_assignment, HierarchicalClusterer};
use clustat_core::{
    cut_dendrogram, dbscan, distance_matrix, hierarchical, kendall, kmeans, linear_regression,
    lowess, pearson, select_k_elbow, select_k_gap, select_k_silhouette, silhouette, spearman,
    standardize, strength_label, Axis, ClusterAssignment, DbscanConfig, Dendrogram, DistanceMatrix,
    DistanceMetric, FeatureMatrix, KMeansConfig, Linkage, LowessFit, RegressionFit, SswCurve,
    Strength,
};
use serde::{Deserialize, Serialize};

use crate::error::{PipelineError, Result};
use crate::ingest::{Dataset, Fingerprint};
use crate::schema::{COLUMNS, CORRELATION_COLUMNS};

/// Reference value for the population/homicide Pearson coefficient on the
/// published municipality table.
pub const PUBLISHED_POPULATION_PEARSON: f64 = 0.9915637;
pub const PUBLISHED_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stages {
    pub correlate: bool,
    pub regress: bool,
    pub cluster: bool,
    pub validate: bool,
}

impl Stages {
    pub const ALL: Stages = Stages {
        correlate: true,
        regress: true,
        cluster: true,
        validate: true,
    };
    pub const NONE: Stages = Stages {
        correlate: false,
        regress: false,
        cluster: false,
        validate: false,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum AlgorithmConfig {
    Kmeans {
        k: usize,
        restarts: usize,
        max_iterations: usize,
        tolerance: f64,
    },
    Hierarchical {
        k: usize,
        linkage: Linkage,
    },
    Dbscan {
        eps: f64,
        min_pts: usize,
    },
}

impl AlgorithmConfig {
    pub fn kmeans(k: usize) -> Self {
        let d = KMeansConfig::<f64>::new(k);
        AlgorithmConfig::Kmeans {
            k,
            restarts: d.restarts,
            max_iterations: d.max_iterations,
            tolerance: d.tolerance,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            AlgorithmConfig::Kmeans { .. } => "kmeans",
            AlgorithmConfig::Hierarchical { .. } => "hierarchical",
            AlgorithmConfig::Dbscan { .. } => "dbscan",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdebAggregation {
    Mean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionConfig {
    /// Explanatory variable; every correlation variable when absent.
    pub x: Option<String>,
    pub lowess_fraction: f64,
    pub lowess_iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub k_min: usize,
    pub k_max: usize,
    pub gap_b: usize,
}

/// Everything needed to reproduce a run, given the same input table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    /// Input path as given; informational.
    pub input: Option<String>,
    pub stages: Stages,
    /// Dependent variable for correlations and regressions.
    pub target: String,
    /// Clustering features; all 16 table columns when absent.
    pub columns: Option<Vec<String>>,
    pub standardize: bool,
    pub metric: DistanceMetric,
    pub algorithm: AlgorithmConfig,
    pub regression: RegressionConfig,
    pub validation: ValidationConfig,
    pub seed: u64,
    pub ideb_aggregation: IdebAggregation,
    /// Compare the population coefficient against the published value.
    pub reference_check: bool,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            input: None,
            stages: Stages::ALL,
            target: "MHR".into(),
            columns: None,
            standardize: true,
            metric: DistanceMetric::Euclidean,
            algorithm: AlgorithmConfig::kmeans(3),
            regression: RegressionConfig {
                x: None,
                lowess_fraction: clustat_core::stats::DEFAULT_FRACTION,
                lowess_iterations: clustat_core::stats::DEFAULT_ROBUSTNESS_ITERATIONS,
            },
            validation: ValidationConfig {
                k_min: 1,
                k_max: 5,
                gap_b: 50,
            },
            seed: 0,
            ideb_aggregation: IdebAggregation::Mean,
            reference_check: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientStrengths {
    pub pearson: Strength,
    pub spearman: Strength,
    pub kendall: Strength,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub variable: String,
    pub pearson: f64,
    pub spearman: f64,
    pub kendall: f64,
    pub strength: CoefficientStrengths,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub metric: DistanceMetric,
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub variable: String,
    pub expected: f64,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSection {
    pub target: String,
    pub rows: Vec<CorrelationRow>,
    /// Distances between the clustering feature columns.
    pub column_distances: NamedMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_check: Option<ReferenceCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionEntry {
    pub x: String,
    pub y: String,
    pub points: Vec<(f64, f64)>,
    pub linear: RegressionFit<f64>,
    pub lowess: LowessFit<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelRow {
    pub id: String,
    /// `None` marks noise.
    pub label: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansDetails {
    pub seed: u64,
    pub restart: usize,
    pub objective: f64,
    pub iterations_used: usize,
    pub converged: bool,
    /// Centroids in the (possibly standardized) feature space.
    pub centroids: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quality {
    pub silhouette_overall: f64,
    pub silhouette_per_cluster: Vec<f64>,
    pub silhouette_per_point: Vec<f64>,
    pub ssw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusteringSection {
    pub algorithm: String,
    pub metric: DistanceMetric,
    pub features: Vec<String>,
    pub k: usize,
    pub noise: usize,
    pub cluster_sizes: Vec<usize>,
    pub assignments: Vec<LabelRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kmeans: Option<KMeansDetails>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dendrogram: Option<Dendrogram<f64>>,
    /// Present when at least two clusters exist and no point is noise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality: Option<Quality>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationRow {
    pub k: usize,
    /// Undefined for a single cluster.
    pub silhouette: Option<f64>,
    pub gap: f64,
    pub gap_s: f64,
    pub log_w: f64,
    pub ssw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectedK {
    pub silhouette: Option<usize>,
    pub gap: Option<usize>,
    /// No k met the gap criterion; the largest k was taken.
    pub gap_fallback: bool,
    pub elbow: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub applicable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub seed: u64,
    pub gap_b: usize,
    pub rows: Vec<ValidationRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected: Option<SelectedK>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// The full, self-contained record of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: ToolInfo,
    pub dataset: Fingerprint,
    pub config: AnalysisConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlations: Option<CorrelationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regressions: Option<Vec<RegressionEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clustering: Option<ClusteringSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSection>,
    /// Wall-clock time; the only field that varies between identical runs.
    pub timing: Timing,
}

impl RunReport {
    /// Copy with the timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> RunReport {
        RunReport {
            timing: Timing { elapsed_ms: 0.0 },
            ..self.clone()
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(PipelineError::config(msg));
        if !CORRELATION_COLUMNS.contains(&self.target.as_str()) {
            return bad(format!("unknown target variable: {}", self.target));
        }
        if let Some(x) = &self.regression.x {
            if !CORRELATION_COLUMNS.contains(&x.as_str()) {
                return bad(format!("unknown regression variable: {x}"));
            }
            if *x == self.target {
                return bad("regression variable equals the target".into());
            }
        }
        if !(self.regression.lowess_fraction > 0.0 && self.regression.lowess_fraction <= 1.0) {
            return bad("lowess fraction must lie in (0, 1]".into());
        }
        if let Some(cols) = &self.columns {
            if cols.is_empty() {
                return bad("empty column subset".into());
            }
            for c in cols {
                if !COLUMNS.contains(&c.as_str()) {
                    return bad(format!("unknown column: {c}"));
                }
            }
        }
        match self.algorithm {
            AlgorithmConfig::Kmeans {
                k,
                restarts,
                max_iterations,
                tolerance,
            } => {
                if k == 0 || k > n {
                    return bad(format!("k = {k} outside [1, {n}]"));
                }
                if restarts == 0 || max_iterations == 0 || !(tolerance >= 0.0) {
                    return bad(
                        "k-means needs restarts >= 1, iterations >= 1 and tolerance >= 0".into(),
                    );
                }
            }
            AlgorithmConfig::Hierarchical { k, .. } => {
                if k == 0 || k > n {
                    return bad(format!("k = {k} outside [1, {n}]"));
                }
            }
            AlgorithmConfig::Dbscan { eps, min_pts } => {
                if !(eps > 0.0 && eps.is_finite()) || min_pts == 0 {
                    return bad("dbscan needs eps > 0 and min_pts >= 1".into());
                }
            }
        }
        let v = self.validation;
        if self.stages.validate && !matches!(self.algorithm, AlgorithmConfig::Dbscan { .. }) {
            if v.k_min == 0 || v.k_min > v.k_max || v.k_max > n {
                return bad(format!(
                    "k range [{}, {}] not within [1, {n}]",
                    v.k_min, v.k_max
                ));
            }
            if v.gap_b == 0 {
                return bad("gap needs at least one reference dataset".into());
            }
        }
        Ok(())
    }

    fn features(&self) -> Vec<String> {
        match &self.columns {
            Some(c) => c.clone(),
            None => COLUMNS.iter().map(|c| c.to_string()).collect(),
        }
    }

    fn kmeans_config(&self, k: usize) -> KMeansConfig<f64> {
        let mut c = KMeansConfig::new(k)
            .with_metric(self.metric)
            .with_seed(self.seed);
        if let AlgorithmConfig::Kmeans {
            restarts,
            max_iterations,
            tolerance,
            ..
        } = self.algorithm
        {
            c = c
                .with_restarts(restarts)
                .with_max_iterations(max_iterations);
            c.tolerance = tolerance;
        }
        c
    }
}

pub fn run_analysis(config: &AnalysisConfig, data: &Dataset) -> Result<RunReport> {
    let started = Instant::now();
    config.validate(data.len())?;

    let features = feature_matrix(config, data)?;
    let correlations = if config.stages.correlate {
        Some(correlate(config, data, &features)?)
    } else {
        None
    };
    let regressions = if config.stages.regress {
        Some(regress(config, data)?)
    } else {
        None
    };
    let clustering = if config.stages.cluster {
        Some(cluster(config, &features)?)
    } else {
        None
    };
    let validation = if config.stages.validate {
        Some(validate(config, &features)?)
    } else {
        None
    };

    Ok(RunReport {
        tool: ToolInfo {
            name: "clustat".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        },
        dataset: data.fingerprint(),
        config: config.clone(),
        correlations,
        regressions,
        clustering,
        validation,
        timing: Timing {
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        },
    })
}

fn feature_matrix(config: &AnalysisConfig, data: &Dataset) -> Result<FeatureMatrix<f64>> {
    let x = data
        .matrix
        .select_columns(&config.features())
        .map_err(PipelineError::numeric("selecting clustering columns"))?;
    if config.standardize {
        standardize(&x).map_err(PipelineError::numeric("standardizing"))
    } else {
        Ok(x)
    }
}

fn correlate(
    config: &AnalysisConfig,
    data: &Dataset,
    features: &FeatureMatrix<f64>,
) -> Result<CorrelationSection> {
    let table = data.correlation_matrix();
    let y = table
        .column_by_name(&config.target)
        .expect("target validated");
    let mut rows = Vec::new();
    for name in CORRELATION_COLUMNS.iter().filter(|c| **c != config.target) {
        let x = table.column_by_name(name).expect("known column");
        let ctx = |coef: &str| format!("{coef} correlation of {name} with {}", config.target);
        let p = pearson(&x, &y).map_err(PipelineError::numeric(ctx("pearson")))?;
        let s = spearman(&x, &y).map_err(PipelineError::numeric(ctx("spearman")))?;
        let k = kendall(&x, &y).map_err(PipelineError::numeric(ctx("kendall")))?;
        let label = |r: f64| strength_label(r).map_err(PipelineError::numeric(ctx("labelling")));
        rows.push(CorrelationRow {
            variable: name.to_string(),
            pearson: p,
            spearman: s,
            kendall: k,
            strength: CoefficientStrengths {
                pearson: label(p)?,
                spearman: label(s)?,
                kendall: label(k)?,
            },
        });
    }

    let column_distances = if features.n_cols() >= 2 {
        let d = distance_matrix(features, config.metric, Axis::Columns)
            .map_err(PipelineError::numeric("column distance matrix"))?;
        named(&d)
    } else {
        NamedMatrix {
            metric: config.metric,
            names: features.column_names().to_vec(),
            values: vec![vec![0.0]],
        }
    };

    let reference_check = (config.reference_check && config.target == "MHR").then(|| {
        let observed = rows
            .iter()
            .find(|r| r.variable == "POPULATION")
            .expect("population row")
            .pearson;
        ReferenceCheck {
            variable: "POPULATION".into(),
            expected: PUBLISHED_POPULATION_PEARSON,
            observed,
            tolerance: PUBLISHED_TOLERANCE,
            pass: (observed - PUBLISHED_POPULATION_PEARSON).abs() <= PUBLISHED_TOLERANCE,
        }
    });

    Ok(CorrelationSection {
        target: config.target.clone(),
        rows,
        column_distances,
        reference_check,
    })
}

fn named(d: &DistanceMatrix<f64>) -> NamedMatrix {
    NamedMatrix {
        metric: d.metric(),
        names: d.ids().to_vec(),
        values: d.to_rows(),
    }
}

fn regress(config: &AnalysisConfig, data: &Dataset) -> Result<Vec<RegressionEntry>> {
    let table = data.correlation_matrix();
    let y = table
        .column_by_name(&config.target)
        .expect("target validated");
    let xs: Vec<String> = match &config.regression.x {
        Some(x) => vec![x.clone()],
        None => CORRELATION_COLUMNS
            .iter()
            .filter(|c| **c != config.target)
            .map(|c| c.to_string())
            .collect(),
    };
    xs.into_iter()
        .map(|name| {
            let x = table.column_by_name(&name).expect("known column");
            let ctx = |what: &str| format!("{what} of {} on {name}", config.target);
            let linear = linear_regression(&x, &y)
                .map_err(PipelineError::numeric(ctx("linear regression")))?;
            let smooth = lowess(
                &x,
                &y,
                config.regression.lowess_fraction,
                config.regression.lowess_iterations,
            )
            .map_err(PipelineError::numeric(ctx("lowess")))?;
            Ok(RegressionEntry {
                points: x.iter().copied().zip(y.iter().copied()).collect(),
                x: name,
                y: config.target.clone(),
                linear,
                lowess: smooth,
            })
        })
        .collect()
}

fn rows_distance(config: &AnalysisConfig, x: &FeatureMatrix<f64>) -> Result<DistanceMatrix<f64>> {
    distance_matrix(x, config.metric, Axis::Rows)
        .map_err(PipelineError::numeric("row distance matrix"))
}

fn cluster(config: &AnalysisConfig, x: &FeatureMatrix<f64>) -> Result<ClusteringSection> {
    let mut kmeans_details = None;
    let mut dendrogram = None;
    let mut d = None;
    let assignment = match config.algorithm {
        AlgorithmConfig::Kmeans { k, .. } => {
            let r =
                kmeans(x, &config.kmeans_config(k)).map_err(PipelineError::numeric("k-means"))?;
            kmeans_details = Some(KMeansDetails {
                seed: config.seed,
                restart: r.restart,
                objective: r.objective,
                iterations_used: r.iterations_used,
                converged: r.converged,
                centroids: r.centroids,
            });
            r.assignment
        }
        AlgorithmConfig::Hierarchical { k, linkage } => {
            let dm = rows_distance(config, x)?;
            let tree = hierarchical(&dm, linkage)
                .map_err(PipelineError::numeric("hierarchical clustering"))?;
            let a =
                cut_dendrogram(&tree, k).map_err(PipelineError::numeric("cutting dendrogram"))?;
            dendrogram = Some(tree);
            d = Some(dm);
            a
        }
        AlgorithmConfig::Dbscan { eps, min_pts } => {
            let dm = rows_distance(config, x)?;
            let cfg = DbscanConfig {
                eps,
                min_pts,
                metric: config.metric,
            };
            let a = dbscan(&dm, &cfg).map_err(PipelineError::numeric("dbscan"))?;
            d = Some(dm);
            a
        }
    };

    let quality = if assignment.k() >= 2 && !assignment.has_noise() {
        let d = match d {
            Some(d) => d,
            None => rows_distance(config, x)?,
        };
        Some(quality_of(x, &d, &assignment)?)
    } else {
        None
    };

    Ok(ClusteringSection {
        algorithm: config.algorithm.name().into(),
        metric: config.metric,
        features: x.column_names().to_vec(),
        k: assignment.k(),
        noise: assignment.noise_count(),
        cluster_sizes: assignment.cluster_sizes(),
        assignments: x
            .row_ids()
            .iter()
            .zip(assignment.labels())
            .map(|(id, &label)| LabelRow {
                id: id.clone(),
                label,
            })
            .collect(),
        kmeans: kmeans_details,
        dendrogram,
        quality,
    })
}

fn quality_of(
    x: &FeatureMatrix<f64>,
    d: &DistanceMatrix<f64>,
    a: &ClusterAssignment,
) -> Result<Quality> {
    let s = silhouette(d, a).map_err(PipelineError::numeric("silhouette"))?;
    let ssw = ssw_of_assignment(x, a).map_err(PipelineError::numeric("ssw"))?;
    Ok(Quality {
        silhouette_overall: s.overall,
        silhouette_per_cluster: s.per_cluster,
        silhouette_per_point: s.per_point,
        ssw,
    })
}

fn validate(config: &AnalysisConfig, x: &FeatureMatrix<f64>) -> Result<ValidationSection> {
    let v = config.validation;
    let mut section = ValidationSection {
        applicable: true,
        reason: None,
        seed: config.seed,
        gap_b: v.gap_b,
        rows: vec![],
        selected: None,
    };
    let linkage = match config.algorithm {
        AlgorithmConfig::Dbscan { .. } => {
            section.applicable = false;
            section.reason = Some("dbscan does not take a cluster count".into());
            return Ok(section);
        }
        AlgorithmConfig::Hierarchical { linkage, .. } => Some(linkage),
        AlgorithmConfig::Kmeans { .. } => None,
    };

    let ks: Vec<usize> = (v.k_min..=v.k_max).collect();
    let d = rows_distance(config, x)?;
    let tree = match linkage {
        Some(l) => {
            Some(hierarchical(&d, l).map_err(PipelineError::numeric("hierarchical clustering"))?)
        }
        None => None,
    };

    let mut silhouettes = Vec::new();
    let mut ssws = Vec::new();
    for &k in &ks {
        let a = match &tree {
            Some(t) => {
                cut_dendrogram(t, k).map_err(PipelineError::numeric("cutting dendrogram"))?
            }
            None => {
                kmeans(x, &config.kmeans_config(k))
                    .map_err(PipelineError::numeric("k-means"))?
                    .assignment
            }
        };
        let sil = if k >= 2 {
            Some(
                silhouette(&d, &a)
                    .map_err(PipelineError::numeric(format!("silhouette at k = {k}")))?
                    .overall,
            )
        } else {
            None
        };
        silhouettes.push(sil);
        ssws.push(
            ssw_of_assignment(x, &a).map_err(PipelineError::numeric(format!("ssw at k = {k}")))?,
        );
    }

    let gap = match linkage {
        Some(linkage) => gap_statistic(
            x,
            &ks,
            v.gap_b,
            config.seed,
            &HierarchicalClusterer {
                linkage,
                metric: config.metric,
            },
        ),
        None => gap_statistic(x, &ks, v.gap_b, config.seed, &config.kmeans_config(1)),
    }
    .map_err(PipelineError::numeric("gap statistic"))?;

    section.rows = ks
        .iter()
        .enumerate()
        .map(|(i, &k)| ValidationRow {
            k,
            silhouette: silhouettes[i],
            gap: gap.gap[i],
            gap_s: gap.s[i],
            log_w: gap.log_w_observed[i],
            ssw: ssws[i],
        })
        .collect();

    let sil_ks: Vec<usize> = ks
        .iter()
        .zip(&silhouettes)
        .filter(|(_, s)| s.is_some())
        .map(|(&k, _)| k)
        .collect();
    let sil_vals: Vec<f64> = silhouettes.iter().flatten().copied().collect();
    let by_silhouette = if sil_ks.len() >= 2 {
        select_k_silhouette(&sil_ks, &sil_vals).ok()
    } else {
        None
    };
    let by_gap = if ks.len() >= 2 {
        select_k_gap(&gap).ok()
    } else {
        None
    };
    let by_elbow = if ks.len() >= 3 {
        let curve = SswCurve::new(ks.clone(), ssws).map_err(PipelineError::numeric("ssw curve"))?;
        select_k_elbow(&curve).ok()
    } else {
        None
    };
    section.selected = Some(SelectedK {
        silhouette: by_silhouette,
        gap: by_gap.map(|g| g.k),
        gap_fallback: by_gap.is_some_and(|g| g.fallback),
        elbow: by_elbow,
    });
    Ok(section)
}
