use clustat_core::{kmeans, DistanceMetric, KMeansConfig, Linkage};
use clustat_pipeline::analysis::{AlgorithmConfig, AnalysisConfig, Stages, ValidationConfig};
use clustat_pipeline::{
    run_analysis, synthesize, synthesize_records, Dataset, MunicipalityRecord, PipelineError,
};

fn record(name: &str, density: f64) -> MunicipalityRecord {
    MunicipalityRecord {
        name: name.into(),
        mhr: 1,
        population: 1000,
        demog_density: density,
        ideb: [4.0; 5],
        life_expect: 70.0,
        gini: 0.5,
        in_richest10: 40.0,
        educ_level: 30.0,
        mhdi: 0.7,
        mhdi_e: 0.6,
        mhdi_l: 0.8,
        mhdi_i: 0.7,
    }
}

fn line_dataset(points: &[f64]) -> Dataset {
    let recs = points
        .iter()
        .enumerate()
        .map(|(i, &d)| record(&format!("m{i}"), d))
        .collect();
    Dataset::from_records(recs).unwrap()
}

fn rand_index(a: &[Option<usize>], b: &[Option<usize>]) -> f64 {
    let n = a.len();
    let mut agree = 0usize;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            pairs += 1;
            if (a[i] == a[j]) == (b[i] == b[j]) {
                agree += 1;
            }
        }
    }
    agree as f64 / pairs as f64
}

#[test]
fn three_group_sweep_selects_three_by_every_rule() {
    let (data, _) = synthesize_records(21, 90, 3, 8.0, 0.0).unwrap();
    let config = AnalysisConfig {
        algorithm: AlgorithmConfig::kmeans(3),
        validation: ValidationConfig {
            k_min: 1,
            k_max: 5,
            gap_b: 20,
        },
        seed: 5,
        ..AnalysisConfig::default()
    };
    let report = run_analysis(&config, &data).unwrap();
    let selected = report
        .validation
        .as_ref()
        .unwrap()
        .selected
        .clone()
        .unwrap();
    assert_eq!(selected.silhouette, Some(3));
    assert_eq!(selected.gap, Some(3));
    assert!(!selected.gap_fallback);
    assert_eq!(selected.elbow, Some(3));

    let clustering = report.clustering.unwrap();
    assert_eq!(clustering.k, 3);
    assert_eq!(clustering.kmeans.unwrap().seed, 5);
    assert_eq!(report.correlations.unwrap().rows.len(), 11);
    assert_eq!(report.regressions.unwrap().len(), 11);
}

#[test]
fn dbscan_with_tiny_radius_is_all_noise() {
    let (data, _) = synthesize_records(3, 30, 2, 8.0, 0.0).unwrap();
    let config = AnalysisConfig {
        stages: Stages {
            cluster: true,
            validate: true,
            ..Stages::NONE
        },
        algorithm: AlgorithmConfig::Dbscan {
            eps: 1e-6,
            min_pts: 2,
        },
        ..AnalysisConfig::default()
    };
    let report = run_analysis(&config, &data).unwrap();
    let c = report.clustering.unwrap();
    assert_eq!(c.noise, 30);
    assert_eq!(c.k, 0);
    assert!(c.assignments.iter().all(|a| a.label.is_none()));
    assert!(c.quality.is_none());
    let v = report.validation.unwrap();
    assert!(!v.applicable);
    assert!(v.rows.is_empty());
}

#[test]
fn hierarchical_hand_trace_in_report() {
    let data = line_dataset(&[0.0, 1.0, 10.0]);
    let mut config = AnalysisConfig {
        stages: Stages {
            cluster: true,
            ..Stages::NONE
        },
        columns: Some(vec!["DEMOGDENSITY".into()]),
        standardize: false,
        metric: DistanceMetric::Manhattan,
        algorithm: AlgorithmConfig::Hierarchical {
            k: 2,
            linkage: Linkage::Single,
        },
        ..AnalysisConfig::default()
    };
    let c = run_analysis(&config, &data).unwrap().clustering.unwrap();
    let tree = c.dendrogram.unwrap();
    assert_eq!(
        (
            tree.merges[0].left,
            tree.merges[0].right,
            tree.merges[0].height
        ),
        (0, 1, 1.0)
    );
    assert_eq!(
        (
            tree.merges[1].left,
            tree.merges[1].right,
            tree.merges[1].height
        ),
        (2, 3, 9.0)
    );
    let labels: Vec<_> = c.assignments.iter().map(|a| a.label).collect();
    assert_eq!(labels, vec![Some(0), Some(0), Some(1)]);

    config.algorithm = AlgorithmConfig::Hierarchical {
        k: 2,
        linkage: Linkage::Complete,
    };
    let tree = run_analysis(&config, &data)
        .unwrap()
        .clustering
        .unwrap()
        .dendrogram
        .unwrap();
    assert_eq!(tree.merges[1].height, 10.0);
}

#[test]
fn report_reruns_from_its_config_echo() {
    let (data, _) = synthesize_records(8, 40, 2, 8.0, 0.05).unwrap();
    let config = AnalysisConfig {
        validation: ValidationConfig {
            k_min: 1,
            k_max: 4,
            gap_b: 5,
        },
        seed: 77,
        ..AnalysisConfig::default()
    };
    let first = run_analysis(&config, &data).unwrap();
    let second = run_analysis(&first.config, &data).unwrap();
    assert_eq!(first.without_timing(), second.without_timing());
    assert_eq!(first.dataset, data.fingerprint());
}

#[test]
fn invalid_configs_are_input_errors() {
    let data = line_dataset(&[0.0, 1.0, 10.0]);
    let cases = [
        AnalysisConfig {
            algorithm: AlgorithmConfig::kmeans(4),
            ..AnalysisConfig::default()
        },
        AnalysisConfig {
            target: "NOPE".into(),
            ..AnalysisConfig::default()
        },
        AnalysisConfig {
            columns: Some(vec!["GDP".into()]),
            ..AnalysisConfig::default()
        },
        AnalysisConfig {
            algorithm: AlgorithmConfig::kmeans(2),
            validation: ValidationConfig {
                k_min: 2,
                k_max: 1,
                gap_b: 5,
            },
            ..AnalysisConfig::default()
        },
    ];
    for config in cases {
        let err = run_analysis(&config, &data).unwrap_err();
        assert!(matches!(err, PipelineError::Input(_)), "{err}");
        assert_eq!(err.exit_code(), 2);
    }
}

#[test]
fn constant_columns_are_numeric_errors() {
    let data = line_dataset(&[0.0, 1.0, 10.0]);
    let config = AnalysisConfig {
        stages: Stages {
            correlate: true,
            ..Stages::NONE
        },
        ..AnalysisConfig::default()
    };
    let err = run_analysis(&config, &data).unwrap_err();
    assert_eq!(err.exit_code(), 3, "{err}");
}

#[test]
fn well_separated_blobs_are_recovered() {
    let s = synthesize(12, 150, 3, 50.0, 0.0).unwrap();
    let r = kmeans(&s.matrix, &KMeansConfig::new(3).with_seed(1)).unwrap();
    assert!(rand_index(r.assignment.labels(), &s.truth) >= 0.99);
}
