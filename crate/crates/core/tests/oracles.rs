//! Library outputs against the brute-force definitions in `clustat-oracles`.

use clustat_core::validation::{pooled_within_dispersion, ssw_of_assignment};
use clustat_core::{
    dbscan, distance_matrix, gap_statistic, hierarchical, kendall, kmeans, kmeans_objective,
    linear_regression, lowess, pearson, select_k_elbow, select_k_gap, silhouette, spearman, Axis,
    ClusterAssignment, DbscanConfig, DistanceMetric, FeatureMatrix, KMeansConfig, Linkage,
    SswCurve,
};
use clustat_oracles as oracle;
use clustat_oracles::TestRng;

fn matrix(rows: &oracle::Rows) -> FeatureMatrix<f64> {
    FeatureMatrix::from_rows(rows.clone()).unwrap()
}

fn blobs(rng: &mut TestRng, per_blob: usize, separation: f64) -> (oracle::Rows, Vec<usize>) {
    let centers = [
        (0.0, 0.0),
        (separation, 0.0),
        (separation / 2.0, separation * 0.866),
    ];
    let mut rows = Vec::new();
    let mut truth = Vec::new();
    for (c, &(cx, cy)) in centers.iter().enumerate() {
        for _ in 0..per_blob {
            // sum of uniforms: roughly normal with unit variance
            let nx: f64 = (0..12).map(|_| rng.uniform()).sum::<f64>() - 6.0;
            let ny: f64 = (0..12).map(|_| rng.uniform()).sum::<f64>() - 6.0;
            rows.push(vec![cx + nx, cy + ny]);
            truth.push(c);
        }
    }
    (rows, truth)
}

#[test]
fn manhattan_matrix_matches_double_loop() {
    let mut rng = TestRng::new(1);
    for _ in 0..20 {
        let pts = rng.points(5, 3, 10.0);
        let d = distance_matrix(&matrix(&pts), DistanceMetric::Manhattan, Axis::Rows).unwrap();
        assert_eq!(d.to_rows(), oracle::distance_table(&pts, oracle::manhattan));
    }
}

#[test]
fn four_point_kmeans_is_the_enumerated_optimum() {
    let pts = vec![
        vec![0.0, 0.0],
        vec![0.0, 1.0],
        vec![10.0, 0.0],
        vec![10.0, 1.0],
    ];
    let r = kmeans(&matrix(&pts), &KMeansConfig::new(2)).unwrap();
    assert_eq!(r.objective, oracle::brute_force_kmeans(&pts, 2));
    assert_eq!(r.objective, 1.0);
}

#[test]
fn objective_matches_naive_sum() {
    let mut rng = TestRng::new(2);
    for _ in 0..50 {
        let pts = rng.points(8, 2, 5.0);
        let k = rng.int(1, 4);
        let labels = rng.labels(8, k);
        let centroids: Vec<Vec<f64>> = (0..k)
            .map(|_| vec![rng.range(-5.0, 5.0), rng.range(-5.0, 5.0)])
            .collect();
        let mut naive = 0.0;
        for (i, p) in pts.iter().enumerate() {
            naive += oracle::euclidean(p, &centroids[labels[i]]).powi(2);
        }
        let a = ClusterAssignment::from_labels(labels).unwrap();
        let got = kmeans_objective(&matrix(&pts), &a, &centroids).unwrap();
        assert!((got - naive).abs() <= 1e-12, "{got} vs {naive}");
    }
}

#[test]
fn kmeans_finds_brute_force_optimum() {
    let mut rng = TestRng::new(3);
    for trial in 0..40 {
        let n = rng.int(4, 8);
        let k = rng.int(2, 3);
        let pts = rng.points(n, 2, 10.0);
        let cfg = KMeansConfig::new(k).with_restarts(50).with_seed(trial);
        let r = kmeans(&matrix(&pts), &cfg).unwrap();
        let best = oracle::brute_force_kmeans(&pts, k);
        assert!(
            (r.objective - best).abs() <= 1e-9,
            "trial {trial}: {} vs {best}",
            r.objective
        );
    }
}

#[test]
fn single_linkage_heights_are_mst_weights() {
    let mut rng = TestRng::new(4);
    for _ in 0..20 {
        let n = rng.int(2, 30);
        let pts = rng.points(n, 3, 10.0);
        let d = distance_matrix(&matrix(&pts), DistanceMetric::Euclidean, Axis::Rows).unwrap();
        let h = hierarchical(&d, Linkage::Single).unwrap();
        assert_eq!(h.heights(), oracle::mst_weights(&d.to_rows()));
    }
}

#[test]
fn dbscan_matches_reachability_oracle() {
    let mut rng = TestRng::new(5);
    for _ in 0..30 {
        let n = rng.int(2, 40);
        let pts = rng.points(n, 2, 10.0);
        let eps = rng.range(0.5, 4.0);
        let min_pts = rng.int(1, 5);
        let d = distance_matrix(&matrix(&pts), DistanceMetric::Euclidean, Axis::Rows).unwrap();
        let got = dbscan(&d, &DbscanConfig::new(eps, min_pts)).unwrap();
        let want = oracle::dbscan(&d.to_rows(), eps, min_pts);
        assert!(oracle::same_partition(got.labels(), &want));
    }
}

#[test]
fn silhouette_matches_definition() {
    let mut rng = TestRng::new(6);
    for _ in 0..30 {
        let pts = rng.points(10, 2, 5.0);
        let k = rng.int(2, 4);
        let labels = rng.labels(10, k);
        let d = distance_matrix(&matrix(&pts), DistanceMetric::Euclidean, Axis::Rows).unwrap();
        let got = silhouette(&d, &ClusterAssignment::from_labels(labels.clone()).unwrap()).unwrap();
        let (per_point, overall) = oracle::silhouette(&d.to_rows(), &labels);
        for (a, b) in got.per_point.iter().zip(&per_point) {
            assert!((a - b).abs() <= 1e-12);
        }
        assert!((got.overall - overall).abs() <= 1e-12);
    }
}

#[test]
fn dispersion_and_ssw_match_definitions() {
    let mut rng = TestRng::new(7);
    for _ in 0..30 {
        let pts = rng.points(9, 3, 5.0);
        let k = rng.int(1, 4);
        let labels = rng.labels(9, k);
        let a = ClusterAssignment::from_labels(labels.clone()).unwrap();
        let x = matrix(&pts);
        let d = distance_matrix(&x, DistanceMetric::Euclidean, Axis::Rows).unwrap();
        let w = pooled_within_dispersion(&d, &a).unwrap();
        assert!((w - oracle::pooled_dispersion(&d.to_rows(), &labels)).abs() <= 1e-12);
        let s = ssw_of_assignment(&x, &a).unwrap();
        let naive = oracle::partition_sse(&pts, &labels, k);
        assert!((s - naive).abs() <= 1e-12);
        // the pairwise form equals the centroid form for Euclidean distances
        assert!((w - s).abs() <= 1e-9);
    }
}

#[test]
fn correlations_match_oracles() {
    let mut rng = TestRng::new(8);
    for trial in 0..200 {
        let n = rng.int(3, 50);
        let tied = trial % 2 == 0;
        let draw = |rng: &mut TestRng| {
            if tied {
                rng.int(0, 4) as f64
            } else {
                rng.uniform()
            }
        };
        let x: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let y: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
        if constant(&x) || constant(&y) {
            continue;
        }
        assert!((pearson(&x, &y).unwrap() - oracle::pearson(&x, &y)).abs() <= 1e-12);
        assert!((spearman(&x, &y).unwrap() - oracle::spearman(&x, &y)).abs() <= 1e-12);
        assert!((kendall(&x, &y).unwrap() - oracle::kendall_tau_b(&x, &y)).abs() <= 1e-12);
    }
}

#[test]
fn regression_matches_normal_equations() {
    let mut rng = TestRng::new(9);
    for _ in 0..20 {
        let x: Vec<f64> = (0..20).map(|_| rng.range(0.0, 10.0)).collect();
        let y: Vec<f64> = x
            .iter()
            .map(|v| 1.7 * v - 3.0 + rng.range(-2.0, 2.0))
            .collect();
        let fit = linear_regression(&x, &y).unwrap();
        let (slope, intercept) = oracle::ols(&x, &y);
        assert!((fit.slope - slope).abs() <= 1e-10);
        assert!((fit.intercept - intercept).abs() <= 1e-10);
        let r = pearson(&x, &y).unwrap();
        assert!((fit.r_squared - r * r).abs() <= 1e-9);
        let mx = x.iter().sum::<f64>() / 20.0;
        let dot: f64 = x
            .iter()
            .zip(&y)
            .map(|(&a, &b)| (a - mx) * (b - fit.predict(a)))
            .sum();
        assert!(dot.abs() < 1e-9);
    }
}

#[test]
fn lowess_smooths_noisy_sine_like_the_oracle() {
    let mut rng = TestRng::new(10);
    let mut x: Vec<f64> = (0..100)
        .map(|_| rng.range(0.0, 2.0 * std::f64::consts::PI))
        .collect();
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let truth: Vec<f64> = x.iter().map(|v| v.sin()).collect();
    let y: Vec<f64> = truth.iter().map(|t| t + rng.range(-0.5, 0.5)).collect();
    let fit = lowess(&x, &y, 0.3, 3).unwrap();
    let fitted = fit.values();

    let raw_dev = y
        .iter()
        .zip(&truth)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let fit_dev = fitted
        .iter()
        .zip(&truth)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(fit_dev < raw_dev, "{fit_dev} >= {raw_dev}");

    let want = oracle::lowess(&x, &y, 0.3, 3);
    for (a, b) in fitted.iter().zip(&want) {
        assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }
}

#[test]
fn planted_blobs_knee_and_gap() {
    let mut rng = TestRng::new(11);
    let (pts, _) = blobs(&mut rng, 30, 10.0);
    let x = matrix(&pts);
    let ks: Vec<usize> = (1..=5).collect();
    let ssw: Vec<f64> = ks
        .iter()
        .map(|&k| {
            kmeans(&x, &KMeansConfig::new(k).with_seed(1))
                .unwrap()
                .objective
        })
        .collect();
    let curve = SswCurve::new(ks.clone(), ssw).unwrap();
    assert!(curve.is_non_increasing());
    assert_eq!(select_k_elbow(&curve).unwrap(), 3);

    let gap = gap_statistic(&x, &ks, 20, 5, &KMeansConfig::new(1).with_restarts(10)).unwrap();
    assert_eq!(select_k_gap(&gap).unwrap().k, 3);
}
