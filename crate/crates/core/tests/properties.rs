use clustat_core::validation::ssw_of_assignment;
use clustat_core::{
    cut_dendrogram, dbscan, distance, distance_matrix, hierarchical, kendall, kmeans,
    linear_regression, pearson, silhouette, spearman, standardize, Axis, ClusterAssignment,
    DbscanConfig, DistanceMetric, FeatureMatrix, KMeansConfig, Linkage,
};
use clustat_oracles as oracle;
use proptest::prelude::*;

fn vector(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, len)
}

fn points(max_n: usize, p: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(vector(p), 2..=max_n)
}

fn metric() -> impl Strategy<Value = DistanceMetric> {
    prop::sample::select(DistanceMetric::ALL.to_vec())
}

fn non_constant(v: &[f64]) -> bool {
    v.iter().any(|&a| a != v[0])
}

fn paired(max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2..=max).prop_flat_map(|n| {
        let tied = prop::collection::vec((0..5u8).prop_map(f64::from), n);
        let cont = prop::collection::vec(-10.0..10.0f64, n);
        (
            prop_oneof![tied.clone(), cont.clone()],
            prop_oneof![tied, cont],
        )
    })
}

proptest! {
    #[test]
    fn distances_symmetric_with_zero_self_distance(
        (a, b) in (2..6usize).prop_flat_map(|n| (vector(n), vector(n))),
        m in metric(),
    ) {
        prop_assume!(m != DistanceMetric::Pearson || (non_constant(&a) && non_constant(&b)));
        prop_assert_eq!(distance(&a, &b, m).unwrap(), distance(&b, &a, m).unwrap());
        prop_assert_eq!(distance(&a, &a, m).unwrap(), 0.0);
        let d = distance(&a, &b, m).unwrap();
        prop_assert!(d >= 0.0);
        if m == DistanceMetric::Pearson {
            prop_assert!(d <= 2.0);
        }
    }

    #[test]
    fn distance_matrix_equals_double_loop(pts in points(12, 3), m in metric()) {
        prop_assume!(m != DistanceMetric::Pearson || pts.iter().all(|r| non_constant(r)));
        let x = FeatureMatrix::from_rows(pts.clone()).unwrap();
        let d = distance_matrix(&x, m, Axis::Rows).unwrap();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                let want = if i == j { 0.0 } else { distance(&pts[i], &pts[j], m).unwrap() };
                prop_assert_eq!(d.get(i, j), want);
                prop_assert_eq!(d.get(i, j), d.get(j, i));
            }
        }
    }

    #[test]
    fn standardize_is_idempotent(pts in points(15, 3)) {
        let x = FeatureMatrix::from_rows(pts).unwrap();
        prop_assume!((0..3).all(|j| non_constant(&x.column(j))));
        let z = standardize(&x).unwrap();
        let n = z.n_rows() as f64;
        for j in 0..3 {
            let col = z.column(j);
            let m = col.iter().sum::<f64>() / n;
            let sd = (col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0)).sqrt();
            prop_assert!(m.abs() <= 1e-12);
            prop_assert!((sd - 1.0).abs() <= 1e-12);
        }
        let again = standardize(&z).unwrap();
        for (r1, r2) in again.rows().zip(z.rows()) {
            for (a, b) in r1.iter().zip(r2) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn euclidean_kmeans_objective_never_increases(pts in points(20, 2), k in 1..5usize, seed in any::<u64>()) {
        prop_assume!(k <= pts.len());
        let x = FeatureMatrix::from_rows(pts).unwrap();
        let r = kmeans(&x, &KMeansConfig::new(k).with_seed(seed).with_restarts(3)).unwrap();
        for w in r.objective_trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0), "{:?}", r.objective_trace);
        }
        prop_assert_eq!(r.assignment.k(), k);
    }

    #[test]
    fn other_metric_kmeans_terminates_deterministically(pts in points(15, 3), k in 1..4usize, seed in any::<u64>()) {
        prop_assume!(k <= pts.len());
        let x = FeatureMatrix::from_rows(pts).unwrap();
        for m in [DistanceMetric::Manhattan, DistanceMetric::Canberra] {
            let cfg = KMeansConfig::new(k).with_metric(m).with_seed(seed).with_restarts(2);
            let a = kmeans(&x, &cfg).unwrap();
            prop_assert!(a.iterations_used <= cfg.max_iterations);
            prop_assert_eq!(&a, &kmeans(&x, &cfg).unwrap());
        }
    }

    #[test]
    fn dendrogram_heights_monotone_and_cuts_refine(pts in points(15, 2), complete in any::<bool>()) {
        let x = FeatureMatrix::from_rows(pts).unwrap();
        let d = distance_matrix(&x, DistanceMetric::Manhattan, Axis::Rows).unwrap();
        let linkage = if complete { Linkage::Complete } else { Linkage::Single };
        let h = hierarchical(&d, linkage).unwrap();
        prop_assert_eq!(h.merges.len(), x.n_rows() - 1);
        for w in h.heights().windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        for (step, m) in h.merges.iter().enumerate() {
            prop_assert!(m.left < x.n_rows() + step && m.right < x.n_rows() + step);
        }
        for k in 2..=x.n_rows() {
            let fine = cut_dendrogram(&h, k).unwrap();
            let coarse = cut_dendrogram(&h, k - 1).unwrap();
            prop_assert_eq!(fine.k(), k);
            for members in fine.members() {
                let parent = coarse.label(members[0]);
                prop_assert!(members.iter().all(|&i| coarse.label(i) == parent));
            }
        }
    }

    #[test]
    fn dbscan_permutation_invariant_off_ties(
        pts in points(25, 2),
        eps in 5.0..60.0f64,
        min_pts in 1..5usize,
        shuffle_seed in any::<u64>(),
    ) {
        let n = pts.len();
        let mut rng = oracle::TestRng::new(shuffle_seed);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.int(0, i));
        }
        let x = FeatureMatrix::from_rows(pts.clone()).unwrap();
        let xp = FeatureMatrix::from_rows(perm.iter().map(|&i| pts[i].clone()).collect()).unwrap();
        let cfg = DbscanConfig::new(eps, min_pts);
        let d = distance_matrix(&x, DistanceMetric::Euclidean, Axis::Rows).unwrap();
        let a = dbscan(&d, &cfg).unwrap();
        let b = dbscan(&distance_matrix(&xp, DistanceMetric::Euclidean, Axis::Rows).unwrap(), &cfg).unwrap();
        let mut unpermuted = vec![None; n];
        for (pos, &orig) in perm.iter().enumerate() {
            unpermuted[orig] = b.label(pos);
        }
        // drop border points whose neighboring cores span several clusters
        let core: Vec<bool> = (0..n).map(|i| (0..n).filter(|&j| d.get(i, j) <= eps).count() >= min_pts).collect();
        let keep: Vec<usize> = (0..n)
            .filter(|&i| {
                if core[i] {
                    return true;
                }
                let mut near: Vec<_> = (0..n).filter(|&j| core[j] && d.get(i, j) <= eps).map(|j| a.label(j)).collect();
                near.sort();
                near.dedup();
                near.len() <= 1
            })
            .collect();
        let lhs: Vec<_> = keep.iter().map(|&i| a.label(i)).collect();
        let rhs: Vec<_> = keep.iter().map(|&i| unpermuted[i]).collect();
        prop_assert!(oracle::same_partition(&lhs, &rhs));
    }

    #[test]
    fn silhouette_within_unit_interval(pts in points(20, 2), k in 2..5usize, seed in any::<u64>()) {
        prop_assume!(k <= pts.len());
        let n = pts.len();
        let labels = oracle::TestRng::new(seed).labels(n, k);
        let x = FeatureMatrix::from_rows(pts).unwrap();
        let d = distance_matrix(&x, DistanceMetric::Euclidean, Axis::Rows).unwrap();
        let s = silhouette(&d, &ClusterAssignment::from_labels(labels).unwrap()).unwrap();
        prop_assert!(s.per_point.iter().all(|v| (-1.0..=1.0).contains(v)));
        let mean_of_means = s.per_cluster.iter().sum::<f64>() / s.per_cluster.len() as f64;
        prop_assert_eq!(s.overall, mean_of_means);
    }

    #[test]
    fn spearman_is_pearson_of_independent_ranks((x, y) in paired(30)) {
        prop_assume!(non_constant(&x) && non_constant(&y));
        let want = pearson(&oracle::ranks(&x), &oracle::ranks(&y)).unwrap();
        prop_assert_eq!(spearman(&x, &y).unwrap(), want);
    }

    #[test]
    fn kendall_invariant_under_monotone_transforms((x, y) in paired(30)) {
        prop_assume!(non_constant(&x) && non_constant(&y));
        let base = kendall(&x, &y).unwrap();
        let tx: Vec<f64> = x.iter().map(|v| (v / 3.0).exp()).collect();
        let ty: Vec<f64> = y.iter().map(|v| v * v * v + 2.0 * v).collect();
        prop_assert_eq!(kendall(&tx, &y).unwrap(), base);
        prop_assert_eq!(kendall(&x, &ty).unwrap(), base);
    }

    #[test]
    fn sign_flip_negates_coefficients(
        (x, y) in (3..30usize).prop_flat_map(|n| (vector(n), vector(n)))
    ) {
        prop_assume!(non_constant(&x) && non_constant(&y));
        let neg: Vec<f64> = y.iter().map(|v| -v).collect();
        prop_assert!((pearson(&x, &neg).unwrap() + pearson(&x, &y).unwrap()).abs() <= 1e-12);
        prop_assert!((spearman(&x, &neg).unwrap() + spearman(&x, &y).unwrap()).abs() <= 1e-12);
        prop_assert!((kendall(&x, &neg).unwrap() + kendall(&x, &y).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn r_squared_is_pearson_squared((x, y) in paired(40)) {
        prop_assume!(non_constant(&x) && non_constant(&y));
        let fit = linear_regression(&x, &y).unwrap();
        let r = pearson(&x, &y).unwrap();
        prop_assert!((0.0..=1.0).contains(&fit.r_squared));
        prop_assert!((fit.r_squared - r * r).abs() <= 1e-9);
    }

    #[test]
    fn best_of_restarts_ssw_non_increasing(pts in points(25, 2), seed in any::<u64>()) {
        let x = FeatureMatrix::from_rows(pts).unwrap();
        let top = x.n_rows().min(5);
        let ssw: Vec<f64> = (1..=top)
            .map(|k| {
                let r = kmeans(&x, &KMeansConfig::new(k).with_seed(seed).with_restarts(25)).unwrap();
                ssw_of_assignment(&x, &r.assignment).unwrap()
            })
            .collect();
        for w in ssw.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9, "{ssw:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn triangle_inequality(
        (a, b, c) in (1..6usize).prop_flat_map(|n| (vector(n), vector(n), vector(n)))
    ) {
        for m in [DistanceMetric::Euclidean, DistanceMetric::Manhattan] {
            let ab = distance(&a, &b, m).unwrap();
            let bc = distance(&b, &c, m).unwrap();
            let ac = distance(&a, &c, m).unwrap();
            prop_assert!(ac <= ab + bc + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn coefficients_bounded((x, y) in paired(12)) {
        prop_assume!(non_constant(&x) && non_constant(&y));
        for r in [pearson(&x, &y).unwrap(), spearman(&x, &y).unwrap(), kendall(&x, &y).unwrap()] {
            prop_assert!((-1.0..=1.0).contains(&r));
        }
    }
}
