//! Naive, definition-level reference implementations.
//!
//! Nothing here shares code with `clustat-core`; every routine is written
//! directly from the textbook definition, favoring obviousness over speed.

use std::collections::BTreeMap;

pub type Rows = Vec<Vec<f64>>;

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

pub fn manhattan(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]).abs();
    }
    s
}

/// Full distance table from a pairwise function.
pub fn distance_table(points: &Rows, f: impl Fn(&[f64], &[f64]) -> f64) -> Rows {
    let n = points.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                d[i][j] = f(&points[i], &points[j]);
            }
        }
    }
    d
}

/// Sum of squared Euclidean distances to cluster means.
pub fn partition_sse(points: &Rows, labels: &[usize], k: usize) -> f64 {
    let p = points[0].len();
    let mut total = 0.0;
    for c in 0..k {
        let members: Vec<&Vec<f64>> = (0..points.len())
            .filter(|&i| labels[i] == c)
            .map(|i| &points[i])
            .collect();
        if members.is_empty() {
            continue;
        }
        let mut centroid = vec![0.0; p];
        for m in &members {
            for j in 0..p {
                centroid[j] += m[j] / members.len() as f64;
            }
        }
        for m in &members {
            for j in 0..p {
                total += (m[j] - centroid[j]).powi(2);
            }
        }
    }
    total
}

/// Minimum SSE over every partition of the points into exactly `k`
/// non-empty blocks (restricted growth strings).
pub fn brute_force_kmeans(points: &Rows, k: usize) -> f64 {
    let n = points.len();
    let mut best = f64::INFINITY;
    let mut labels = vec![0usize; n];
    fn recurse(
        i: usize,
        used: usize,
        k: usize,
        labels: &mut Vec<usize>,
        points: &Rows,
        best: &mut f64,
    ) {
        let n = labels.len();
        if n - i < k - used {
            return;
        }
        if i == n {
            if used == k {
                let s = partition_sse(points, labels, k);
                if s < *best {
                    *best = s;
                }
            }
            return;
        }
        for c in 0..=used.min(k - 1) {
            labels[i] = c;
            recurse(i + 1, used.max(c + 1), k, labels, points, best);
        }
    }
    recurse(0, 0, k, &mut labels, points, &mut best);
    best
}

/// Edge weights of a minimum spanning tree (Prim), sorted ascending.
pub fn mst_weights(d: &Rows) -> Vec<f64> {
    let n = d.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut weights = Vec::new();
    for step in 0..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (u == usize::MAX || best[v] < best[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        if step > 0 {
            weights.push(best[u]);
        }
        for v in 0..n {
            if !in_tree[v] && d[u][v] < best[v] {
                best[v] = d[u][v];
            }
        }
    }
    weights.sort_by(|a, b| a.partial_cmp(b).unwrap());
    weights
}

/// DBSCAN by definition: core points have at least `min_pts` points
/// (self included) within `eps`; clusters are transitive closures of
/// core-to-core reachability; border points take the cluster whose smallest
/// core index is lowest among the cores they touch.
pub fn dbscan(d: &Rows, eps: f64, min_pts: usize) -> Vec<Option<usize>> {
    let n = d.len();
    let core: Vec<bool> = (0..n)
        .map(|i| (0..n).filter(|&j| d[i][j] <= eps).count() >= min_pts)
        .collect();
    // reach[i][j]: core j reachable from core i through core chains
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            reach[i][j] = core[i] && core[j] && d[i][j] <= eps;
        }
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                if reach[i][m] && reach[m][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    // cluster id = smallest core index in the component
    let root = |i: usize| (0..n).find(|&j| reach[i][j]).unwrap();
    let mut out = vec![None; n];
    for i in 0..n {
        if core[i] {
            out[i] = Some(root(i));
        } else {
            out[i] = (0..n)
                .filter(|&j| core[j] && d[i][j] <= eps)
                .map(root)
                .min();
        }
    }
    out
}

/// True when the two labelings induce the same partition and the same
/// unlabeled set.
pub fn same_partition(a: &[Option<usize>], b: &[Option<usize>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut fwd = BTreeMap::new();
    let mut back = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        match (x, y) {
            (None, None) => {}
            (Some(x), Some(y)) => {
                if *fwd.entry(*x).or_insert(*y) != *y || *back.entry(*y).or_insert(*x) != *x {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Silhouette by definition. Returns per-point values and the mean of
/// cluster means.
pub fn silhouette(d: &Rows, labels: &[usize]) -> (Vec<f64>, f64) {
    let n = d.len();
    let k = labels.iter().max().unwrap() + 1;
    let mut s = vec![0.0; n];
    for i in 0..n {
        let own: Vec<usize> = (0..n)
            .filter(|&j| j != i && labels[j] == labels[i])
            .collect();
        if own.is_empty() {
            s[i] = 0.0;
            continue;
        }
        let a = own.iter().map(|&j| d[i][j]).sum::<f64>() / own.len() as f64;
        let mut b = f64::INFINITY;
        for c in 0..k {
            if c == labels[i] {
                continue;
            }
            let other: Vec<usize> = (0..n).filter(|&j| labels[j] == c).collect();
            let m = other.iter().map(|&j| d[i][j]).sum::<f64>() / other.len() as f64;
            if m < b {
                b = m;
            }
        }
        s[i] = if a.max(b) == 0.0 {
            0.0
        } else {
            (b - a) / a.max(b)
        };
    }
    let mut cluster_means = Vec::new();
    for c in 0..k {
        let vals: Vec<f64> = (0..n).filter(|&i| labels[i] == c).map(|i| s[i]).collect();
        cluster_means.push(vals.iter().sum::<f64>() / vals.len() as f64);
    }
    let overall = cluster_means.iter().sum::<f64>() / k as f64;
    (s, overall)
}

/// `sum_r 1/(2 n_r) sum_{i,j in r} d_ij^2`.
pub fn pooled_dispersion(d: &Rows, labels: &[usize]) -> f64 {
    let k = labels.iter().max().unwrap() + 1;
    let mut w = 0.0;
    for c in 0..k {
        let m: Vec<usize> = (0..d.len()).filter(|&i| labels[i] == c).collect();
        let mut s = 0.0;
        for &i in &m {
            for &j in &m {
                s += d[i][j] * d[i][j];
            }
        }
        w += s / (2.0 * m.len() as f64);
    }
    w
}

/// Textbook single-pass Pearson formula.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 0..x.len() {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

/// Rank of each value as `#smaller + (#equal + 1) / 2`.
pub fn ranks(v: &[f64]) -> Vec<f64> {
    v.iter()
        .map(|&a| {
            let less = v.iter().filter(|&&b| b < a).count() as f64;
            let equal = v.iter().filter(|&&b| b == a).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&ranks(x), &ranks(y))
}

fn sign(v: f64) -> i64 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Tau-b from signed pair products and tie-group sizes.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s: i64 = 0;
    for i in 0..n {
        for j in 0..n {
            if i < j {
                s += sign(x[i] - x[j]) * sign(y[i] - y[j]);
            }
        }
    }
    let tie_pairs = |v: &[f64]| -> f64 {
        let mut groups: BTreeMap<u64, u64> = BTreeMap::new();
        for a in v {
            *groups.entry(a.to_bits()).or_default() += 1;
        }
        groups.values().map(|&t| (t * (t - 1) / 2) as f64).sum()
    };
    let n0 = (n * (n - 1) / 2) as f64;
    s as f64 / ((n0 - tie_pairs(x)) * (n0 - tie_pairs(y))).sqrt()
}

/// Ordinary least squares through the normal equations.
pub fn ols(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sy: f64 = y.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let det = n * sxx - sx * sx;
    let intercept = (sxx * sy - sx * sxy) / det;
    let slope = (n * sxy - sx * sy) / det;
    (slope, intercept)
}

/// LOWESS point by point: window by sorting distances, tricube weights,
/// 2x2 weighted normal equations solved by Cramer's rule, then bisquare
/// robustness passes on six median absolute residuals. Stops early when the
/// median absolute residual falls below `1e-7` times the mean `|y|`.
pub fn lowess(x: &[f64], y: &[f64], fraction: f64, iterations: usize) -> Vec<f64> {
    let n = x.len();
    let q = ((fraction * n as f64).ceil() as usize).min(n);
    let range =
        x.iter().cloned().fold(f64::MIN, f64::max) - x.iter().cloned().fold(f64::MAX, f64::min);
    let fit_all = |robust: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let mut dists: Vec<f64> = x.iter().map(|&xj| (xj - x[i]).abs()).collect();
                dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let h = dists[q - 1];
                let mut w = vec![0.0; n];
                for j in 0..n {
                    let d = (x[j] - x[i]).abs();
                    let base = if h > 0.0 {
                        let u = d / h;
                        if u < 1.0 {
                            (1.0 - u * u * u).powi(3)
                        } else {
                            0.0
                        }
                    } else if d == 0.0 {
                        1.0
                    } else {
                        0.0
                    };
                    w[j] = base * robust[j];
                }
                let (mut s0, mut s1, mut s2, mut t0, mut t1) = (0.0, 0.0, 0.0, 0.0, 0.0);
                for j in 0..n {
                    s0 += w[j];
                    s1 += w[j] * x[j];
                    s2 += w[j] * x[j] * x[j];
                    t0 += w[j] * y[j];
                    t1 += w[j] * x[j] * y[j];
                }
                let var = (s2 / s0 - (s1 / s0).powi(2)).max(0.0);
                if var.sqrt() <= 1e-10 * range {
                    return t0 / s0;
                }
                let det = s0 * s2 - s1 * s1;
                let a = (t0 * s2 - s1 * t1) / det;
                let b = (s0 * t1 - s1 * t0) / det;
                a + b * x[i]
            })
            .collect()
    };
    let mut robust = vec![1.0; n];
    let mut fit = fit_all(&robust);
    let mean_abs_y = y.iter().map(|v| v.abs()).sum::<f64>() / n as f64;
    for _ in 0..iterations {
        let res: Vec<f64> = (0..n).map(|i| y[i] - fit[i]).collect();
        let mut abs: Vec<f64> = res.iter().map(|r| r.abs()).collect();
        abs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mad = if n % 2 == 1 {
            abs[n / 2]
        } else {
            (abs[n / 2 - 1] + abs[n / 2]) / 2.0
        };
        if mad <= 1e-7 * mean_abs_y {
            break;
        }
        robust = res
            .iter()
            .map(|r| {
                let u = r / (6.0 * mad);
                if u.abs() < 1.0 {
                    (1.0 - u * u).powi(2)
                } else {
                    0.0
                }
            })
            .collect();
        fit = fit_all(&robust);
    }
    fit
}

/// Small deterministic generator (xorshift64*) so oracle tests do not lean
/// on the library's RNG plumbing.
#[derive(Debug, Clone)]
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        Self(seed.wrapping_mul(0x2545_F491_4F6C_DD1D) | 1)
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn points(&mut self, n: usize, p: usize, scale: f64) -> Rows {
        (0..n)
            .map(|_| (0..p).map(|_| self.range(-scale, scale)).collect())
            .collect()
    }

    /// Random labels using every cluster in `0..k` at least once.
    pub fn labels(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut labels: Vec<usize> = (0..n)
            .map(|i| if i < k { i } else { self.int(0, k - 1) })
            .collect();
        for i in (1..n).rev() {
            let j = self.int(0, i);
            labels.swap(i, j);
        }
        labels
    }
}
