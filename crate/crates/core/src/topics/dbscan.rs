//! DBSCAN over a precomputed distance matrix.

use crate::exec::Execution;

/// Jensen–Shannon distance (square root of the base-2 divergence), in
/// `[0, 1]` for probability vectors.
pub fn js_distance(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    let mut div = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        let m = 0.5 * (a + b);
        if a > 0.0 {
            div += 0.5 * a * (a / m).log2();
        }
        if b > 0.0 {
            div += 0.5 * b * (b / m).log2();
        }
    }
    div.clamp(0.0, 1.0).sqrt()
}

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_fn(n: usize, exec: Execution, f: impl Fn(usize, usize) -> f64 + Sync + Send) -> Self {
        let rows = exec.map_range(n, |i| {
            (0..n).map(|j| if i == j { 0.0 } else { f(i, j) }).collect::<Vec<_>>()
        });
        DistanceMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

/// Cluster label per point (`None` = noise). Clusters are numbered in order
/// of their lowest-index core point; a border point reachable from several
/// clusters joins the lowest-numbered one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    pub labels: Vec<Option<usize>>,
    pub n_clusters: usize,
}

impl Clustering {
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_clusters];
        for (i, l) in self.labels.iter().enumerate() {
            if let Some(c) = l {
                out[*c].push(i);
            }
        }
        out
    }
}

/// A point is core when at least `min_pts` points (itself included) lie
/// within distance `eps`.
pub fn dbscan(dist: &DistanceMatrix, eps: f64, min_pts: usize) -> Clustering {
    assert!(eps > 0.0, "eps must be positive");
    assert!(min_pts >= 1, "min_pts must be at least 1");
    let n = dist.len();
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| dist.get(i, j) <= eps).collect())
        .collect();
    let core: Vec<bool> = neighbors.iter().map(|nb| nb.len() >= min_pts).collect();

    let mut labels = vec![None; n];
    let mut n_clusters = 0;
    for start in 0..n {
        if labels[start].is_some() || !core[start] {
            continue;
        }
        let cluster = n_clusters;
        n_clusters += 1;
        labels[start] = Some(cluster);
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            for &q in &neighbors[p] {
                if labels[q].is_none() {
                    labels[q] = Some(cluster);
                    if core[q] {
                        stack.push(q);
                    }
                }
            }
        }
    }
    Clustering { labels, n_clusters }
}
