//! Node centrality metrics and rankings.
//!
//! All four metrics are normalized to be comparable across graph sizes:
//! degree by the maximum possible degree, closeness by the ideal all-ones
//! distance sum, betweenness by the number of node pairs, eigenvector by
//! the Euclidean norm. Scores are computed for every node of the graph in
//! one call; scans over sources run through the crate's parallel facade and
//! are merged in a fixed order, so results do not depend on thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, Graph, NodeId, UNREACHABLE};
use crate::par;

/// Which centrality definition to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CentralityMetric {
    /// Fraction of other nodes that are direct neighbors.
    Degree,
    /// Inverse of the mean hop distance to the reachable nodes.
    Closeness,
    /// Share of shortest paths between other pairs passing through a node.
    Betweenness,
    /// Principal-eigenvector weight of the adjacency structure.
    Eigenvector,
}

impl CentralityMetric {
    /// Every metric, in canonical order.
    pub const ALL: [CentralityMetric; 4] = [
        CentralityMetric::Degree,
        CentralityMetric::Closeness,
        CentralityMetric::Betweenness,
        CentralityMetric::Eigenvector,
    ];

    /// Canonical lowercase name, as used in CSV output and on the CLI.
    pub fn name(self) -> &'static str {
        match self {
            CentralityMetric::Degree => "degree",
            CentralityMetric::Closeness => "closeness",
            CentralityMetric::Betweenness => "betweenness",
            CentralityMetric::Eigenvector => "eigenvector",
        }
    }
}

impl fmt::Display for CentralityMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CentralityMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "degree" => Ok(CentralityMetric::Degree),
            "closeness" => Ok(CentralityMetric::Closeness),
            "betweenness" => Ok(CentralityMetric::Betweenness),
            "eigenvector" => Ok(CentralityMetric::Eigenvector),
            other => Err(Error::InvalidConfig(format!("unknown metric {other:?}"))),
        }
    }
}

/// Scores of one metric over all nodes of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    metric: CentralityMetric,
    scores: BTreeMap<NodeId, f64>,
}

impl CentralityScores {
    fn new(metric: CentralityMetric, scores: BTreeMap<NodeId, f64>) -> Self {
        Self { metric, scores }
    }

    /// Which metric these scores belong to.
    pub fn metric(&self) -> CentralityMetric {
        self.metric
    }

    /// Score of one node.
    pub fn get(&self, node: NodeId) -> Option<f64> {
        self.scores.get(&node).copied()
    }

    /// `(node, score)` pairs in ascending node order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.scores.iter().map(|(&n, &s)| (n, s))
    }

    /// Number of scored nodes.
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    /// Whether no node was scored.
    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// Nodes of one metric in rank order: descending score, ties broken by
/// ascending node id.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedNodes {
    /// Metric the ranking was computed from.
    pub metric: CentralityMetric,
    /// `(node, score)` from best to worst, truncated to the requested
    /// length.
    pub order: Vec<(NodeId, f64)>,
}

/// Default convergence tolerance for [`eigenvector_centrality`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Default iteration budget for [`eigenvector_centrality`].
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

fn require_nodes(g: &Graph, required: usize) -> Result<()> {
    if g.node_count() < required {
        return Err(Error::TooFewNodes {
            required,
            actual: g.node_count(),
        });
    }
    Ok(())
}

/// Degree centrality: `deg(i) / (n−1)`.
pub fn degree_centrality(g: &Graph) -> Result<CentralityScores> {
    require_nodes(g, 2)?;
    let denom = (g.node_count() - 1) as f64;
    let scores = g.nodes().map(|v| (v, g.degree(v) as f64 / denom)).collect();
    Ok(CentralityScores::new(CentralityMetric::Degree, scores))
}

/// Closeness centrality: `(n−1) / Σ d(i, j)`, summing over the nodes
/// actually reachable from `i`.
///
/// Unreachable pairs are excluded from the sum while the numerator stays
/// `n−1`; a node with no reachable peer scores 0.0. On a disconnected
/// graph this can exceed 1.0 — a node one hop from its entire small
/// component looks very central locally.
pub fn closeness_centrality(g: &Graph) -> Result<CentralityScores> {
    require_nodes(g, 2)?;
    let ix = g.indexed();
    let n = ix.ids.len();
    let numer = (n - 1) as f64;
    let values = par::map_indexed(n, |s| {
        let dist = bfs_distances(&ix.adj, s);
        let sum: u64 = dist
            .iter()
            .enumerate()
            .filter(|&(j, &d)| j != s && d != UNREACHABLE)
            .map(|(_, &d)| d as u64)
            .sum();
        if sum == 0 {
            0.0
        } else {
            numer / sum as f64
        }
    });
    let scores = ix.ids.iter().copied().zip(values).collect();
    Ok(CentralityScores::new(CentralityMetric::Closeness, scores))
}

/// Betweenness centrality.
///
/// For each node pair `{j, k}` (both distinct from `i`), the fraction of
/// shortest `j`–`k` paths that pass through `i`, summed over all pairs and
/// divided by `(n−1)(n−2)/2`. Computed with breadth-first shortest-path
/// counting and reverse dependency accumulation per source; the per-source
/// passes are independent and run through the parallel facade, then merge
/// in source order.
pub fn betweenness_centrality(g: &Graph) -> Result<CentralityScores> {
    require_nodes(g, 3)?;
    let ix = g.indexed();
    let n = ix.ids.len();
    let passes = par::map_indexed(n, |s| brandes_pass(&ix.adj, s));
    let mut raw = vec![0.0f64; n];
    for pass in passes {
        for (acc, d) in raw.iter_mut().zip(pass) {
            *acc += d;
        }
    }
    // Each unordered pair contributes from both endpoints, and the pair
    // count normalizer is (n−1)(n−2)/2.
    let denom = (n - 1) as f64 * (n - 2) as f64;
    let scores = ix
        .ids
        .iter()
        .copied()
        .zip(raw.iter().map(|&x| x / denom))
        .collect();
    Ok(CentralityScores::new(CentralityMetric::Betweenness, scores))
}

/// Single-source dependency accumulation: BFS counts shortest paths
/// (`sigma`), then dependencies flow back through the predecessor DAG in
/// reverse visit order.
fn brandes_pass(adj: &[Vec<u32>], src: usize) -> Vec<f64> {
    let n = adj.len();
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i32; n];
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);

    sigma[src] = 1.0;
    dist[src] = 0;
    let mut queue = std::collections::VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &w in &adj[v] {
            let w = w as usize;
            if dist[w] < 0 {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
            if dist[w] == dist[v] + 1 {
                sigma[w] += sigma[v];
                preds[w].push(v as u32);
            }
        }
    }

    let mut delta = vec![0.0f64; n];
    for &w in order.iter().rev() {
        for &v in &preds[w] {
            let v = v as usize;
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
    }
    delta[src] = 0.0;
    delta
}

/// Eigenvector centrality via power iteration.
///
/// Starts from the uniform vector and repeatedly applies the adjacency
/// operator shifted by the identity (`x ← (A + I)x`, then Euclidean
/// normalization). The shift leaves the eigenvectors of `A` unchanged but
/// makes the iteration aperiodic, so bipartite structures converge instead
/// of oscillating between two phases. Converged means the largest
/// per-node change between consecutive normalized iterates drops below
/// `tolerance`; running out of `max_iterations` returns
/// [`Error::NoConvergence`] carrying the last iterate.
///
/// The graph must be connected (on a disconnected graph the result would
/// silently concentrate on one component).
pub fn eigenvector_centrality(
    g: &Graph,
    tolerance: f64,
    max_iterations: usize,
) -> Result<CentralityScores> {
    require_nodes(g, 1)?;
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if !(tolerance > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let ix = g.indexed();
    let n = ix.ids.len();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0f64; n];
    for _ in 0..max_iterations {
        for i in 0..n {
            let mut acc = x[i];
            for &j in &ix.adj[i] {
                acc += x[j as usize];
            }
            y[i] = acc;
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        // y dominates x component-wise and x is positive, so norm > 0.
        let mut change: f64 = 0.0;
        for i in 0..n {
            y[i] /= norm;
            change = change.max((y[i] - x[i]).abs());
        }
        std::mem::swap(&mut x, &mut y);
        if change < tolerance {
            let scores = ix.ids.iter().copied().zip(x).collect();
            return Ok(CentralityScores::new(CentralityMetric::Eigenvector, scores));
        }
    }
    let scores = ix.ids.iter().copied().zip(x).collect();
    Err(Error::NoConvergence {
        iterations: max_iterations,
        last: CentralityScores::new(CentralityMetric::Eigenvector, scores),
    })
}

/// Compute any metric with its default parameters.
pub fn compute(g: &Graph, metric: CentralityMetric) -> Result<CentralityScores> {
    match metric {
        CentralityMetric::Degree => degree_centrality(g),
        CentralityMetric::Closeness => closeness_centrality(g),
        CentralityMetric::Betweenness => betweenness_centrality(g),
        CentralityMetric::Eigenvector => {
            eigenvector_centrality(g, DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS)
        }
    }
}

/// Top `k` nodes by score: descending value, ties broken by ascending node
/// id so rankings are reproducible. `k` larger than the number of scored
/// nodes is an error.
pub fn rank_nodes(scores: &CentralityScores, k: usize) -> Result<RankedNodes> {
    if k > scores.len() {
        return Err(Error::RankTooLarge {
            k,
            available: scores.len(),
        });
    }
    let mut order: Vec<(NodeId, f64)> = scores.iter().collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    order.truncate(k);
    Ok(RankedNodes {
        metric: scores.metric(),
        order,
    })
}
