//! Shared fixtures and independent oracle implementations for the
//! integration tests. The oracles deliberately use different algorithms
//! than the crate (Floyd–Warshall instead of breadth-first search,
//! exhaustive path enumeration instead of dependency accumulation) so the
//! tests catch algorithmic mistakes, not just typos.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use meshsna_core::rng::SplitMix64;
use meshsna_core::{Graph, NodeId};

/// Erdős–Rényi-style random graph: each pair becomes an edge with
/// probability `per_mille`/1000. May be disconnected.
pub fn random_graph(n: u32, per_mille: u64, seed: u64) -> Graph {
    let mut rng = SplitMix64::new(seed);
    let mut g = Graph::new();
    for v in 0..n {
        g.add_node(NodeId(v));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.next_below(1000) < per_mille {
                g.add_edge(NodeId(a), NodeId(b)).unwrap();
            }
        }
    }
    g
}

/// First connected [`random_graph`] along the seed sequence
/// `seed, seed+1, …`.
pub fn random_connected_graph(n: u32, per_mille: u64, seed: u64) -> Graph {
    (0..)
        .map(|k| random_graph(n, per_mille, seed.wrapping_add(k)))
        .find(Graph::is_connected)
        .expect("some seed yields a connected graph")
}

/// A 19-router mesh with two designated hubs: node 1 has ten neighbors and
/// node 0 sits one or two hops from everything.
pub fn nineteen_node_mesh() -> Graph {
    let mut g = Graph::new();
    for k in 1..=12 {
        g.add_edge(NodeId(0), NodeId(k)).unwrap();
    }
    for k in 13..=17 {
        g.add_edge(NodeId(1), NodeId(k)).unwrap();
    }
    g.add_edge(NodeId(13), NodeId(18)).unwrap();
    for k in 2..=5 {
        g.add_edge(NodeId(1), NodeId(k)).unwrap();
    }
    g
}

/// All-pairs hop counts by Floyd–Warshall; `None` where unreachable.
pub fn floyd_warshall(g: &Graph) -> BTreeMap<(NodeId, NodeId), Option<u32>> {
    let nodes: Vec<NodeId> = g.nodes().collect();
    let n = nodes.len();
    const INF: u32 = u32::MAX / 2;
    let mut d = vec![vec![INF; n]; n];
    for (i, &v) in nodes.iter().enumerate() {
        d[i][i] = 0;
        for (j, &w) in nodes.iter().enumerate() {
            if g.has_edge(v, w) {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    let mut out = BTreeMap::new();
    for (i, &v) in nodes.iter().enumerate() {
        for (j, &w) in nodes.iter().enumerate() {
            out.insert((v, w), (d[i][j] < INF).then_some(d[i][j]));
        }
    }
    out
}

/// Closeness from the Floyd–Warshall table: `(n−1) / Σ distances` over
/// reachable peers, 0 for isolated nodes.
pub fn oracle_closeness(g: &Graph) -> BTreeMap<NodeId, f64> {
    let dist = floyd_warshall(g);
    let nodes: Vec<NodeId> = g.nodes().collect();
    let n = nodes.len();
    nodes
        .iter()
        .map(|&v| {
            let sum: u64 = nodes
                .iter()
                .filter(|&&w| w != v)
                .filter_map(|&w| dist[&(v, w)].map(u64::from))
                .sum();
            let score = if sum == 0 { 0.0 } else { (n - 1) as f64 / sum as f64 };
            (v, score)
        })
        .collect()
}

fn all_simple_paths(g: &Graph, from: NodeId, to: NodeId) -> Vec<Vec<NodeId>> {
    fn dfs(
        g: &Graph,
        to: NodeId,
        path: &mut Vec<NodeId>,
        seen: &mut BTreeSet<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        let v = *path.last().unwrap();
        if v == to {
            out.push(path.clone());
            return;
        }
        for w in g.neighbors(v) {
            if seen.insert(w) {
                path.push(w);
                dfs(g, to, path, seen, out);
                path.pop();
                seen.remove(&w);
            }
        }
    }
    let mut out = Vec::new();
    dfs(g, to, &mut vec![from], &mut BTreeSet::from([from]), &mut out);
    out
}

/// Betweenness by brute force: enumerate every simple path of every pair,
/// keep the shortest ones, and credit their interior nodes. Normalized by
/// the `(n−1)(n−2)/2` pairs that could route through a node. Only viable
/// for small graphs.
pub fn exhaustive_betweenness(g: &Graph) -> BTreeMap<NodeId, f64> {
    let nodes: Vec<NodeId> = g.nodes().collect();
    let n = nodes.len();
    assert!(n >= 3, "betweenness needs at least 3 nodes");
    let mut score: BTreeMap<NodeId, f64> = nodes.iter().map(|&v| (v, 0.0)).collect();
    for (i, &s) in nodes.iter().enumerate() {
        for &t in &nodes[i + 1..] {
            let paths = all_simple_paths(g, s, t);
            let Some(min_len) = paths.iter().map(Vec::len).min() else {
                continue; // t unreachable from s
            };
            let shortest: Vec<&Vec<NodeId>> = paths.iter().filter(|p| p.len() == min_len).collect();
            let sigma = shortest.len() as f64;
            for path in shortest {
                for &v in &path[1..path.len() - 1] {
                    *score.get_mut(&v).unwrap() += 1.0 / sigma;
                }
            }
        }
    }
    let norm = ((n - 1) * (n - 2)) as f64 / 2.0;
    for v in score.values_mut() {
        *v /= norm;
    }
    score
}

/// Mean hop count over reachable unordered pairs, from the Floyd–Warshall
/// table; `None` when no pair is reachable.
pub fn oracle_average_hops(g: &Graph) -> Option<f64> {
    let dist = floyd_warshall(g);
    let nodes: Vec<NodeId> = g.nodes().collect();
    let mut sum = 0u64;
    let mut pairs = 0u64;
    for (i, &v) in nodes.iter().enumerate() {
        for &w in &nodes[i + 1..] {
            if let Some(d) = dist[&(v, w)] {
                sum += u64::from(d);
                pairs += 1;
            }
        }
    }
    (pairs > 0).then(|| sum as f64 / pairs as f64)
}

/// Copy of `g` with every node id passed through `f` (which must be
/// injective on the node set).
pub fn relabel(g: &Graph, f: impl Fn(NodeId) -> NodeId) -> Graph {
    let mut out = Graph::new();
    for v in g.nodes() {
        out.add_node(f(v));
    }
    for (a, b) in g.edges() {
        out.add_edge(f(a), f(b)).unwrap();
    }
    assert_eq!(out.node_count(), g.node_count(), "relabeling must be injective");
    out
}
