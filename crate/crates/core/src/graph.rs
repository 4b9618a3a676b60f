//! Undirected graph with stable node identities plus the hop-count
//! machinery everything else builds on.
//!
//! Nodes are identified by [`NodeId`] and may carry a text label (mesh
//! routers are usually named by their management address). All adjacency is
//! kept in ordered maps so that every iteration order — and therefore every
//! downstream artifact — is deterministic.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::par;

/// Stable node identifier.
///
/// Loaders assign ids densely in order of first appearance; graphs produced
/// by node removal keep the surviving ids, so an id set is not necessarily
/// contiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Hop count returned for unreachable pairs inside the dense matrix.
pub(crate) const UNREACHABLE: u32 = u32::MAX;

/// Simple undirected graph: no self-loops, no parallel edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
    labels: BTreeMap<NodeId, String>,
}

impl Graph {
    /// Empty graph.
    pub fn new() -> Self {
        Self::default()
    }

    /// Parse the plain-text edge list format.
    ///
    /// One edge per line as `<labelA> <labelB>` (any whitespace between the
    /// two labels); `#` starts a comment that runs to the end of the line;
    /// blank lines are ignored. Labels are free-form tokens. Node ids are
    /// assigned in order of first appearance and the labels are retained.
    /// Duplicate edges collapse silently regardless of orientation;
    /// self-loops are an error.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut graph = Graph::new();
        let mut ids: BTreeMap<&str, NodeId> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut parts = content.split_whitespace();
            let (a, b) = match (parts.next(), parts.next()) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::EdgeListParse {
                        line,
                        message: "expected two node labels".into(),
                    })
                }
            };
            if parts.next().is_some() {
                return Err(Error::EdgeListParse {
                    line,
                    message: "expected exactly two node labels".into(),
                });
            }
            if a == b {
                return Err(Error::EdgeListParse {
                    line,
                    message: format!("self-loop on {a:?}"),
                });
            }
            let a = Self::intern(&mut graph, &mut ids, a);
            let b = Self::intern(&mut graph, &mut ids, b);
            graph.add_edge(a, b)?;
        }
        Ok(graph)
    }

    fn intern<'t>(graph: &mut Graph, ids: &mut BTreeMap<&'t str, NodeId>, label: &'t str) -> NodeId {
        if let Some(&id) = ids.get(label) {
            return id;
        }
        let id = NodeId(ids.len() as u32);
        ids.insert(label, id);
        graph.add_node(id);
        graph.set_label(id, label);
        id
    }

    /// Insert a node (no-op if present).
    pub fn add_node(&mut self, id: NodeId) {
        self.adj.entry(id).or_default();
    }

    /// Insert an undirected edge, adding missing endpoints.
    ///
    /// Re-inserting an existing edge is a no-op; a self-loop is an error.
    pub fn add_edge(&mut self, a: NodeId, b: NodeId) -> Result<()> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        self.adj.entry(a).or_default().insert(b);
        self.adj.entry(b).or_default().insert(a);
        Ok(())
    }

    /// Attach a text label to a node.
    pub fn set_label(&mut self, id: NodeId, label: impl Into<String>) {
        self.labels.insert(id, label.into());
    }

    /// Label of a node, if one was set.
    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.labels.get(&id).map(String::as_str)
    }

    /// Label of a node, falling back to its numeric id.
    pub fn label_or_id(&self, id: NodeId) -> String {
        match self.label(id) {
            Some(l) => l.to_owned(),
            None => id.to_string(),
        }
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    /// Whether `id` is a node of this graph.
    pub fn has_node(&self, id: NodeId) -> bool {
        self.adj.contains_key(&id)
    }

    /// Whether the undirected edge `{a, b}` exists.
    pub fn has_edge(&self, a: NodeId, b: NodeId) -> bool {
        self.adj.get(&a).is_some_and(|s| s.contains(&b))
    }

    /// Neighbors of `id` in ascending id order (empty if `id` is unknown).
    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.get(&id).into_iter().flatten().copied()
    }

    /// Degree of `id` (0 if unknown).
    pub fn degree(&self, id: NodeId) -> usize {
        self.adj.get(&id).map_or(0, BTreeSet::len)
    }

    /// Undirected edges as `(a, b)` pairs with `a < b`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&a, nbrs)| nbrs.iter().copied().filter_map(move |b| (a < b).then_some((a, b))))
    }

    /// Dense positional view used by the BFS kernels.
    pub(crate) fn indexed(&self) -> IndexedGraph {
        let ids: Vec<NodeId> = self.nodes().collect();
        let pos: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|&v| self.neighbors(v).map(|w| pos[&w] as u32).collect())
            .collect();
        IndexedGraph { ids, pos, adj }
    }

    /// Hop counts between every pair of nodes (breadth-first search from
    /// each node; edges are unweighted).
    pub fn all_pairs_distances(&self) -> DistanceMatrix {
        let ix = self.indexed();
        let n = ix.ids.len();
        let rows = par::map_indexed(n, |s| bfs_distances(&ix.adj, s));
        let mut dist = Vec::with_capacity(n * n);
        for row in rows {
            dist.extend_from_slice(&row);
        }
        DistanceMatrix {
            ids: ix.ids,
            pos: ix.pos,
            dist,
        }
    }

    /// All nodes at hop distance `1..=k` from `id` (not including `id`).
    pub fn k_hop_neighborhood(&self, id: NodeId, k: usize) -> Result<BTreeSet<NodeId>> {
        if !self.has_node(id) {
            return Err(Error::UnknownNode(id));
        }
        let mut seen: BTreeMap<NodeId, usize> = BTreeMap::new();
        seen.insert(id, 0);
        let mut queue = VecDeque::from([id]);
        while let Some(v) = queue.pop_front() {
            let d = seen[&v];
            if d == k {
                continue;
            }
            for w in self.neighbors(v) {
                if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        seen.remove(&id);
        Ok(seen.into_keys().collect())
    }

    /// New graph with `victims` (and their incident edges) removed.
    ///
    /// Every victim must be a node of the graph. The original is untouched;
    /// surviving nodes keep their ids and labels.
    pub fn remove_nodes(&self, victims: &BTreeSet<NodeId>) -> Result<Graph> {
        for &v in victims {
            if !self.has_node(v) {
                return Err(Error::UnknownNode(v));
            }
        }
        let adj = self
            .adj
            .iter()
            .filter(|(id, _)| !victims.contains(id))
            .map(|(&id, nbrs)| {
                let kept: BTreeSet<NodeId> = nbrs.iter().copied().filter(|w| !victims.contains(w)).collect();
                (id, kept)
            })
            .collect();
        let labels = self
            .labels
            .iter()
            .filter(|(id, _)| !victims.contains(id))
            .map(|(&id, l)| (id, l.clone()))
            .collect();
        Ok(Graph { adj, labels })
    }

    /// Connected components, each sorted, ordered by their smallest node.
    pub fn components(&self) -> Vec<BTreeSet<NodeId>> {
        let ix = self.indexed();
        let n = ix.ids.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                comp.insert(ix.ids[v]);
                for &w in &ix.adj[v] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w as usize);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Whether every node can reach every other node. Graphs with fewer
    /// than two nodes count as connected.
    pub fn is_connected(&self) -> bool {
        self.node_count() <= 1 || self.components().len() == 1
    }

    /// Number of unordered node pairs that can reach each other.
    ///
    /// Equals `n·(n−1)/2` exactly when the graph is connected.
    pub fn connected_pairs(&self) -> usize {
        self.components()
            .iter()
            .map(|c| c.len() * (c.len() - 1) / 2)
            .sum()
    }
}

/// Positional adjacency used by the BFS kernels: node `ids[i]` has
/// neighbors `adj[i]` (as positions). `ids` ascends, so position order and
/// id order agree.
pub(crate) struct IndexedGraph {
    pub ids: Vec<NodeId>,
    pub pos: BTreeMap<NodeId, usize>,
    pub adj: Vec<Vec<u32>>,
}

/// Hop counts from `src` to every position; `UNREACHABLE` where no path
/// exists.
pub(crate) fn bfs_distances(adj: &[Vec<u32>], src: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; adj.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v];
        for &w in &adj[v] {
            if dist[w as usize] == UNREACHABLE {
                dist[w as usize] = d + 1;
                queue.push_back(w as usize);
            }
        }
    }
    dist
}

/// Dense all-pairs hop-count table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    ids: Vec<NodeId>,
    pos: BTreeMap<NodeId, usize>,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    /// Nodes covered by the matrix, ascending.
    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    /// Hop count from `a` to `b`; `None` if `b` is unreachable from `a`.
    ///
    /// # Panics
    ///
    /// Panics if either node is not covered by the matrix — querying a
    /// foreign node is a caller bug, not a runtime condition.
    pub fn get(&self, a: NodeId, b: NodeId) -> Option<u32> {
        let i = self.pos[&a];
        let j = self.pos[&b];
        match self.dist[i * self.ids.len() + j] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }
}
