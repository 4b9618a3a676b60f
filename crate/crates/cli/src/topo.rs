//! Topology and flow-list file handling.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use meshsna_core::stdma::Flow;
use meshsna_core::{Graph, NodeId};

/// Load an edge-list topology file.
pub fn load_topology(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading topology {}", path.display()))?;
    Graph::parse_edge_list(&text).with_context(|| format!("parsing topology {}", path.display()))
}

/// Serialize a graph to edge-list text, one `a b` line per edge, in the
/// graph's deterministic edge order.
pub fn edge_list_text(g: &Graph) -> String {
    let mut out = String::new();
    for (a, b) in g.edges() {
        out.push_str(&g.label_or_id(a));
        out.push(' ');
        out.push_str(&g.label_or_id(b));
        out.push('\n');
    }
    out
}

/// One flow per node pair `(src, dst)`, `src != dst`, at a common rate.
pub fn all_pairs_flows(g: &Graph, rate_bps: f64) -> Vec<Flow> {
    let nodes: Vec<NodeId> = g.nodes().collect();
    nodes
        .iter()
        .flat_map(|&src| {
            nodes
                .iter()
                .filter(move |&&dst| dst != src)
                .map(move |&dst| Flow { src, dst, rate_bps })
        })
        .collect()
}

fn resolve_node(g: &Graph, labels: &BTreeMap<String, NodeId>, token: &str) -> Option<NodeId> {
    if let Some(&id) = labels.get(token) {
        return Some(id);
    }
    token
        .parse::<u32>()
        .ok()
        .map(NodeId)
        .filter(|&id| g.has_node(id))
}

/// Parse a flow file: one `src dst [rate_bps]` per line, `#` starts a
/// comment. Node references are matched against topology labels first,
/// then numeric ids. Lines without a rate fall back to `default_rate`.
pub fn parse_flows(text: &str, g: &Graph, default_rate: Option<f64>) -> Result<Vec<Flow>> {
    let labels: BTreeMap<String, NodeId> = g.nodes().map(|v| (g.label_or_id(v), v)).collect();
    let mut flows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            bail!("flow line {}: expected `src dst [rate_bps]`, got {raw:?}", lineno + 1);
        }
        let src = resolve_node(g, &labels, tokens[0])
            .with_context(|| format!("flow line {}: unknown node {:?}", lineno + 1, tokens[0]))?;
        let dst = resolve_node(g, &labels, tokens[1])
            .with_context(|| format!("flow line {}: unknown node {:?}", lineno + 1, tokens[1]))?;
        let rate_bps = match tokens.get(2) {
            Some(t) => t
                .parse::<f64>()
                .with_context(|| format!("flow line {}: bad rate {t:?}", lineno + 1))?,
            None => match default_rate {
                Some(r) => r,
                None => bail!("flow line {}: no rate given and --rate not set", lineno + 1),
            },
        };
        flows.push(Flow { src, dst, rate_bps });
    }
    if flows.is_empty() {
        bail!("flow file defines no flows");
    }
    Ok(flows)
}
