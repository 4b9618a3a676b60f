//! Synthetic topologies.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::SplitMix64;

/// Connectivity retry budget for [`random_geometric_graph`].
pub const MAX_GENERATION_ATTEMPTS: usize = 1000;

/// Connected random geometric graph: `n` points uniform in the unit
/// square, an edge wherever two points lie within the connection radius.
///
/// The radius is `sqrt(target_mean_degree / (π·(n−1)))`, which makes the
/// expected degree of an interior node come out at `target_mean_degree`
/// (border effects pull the realized mean slightly below the target). A
/// disconnected placement is discarded and retried with `seed + attempt`,
/// up to [`MAX_GENERATION_ATTEMPTS`] placements; if none is connected the
/// generation fails.
///
/// Pure function of its arguments: the same `(n, target_mean_degree, seed)`
/// always yields the same graph. Nodes get ids `0..n` and no labels.
pub fn random_geometric_graph(n: usize, target_mean_degree: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!(
            "geometric graph needs at least 2 nodes, got {n}"
        )));
    }
    if !target_mean_degree.is_finite() || target_mean_degree <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "target mean degree must be positive, got {target_mean_degree}"
        )));
    }
    let radius_sq = target_mean_degree / (PI * (n - 1) as f64);
    for attempt in 0..MAX_GENERATION_ATTEMPTS {
        let mut rng = SplitMix64::new(seed.wrapping_add(attempt as u64));
        // x then y per point, in node order — part of the reproducibility
        // contract.
        let points: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let x = rng.next_f64();
                let y = rng.next_f64();
                (x, y)
            })
            .collect();
        let mut graph = Graph::new();
        for i in 0..n {
            graph.add_node(NodeId(i as u32));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = points[i].0 - points[j].0;
                let dy = points[i].1 - points[j].1;
                if dx * dx + dy * dy <= radius_sq {
                    graph.add_edge(NodeId(i as u32), NodeId(j as u32))?;
                }
            }
        }
        if graph.is_connected() {
            return Ok(graph);
        }
    }
    Err(Error::GenerationInfeasible {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}
