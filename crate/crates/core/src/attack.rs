//! Coordinated node-removal experiments.
//!
//! A targeted attack ranks nodes by a centrality metric and removes them
//! one at a time, measuring after every removal how the surviving topology
//! routes: the mean hop count over the node pairs that can still reach
//! each other, plus how many pairs got disconnected. A seeded random
//! baseline removes nodes in shuffled order instead and averages the same
//! curve over several trials.

use std::collections::{BTreeMap, BTreeSet};

use crate::centrality::{self, CentralityMetric};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, Graph, NodeId, UNREACHABLE};
use crate::par;
use crate::rng::SplitMix64;

/// Whether the removal order is fixed up front or re-derived as the graph
/// shrinks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankingMode {
    /// Rank once on the intact graph; remove that prefix. An attacker
    /// working from a single topology snapshot.
    #[default]
    Static,
    /// Re-rank the residual graph before every removal.
    Recompute,
}

/// Parameters of one attack experiment.
#[derive(Debug, Clone)]
pub struct AttackConfig {
    /// Topology under attack.
    pub graph: Graph,
    /// Metrics to run targeted attacks for.
    pub metrics: BTreeSet<CentralityMetric>,
    /// Number of cumulative removals (must be < node count).
    pub max_removals: usize,
    /// Trials averaged into the random baseline (≥ 1).
    pub random_trials: usize,
    /// Seed of the experiment; trial `t` shuffles with `seed + t`.
    pub seed: u64,
    /// Static or recomputed ranking.
    pub ranking_mode: RankingMode,
}

/// Default number of random baseline trials.
pub const DEFAULT_RANDOM_TRIALS: usize = 10;

impl AttackConfig {
    /// Config with the default trial count and static ranking.
    pub fn new(
        graph: Graph,
        metrics: BTreeSet<CentralityMetric>,
        max_removals: usize,
        seed: u64,
    ) -> Self {
        Self {
            graph,
            metrics,
            max_removals,
            random_trials: DEFAULT_RANDOM_TRIALS,
            seed,
            ranking_mode: RankingMode::Static,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.graph.node_count();
        if n < 2 {
            return Err(Error::TooFewNodes {
                required: 2,
                actual: n,
            });
        }
        if self.max_removals >= n {
            return Err(Error::InvalidConfig(format!(
                "max_removals {} must be below the node count {n}",
                self.max_removals
            )));
        }
        if self.random_trials == 0 {
            return Err(Error::InvalidConfig("random_trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Reachability summary of one (residual) topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopSummary {
    /// Mean hop count over the unordered pairs that can reach each other;
    /// `None` when no pair can (the undefined case).
    pub avg_hops: Option<f64>,
    /// Unordered pairs with a path between them.
    pub connected_pairs: usize,
    /// Unordered pairs without one.
    pub disconnected_pairs: usize,
}

/// One point of a targeted-attack curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopCurvePoint {
    /// Number of nodes removed so far (0 = intact graph).
    pub removed: usize,
    /// Mean hop count over still-connected pairs (`None` = no such pair).
    pub avg_hops: Option<f64>,
    /// Still-connected unordered pairs.
    pub connected_pairs: usize,
    /// Disconnected unordered pairs.
    pub disconnected_pairs: usize,
}

/// One point of the random baseline: the targeted-curve quantities
/// averaged pointwise over the trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselinePoint {
    /// Number of nodes removed so far.
    pub removed: usize,
    /// Mean of the per-trial `avg_hops`, over the trials where it was
    /// defined; `None` if it was defined in no trial.
    pub avg_hops: Option<f64>,
    /// Population standard deviation over the same defined trials.
    pub stddev: f64,
    /// Trials whose `avg_hops` was undefined at this point.
    pub undefined_trials: usize,
    /// Mean connected-pair count over all trials.
    pub mean_connected_pairs: f64,
    /// Mean disconnected-pair count over all trials.
    pub mean_disconnected_pairs: f64,
}

/// Full experiment output: one curve per requested metric plus the random
/// baseline.
#[derive(Debug, Clone, PartialEq)]
pub struct AttackResult {
    /// Targeted curve per metric.
    pub per_metric: BTreeMap<CentralityMetric, Vec<HopCurvePoint>>,
    /// Averaged random-removal curve.
    pub random_baseline: Vec<BaselinePoint>,
}

/// Mean hop count and pair accounting of a topology.
///
/// Averages the BFS hop counts over all unordered pairs that can reach
/// each other; unreachable pairs are excluded from the mean and reported
/// in `disconnected_pairs`. With no reachable pair at all, `avg_hops` is
/// `None`. Sums are integral, so the result does not depend on the order
/// the per-source scans are merged in.
pub fn average_hop_count(g: &Graph) -> HopSummary {
    let n = g.node_count();
    let total_pairs = n.saturating_sub(1) * n / 2;
    if n < 2 {
        return HopSummary {
            avg_hops: None,
            connected_pairs: 0,
            disconnected_pairs: total_pairs,
        };
    }
    let ix = g.indexed();
    let per_source = par::map_indexed(n, |s| {
        let dist = bfs_distances(&ix.adj, s);
        let mut sum = 0u64;
        let mut reached = 0usize;
        for (j, &d) in dist.iter().enumerate() {
            if j != s && d != UNREACHABLE {
                sum += d as u64;
                reached += 1;
            }
        }
        (sum, reached)
    });
    // Each unordered pair is seen from both endpoints.
    let hop_sum: u64 = per_source.iter().map(|&(s, _)| s).sum();
    let reached: usize = per_source.iter().map(|&(_, r)| r).sum();
    let connected_pairs = reached / 2;
    HopSummary {
        avg_hops: (reached > 0).then(|| hop_sum as f64 / reached as f64),
        connected_pairs,
        disconnected_pairs: total_pairs - connected_pairs,
    }
}

fn curve_point(removed: usize, s: HopSummary) -> HopCurvePoint {
    HopCurvePoint {
        removed,
        avg_hops: s.avg_hops,
        connected_pairs: s.connected_pairs,
        disconnected_pairs: s.disconnected_pairs,
    }
}

/// Measure the curve along a fixed victim order.
fn curve_for_order(g: &Graph, victims: &[NodeId]) -> Result<Vec<HopCurvePoint>> {
    let mut points = Vec::with_capacity(victims.len() + 1);
    let mut residual = g.clone();
    points.push(curve_point(0, average_hop_count(&residual)));
    for (i, &v) in victims.iter().enumerate() {
        residual = residual.remove_nodes(&BTreeSet::from([v]))?;
        points.push(curve_point(i + 1, average_hop_count(&residual)));
    }
    Ok(points)
}

/// Targeted attack for one metric.
///
/// `Static` mode ranks the intact graph once and removes that prefix;
/// `Recompute` re-ranks the residual graph before every removal (and
/// propagates any metric error on the shrunken graph, e.g. eigenvector
/// centrality on a residual that fell apart).
pub fn run_targeted_attack(cfg: &AttackConfig, metric: CentralityMetric) -> Result<Vec<HopCurvePoint>> {
    cfg.validate()?;
    match cfg.ranking_mode {
        RankingMode::Static => {
            let scores = centrality::compute(&cfg.graph, metric)?;
            let ranked = centrality::rank_nodes(&scores, cfg.max_removals)?;
            let victims: Vec<NodeId> = ranked.order.iter().map(|&(v, _)| v).collect();
            curve_for_order(&cfg.graph, &victims)
        }
        RankingMode::Recompute => {
            let mut points = Vec::with_capacity(cfg.max_removals + 1);
            let mut residual = cfg.graph.clone();
            points.push(curve_point(0, average_hop_count(&residual)));
            for i in 0..cfg.max_removals {
                let scores = centrality::compute(&residual, metric)?;
                let ranked = centrality::rank_nodes(&scores, 1)?;
                let victim = ranked.order[0].0;
                residual = residual.remove_nodes(&BTreeSet::from([victim]))?;
                points.push(curve_point(i + 1, average_hop_count(&residual)));
            }
            Ok(points)
        }
    }
}

/// Random-removal baseline, averaged pointwise over
/// `cfg.random_trials` shuffled orders (trial `t` shuffles the node list
/// with `seed + t`). Undefined per-trial averages are excluded from the
/// mean and counted in `undefined_trials`. Trials are independent and run
/// through the parallel facade; aggregation always walks them in trial
/// order.
pub fn run_random_baseline(cfg: &AttackConfig) -> Result<Vec<BaselinePoint>> {
    cfg.validate()?;
    let nodes: Vec<NodeId> = cfg.graph.nodes().collect();
    let curves: Vec<Result<Vec<HopCurvePoint>>> = par::map_indexed(cfg.random_trials, |t| {
        let mut order = nodes.clone();
        SplitMix64::new(cfg.seed.wrapping_add(t as u64)).shuffle(&mut order);
        order.truncate(cfg.max_removals);
        curve_for_order(&cfg.graph, &order)
    });
    let curves = curves.into_iter().collect::<Result<Vec<_>>>()?;

    let mut out = Vec::with_capacity(cfg.max_removals + 1);
    for p in 0..=cfg.max_removals {
        let defined: Vec<f64> = curves.iter().filter_map(|c| c[p].avg_hops).collect();
        let avg_hops = (!defined.is_empty())
            .then(|| defined.iter().sum::<f64>() / defined.len() as f64);
        let stddev = match avg_hops {
            Some(mean) => {
                let var = defined.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
                    / defined.len() as f64;
                var.sqrt()
            }
            None => 0.0,
        };
        let trials = curves.len() as f64;
        out.push(BaselinePoint {
            removed: p,
            avg_hops,
            stddev,
            undefined_trials: curves.len() - defined.len(),
            mean_connected_pairs: curves.iter().map(|c| c[p].connected_pairs as f64).sum::<f64>() / trials,
            mean_disconnected_pairs: curves.iter().map(|c| c[p].disconnected_pairs as f64).sum::<f64>()
                / trials,
        });
    }
    Ok(out)
}

/// Run the targeted attack for every configured metric plus the random
/// baseline.
pub fn run_attack_experiment(cfg: &AttackConfig) -> Result<AttackResult> {
    cfg.validate()?;
    let mut per_metric = BTreeMap::new();
    for &metric in &cfg.metrics {
        per_metric.insert(metric, run_targeted_attack(cfg, metric)?);
    }
    Ok(AttackResult {
        per_metric,
        random_baseline: run_random_baseline(cfg)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u32) -> Graph {
        let mut g = Graph::new();
        for i in 0..n - 1 {
            g.add_edge(NodeId(i), NodeId(i + 1)).unwrap();
        }
        g
    }

    fn star(leaves: u32) -> Graph {
        let mut g = Graph::new();
        for l in 1..=leaves {
            g.add_edge(NodeId(0), NodeId(l)).unwrap();
        }
        g
    }

    fn complete(n: u32) -> Graph {
        let mut g = Graph::new();
        for a in 0..n {
            for b in (a + 1)..n {
                g.add_edge(NodeId(a), NodeId(b)).unwrap();
            }
        }
        g
    }

    #[test]
    fn average_hops_on_small_fixtures() {
        let s = average_hop_count(&path(3));
        assert!((s.avg_hops.unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!((s.connected_pairs, s.disconnected_pairs), (3, 0));

        let s = average_hop_count(&complete(4));
        assert_eq!(s.avg_hops, Some(1.0));

        // star with 4 leaves: 4 pairs at hop 1, 6 leaf pairs at hop 2
        let s = average_hop_count(&star(4));
        assert!((s.avg_hops.unwrap() - 1.6).abs() < 1e-12);
    }

    #[test]
    fn average_hops_counts_disconnected_pairs() {
        let g = Graph::parse_edge_list("A B\nC D\n").unwrap();
        let s = average_hop_count(&g);
        assert_eq!(s.avg_hops, Some(1.0));
        assert_eq!((s.connected_pairs, s.disconnected_pairs), (2, 4));
    }

    #[test]
    fn average_hops_is_undefined_without_reachable_pairs() {
        let mut g = Graph::new();
        g.add_node(NodeId(0));
        g.add_node(NodeId(1));
        let s = average_hop_count(&g);
        assert_eq!(s.avg_hops, None);
        assert_eq!((s.connected_pairs, s.disconnected_pairs), (0, 1));

        let mut single = Graph::new();
        single.add_node(NodeId(0));
        let s = average_hop_count(&single);
        assert_eq!(s.avg_hops, None);
        assert_eq!(s.connected_pairs, 0);
    }

    #[test]
    fn betweenness_attack_on_a_star_takes_out_the_center() {
        let cfg = AttackConfig::new(
            star(4),
            BTreeSet::from([CentralityMetric::Betweenness]),
            1,
            0,
        );
        let curve = run_targeted_attack(&cfg, CentralityMetric::Betweenness).unwrap();
        assert_eq!(curve.len(), 2);
        assert_eq!(curve[0].connected_pairs, 10);
        assert_eq!(curve[1].connected_pairs, 0);
        assert_eq!(curve[1].avg_hops, None);
        assert_eq!(curve[1].disconnected_pairs, 6);
    }

    #[test]
    fn ties_are_broken_by_ascending_node_id() {
        // all K5 nodes tie on degree, so removals take 0 then 1
        let cfg = AttackConfig::new(complete(5), BTreeSet::new(), 2, 0);
        let curve = run_targeted_attack(&cfg, CentralityMetric::Degree).unwrap();
        assert_eq!(curve[2].connected_pairs, 3); // K3 remains
        assert_eq!(curve[2].avg_hops, Some(1.0));
    }

    #[test]
    fn five_path_betweenness_removal_splits_the_path() {
        let cfg = AttackConfig::new(
            path(5),
            BTreeSet::from([CentralityMetric::Betweenness]),
            1,
            0,
        );
        let curve = run_targeted_attack(&cfg, CentralityMetric::Betweenness).unwrap();
        // center removed: two K2 fragments remain
        assert_eq!(curve[1].avg_hops, Some(1.0));
        assert_eq!(curve[1].connected_pairs, 2);
        assert_eq!(curve[1].disconnected_pairs, 4);
    }

    #[test]
    fn recompute_mode_matches_static_on_a_star() {
        // only one meaningful victim each step, so both modes agree
        let mut cfg = AttackConfig::new(
            star(5),
            BTreeSet::from([CentralityMetric::Degree]),
            2,
            0,
        );
        let fixed = run_targeted_attack(&cfg, CentralityMetric::Degree).unwrap();
        cfg.ranking_mode = RankingMode::Recompute;
        let recomputed = run_targeted_attack(&cfg, CentralityMetric::Degree).unwrap();
        assert_eq!(fixed, recomputed);
    }

    #[test]
    fn baseline_is_deterministic_and_anchored_at_the_intact_graph() {
        let cfg = AttackConfig::new(
            star(4),
            BTreeSet::from([CentralityMetric::Degree]),
            2,
            7,
        );
        let a = run_random_baseline(&cfg).unwrap();
        let b = run_random_baseline(&cfg).unwrap();
        assert_eq!(a, b);
        // every trial removes nothing at point 0, so the trial average is
        // the intact star's 1.6 up to accumulation rounding
        assert!((a[0].avg_hops.unwrap() - 1.6).abs() < 1e-12);
        assert!(a[0].stddev.abs() < 1e-12);
        assert_eq!(a[0].undefined_trials, 0);
        assert_eq!(a[0].mean_connected_pairs, 10.0);
    }

    #[test]
    fn experiment_assembles_all_curves_and_is_deterministic() {
        let cfg = AttackConfig::new(
            complete(6),
            BTreeSet::from([CentralityMetric::Degree, CentralityMetric::Closeness]),
            2,
            3,
        );
        let a = run_attack_experiment(&cfg).unwrap();
        let b = run_attack_experiment(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.per_metric.len(), 2);
        assert_eq!(a.random_baseline.len(), 3);
        // complete graph: every curve stays flat at 1.0
        for curve in a.per_metric.values() {
            for p in curve {
                assert_eq!(p.avg_hops, Some(1.0));
                assert_eq!(p.disconnected_pairs, 0);
            }
        }
    }

    #[test]
    fn zero_removals_yields_a_single_point() {
        let cfg = AttackConfig::new(path(4), BTreeSet::new(), 0, 0);
        let curve = run_targeted_attack(&cfg, CentralityMetric::Degree).unwrap();
        assert_eq!(curve.len(), 1);
        assert_eq!(curve[0].removed, 0);
    }

    #[test]
    fn config_validation_rejects_bad_parameters() {
        let mut cfg = AttackConfig::new(path(3), BTreeSet::new(), 3, 0);
        assert!(matches!(
            run_targeted_attack(&cfg, CentralityMetric::Degree),
            Err(Error::InvalidConfig(_))
        ));
        cfg.max_removals = 1;
        cfg.random_trials = 0;
        assert!(run_random_baseline(&cfg).is_err());
    }
}
