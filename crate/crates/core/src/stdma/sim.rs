//! Slot-synchronous traffic simulation over the lottery schedule.

use std::collections::VecDeque;

use crate::centrality::closeness_centrality;
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, UNREACHABLE};
use crate::stdma::{Delivery, ElectionEngine, ElectionParams, SchedulingMode, SlotId, StdmaConfig, StdmaResult};

/// A packet in flight.
struct Packet {
    flow: usize,
    arrival_s: f64,
    hops: u32,
}

/// Nearest-rank index of quantile `q` among `n` sorted samples.
fn nearest_rank(q: f64, n: usize) -> usize {
    ((q * n as f64).ceil() as usize).max(1) - 1
}

/// Number of packets a constant-bit-rate source emits strictly before
/// `duration` when packet `k` arrives at `k · interval`.
fn packets_generated(interval: f64, duration: f64) -> u64 {
    let mut count = (duration / interval).ceil() as u64;
    while count > 0 && (count - 1) as f64 * interval >= duration {
        count -= 1;
    }
    while count as f64 * interval < duration {
        count += 1;
    }
    count
}

fn validate(cfg: &StdmaConfig) -> Result<()> {
    if cfg.graph.node_count() < 2 {
        return Err(Error::TooFewNodes {
            required: 2,
            actual: cfg.graph.node_count(),
        });
    }
    if cfg.packet_size_bits == 0 {
        return Err(Error::InvalidConfig("packet_size_bits must be at least 1".into()));
    }
    if !(cfg.slot_duration_s.is_finite() && cfg.slot_duration_s > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "slot_duration_s must be positive and finite, got {}",
            cfg.slot_duration_s
        )));
    }
    if !(cfg.sim_duration_s.is_finite() && cfg.sim_duration_s > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "sim_duration_s must be positive and finite, got {}",
            cfg.sim_duration_s
        )));
    }
    for (i, flow) in cfg.flows.iter().enumerate() {
        if !cfg.graph.has_node(flow.src) {
            return Err(Error::UnknownNode(flow.src));
        }
        if !cfg.graph.has_node(flow.dst) {
            return Err(Error::UnknownNode(flow.dst));
        }
        if flow.src == flow.dst {
            return Err(Error::InvalidConfig(format!(
                "flow {i}: source and destination are both node {}",
                flow.src
            )));
        }
        if !(flow.rate_bps.is_finite() && flow.rate_bps > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "flow {i}: rate must be positive and finite, got {}",
                flow.rate_bps
            )));
        }
    }
    Ok(())
}

/// Run one scheduling simulation.
///
/// Time advances slot by slot for as long as the slot start lies inside
/// `sim_duration_s`. At each slot start, every flow enqueues the packets
/// whose arrival times have been reached; then the lottery elects the
/// slot's winners, and each winner with a queued packet forwards its head
/// packet one hop along a shortest path (ties broken toward the
/// lowest-numbered neighbor). A packet reaching its destination is
/// recorded with delay measured from arrival at the source to the end of
/// the delivering slot — never less than `hops · slot_duration_s`.
///
/// Socially aware runs derive ticket allowances from closeness centrality
/// and are independent of the seed; baseline runs draw allowances from the
/// seed. Everything else is shared, so mode-to-mode comparisons isolate
/// the ticket policy.
///
/// Fails with [`Error::ConflictViolation`] if two winners of one slot lie
/// within two hops of each other (the election makes this impossible; the
/// check guards the implementation, not the protocol).
pub fn simulate(cfg: &StdmaConfig) -> Result<StdmaResult> {
    validate(cfg)?;
    let ix = cfg.graph.indexed();
    let n = ix.ids.len();

    let scores;
    let engine = match cfg.mode {
        SchedulingMode::SociallyAware => {
            scores = closeness_centrality(&cfg.graph)?;
            ElectionEngine::new(&cfg.graph, Some(&scores), ElectionParams::from_config(cfg))?
        }
        SchedulingMode::RandomBaseline => {
            ElectionEngine::new(&cfg.graph, None, ElectionParams::from_config(cfg))?
        }
    };

    // Per flow: positions, inter-arrival time, and a shared next-hop table
    // per distinct destination. next_hop[v] is the lowest-numbered neighbor
    // of v that is one hop closer to the destination.
    let mut hop_tables: std::collections::BTreeMap<usize, Vec<u32>> = std::collections::BTreeMap::new();
    let mut flow_route = Vec::with_capacity(cfg.flows.len());
    for (i, flow) in cfg.flows.iter().enumerate() {
        let src = ix.pos[&flow.src];
        let dst = ix.pos[&flow.dst];
        let table = hop_tables.entry(dst).or_insert_with(|| {
            let dist = bfs_distances(&ix.adj, dst);
            (0..n)
                .map(|v| {
                    if v == dst || dist[v] == UNREACHABLE {
                        return UNREACHABLE;
                    }
                    *ix.adj[v]
                        .iter()
                        .find(|&&w| dist[w as usize] == dist[v] - 1)
                        .expect("a node with finite distance has a closer neighbor")
                })
                .collect()
        });
        if table[src] == UNREACHABLE {
            return Err(Error::InvalidConfig(format!(
                "flow {i}: node {} cannot reach node {}",
                flow.src, flow.dst
            )));
        }
        let interval = cfg.packet_size_bits as f64 / flow.rate_bps;
        flow_route.push((src, dst, interval));
    }

    let mut queues: Vec<VecDeque<Packet>> = (0..n).map(|_| VecDeque::new()).collect();
    let mut next_packet = vec![0u64; cfg.flows.len()];
    let mut per_flow_delivered = vec![0u64; cfg.flows.len()];
    let mut deliveries: Vec<Delivery> = Vec::new();
    let mut wins = 0u64;
    let mut transmissions = 0u64;

    let mut slot = 0u64;
    while (slot as f64) * cfg.slot_duration_s < cfg.sim_duration_s {
        let t_slot = slot as f64 * cfg.slot_duration_s;

        for (f, &(src, _, interval)) in flow_route.iter().enumerate() {
            while next_packet[f] as f64 * interval <= t_slot {
                queues[src].push_back(Packet {
                    flow: f,
                    arrival_s: next_packet[f] as f64 * interval,
                    hops: 0,
                });
                next_packet[f] += 1;
            }
        }

        let winners = engine.winners(SlotId(slot));
        let conflicts = winners
            .iter()
            .enumerate()
            .flat_map(|(k, &i)| winners[k + 1..].iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| engine.within_two_hops(i, j))
            .count();
        if conflicts > 0 {
            return Err(Error::ConflictViolation {
                slot,
                count: conflicts,
            });
        }

        for &v in &winners {
            wins += 1;
            let Some(packet) = queues[v].pop_front() else {
                continue;
            };
            transmissions += 1;
            let (_, dst, _) = flow_route[packet.flow];
            let next = hop_tables[&dst][v] as usize;
            if next == dst {
                per_flow_delivered[packet.flow] += 1;
                deliveries.push(Delivery {
                    flow: packet.flow,
                    hops: packet.hops + 1,
                    delay_s: (slot + 1) as f64 * cfg.slot_duration_s - packet.arrival_s,
                });
            } else {
                queues[next].push_back(Packet {
                    hops: packet.hops + 1,
                    ..packet
                });
            }
        }

        slot += 1;
    }

    let generated = flow_route
        .iter()
        .map(|&(_, _, interval)| packets_generated(interval, cfg.sim_duration_s))
        .sum();
    let delivered = deliveries.len() as u64;
    let bits = cfg.packet_size_bits as f64;
    let (mean, median, p95) = if deliveries.is_empty() {
        (None, None, None)
    } else {
        let mean = deliveries.iter().map(|d| d.delay_s).sum::<f64>() / deliveries.len() as f64;
        let mut sorted: Vec<f64> = deliveries.iter().map(|d| d.delay_s).collect();
        sorted.sort_by(f64::total_cmp);
        (
            Some(mean),
            Some(sorted[nearest_rank(0.5, sorted.len())]),
            Some(sorted[nearest_rank(0.95, sorted.len())]),
        )
    };
    Ok(StdmaResult {
        mean_delay_s: mean,
        median_delay_s: median,
        p95_delay_s: p95,
        aggregate_throughput_bps: delivered as f64 * bits / cfg.sim_duration_s,
        per_flow_goodput_bps: per_flow_delivered
            .iter()
            .map(|&d| d as f64 * bits / cfg.sim_duration_s)
            .collect(),
        delivered,
        generated,
        slot_utilization: if wins == 0 {
            0.0
        } else {
            transmissions as f64 / wins as f64
        },
        conflict_violations: 0,
        deliveries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, NodeId};
    use crate::stdma::Flow;

    fn path_graph(n: u32) -> Graph {
        let mut g = Graph::new();
        for i in 0..n - 1 {
            g.add_edge(NodeId(i), NodeId(i + 1)).unwrap();
        }
        g
    }

    #[test]
    fn two_node_flow_delivers_every_packet() {
        let cfg = StdmaConfig::new(
            path_graph(2),
            SchedulingMode::SociallyAware,
            vec![Flow {
                src: NodeId(0),
                dst: NodeId(1),
                rate_bps: 5_000.0, // one 500-bit packet every 0.1 s
            }],
            1.0,
            0,
        );
        let out = simulate(&cfg).unwrap();
        assert_eq!(out.generated, 10);
        assert_eq!(out.delivered, 10);
        assert_eq!(out.conflict_violations, 0);
        assert_eq!(out.aggregate_throughput_bps, 5_000.0);
        assert_eq!(out.per_flow_goodput_bps, vec![5_000.0]);
        assert!(out.slot_utilization > 0.0 && out.slot_utilization <= 1.0);
        for d in &out.deliveries {
            assert_eq!(d.hops, 1);
            assert!(d.delay_s >= cfg.slot_duration_s - 1e-12);
        }
        assert!(out.mean_delay_s.unwrap() >= cfg.slot_duration_s);
        assert!(out.median_delay_s.is_some() && out.p95_delay_s.is_some());
    }

    #[test]
    fn multi_hop_delay_never_undercuts_the_hop_count() {
        let cfg = StdmaConfig::new(
            path_graph(4),
            SchedulingMode::SociallyAware,
            vec![Flow {
                src: NodeId(0),
                dst: NodeId(3),
                rate_bps: 2_500.0, // one packet every 0.2 s
            }],
            2.0,
            0,
        );
        let out = simulate(&cfg).unwrap();
        assert_eq!(out.generated, 10);
        assert!(out.delivered > 0);
        for d in &out.deliveries {
            assert_eq!(d.hops, 3);
            assert!(
                d.delay_s >= 3.0 * cfg.slot_duration_s - 1e-12,
                "delay {} undercuts three slot times",
                d.delay_s
            );
        }
    }

    #[test]
    fn no_flows_means_empty_statistics() {
        let cfg = StdmaConfig::new(path_graph(3), SchedulingMode::RandomBaseline, Vec::new(), 0.5, 9);
        let out = simulate(&cfg).unwrap();
        assert_eq!(out.generated, 0);
        assert_eq!(out.delivered, 0);
        assert_eq!(out.mean_delay_s, None);
        assert_eq!(out.median_delay_s, None);
        assert_eq!(out.p95_delay_s, None);
        assert_eq!(out.aggregate_throughput_bps, 0.0);
        assert_eq!(out.slot_utilization, 0.0);
    }

    #[test]
    fn identical_configs_reproduce_identical_results() {
        let g = crate::generate::random_geometric_graph(12, 4.0, 3).unwrap();
        let nodes: Vec<NodeId> = g.nodes().collect();
        let flows = vec![
            Flow { src: nodes[0], dst: nodes[7], rate_bps: 1_000.0 },
            Flow { src: nodes[5], dst: nodes[2], rate_bps: 1_500.0 },
        ];
        for mode in [SchedulingMode::SociallyAware, SchedulingMode::RandomBaseline] {
            let cfg = StdmaConfig::new(g.clone(), mode, flows.clone(), 3.0, 11);
            assert_eq!(simulate(&cfg).unwrap(), simulate(&cfg).unwrap());
        }
    }

    #[test]
    fn social_schedules_ignore_the_seed_and_baseline_uses_it() {
        let g = crate::generate::random_geometric_graph(12, 4.0, 3).unwrap();
        let nodes: Vec<NodeId> = g.nodes().collect();
        let flows = vec![Flow { src: nodes[1], dst: nodes[9], rate_bps: 2_000.0 }];
        let run = |mode, seed| {
            let cfg = StdmaConfig::new(g.clone(), mode, flows.clone(), 3.0, seed);
            simulate(&cfg).unwrap()
        };
        assert_eq!(
            run(SchedulingMode::SociallyAware, 1),
            run(SchedulingMode::SociallyAware, 99)
        );
        assert_ne!(
            run(SchedulingMode::RandomBaseline, 1),
            run(SchedulingMode::RandomBaseline, 2)
        );
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let g = path_graph(3);
        let unknown = StdmaConfig::new(
            g.clone(),
            SchedulingMode::SociallyAware,
            vec![Flow { src: NodeId(0), dst: NodeId(9), rate_bps: 1.0 }],
            1.0,
            0,
        );
        assert!(matches!(simulate(&unknown), Err(Error::UnknownNode(NodeId(9)))));

        let loopback = StdmaConfig::new(
            g.clone(),
            SchedulingMode::SociallyAware,
            vec![Flow { src: NodeId(0), dst: NodeId(0), rate_bps: 1.0 }],
            1.0,
            0,
        );
        assert!(matches!(simulate(&loopback), Err(Error::InvalidConfig(_))));

        let lazy = StdmaConfig::new(
            g.clone(),
            SchedulingMode::SociallyAware,
            vec![Flow { src: NodeId(0), dst: NodeId(1), rate_bps: 0.0 }],
            1.0,
            0,
        );
        assert!(matches!(simulate(&lazy), Err(Error::InvalidConfig(_))));

        let mut parted = g.clone();
        parted.add_node(NodeId(7));
        let unreachable = StdmaConfig::new(
            parted,
            SchedulingMode::SociallyAware,
            vec![Flow { src: NodeId(0), dst: NodeId(7), rate_bps: 1.0 }],
            1.0,
            0,
        );
        assert!(matches!(simulate(&unreachable), Err(Error::InvalidConfig(_))));

        let mut timeless = StdmaConfig::new(g.clone(), SchedulingMode::SociallyAware, Vec::new(), 1.0, 0);
        timeless.sim_duration_s = 0.0;
        assert!(matches!(simulate(&timeless), Err(Error::InvalidConfig(_))));

        let mut lonely = Graph::new();
        lonely.add_node(NodeId(0));
        let solo = StdmaConfig::new(lonely, SchedulingMode::RandomBaseline, Vec::new(), 1.0, 0);
        assert!(matches!(
            simulate(&solo),
            Err(Error::TooFewNodes { required: 2, actual: 1 })
        ));
    }

    #[test]
    fn packet_generation_counts_arrivals_strictly_inside_the_duration() {
        // arrivals at 0.0, 0.1, …: 1.0 s excludes the packet at exactly 1.0
        assert_eq!(packets_generated(0.1, 1.0), 10);
        assert_eq!(packets_generated(0.3, 1.0), 4); // 0.0 0.3 0.6 0.9
        assert_eq!(packets_generated(2.0, 1.0), 1); // only the packet at 0.0
    }

    #[test]
    fn queueing_is_fifo_per_node() {
        // Two flows share source 0 on a two-node graph; both enqueue at
        // t = 0 in flow order, so flow 0's packet must deliver first.
        let cfg = StdmaConfig::new(
            path_graph(2),
            SchedulingMode::SociallyAware,
            vec![
                Flow { src: NodeId(0), dst: NodeId(1), rate_bps: 250.0 },
                Flow { src: NodeId(0), dst: NodeId(1), rate_bps: 250.0 },
            ],
            2.0,
            0,
        );
        let out = simulate(&cfg).unwrap();
        assert_eq!(out.delivered, 2);
        assert_eq!(out.deliveries[0].flow, 0);
        assert_eq!(out.deliveries[1].flow, 1);
        assert!(out.deliveries[0].delay_s < out.deliveries[1].delay_s);
    }
}
