//! Lottery tickets and per-slot elections.

use std::collections::BTreeMap;

use crate::centrality::CentralityScores;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rng::{mix64, GOLDEN_GAMMA};
use crate::stdma::{form_slot_id, SchedulingMode, SlotId, StdmaConfig};

/// Multiplier folding the node id into a draw.
const NODE_MULT: u64 = GOLDEN_GAMMA; // 0x9E37_79B9_7F4A_7C15
/// Multiplier folding the slot id into a draw.
const SLOT_MULT: u64 = 0xC2B2_AE3D_27D4_EB4F;
/// Multiplier folding the ticket index into a draw.
const INDEX_MULT: u64 = 0xD6E8_FEB8_6659_FD93;
/// Arbitrary odd constant separating the baseline-count stream from the
/// ticket-value stream.
const BASELINE_SALT: u64 = 0x2545_F491_4F6C_DD1D;

/// Deterministic ticket value of `(node, slot, index)`.
///
/// The inputs are spread by three fixed odd multipliers, combined by XOR
/// and finished with [`mix64`]. Any node can therefore reproduce any
/// contender's tickets locally — elections agree across the mesh without
/// exchanging a single scheduling message. The all-zero input maps to 0.
pub fn draw_ticket(node: NodeId, slot: SlotId, index: u32) -> u64 {
    let combined = (node.0 as u64).wrapping_mul(NODE_MULT)
        ^ slot.0.wrapping_mul(SLOT_MULT)
        ^ (index as u64).wrapping_mul(INDEX_MULT);
    mix64(combined)
}

/// Ticket allowance from a closeness score: `closeness · scale`, rounded
/// half-up, floored at one so every node keeps a chance to transmit.
pub fn ticket_count(closeness: f64, scale: u32) -> u32 {
    let rounded = (closeness * scale as f64).round() as u32;
    rounded.max(1)
}

/// Baseline allowance: uniform in `[1, scale]`, derived from
/// `(seed, node, slot)` with the same finalizer as [`draw_ticket`]. A pure
/// function rather than generator state, so every two-hop observer
/// computes the same count and elections stay consistent.
pub fn baseline_ticket_count(seed: u64, node: NodeId, slot: SlotId, scale: u32) -> u32 {
    let h = mix64(
        seed ^ (node.0 as u64).wrapping_mul(NODE_MULT)
            ^ slot.0.wrapping_mul(SLOT_MULT)
            ^ BASELINE_SALT,
    );
    1 + ((h as u128 * scale as u128) >> 64) as u32
}

/// One lottery ticket. Elections take the maximum under the total order
/// (value, then owner, then index), so even a hash-value collision
/// resolves identically everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ticket {
    /// Hashed draw.
    pub value: u64,
    /// Node holding the ticket.
    pub owner: NodeId,
    /// Index of the ticket within its owner's allowance.
    pub index: u32,
}

impl Ord for Ticket {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.value, self.owner, self.index).cmp(&(other.value, other.owner, other.index))
    }
}

impl PartialOrd for Ticket {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// What one node knows about its own contention domain: itself plus
/// everything within two hops, each with a closeness value.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoHopView {
    center: NodeId,
    closeness: BTreeMap<NodeId, f64>,
}

impl TwoHopView {
    /// Assemble the view of `center` from the full topology and a
    /// closeness table. Fails with [`Error::MissingCloseness`] if any
    /// two-hop member has no score — an election over a stale view would
    /// not be reproducible by that member.
    pub fn from_graph(g: &Graph, center: NodeId, scores: &CentralityScores) -> Result<Self> {
        let mut members = g.k_hop_neighborhood(center, 2)?;
        members.insert(center);
        let mut closeness = BTreeMap::new();
        for node in members {
            let value = scores.get(node).ok_or(Error::MissingCloseness(node))?;
            closeness.insert(node, value);
        }
        Ok(Self { center, closeness })
    }

    /// View with explicit closeness values; `closeness` must contain
    /// `center` itself.
    pub fn with_closeness(center: NodeId, closeness: BTreeMap<NodeId, f64>) -> Result<Self> {
        if !closeness.contains_key(&center) {
            return Err(Error::MissingCloseness(center));
        }
        Ok(Self { center, closeness })
    }

    /// The node this view belongs to.
    pub fn center(&self) -> NodeId {
        self.center
    }

    /// All members (center included) with their closeness values.
    pub fn members(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.closeness.iter().map(|(&n, &c)| (n, c))
    }
}

/// Election parameters shared by every node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectionParams {
    /// Slots per frame.
    pub frame_size: u32,
    /// Closeness-to-tickets multiplier / baseline ceiling.
    pub ticket_scale: u32,
    /// Ticket allocation policy.
    pub mode: SchedulingMode,
    /// Seed for baseline draws (ignored in socially aware mode).
    pub seed: u64,
}

impl ElectionParams {
    /// Extract the election-relevant parameters of a simulation config.
    pub fn from_config(cfg: &StdmaConfig) -> Self {
        Self {
            frame_size: cfg.frame_size,
            ticket_scale: cfg.ticket_scale,
            mode: cfg.mode,
            seed: cfg.seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.frame_size == 0 {
            return Err(Error::InvalidConfig("frame_size must be at least 1".into()));
        }
        if self.ticket_scale == 0 {
            return Err(Error::InvalidConfig("ticket_scale must be at least 1".into()));
        }
        Ok(())
    }

    fn allowance(&self, node: NodeId, closeness: f64, slot: SlotId) -> u32 {
        match self.mode {
            SchedulingMode::SociallyAware => ticket_count(closeness, self.ticket_scale),
            SchedulingMode::RandomBaseline => {
                baseline_ticket_count(self.seed, node, slot, self.ticket_scale)
            }
        }
    }
}

/// Best ticket a node holds in a slot (its allowance is always ≥ 1).
fn best_ticket(params: &ElectionParams, node: NodeId, closeness: f64, slot: SlotId) -> Ticket {
    let count = params.allowance(node, closeness, slot);
    (0..count)
        .map(|index| Ticket {
            value: draw_ticket(node, slot, index),
            owner: node,
            index,
        })
        .max()
        .expect("allowance is at least one ticket")
}

/// Slot positions (1-based) of frame `frame_count` that the view's center
/// wins: for every slot, all members of the contention domain draw their
/// tickets and the maximum ticket's owner takes the slot.
pub fn build_schedule(
    view: &TwoHopView,
    frame_count: u64,
    params: &ElectionParams,
) -> Result<std::collections::BTreeSet<u32>> {
    params.validate()?;
    let mut won = std::collections::BTreeSet::new();
    for position in 1..=params.frame_size {
        let slot = form_slot_id(frame_count, position, params.frame_size)?;
        let winner = view
            .members()
            .map(|(node, closeness)| best_ticket(params, node, closeness, slot))
            .max()
            .expect("view contains at least its center")
            .owner;
        if winner == view.center() {
            won.insert(position);
        }
    }
    Ok(won)
}

/// Whole-mesh election evaluator.
///
/// [`build_schedule`] recomputes the full contention domain per node; for
/// long simulations that is wasteful because each node's best ticket can be
/// shared across every election it contends in. The engine computes one
/// best ticket per node per slot and then declares node `i` a winner of
/// exactly those slots where its ticket beats every contender in `i`'s own
/// two-hop domain — the same outcomes as running [`build_schedule`] for
/// every node.
#[derive(Debug, Clone)]
pub struct ElectionEngine {
    ids: Vec<NodeId>,
    /// Per node: contention domain as sorted positions (self included).
    contenders: Vec<Vec<u32>>,
    closeness: Vec<f64>,
    params: ElectionParams,
}

impl ElectionEngine {
    /// Build the evaluator. `scores` must cover every node in socially
    /// aware mode; the baseline ignores them (pass `None`).
    pub fn new(g: &Graph, scores: Option<&CentralityScores>, params: ElectionParams) -> Result<Self> {
        params.validate()?;
        let ids: Vec<NodeId> = g.nodes().collect();
        let pos: BTreeMap<NodeId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut contenders = Vec::with_capacity(ids.len());
        for &v in &ids {
            let mut domain: Vec<u32> = g
                .k_hop_neighborhood(v, 2)?
                .into_iter()
                .map(|w| pos[&w] as u32)
                .collect();
            domain.push(pos[&v] as u32);
            domain.sort_unstable();
            contenders.push(domain);
        }
        let closeness = match params.mode {
            SchedulingMode::SociallyAware => {
                let scores = scores.ok_or_else(|| {
                    Error::InvalidConfig("socially aware elections need closeness scores".into())
                })?;
                ids.iter()
                    .map(|&v| scores.get(v).ok_or(Error::MissingCloseness(v)))
                    .collect::<Result<Vec<f64>>>()?
            }
            SchedulingMode::RandomBaseline => vec![0.0; ids.len()],
        };
        Ok(Self {
            ids,
            contenders,
            closeness,
            params,
        })
    }

    /// Node ids in position order.
    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    /// Whether positions `i` and `j` lie within two hops of each other
    /// (a node counts as within two hops of itself).
    pub fn within_two_hops(&self, i: usize, j: usize) -> bool {
        self.contenders[i].binary_search(&(j as u32)).is_ok()
    }

    /// Positions that win `slot` in their own two-hop domain, ascending.
    ///
    /// Two winners can never share a domain: if they were within two hops
    /// of each other, each would contend in the other's election and the
    /// ticket order would eliminate one of them.
    pub fn winners(&self, slot: SlotId) -> Vec<usize> {
        let best: Vec<Ticket> = self
            .ids
            .iter()
            .zip(&self.closeness)
            .map(|(&node, &closeness)| best_ticket(&self.params, node, closeness, slot))
            .collect();
        (0..self.ids.len())
            .filter(|&i| self.contenders[i].iter().all(|&c| best[c as usize] <= best[i]))
            .collect()
    }
}
