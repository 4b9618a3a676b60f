//! Socially aware slot scheduling.
//!
//! Channel access works as a distributed lottery: time is divided into
//! fixed-size frames of slots, every node holds a number of tickets
//! proportional to its closeness centrality, and for each slot the nodes
//! within two hops of each other compare deterministically hashed tickets.
//! The holder of the maximum ticket wins the slot in its neighborhood.
//! Because ticket values are a pure function of `(node, slot, index)`,
//! every node computes identical elections from its own two-hop view and
//! no schedule negotiation traffic is needed — only closeness values have
//! to circulate, which the HELLO codec in [`hello`] carries.
//!
//! [`simulate`] runs constant-bit-rate flows over the resulting schedule,
//! slot by slot, and reports delay/throughput statistics.

mod election;
mod hello;
mod sim;

pub use election::{
    baseline_ticket_count, build_schedule, draw_ticket, ticket_count, ElectionEngine,
    ElectionParams, Ticket, TwoHopView,
};
pub use hello::{decode_hello, encode_hello, HelloLink, HelloMessage, HELLO_HEADER_LEN, LINK_ENTRY_LEN};
pub use sim::simulate;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Globally increasing slot identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotId(pub u64);

/// Global slot id of 1-based `position` within frame `frame_count`:
/// `frame_count · frame_size + (position − 1)`.
pub fn form_slot_id(frame_count: u64, position: u32, frame_size: u32) -> Result<SlotId> {
    if frame_size == 0 {
        return Err(Error::InvalidConfig("frame_size must be at least 1".into()));
    }
    if position == 0 || position > frame_size {
        return Err(Error::SlotPositionOutOfRange {
            position,
            frame_size,
        });
    }
    frame_count
        .checked_mul(frame_size as u64)
        .and_then(|base| base.checked_add(position as u64 - 1))
        .map(SlotId)
        .ok_or_else(|| Error::InvalidConfig("slot id overflows 64 bits".into()))
}

/// Who gets how many tickets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchedulingMode {
    /// Ticket counts proportional to closeness centrality.
    SociallyAware,
    /// Ticket counts drawn uniformly from `[1, ticket_scale]` per
    /// `(node, slot)` — same election machinery, no social bias.
    RandomBaseline,
}

impl SchedulingMode {
    /// Canonical lowercase name used in CSV output and on the CLI.
    pub fn name(self) -> &'static str {
        match self {
            SchedulingMode::SociallyAware => "social",
            SchedulingMode::RandomBaseline => "random",
        }
    }
}

impl std::fmt::Display for SchedulingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SchedulingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "social" | "socially-aware" => Ok(SchedulingMode::SociallyAware),
            "random" | "random-baseline" => Ok(SchedulingMode::RandomBaseline),
            other => Err(Error::InvalidConfig(format!("unknown scheduling mode {other:?}"))),
        }
    }
}

/// One constant-bit-rate traffic flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flow {
    /// Source node.
    pub src: NodeId,
    /// Destination node.
    pub dst: NodeId,
    /// Offered load in payload bits per second.
    pub rate_bps: f64,
}

/// Default slots per frame.
pub const DEFAULT_FRAME_SIZE: u32 = 20;
/// Default closeness-to-tickets multiplier.
pub const DEFAULT_TICKET_SCALE: u32 = 10;
/// Default packet size in bits.
pub const DEFAULT_PACKET_SIZE_BITS: u32 = 500;
/// Default slot duration in seconds.
pub const DEFAULT_SLOT_DURATION_S: f64 = 0.005;
/// Beacon period of the closeness-bearing HELLO messages. The simulator
/// works from a static topology whose closeness values never go stale, so
/// the constant is recorded for configuration completeness but drives
/// nothing in the slot loop.
pub const HELLO_INTERVAL_S: f64 = 0.002;

/// Parameters of one scheduling simulation.
#[derive(Debug, Clone)]
pub struct StdmaConfig {
    /// Mesh topology (static for the duration of the run).
    pub graph: Graph,
    /// Slots per frame.
    pub frame_size: u32,
    /// Closeness-to-tickets multiplier (also the baseline draw ceiling).
    pub ticket_scale: u32,
    /// Ticket allocation policy.
    pub mode: SchedulingMode,
    /// Traffic matrix.
    pub flows: Vec<Flow>,
    /// Payload bits per packet.
    pub packet_size_bits: u32,
    /// Seconds per slot.
    pub slot_duration_s: f64,
    /// Simulated wall-clock length in seconds.
    pub sim_duration_s: f64,
    /// Seed for the baseline ticket draws.
    pub seed: u64,
}

impl StdmaConfig {
    /// Config with the default frame geometry and packet sizing.
    pub fn new(graph: Graph, mode: SchedulingMode, flows: Vec<Flow>, sim_duration_s: f64, seed: u64) -> Self {
        Self {
            graph,
            frame_size: DEFAULT_FRAME_SIZE,
            ticket_scale: DEFAULT_TICKET_SCALE,
            mode,
            flows,
            packet_size_bits: DEFAULT_PACKET_SIZE_BITS,
            slot_duration_s: DEFAULT_SLOT_DURATION_S,
            sim_duration_s,
            seed,
        }
    }
}

/// One delivered packet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delivery {
    /// Index into [`StdmaConfig::flows`].
    pub flow: usize,
    /// Hops traveled (the shortest-path length from source to
    /// destination).
    pub hops: u32,
    /// Seconds from enqueue at the source to arrival at the destination.
    pub delay_s: f64,
}

/// Output of one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct StdmaResult {
    /// Mean end-to-end delay over delivered packets (`None` with no
    /// deliveries).
    pub mean_delay_s: Option<f64>,
    /// Median (nearest-rank) delay.
    pub median_delay_s: Option<f64>,
    /// 95th-percentile (nearest-rank) delay.
    pub p95_delay_s: Option<f64>,
    /// Delivered payload bits per simulated second, across all flows.
    pub aggregate_throughput_bps: f64,
    /// Delivered payload bits per second, per flow (same order as the
    /// config).
    pub per_flow_goodput_bps: Vec<f64>,
    /// Packets delivered to their destination.
    pub delivered: u64,
    /// Packets generated by the sources during the run.
    pub generated: u64,
    /// Fraction of won slots that actually carried a packet.
    pub slot_utilization: f64,
    /// Two-hop conflicts observed (0 on every successful run; a nonzero
    /// count aborts the simulation with an error instead).
    pub conflict_violations: u64,
    /// Per-packet delivery records, in delivery order.
    pub deliveries: Vec<Delivery>,
}
