//! `meshsna` — centrality analysis and slot-scheduling experiments on mesh
//! topologies.
//!
//! Every run is driven by an explicit seed and writes a `manifest.json`
//! beside its outputs; re-running a manifest through `--config` reproduces
//! the outputs byte for byte. Exit codes: 0 success, 2 usage error, 3 a
//! simulation detected interfering slot winners, 1 any other failure.

mod csvout;
mod manifest;
mod run;
mod topo;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "meshsna", version, about = "Mesh centrality and slot-scheduling experiments")]
pub struct Cli {
    /// Directory for output files and the run manifest
    #[arg(long, global = true, env = "MESHSNA_OUT", value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// JSON run manifest or bare parameter record; explicit flags override it
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Suppress progress messages on stderr
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute centrality scores for every node of a topology
    Centrality {
        /// Edge-list topology file
        #[arg(long, value_name = "FILE")]
        topo: Option<PathBuf>,
        /// Comma-separated metrics (degree, closeness, betweenness,
        /// eigenvector) or "all"
        #[arg(long, value_name = "LIST")]
        metrics: Option<String>,
    },
    /// Remove top-ranked nodes cumulatively and chart hop-count degradation
    Attack {
        /// Edge-list topology file
        #[arg(long, value_name = "FILE")]
        topo: Option<PathBuf>,
        /// Comma-separated metrics to target, or "all"
        #[arg(long, value_name = "LIST")]
        metrics: Option<String>,
        /// Number of nodes removed, one at a time
        #[arg(long, value_name = "K")]
        removals: Option<usize>,
        /// Trials averaged into the random baseline [default: 10]
        #[arg(long, value_name = "N")]
        trials: Option<usize>,
        /// Root seed for the random baseline
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
        /// Re-rank the surviving nodes after every removal
        #[arg(long)]
        recompute: bool,
    },
    /// Simulate slot scheduling and measure delay and throughput
    Stdma {
        /// Edge-list topology file
        #[arg(long, value_name = "FILE")]
        topo: Option<PathBuf>,
        /// Ticket allocation: social | random
        #[arg(long, value_name = "MODE")]
        mode: Option<String>,
        /// Per-flow offered rate in bits per second
        #[arg(long, value_name = "BPS")]
        rate: Option<f64>,
        /// Slots per frame [default: 20]
        #[arg(long, value_name = "SLOTS")]
        frame: Option<u32>,
        /// Closeness-to-ticket multiplier and baseline allowance ceiling
        /// [default: 10]
        #[arg(long, value_name = "N")]
        scale: Option<u32>,
        /// Simulated seconds
        #[arg(long, value_name = "SEC")]
        duration: Option<f64>,
        /// Root seed for baseline ticket draws
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
        /// "all-pairs" or a flow file (lines: src dst [rate_bps])
        #[arg(long, value_name = "SPEC")]
        flows: Option<String>,
        /// Run both modes across rates 650-1350 bit/s and emit one table
        #[arg(long)]
        sweep: bool,
    },
    /// Generate a connected random geometric topology
    GenTopo {
        /// Number of nodes
        #[arg(long, value_name = "N")]
        n: Option<usize>,
        /// Target mean degree
        #[arg(long, value_name = "D")]
        degree: Option<f64>,
        /// Generator seed
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
    },
}

fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.downcast_ref::<run::UsageError>().is_some() {
            return 2;
        }
        if matches!(
            cause.downcast_ref::<meshsna_core::Error>(),
            Some(meshsna_core::Error::ConflictViolation { .. })
        ) {
            return 3;
        }
    }
    1
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run::dispatch(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(exit_code(&err));
    }
}
