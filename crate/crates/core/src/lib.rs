//! Social-network analysis for wireless mesh topologies.
//!
//! Mesh networks and social networks share their math: both are graphs in
//! which some members matter far more to overall connectivity than others.
//! This crate applies the standard centrality toolbox to mesh topologies
//! and builds two applications on top of it:
//!
//! - [`attack`] measures how quickly a mesh degrades when an adversary
//!   removes the most central routers first, against a random-failure
//!   baseline;
//! - [`stdma`] turns centrality into an asset: a distributed lottery
//!   scheduler that hands nodes transmission slots in proportion to their
//!   closeness, plus the HELLO wire codec that circulates those scores.
//!
//! Everything is deterministic. Randomness comes from explicit seeds
//! ([`rng::SplitMix64`]), iteration follows ordered maps, and parallel
//! kernels (rayon, behind the default `parallel` feature) reduce in a
//! fixed order, so results are bit-identical across runs, thread counts,
//! and feature choices.
//!
//! # Example
//!
//! ```
//! use meshsna_core::centrality::{self, CentralityMetric};
//! use meshsna_core::{Graph, NodeId};
//!
//! let mut g = Graph::new();
//! g.add_edge(NodeId(0), NodeId(1))?;
//! g.add_edge(NodeId(1), NodeId(2))?;
//! let scores = centrality::compute(&g, CentralityMetric::Betweenness)?;
//! assert_eq!(scores.get(NodeId(1)), Some(1.0)); // the middle of a path
//! # Ok::<(), meshsna_core::Error>(())
//! ```

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod attack;
pub mod centrality;
mod error;
pub mod generate;
pub mod graph;
mod par;
pub mod rng;
pub mod stdma;

pub use error::{Error, Result};
pub use graph::{DistanceMatrix, Graph, NodeId};
