//! Deterministic, seedable simulator of social-norm emergence in networked
//! agent populations, built around three tipping mechanisms: highly central
//! seed agents, sticky (high-exposure) agents, and threshold cascades under
//! random environmental shocks.
//!
//! The crate is `no_std` (with `alloc`): everything here is pure computation
//! over immutable graphs and seeded RNG streams. File formats, CSV output,
//! and the command line live in the companion `normsim-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod cascade;
pub mod centrality;
pub mod experiments;
pub mod graph;
pub mod netgen;
pub mod normgame;
pub mod stats;

pub use cascade::{run_cascade, CascadeConfig, CascadeSim, CascadeState, CascadeWeighting};
pub use centrality::{
    betweenness_centrality, closeness_centrality, compute_centrality, degree_centrality,
    neighbor_weights, rank_slice, CentralityKind, CentralityScores, InfluenceWeights, RankSlice,
};
pub use experiments::{
    replication_records, run_experiment, summarize, summarize_records, ExperimentKind,
    ExperimentSpec, RunRecord, RunSummary,
};
pub use graph::{Graph, NodeId};
pub use netgen::{generate_network, NetworkGenConfig};
pub use normgame::{
    choose_action, emergence_fraction, run_norm_simulation, stage_game, AgentState,
    EmergenceResult, Lane, NormSimConfig, PayoffMatrix, Side,
};
