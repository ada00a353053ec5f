//! Threshold cascades with random shocks: a shocked agent's payoff
//! preferences are negated (its side toggles), and an incumbent agent flips
//! once the normalized fraction of flipped neighbors reaches its threshold.
//! Cascade adoption is monotone between shocks; shocks themselves may toggle
//! a node either direction.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centrality::{all_neighbor_weights, compute_centrality, CentralityKind};
use crate::graph::{Graph, NodeId};
use crate::normgame::EmergenceResult;

/// How a node aggregates its flipped neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CascadeWeighting {
    /// Uniform: fraction of flipped neighbors.
    Uniform,
    /// Centrality-normalized neighbor weights (sensitivity variant).
    Centrality(CentralityKind),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeConfig {
    /// Adoption threshold, homogeneous across agents.
    pub threshold: f64,
    /// Per-iteration probability of one shock on a uniform-random node.
    pub shock_probability: f64,
    pub max_iterations: u64,
    pub emergence_fraction: f64,
    pub rng_seed: u64,
    pub weighting: CascadeWeighting,
}

impl Default for CascadeConfig {
    fn default() -> Self {
        CascadeConfig {
            threshold: 0.1,
            shock_probability: 0.0005,
            max_iterations: 50_000,
            emergence_fraction: 0.9,
            rng_seed: 0,
            weighting: CascadeWeighting::Uniform,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeState {
    pub flipped: Vec<bool>,
    pub iteration: u64,
}

impl CascadeState {
    pub fn all_incumbent(node_count: usize) -> Self {
        CascadeState {
            flipped: vec![false; node_count],
            iteration: 0,
        }
    }

    pub fn flipped_fraction(&self) -> f64 {
        if self.flipped.is_empty() {
            return 0.0;
        }
        self.flipped.iter().filter(|&&f| f).count() as f64 / self.flipped.len() as f64
    }
}

/// Toggle a node's side: negating its payoffs reverses its greedy choice,
/// so a second shock restores the original side.
pub fn apply_shock(state: &mut CascadeState, node: NodeId) {
    state.flipped[node as usize] = !state.flipped[node as usize];
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CascadeError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("threshold {0} outside [0, 1]")]
    BadThreshold(f64),
    #[error("max_iterations must be >= 1")]
    NoIterations,
}

/// Threshold dynamics on one graph. Precomputes neighborhoods (and, for the
/// weighted variant, influence weights) once.
pub struct CascadeSim<'g> {
    graph: &'g Graph,
    cfg: CascadeConfig,
    adjacency: Vec<Vec<NodeId>>,
    weights: Option<Vec<Vec<f64>>>,
    shock_rng: ChaCha8Rng,
    pub state: CascadeState,
}

impl<'g> CascadeSim<'g> {
    pub fn new(graph: &'g Graph, cfg: CascadeConfig) -> Result<Self, CascadeError> {
        if graph.node_count() == 0 {
            return Err(CascadeError::EmptyGraph);
        }
        if !(0.0..=1.0).contains(&cfg.threshold) {
            return Err(CascadeError::BadThreshold(cfg.threshold));
        }
        if cfg.max_iterations < 1 {
            return Err(CascadeError::NoIterations);
        }
        let adjacency = graph.undirected_adjacency();
        let weights = match cfg.weighting {
            CascadeWeighting::Uniform => None,
            CascadeWeighting::Centrality(kind) => {
                let scores = compute_centrality(graph, kind);
                Some(
                    all_neighbor_weights(graph, &scores)
                        .into_iter()
                        .map(|w| w.weights)
                        .collect(),
                )
            }
        };
        let shock_rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        let state = CascadeState::all_incumbent(graph.node_count());
        Ok(CascadeSim {
            graph,
            cfg,
            adjacency,
            weights,
            shock_rng,
            state,
        })
    }

    /// Perceived cascade value for node `i`, normalized to [0, 1].
    fn perceived(&self, i: usize) -> f64 {
        let nbrs = &self.adjacency[i];
        if nbrs.is_empty() {
            return 0.0;
        }
        match &self.weights {
            None => {
                let flipped = nbrs
                    .iter()
                    .filter(|&&j| self.state.flipped[j as usize])
                    .count();
                flipped as f64 / nbrs.len() as f64
            }
            Some(weights) => nbrs
                .iter()
                .zip(&weights[i])
                .filter(|(&j, _)| self.state.flipped[j as usize])
                .map(|(_, &w)| w)
                .sum(),
        }
    }

    /// One iteration: synchronous threshold adoption, then the scheduled
    /// shock (if any). `run` draws the schedule from the shock stream;
    /// passing it explicitly lets callers replay identical schedules across
    /// thresholds.
    pub fn step_with_shock(&mut self, shock: Option<NodeId>) {
        let mut adopters: Vec<usize> = Vec::new();
        for i in 0..self.graph.node_count() {
            if self.state.flipped[i] {
                continue;
            }
            // A node only reacts to a cascade it actually perceives; with no
            // flipped neighbors nothing changes even at threshold 0.
            let f = self.perceived(i);
            if f > 0.0 && f >= self.cfg.threshold {
                adopters.push(i);
            }
        }
        for i in adopters {
            self.state.flipped[i] = true;
        }
        if let Some(node) = shock {
            apply_shock(&mut self.state, node);
        }
        self.state.iteration += 1;
    }

    /// Draw the next scheduled shock from the dedicated shock stream. The
    /// stream depends only on the seed, never on the threshold, so schedules
    /// coincide across threshold values at equal seeds.
    pub fn draw_shock(&mut self) -> Option<NodeId> {
        let hit = self.shock_rng.gen::<f64>() < self.cfg.shock_probability;
        let node = self.shock_rng.gen_range(0..self.graph.node_count()) as NodeId;
        hit.then_some(node)
    }

    pub fn step(&mut self) {
        let shock = self.draw_shock();
        self.step_with_shock(shock);
    }

    /// Run from all-incumbent until the flipped fraction reaches the
    /// emergence threshold or the iteration cap.
    pub fn run(&mut self) -> EmergenceResult {
        let mut fraction = self.state.flipped_fraction();
        for iteration in 1..=self.cfg.max_iterations {
            self.step();
            fraction = self.state.flipped_fraction();
            if fraction >= self.cfg.emergence_fraction {
                return EmergenceResult {
                    emerged: true,
                    iterations: iteration,
                    final_fraction: fraction,
                };
            }
        }
        EmergenceResult {
            emerged: false,
            iterations: self.cfg.max_iterations,
            final_fraction: fraction,
        }
    }
}

/// Convenience wrapper: fresh all-incumbent state, run to completion.
pub fn run_cascade(graph: &Graph, cfg: &CascadeConfig) -> Result<EmergenceResult, CascadeError> {
    let mut sim = CascadeSim::new(graph, cfg.clone())?;
    Ok(sim.run())
}
