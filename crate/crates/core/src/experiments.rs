//! Monte Carlo harness for the four comparative studies: key few members
//! (centrality-seeded emergence), stickiness (double-game and fast-driver
//! agents), the context threshold sweep, and the clique vs power-law
//! comparison.
//!
//! Replication r of an experiment always uses seed `base_seed + r` for both
//! network generation and simulation, and every condition inside one
//! replication reuses the same network and seeds (paired design). A
//! replication is a pure function of (spec, index), so replications can be
//! evaluated in any order or in parallel and aggregated afterwards.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;


use crate::cascade::{run_cascade, CascadeConfig, CascadeError};
use crate::centrality::{
    compute_centrality, degree_centrality, rank_slice, CentralityKind, RankSlice, SliceError,
};
use crate::graph::{Graph, GraphError, NodeId};
use crate::netgen::{generate_network, NetGenError, NetworkGenConfig};
use crate::normgame::{
    run_norm_simulation, AgentState, NormSimConfig, SimError,
};
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    KeyFew,
    Stickiness,
    ContextSweep,
    CliqueCompare,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::KeyFew => "key_few",
            ExperimentKind::Stickiness => "stickiness",
            ExperimentKind::ContextSweep => "context_sweep",
            ExperimentKind::CliqueCompare => "clique_compare",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub kind: ExperimentKind,
    pub replications: usize,
    pub population: usize,
    pub base_seed: u64,
    pub netgen: NetworkGenConfig,
    pub sim: NormSimConfig,
    pub cascade: CascadeConfig,
    /// Thresholds for the context sweep.
    pub sweep_values: Vec<f64>,
}

impl ExperimentSpec {
    pub fn new(kind: ExperimentKind) -> Self {
        let mut sim = NormSimConfig::default();
        // At the default exploration rate an entrenched population flips to
        // the other norm spontaneously on the same timescale as the sticky
        // group converts it, which would swamp the paired comparison, so the
        // stickiness study runs with far less exploration noise.
        if kind == ExperimentKind::Stickiness {
            sim.exploration = 0.002;
        }
        // Cascades run on the raw fragmented topology: the giant component
        // floods at tiny thresholds, so whether the flipped share reaches
        // the emergence fraction hinges on shocks seeding the leftover
        // fragments and isolated nodes.
        let mut netgen = NetworkGenConfig::default();
        if kind == ExperimentKind::ContextSweep {
            netgen.connect = false;
        }
        ExperimentSpec {
            kind,
            replications: 20,
            population: 100,
            base_seed: 0,
            netgen,
            sim,
            cascade: CascadeConfig::default(),
            sweep_values: vec![0.02, 0.05, 0.1, 0.15, 0.2],
        }
    }
}

/// One simulation run inside an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub experiment: &'static str,
    pub condition: String,
    pub replication: usize,
    pub seed: u64,
    pub emerged: bool,
    pub iterations: u64,
    pub final_fraction: f64,
}

/// Aggregate over the replications of one condition. Means and stddevs cover
/// emerged runs only; censored runs count toward the rate denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub label: String,
    pub mean_iterations: Option<f64>,
    pub stddev_iterations: Option<f64>,
    pub emergence_rate: f64,
    pub replication_count: usize,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    #[error("replications must be >= 1")]
    NoReplications,
    #[error("summarize needs at least one run")]
    EmptyInput,
    #[error(transparent)]
    NetGen(#[from] NetGenError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Slice(#[from] SliceError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Cascade(#[from] CascadeError),
}

/// Mean/stddev over emerged runs, plus the emergence rate over all runs.
pub fn summarize(
    iteration_counts: &[u64],
    emerged_flags: &[bool],
    label: &str,
) -> Result<RunSummary, ExperimentError> {
    assert_eq!(iteration_counts.len(), emerged_flags.len());
    if iteration_counts.is_empty() {
        return Err(ExperimentError::EmptyInput);
    }
    let emerged: Vec<f64> = iteration_counts
        .iter()
        .zip(emerged_flags)
        .filter(|(_, &e)| e)
        .map(|(&i, _)| i as f64)
        .collect();
    Ok(RunSummary {
        label: label.to_string(),
        mean_iterations: stats::mean(&emerged),
        stddev_iterations: stats::sample_stddev(&emerged),
        emergence_rate: emerged.len() as f64 / iteration_counts.len() as f64,
        replication_count: iteration_counts.len(),
    })
}

/// Group records by condition (first-appearance order) and summarize each.
pub fn summarize_records(records: &[RunRecord]) -> Result<Vec<RunSummary>, ExperimentError> {
    let mut conditions: Vec<&str> = Vec::new();
    for r in records {
        if !conditions.contains(&r.condition.as_str()) {
            conditions.push(&r.condition);
        }
    }
    conditions
        .iter()
        .map(|&c| {
            let (iters, flags): (Vec<u64>, Vec<bool>) = records
                .iter()
                .filter(|r| r.condition == c)
                .map(|r| (r.iterations, r.emerged))
                .unzip();
            summarize(&iters, &flags, c)
        })
        .collect()
}

/// All records for one replication index, dispatched by experiment kind.
pub fn replication_records(
    spec: &ExperimentSpec,
    replication: usize,
) -> Result<Vec<RunRecord>, ExperimentError> {
    match spec.kind {
        ExperimentKind::KeyFew => key_few_replication(spec, replication),
        ExperimentKind::Stickiness => stickiness_replication(spec, replication),
        ExperimentKind::ContextSweep => context_sweep_replication(spec, replication),
        ExperimentKind::CliqueCompare => clique_replication(spec, replication),
    }
}

/// Sequential driver: all replications plus per-condition summaries.
pub fn run_experiment(
    spec: &ExperimentSpec,
) -> Result<(Vec<RunRecord>, Vec<RunSummary>), ExperimentError> {
    if spec.replications < 1 {
        return Err(ExperimentError::NoReplications);
    }
    let mut records = Vec::new();
    for r in 0..spec.replications {
        records.extend(replication_records(spec, r)?);
    }
    let summaries = summarize_records(&records)?;
    Ok((records, summaries))
}

fn replication_seed(spec: &ExperimentSpec, replication: usize) -> u64 {
    spec.base_seed.wrapping_add(replication as u64)
}

/// Separate stream for initial-condition draws so they never alias the
/// simulation stream at equal seeds.
fn init_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15)
}

fn generated_network(spec: &ExperimentSpec, seed: u64) -> Result<Graph, NetGenError> {
    generate_network(&NetworkGenConfig {
        target_nodes: spec.population,
        rng_seed: seed,
        ..spec.netgen.clone()
    })
}

/// Population that has fully learned the incumbent norm: every free agent
/// last played the incumbent side and values it at the coordination payoff.
pub fn incumbent_population(n: usize, sim: &NormSimConfig) -> Vec<AgentState> {
    (0..n as u32)
        .map(|id| {
            let mut a = AgentState::free(id, sim.incumbent_norm);
            for lane in [crate::normgame::Lane::Up, crate::normgame::Lane::Down] {
                a.utilities[crate::normgame::state_index(lane, sim.incumbent_norm)] =
                    sim.payoffs.coordinate;
                a.utilities[crate::normgame::state_index(lane, sim.target_norm)] =
                    sim.payoffs.miscoordinate;
            }
            a
        })
        .collect()
}

fn key_few_replication(
    spec: &ExperimentSpec,
    replication: usize,
) -> Result<Vec<RunRecord>, ExperimentError> {
    let seed = replication_seed(spec, replication);
    let graph = generated_network(spec, seed)?;
    let mut records = Vec::with_capacity(9);
    for kind in CentralityKind::ALL {
        let scores = compute_centrality(&graph, kind);
        for slice in RankSlice::ALL {
            let seeded = rank_slice(&scores, slice, 0.1)?;
            let cfg = NormSimConfig {
                centrality_kind: kind,
                rng_seed: seed,
                ..spec.sim.clone()
            };
            let mut agents = incumbent_population(graph.node_count(), &cfg);
            for &id in &seeded {
                agents[id as usize] = AgentState::fixed(id, cfg.target_norm);
            }
            let result = run_norm_simulation(&graph, &cfg, &mut agents)?;
            records.push(RunRecord {
                experiment: ExperimentKind::KeyFew.name(),
                condition: format!("{}/{}", kind.name(), slice.name()),
                replication,
                seed,
                emerged: result.emerged,
                iterations: result.iterations,
                final_fraction: result.final_fraction,
            });
        }
    }
    Ok(records)
}

/// Stickiness conditions applied to the two target-fixed extras.
#[derive(Clone, Copy)]
enum Stickiness {
    Baseline,
    DoubleGame,
    FastDriver,
}

impl Stickiness {
    fn label(self) -> &'static str {
        match self {
            Stickiness::Baseline => "baseline",
            Stickiness::DoubleGame => "double_game",
            Stickiness::FastDriver => "fast_driver",
        }
    }
}

fn stickiness_replication(
    spec: &ExperimentSpec,
    replication: usize,
) -> Result<Vec<RunRecord>, ExperimentError> {
    let seed = replication_seed(spec, replication);
    let base = generated_network(spec, seed)?;
    let n = base.node_count();

    // Four fixed-preference extras: two on the target norm (the sticky
    // group) and two incumbent controls, each attached by round(mean degree)
    // uniform-random edges.
    let mean_degree = degree_centrality(&base).values.iter().sum::<f64>() / n as f64;
    let attach = (libm::round(mean_degree) as usize).max(1);
    let extras = 4usize;

    let mut attributes = base.attributes().to_vec();
    attributes.extend(core::iter::repeat(0.5).take(extras));
    let mut graph = Graph::new(attributes)?;
    for (src, dst) in base.edges() {
        graph.add_edge(src, dst)?;
    }
    let mut rng = init_rng(seed);
    for extra in 0..extras {
        let extra_id = (n + extra) as NodeId;
        let mut attached = 0;
        while attached < attach {
            let target = rng.gen_range(0..n) as NodeId;
            if !graph.has_edge(extra_id, target) {
                graph.add_edge(extra_id, target)?;
                attached += 1;
            }
        }
    }

    // The original population has already converged on the incumbent norm;
    // the sticky pair alone pushes toward the target, so emergence time
    // isolates its influence against the incumbent controls.
    let free_init = incumbent_population(n, &spec.sim);
    let sticky_ids = [n as u32, n as u32 + 1];
    let control_ids = [n as u32 + 2, n as u32 + 3];

    let mut records = Vec::with_capacity(3);
    for condition in [
        Stickiness::Baseline,
        Stickiness::DoubleGame,
        Stickiness::FastDriver,
    ] {
        let cfg = NormSimConfig {
            rng_seed: seed,
            ..spec.sim.clone()
        };
        let mut agents = free_init.clone();
        for id in sticky_ids {
            let mut a = AgentState::fixed(id, cfg.target_norm);
            match condition {
                Stickiness::Baseline => {}
                Stickiness::DoubleGame => a.games_per_encounter = 2,
                Stickiness::FastDriver => a.speed = 2,
            }
            agents.push(a);
        }
        for id in control_ids {
            agents.push(AgentState::fixed(id, cfg.incumbent_norm));
        }
        let result = run_norm_simulation(&graph, &cfg, &mut agents)?;
        records.push(RunRecord {
            experiment: ExperimentKind::Stickiness.name(),
            condition: condition.label().to_string(),
            replication,
            seed,
            emerged: result.emerged,
            iterations: result.iterations,
            final_fraction: result.final_fraction,
        });
    }
    Ok(records)
}

fn context_sweep_replication(
    spec: &ExperimentSpec,
    replication: usize,
) -> Result<Vec<RunRecord>, ExperimentError> {
    let seed = replication_seed(spec, replication);
    let graph = generated_network(spec, seed)?;
    let mut records = Vec::with_capacity(spec.sweep_values.len());
    for &threshold in &spec.sweep_values {
        let cfg = CascadeConfig {
            threshold,
            rng_seed: seed,
            ..spec.cascade.clone()
        };
        let result = run_cascade(&graph, &cfg)?;
        records.push(RunRecord {
            experiment: ExperimentKind::ContextSweep.name(),
            condition: format!("phi={threshold}"),
            replication,
            seed,
            emerged: result.emerged,
            iterations: result.iterations,
            final_fraction: result.final_fraction,
        });
    }
    Ok(records)
}

fn clique_replication(
    spec: &ExperimentSpec,
    replication: usize,
) -> Result<Vec<RunRecord>, ExperimentError> {
    let seed = replication_seed(spec, replication);
    let power_law = generated_network(spec, seed)?;
    let clique = Graph::complete_digraph(spec.population)?;

    // Key-few protocol with seeds of median influence, so neither topology
    // benefits from elite placement: the middle 10% by degree are fixed on
    // the target norm. On the clique every agent has equal degree, so the
    // selection is immaterial there by symmetry.
    let mut records = Vec::with_capacity(2);
    for (condition, graph) in [("power_law", &power_law), ("clique", &clique)] {
        let scores = degree_centrality(graph);
        let seeded = rank_slice(&scores, RankSlice::Middle, 0.1)?;
        let cfg = NormSimConfig {
            centrality_kind: CentralityKind::Degree,
            rng_seed: seed,
            ..spec.sim.clone()
        };
        let mut agents = incumbent_population(graph.node_count(), &cfg);
        for &id in &seeded {
            agents[id as usize] = AgentState::fixed(id, cfg.target_norm);
        }
        let result = run_norm_simulation(graph, &cfg, &mut agents)?;
        records.push(RunRecord {
            experiment: ExperimentKind::CliqueCompare.name(),
            condition: condition.to_string(),
            replication,
            seed,
            emerged: result.emerged,
            iterations: result.iterations,
            final_fraction: result.final_fraction,
        });
    }
    Ok(records)
}
