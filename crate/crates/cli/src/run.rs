//! Subcommand execution: replications fan out over a rayon pool keyed only
//! by (spec, index), then aggregate in index order, so outputs are byte
//! identical regardless of worker count.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use normsim_core::experiments::{
    replication_records, summarize_records, ExperimentKind, ExperimentSpec, RunRecord, RunSummary,
};
use normsim_core::netgen::{generate_network, NetworkGenConfig};

use crate::config::echo_config;
use crate::output::{plot_files, runs_csv, summary_csv};
use crate::CliError;

fn runtime(err: impl std::fmt::Display) -> CliError {
    CliError::Runtime(err.to_string())
}

/// All replication records for a spec, computed in parallel and flattened
/// in replication order. `workers` bounds the pool; None uses rayon's
/// default.
pub fn collect_records(
    spec: &ExperimentSpec,
    workers: Option<usize>,
) -> Result<Vec<RunRecord>, CliError> {
    let fan_out = || {
        (0..spec.replications)
            .into_par_iter()
            .map(|r| replication_records(spec, r))
            .collect::<Result<Vec<_>, _>>()
    };
    let nested = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(runtime)?
            .install(fan_out),
        None => fan_out(),
    }
    .map_err(runtime)?;
    Ok(nested.into_iter().flatten().collect())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::write(dir.join(name), contents)
        .map_err(|e| CliError::Runtime(format!("writing {name}: {e}")))
}

/// Run one experiment and write its runs CSV, summary CSV, plot data, and
/// echoed effective config into `out_dir`. Returns the summaries for
/// reporting.
pub fn run_experiment_to_dir(
    spec: &ExperimentSpec,
    out_dir: &Path,
    workers: Option<usize>,
) -> Result<Vec<RunSummary>, CliError> {
    let records = collect_records(spec, workers)?;
    let summaries = summarize_records(&records).map_err(runtime)?;
    let name = spec.kind.name();
    write_file(out_dir, &format!("{name}_runs.csv"), &runs_csv(&records))?;
    write_file(
        out_dir,
        &format!("{name}_summary.csv"),
        &summary_csv(name, &summaries),
    )?;
    for (file, contents) in plot_files(spec.kind, &summaries)? {
        write_file(out_dir, &file, &contents)?;
    }
    write_file(out_dir, &format!("{name}_effective.cfg"), &echo_config(spec))?;
    Ok(summaries)
}

/// Generate one network at the spec's population and base seed and write it
/// as an edge-list file plus the echoed config.
pub fn run_gen_net(spec: &ExperimentSpec, out_dir: &Path) -> Result<(), CliError> {
    let graph = generate_network(&NetworkGenConfig {
        target_nodes: spec.population,
        rng_seed: spec.base_seed,
        ..spec.netgen.clone()
    })
    .map_err(runtime)?;
    write_file(out_dir, "network.edges", &graph.write_edge_list())?;
    write_file(out_dir, "gen_net_effective.cfg", &echo_config(spec))
}

/// Every experiment kind, in the order `all` runs them.
pub const ALL_KINDS: [ExperimentKind; 4] = [
    ExperimentKind::KeyFew,
    ExperimentKind::Stickiness,
    ExperimentKind::ContextSweep,
    ExperimentKind::CliqueCompare,
];

#[cfg(test)]
mod tests {
    use super::*;
    use normsim_core::experiments::ExperimentKind;

    fn quick_spec(kind: ExperimentKind) -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(kind);
        spec.replications = 2;
        spec.population = 30;
        spec.sim.max_iterations = 200;
        spec.cascade.max_iterations = 200;
        spec
    }

    #[test]
    fn records_are_worker_count_invariant() {
        let spec = quick_spec(ExperimentKind::KeyFew);
        let serial = collect_records(&spec, Some(1)).unwrap();
        let parallel = collect_records(&spec, Some(4)).unwrap();
        assert_eq!(serial, parallel);
        assert_eq!(serial.len(), 2 * 9);
    }

    #[test]
    fn experiment_writes_expected_files() {
        let dir = tempfile::tempdir().unwrap();
        let spec = quick_spec(ExperimentKind::CliqueCompare);
        let summaries = run_experiment_to_dir(&spec, dir.path(), Some(2)).unwrap();
        assert_eq!(summaries.len(), 2);
        for file in [
            "clique_compare_runs.csv",
            "clique_compare_summary.csv",
            "fig8_clique.csv",
            "clique_compare_effective.cfg",
        ] {
            assert!(dir.path().join(file).is_file(), "{file} missing");
        }
    }

    #[test]
    fn gen_net_writes_edges_file() {
        let dir = tempfile::tempdir().unwrap();
        let spec = quick_spec(ExperimentKind::KeyFew);
        run_gen_net(&spec, dir.path()).unwrap();
        let edges = fs::read_to_string(dir.path().join("network.edges")).unwrap();
        assert!(edges.lines().count() > 30);
        run_gen_net(&spec, dir.path()).unwrap();
        assert_eq!(
            edges,
            fs::read_to_string(dir.path().join("network.edges")).unwrap()
        );
    }

    #[test]
    fn propagated_precondition_is_a_runtime_error() {
        let mut spec = quick_spec(ExperimentKind::KeyFew);
        spec.population = 4;
        let dir = tempfile::tempdir().unwrap();
        let err = run_experiment_to_dir(&spec, dir.path(), Some(1)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("slice"), "{err}");
    }
}
