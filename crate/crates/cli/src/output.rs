//! CSV emission: per-run records, per-condition summaries, and per-figure
//! plot data. Comma-separated, LF line endings, header row, floats rendered
//! with 6 significant digits.

use normsim_core::experiments::{ExperimentKind, RunRecord, RunSummary};

use crate::CliError;

/// Render with 6 significant digits, trailing zeros trimmed.
pub fn fmt_float(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".to_string();
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (5 - exponent).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_float).unwrap_or_default()
}

pub fn runs_csv(records: &[RunRecord]) -> String {
    let mut out =
        String::from("experiment,condition,replication,seed,emerged,iterations,final_fraction\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.experiment,
            r.condition,
            r.replication,
            r.seed,
            r.emerged,
            r.iterations,
            fmt_float(r.final_fraction)
        ));
    }
    out
}

pub fn summary_csv(experiment: &str, summaries: &[RunSummary]) -> String {
    let mut out = String::from(
        "experiment,condition,mean_iterations,stddev_iterations,emergence_rate,n\n",
    );
    for s in summaries {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            experiment,
            s.label,
            fmt_opt(s.mean_iterations),
            fmt_opt(s.stddev_iterations),
            fmt_float(s.emergence_rate),
            s.replication_count
        ));
    }
    out
}

fn plot_rows(rows: &[(String, String, String)]) -> String {
    let mut out = String::from("x,condition,value\n");
    for (x, condition, value) in rows {
        out.push_str(&format!("{x},{condition},{value}\n"));
    }
    out
}

/// Plot-data files for one experiment's summaries, as (name, contents)
/// pairs: one file per figure analogue.
pub fn plot_files(
    kind: ExperimentKind,
    summaries: &[RunSummary],
) -> Result<Vec<(String, String)>, CliError> {
    if summaries.is_empty() {
        return Err(CliError::Runtime("no summaries to plot".to_string()));
    }
    let by_label = |label: &str| -> Option<&RunSummary> {
        summaries.iter().find(|s| s.label == label)
    };
    let mut files = Vec::new();
    match kind {
        ExperimentKind::KeyFew => {
            for (file, centrality) in [
                ("fig2_degree.csv", "degree"),
                ("fig3_closeness.csv", "closeness"),
                ("fig4_betweenness.csv", "betweenness"),
            ] {
                let rows: Vec<_> = summaries
                    .iter()
                    .filter_map(|s| {
                        let (c, slice) = s.label.split_once('/')?;
                        (c == centrality).then(|| {
                            (slice.to_string(), c.to_string(), fmt_opt(s.mean_iterations))
                        })
                    })
                    .collect();
                files.push((file.to_string(), plot_rows(&rows)));
            }
        }
        ExperimentKind::Stickiness => {
            for (file, condition) in [
                ("fig5_double_game.csv", "double_game"),
                ("fig6_fast_driver.csv", "fast_driver"),
            ] {
                let rows: Vec<_> = ["baseline", condition]
                    .iter()
                    .filter_map(|&label| {
                        let s = by_label(label)?;
                        Some((
                            label.to_string(),
                            "stickiness".to_string(),
                            fmt_opt(s.mean_iterations),
                        ))
                    })
                    .collect();
                files.push((file.to_string(), plot_rows(&rows)));
            }
        }
        ExperimentKind::ContextSweep => {
            let rows: Vec<_> = summaries
                .iter()
                .map(|s| {
                    let phi = s.label.strip_prefix("phi=").unwrap_or(&s.label);
                    (
                        phi.to_string(),
                        "uniform".to_string(),
                        fmt_float(s.emergence_rate),
                    )
                })
                .collect();
            files.push(("fig7_context.csv".to_string(), plot_rows(&rows)));
        }
        ExperimentKind::CliqueCompare => {
            let rows: Vec<_> = summaries
                .iter()
                .map(|s| {
                    (
                        s.label.clone(),
                        "clique_compare".to_string(),
                        fmt_opt(s.mean_iterations),
                    )
                })
                .collect();
            files.push(("fig8_clique.csv".to_string(), plot_rows(&rows)));
        }
    }
    Ok(files)
}
