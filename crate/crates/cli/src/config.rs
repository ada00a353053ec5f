//! Sectioned key-value configuration: one `section.key = value` pair per
//! line, `#` comments, unknown keys rejected. Omitted keys fall back to the
//! experiment's documented defaults, and the effective (default-expanded)
//! config can be echoed back out; parsing that echo reproduces the spec.

use normsim_core::experiments::{ExperimentKind, ExperimentSpec};
use normsim_core::normgame::Side;

use crate::CliError;

fn bad(key: &str, value: &str, constraint: &str) -> CliError {
    CliError::Config(format!("{key} = {value} {constraint}"))
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    let v: f64 = value
        .parse()
        .map_err(|_| bad(key, value, "is not a number"))?;
    if !v.is_finite() {
        return Err(bad(key, value, "is not finite"));
    }
    Ok(v)
}

fn parse_usize(key: &str, value: &str) -> Result<usize, CliError> {
    value
        .parse()
        .map_err(|_| bad(key, value, "is not a non-negative integer"))
}

fn parse_u64(key: &str, value: &str) -> Result<u64, CliError> {
    value
        .parse()
        .map_err(|_| bad(key, value, "is not a non-negative integer"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(bad(key, value, "is not `true` or `false`")),
    }
}

fn parse_side(key: &str, value: &str) -> Result<Side, CliError> {
    match value {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        _ => Err(bad(key, value, "is not `left` or `right`")),
    }
}

fn apply_key(spec: &mut ExperimentSpec, key: &str, value: &str) -> Result<(), CliError> {
    match key {
        "experiment.replications" => {
            let v = parse_usize(key, value)?;
            if v < 1 {
                return Err(bad(key, value, "must be >= 1"));
            }
            spec.replications = v;
        }
        "experiment.population" => {
            let v = parse_usize(key, value)?;
            if v < 1 {
                return Err(bad(key, value, "must be >= 1"));
            }
            spec.population = v;
        }
        "experiment.base_seed" => spec.base_seed = parse_u64(key, value)?,
        "experiment.sweep_values" => {
            let mut values = Vec::new();
            for part in value.split(',') {
                let v = parse_f64(key, part.trim())?;
                if !(0.0..=1.0).contains(&v) {
                    return Err(bad(key, value, "has an entry outside [0, 1]"));
                }
                values.push(v);
            }
            if values.is_empty() {
                return Err(bad(key, value, "must list at least one threshold"));
            }
            spec.sweep_values = values;
        }
        "netgen.link_density" => {
            let v = parse_f64(key, value)?;
            if !(0.0..1.0).contains(&v) {
                return Err(bad(key, value, "outside [0, 1)"));
            }
            spec.netgen.link_density = v;
        }
        "netgen.homophily" => {
            let v = parse_f64(key, value)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(bad(key, value, "outside [0, 1]"));
            }
            spec.netgen.homophily = v;
        }
        "netgen.connect" => spec.netgen.connect = parse_bool(key, value)?,
        "sim.alpha" => {
            let v = parse_f64(key, value)?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(bad(key, value, "outside (0, 1]"));
            }
            spec.sim.learning_rate = v;
        }
        "sim.epsilon" => {
            let v = parse_f64(key, value)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(bad(key, value, "outside [0, 1]"));
            }
            spec.sim.exploration = v;
        }
        "sim.utility_bias" => {
            let v = parse_f64(key, value)?;
            if !(0.0..0.5).contains(&v) {
                return Err(bad(key, value, "outside [0, 0.5)"));
            }
            spec.sim.utility_bias = v;
        }
        "sim.gamma" => {
            let v = parse_f64(key, value)?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(bad(key, value, "outside (0, 1]"));
            }
            spec.sim.emergence_fraction = v;
        }
        "sim.max_iterations" => {
            let v = parse_u64(key, value)?;
            if v < 1 {
                return Err(bad(key, value, "must be >= 1"));
            }
            spec.sim.max_iterations = v;
        }
        "sim.payoff_coordinate" => spec.sim.payoffs.coordinate = parse_f64(key, value)?,
        "sim.payoff_miscoordinate" => spec.sim.payoffs.miscoordinate = parse_f64(key, value)?,
        "sim.incumbent_norm" => spec.sim.incumbent_norm = parse_side(key, value)?,
        "sim.target_norm" => spec.sim.target_norm = parse_side(key, value)?,
        "cascade.shock_probability" => {
            let v = parse_f64(key, value)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(bad(key, value, "outside [0, 1]"));
            }
            spec.cascade.shock_probability = v;
        }
        "cascade.gamma" => {
            let v = parse_f64(key, value)?;
            if !(v > 0.0 && v <= 1.0) {
                return Err(bad(key, value, "outside (0, 1]"));
            }
            spec.cascade.emergence_fraction = v;
        }
        "cascade.max_iterations" => {
            let v = parse_u64(key, value)?;
            if v < 1 {
                return Err(bad(key, value, "must be >= 1"));
            }
            spec.cascade.max_iterations = v;
        }
        _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
    }
    Ok(())
}

/// Parse a config for one experiment kind. Missing keys keep the kind's
/// documented defaults; the text only carries overrides.
pub fn parse_config(text: &str, kind: ExperimentKind) -> Result<ExperimentSpec, CliError> {
    let mut spec = ExperimentSpec::new(kind);
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!(
                "line {}: expected `section.key = value`, got `{line}`",
                idx + 1
            )));
        };
        apply_key(&mut spec, key.trim(), value.trim())?;
    }
    Ok(spec)
}

/// Default-expanded config text for provenance. `{:?}` float rendering is
/// the shortest exact round-trip form, so parsing the echo reproduces the
/// spec bit for bit.
pub fn echo_config(spec: &ExperimentSpec) -> String {
    let sweep: Vec<String> = spec.sweep_values.iter().map(|v| format!("{v:?}")).collect();
    format!(
        "experiment.replications = {}\n\
         experiment.population = {}\n\
         experiment.base_seed = {}\n\
         experiment.sweep_values = {}\n\
         netgen.link_density = {:?}\n\
         netgen.homophily = {:?}\n\
         netgen.connect = {}\n\
         sim.alpha = {:?}\n\
         sim.epsilon = {:?}\n\
         sim.utility_bias = {:?}\n\
         sim.gamma = {:?}\n\
         sim.max_iterations = {}\n\
         sim.payoff_coordinate = {:?}\n\
         sim.payoff_miscoordinate = {:?}\n\
         sim.incumbent_norm = {}\n\
         sim.target_norm = {}\n\
         cascade.shock_probability = {:?}\n\
         cascade.gamma = {:?}\n\
         cascade.max_iterations = {}\n",
        spec.replications,
        spec.population,
        spec.base_seed,
        sweep.join(", "),
        spec.netgen.link_density,
        spec.netgen.homophily,
        spec.netgen.connect,
        spec.sim.learning_rate,
        spec.sim.exploration,
        spec.sim.utility_bias,
        spec.sim.emergence_fraction,
        spec.sim.max_iterations,
        spec.sim.payoffs.coordinate,
        spec.sim.payoffs.miscoordinate,
        spec.sim.incumbent_norm.name(),
        spec.sim.target_norm.name(),
        spec.cascade.shock_probability,
        spec.cascade.emergence_fraction,
        spec.cascade.max_iterations,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_gives_documented_defaults() {
        let spec = parse_config("", ExperimentKind::KeyFew).unwrap();
        assert_eq!(spec, ExperimentSpec::new(ExperimentKind::KeyFew));
        assert_eq!(spec.population, 100);
        assert_eq!(spec.replications, 20);
        assert_eq!(spec.netgen.link_density, 0.7);
        assert_eq!(spec.netgen.homophily, 0.5);
        assert_eq!(spec.sim.learning_rate, 0.3);
        assert_eq!(spec.sim.exploration, 0.05);
        assert_eq!(spec.sim.emergence_fraction, 0.9);
    }

    #[test]
    fn comments_blanks_and_overrides() {
        let text = "# a comment\n\n  experiment.population = 40 # trailing\nsim.epsilon = 0.1\n";
        let spec = parse_config(text, ExperimentKind::KeyFew).unwrap();
        assert_eq!(spec.population, 40);
        assert_eq!(spec.sim.exploration, 0.1);
    }

    #[test]
    fn epsilon_out_of_range_names_the_key() {
        let err = parse_config("sim.epsilon = 1.5", ExperimentKind::KeyFew).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("sim.epsilon"), "{msg}");
        assert!(msg.contains("outside [0, 1]"), "{msg}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn unknown_key_rejected() {
        let err = parse_config("sim.bogus = 1", ExperimentKind::KeyFew).unwrap_err();
        assert!(err.to_string().contains("unknown key `sim.bogus`"));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_config("sim.epsilon 0.1", ExperimentKind::KeyFew).unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn echo_round_trips_for_every_kind() {
        let text = "experiment.population = 37\nsim.epsilon = 0.125\nnetgen.homophily = 0.3\n";
        for kind in [
            ExperimentKind::KeyFew,
            ExperimentKind::Stickiness,
            ExperimentKind::ContextSweep,
            ExperimentKind::CliqueCompare,
        ] {
            let parsed = parse_config(text, kind).unwrap();
            let reparsed = parse_config(&echo_config(&parsed), kind).unwrap();
            assert_eq!(parsed, reparsed);
        }
    }

    #[test]
    fn kind_defaults_differ_where_documented() {
        let sticky = parse_config("", ExperimentKind::Stickiness).unwrap();
        assert_eq!(sticky.sim.exploration, 0.002);
        let sweep = parse_config("", ExperimentKind::ContextSweep).unwrap();
        assert!(!sweep.netgen.connect);
        // An explicit key still overrides the per-kind default.
        let sticky = parse_config("sim.epsilon = 0.05", ExperimentKind::Stickiness).unwrap();
        assert_eq!(sticky.sim.exploration, 0.05);
    }
}
