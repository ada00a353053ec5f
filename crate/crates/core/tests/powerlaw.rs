//! Statistical acceptance of the network generator: heavy-tailed in-degree
//! (maximum-likelihood tail exponent in a plausible power-law window, hubs
//! well above the mean) over a batch of seeds.

use normsim_core::netgen::{generate_network, NetworkGenConfig};
use normsim_core::stats::discrete_powerlaw_exponent_mle;

fn default_graph(seed: u64) -> normsim_core::Graph {
    generate_network(&NetworkGenConfig {
        target_nodes: 100,
        link_density: 0.7,
        homophily: 0.5,
        connect: true,
        rng_seed: seed,
    })
    .unwrap()
}

#[test]
fn tail_exponent_within_power_law_window() {
    // Pool in-degrees across 20 seeds and fit the discrete MLE exponent.
    let mut degrees: Vec<usize> = Vec::new();
    for seed in 0..20 {
        degrees.extend(default_graph(seed).in_degrees());
    }
    let exponent = discrete_powerlaw_exponent_mle(&degrees).unwrap();
    assert!(
        (1.5..=3.5).contains(&exponent),
        "fitted exponent {exponent} outside [1.5, 3.5]"
    );
}

#[test]
fn hubs_dominate_mean_in_degree() {
    let mut dominated = 0;
    for seed in 0..20 {
        let g = default_graph(seed);
        let degrees = g.in_degrees();
        let mean = degrees.iter().sum::<usize>() as f64 / degrees.len() as f64;
        let max = *degrees.iter().max().unwrap() as f64;
        if max > 3.0 * mean {
            dominated += 1;
        }
    }
    assert!(dominated >= 15, "only {dominated}/20 graphs grew a hub");
}
