//! Small statistics helpers shared by the experiment harness and its tests.

use alloc::vec::Vec;

pub fn mean(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    Some(values.iter().sum::<f64>() / values.len() as f64)
}

/// Sample standard deviation; 0 for a single observation.
pub fn sample_stddev(values: &[f64]) -> Option<f64> {
    let m = mean(values)?;
    if values.len() < 2 {
        return Some(0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    Some(libm::sqrt(ss / (values.len() - 1) as f64))
}

/// One-sided paired sign test: p-value for the alternative "a tends to be
/// smaller than b". Ties are discarded; an all-tie sample gives p = 1.
pub fn paired_sign_test_less(a: &[u64], b: &[u64]) -> f64 {
    assert_eq!(a.len(), b.len(), "sign test needs paired samples");
    let mut wins = 0u32;
    let mut n = 0u32;
    for (&x, &y) in a.iter().zip(b) {
        if x < y {
            wins += 1;
            n += 1;
        } else if x > y {
            n += 1;
        }
    }
    if n == 0 {
        return 1.0;
    }
    binomial_upper_tail(n, wins)
}

/// P(Bin(n, 1/2) >= k).
fn binomial_upper_tail(n: u32, k: u32) -> f64 {
    let half_pow = libm::pow(0.5, n as f64);
    let mut coeff = 1.0f64; // C(n, 0)
    let mut tail = 0.0f64;
    for i in 0..=n {
        if i >= k {
            tail += coeff * half_pow;
        }
        coeff = coeff * (n - i) as f64 / (i + 1) as f64;
    }
    tail.min(1.0)
}

/// Fitted tail exponent of a discrete power law, by maximum likelihood with
/// x_min = 1 over the strictly positive observations. Used to sanity-check
/// generated degree distributions.
pub fn discrete_powerlaw_exponent_mle(degrees: &[usize]) -> Option<f64> {
    let xs: Vec<f64> = degrees
        .iter()
        .filter(|&&d| d >= 1)
        .map(|&d| d as f64)
        .collect();
    if xs.is_empty() {
        return None;
    }
    let log_sum: f64 = xs.iter().map(|&x| libm::log(x / 0.5)).sum();
    if log_sum <= 0.0 {
        return None;
    }
    Some(1.0 + xs.len() as f64 / log_sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn mean_and_stddev() {
        assert_eq!(mean(&[10.0, 20.0]), Some(15.0));
        assert_eq!(sample_stddev(&[5.0, 5.0, 5.0]), Some(0.0));
        assert_eq!(mean(&[]), None);
        // Sample stddev of {1, 3} is sqrt(2).
        assert!((sample_stddev(&[1.0, 3.0]).unwrap() - libm::sqrt(2.0)).abs() < 1e-12);
    }

    #[test]
    fn sign_test_extremes() {
        let a = [1u64; 10];
        let b = [2u64; 10];
        let p = paired_sign_test_less(&a, &b);
        assert!((p - libm::pow(0.5, 10.0)).abs() < 1e-12);
        assert_eq!(paired_sign_test_less(&b, &a), 1.0);
        assert_eq!(paired_sign_test_less(&a, &a), 1.0);
    }

    #[test]
    fn sign_test_matches_hand_computed_tail() {
        // 8 wins of 10: P(Bin(10, .5) >= 8) = (45 + 10 + 1) / 1024.
        let a = [1, 1, 1, 1, 1, 1, 1, 1, 3, 3u64];
        let b = [2u64; 10];
        let p = paired_sign_test_less(&a, &b);
        assert!((p - 56.0 / 1024.0).abs() < 1e-12);
    }

    #[test]
    fn mle_recovers_a_planted_exponent() {
        // Degrees drawn as round(x) from a Pareto-ish tail: use the exact
        // discrete Zipf pmf truncated at 1000, alpha = 2.5.
        let alpha = 2.5f64;
        let weights: Vec<f64> = (1..=1000).map(|d| libm::pow(d as f64, -alpha)).collect();
        let total: f64 = weights.iter().sum();
        let mut sample = vec![];
        // Deterministic inverse-CDF sampling on a uniform grid.
        for i in 0..5000 {
            let u = (i as f64 + 0.5) / 5000.0 * total;
            let mut acc = 0.0;
            for (d, w) in weights.iter().enumerate() {
                acc += w;
                if acc >= u {
                    sample.push(d + 1);
                    break;
                }
            }
        }
        // The x_min = 1 continuous approximation is biased low for steep
        // tails; a loose window is all this sanity check needs.
        let fit = discrete_powerlaw_exponent_mle(&sample).unwrap();
        assert!((fit - alpha).abs() < 0.6, "fit = {fit}");
    }
}
