//! Degree, harmonic closeness, and Brandes betweenness centrality on the
//! undirected projection, plus the normalized neighbor influence weights
//! (weight_ij = C_j / sum of C over i's neighbors) and top/middle/bottom
//! rank slices.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentralityKind {
    Degree,
    Closeness,
    Betweenness,
}

impl CentralityKind {
    pub const ALL: [CentralityKind; 3] = [
        CentralityKind::Degree,
        CentralityKind::Closeness,
        CentralityKind::Betweenness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CentralityKind::Degree => "degree",
            CentralityKind::Closeness => "closeness",
            CentralityKind::Betweenness => "betweenness",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub kind: CentralityKind,
    pub values: Vec<f64>,
}

/// Normalized influence of each neighbor on a focal node. `weights` is
/// aligned with `neighbors` (sorted by node id) and sums to 1 when nonempty.
#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceWeights {
    pub focal_node: NodeId,
    pub neighbors: Vec<NodeId>,
    pub weights: Vec<f64>,
}

pub fn compute_centrality(g: &Graph, kind: CentralityKind) -> CentralityScores {
    match kind {
        CentralityKind::Degree => degree_centrality(g),
        CentralityKind::Closeness => closeness_centrality(g),
        CentralityKind::Betweenness => betweenness_centrality(g),
    }
}

/// Number of distinct neighbors in the undirected projection.
pub fn degree_centrality(g: &Graph) -> CentralityScores {
    let values = g
        .undirected_adjacency()
        .iter()
        .map(|nbrs| nbrs.len() as f64)
        .collect();
    CentralityScores {
        kind: CentralityKind::Degree,
        values,
    }
}

/// Harmonic closeness: sum over reachable j of 1/d(i, j). Unreachable nodes
/// contribute 0, so the measure is well-defined on disconnected graphs.
pub fn closeness_centrality(g: &Graph) -> CentralityScores {
    let adj = g.undirected_adjacency();
    let n = g.node_count();
    let mut values = vec![0.0; n];
    for s in 0..n {
        let dist = bfs_distances(&adj, s);
        values[s] = dist
            .iter()
            .filter(|&&d| d > 0)
            .map(|&d| 1.0 / d as f64)
            .sum();
    }
    CentralityScores {
        kind: CentralityKind::Closeness,
        values,
    }
}

fn bfs_distances(adj: &[Vec<NodeId>], source: usize) -> Vec<i64> {
    let mut dist = vec![-1i64; adj.len()];
    dist[source] = 0;
    let mut queue = VecDeque::new();
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w as usize] < 0 {
                dist[w as usize] = dist[v] + 1;
                queue.push_back(w as usize);
            }
        }
    }
    dist
}

/// Brandes' algorithm on the undirected projection, unnormalized and
/// pair-counted (each unordered pair contributes once).
pub fn betweenness_centrality(g: &Graph) -> CentralityScores {
    let adj = g.undirected_adjacency();
    let n = g.node_count();
    let mut values = vec![0.0; n];

    for s in 0..n {
        let mut stack: Vec<usize> = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![-1i64; n];
        sigma[s] = 1.0;
        dist[s] = 0;

        let mut queue = VecDeque::new();
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in &adj[v] {
                let w = w as usize;
                if dist[w] < 0 {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }

        let mut delta = vec![0.0f64; n];
        while let Some(w) = stack.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                values[w] += delta[w];
            }
        }
    }

    // The source loop counts each unordered pair twice.
    for v in values.iter_mut() {
        *v /= 2.0;
    }
    CentralityScores {
        kind: CentralityKind::Betweenness,
        values,
    }
}

/// Influence weights of node `i`'s neighbors: C_j normalized over the
/// neighborhood. All-zero neighborhoods fall back to uniform weights so the
/// neighborhood still casts one vote in total.
pub fn neighbor_weights(g: &Graph, i: NodeId, scores: &CentralityScores) -> InfluenceWeights {
    debug_assert_eq!(scores.values.len(), g.node_count());
    let neighbors = g.undirected_adjacency()[i as usize].clone();
    let total: f64 = neighbors
        .iter()
        .map(|&j| scores.values[j as usize])
        .sum();
    let weights = if neighbors.is_empty() {
        Vec::new()
    } else if total > 0.0 {
        neighbors
            .iter()
            .map(|&j| scores.values[j as usize] / total)
            .collect()
    } else {
        vec![1.0 / neighbors.len() as f64; neighbors.len()]
    };
    InfluenceWeights {
        focal_node: i,
        neighbors,
        weights,
    }
}

/// Weights for every node, sharing one adjacency computation.
pub fn all_neighbor_weights(g: &Graph, scores: &CentralityScores) -> Vec<InfluenceWeights> {
    let adj = g.undirected_adjacency();
    (0..g.node_count() as NodeId)
        .map(|i| {
            let neighbors = adj[i as usize].clone();
            let total: f64 = neighbors.iter().map(|&j| scores.values[j as usize]).sum();
            let weights = if neighbors.is_empty() {
                Vec::new()
            } else if total > 0.0 {
                neighbors
                    .iter()
                    .map(|&j| scores.values[j as usize] / total)
                    .collect()
            } else {
                vec![1.0 / neighbors.len() as f64; neighbors.len()]
            };
            InfluenceWeights {
                focal_node: i,
                neighbors,
                weights,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankSlice {
    Top,
    Middle,
    Bottom,
}

impl RankSlice {
    pub const ALL: [RankSlice; 3] = [RankSlice::Top, RankSlice::Middle, RankSlice::Bottom];

    pub fn name(self) -> &'static str {
        match self {
            RankSlice::Top => "top",
            RankSlice::Middle => "middle",
            RankSlice::Bottom => "bottom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SliceError {
    #[error("fraction {0} outside (0, 1]")]
    BadFraction(f64),
    #[error("slice would be empty (round({fraction} * {n}) = 0)")]
    EmptySlice { fraction: f64, n: usize },
}

/// Nodes in the requested rank window, ordered by rank. Ranking is by
/// centrality descending with ties broken by ascending node id; the middle
/// window is centered on the remaining ranks.
pub fn rank_slice(
    scores: &CentralityScores,
    slice: RankSlice,
    fraction: f64,
) -> Result<Vec<NodeId>, SliceError> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(SliceError::BadFraction(fraction));
    }
    let n = scores.values.len();
    let m = libm::round(fraction * n as f64) as usize;
    if m == 0 {
        return Err(SliceError::EmptySlice { fraction, n });
    }
    let mut order: Vec<NodeId> = (0..n as NodeId).collect();
    order.sort_by(|&a, &b| {
        scores.values[b as usize]
            .partial_cmp(&scores.values[a as usize])
            .expect("centrality values are finite")
            .then(a.cmp(&b))
    });
    let start = match slice {
        RankSlice::Top => 0,
        RankSlice::Middle => (n - m) / 2,
        RankSlice::Bottom => n - m,
    };
    Ok(order[start..start + m].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use alloc::vec;

    fn path3() -> Graph {
        let mut g = Graph::new(vec![0.5; 3]).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g
    }

    #[test]
    fn degree_on_path() {
        let c = degree_centrality(&path3());
        assert_eq!(c.values, vec![1.0, 2.0, 1.0]);
    }

    #[test]
    fn degree_on_clique_and_isolated() {
        let c = degree_centrality(&Graph::complete_digraph(4).unwrap());
        assert_eq!(c.values, vec![3.0; 4]);
        let c = degree_centrality(&Graph::new(vec![0.5]).unwrap());
        assert_eq!(c.values, vec![0.0]);
    }

    #[test]
    fn harmonic_closeness_on_path() {
        let c = closeness_centrality(&path3());
        assert!((c.values[1] - 2.0).abs() < 1e-12);
        assert!((c.values[0] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn closeness_of_disconnected_pair_is_zero() {
        let c = closeness_centrality(&Graph::new(vec![0.5, 0.5]).unwrap());
        assert_eq!(c.values, vec![0.0, 0.0]);
    }

    #[test]
    fn betweenness_star_center() {
        let mut g = Graph::new(vec![0.5; 5]).unwrap();
        for leaf in 1..5 {
            g.add_edge(0, leaf).unwrap();
        }
        let c = betweenness_centrality(&g);
        assert!((c.values[0] - 6.0).abs() < 1e-9);
        for leaf in 1..5 {
            assert!(c.values[leaf].abs() < 1e-9);
        }
    }

    #[test]
    fn betweenness_clique_is_zero() {
        let c = betweenness_centrality(&Graph::complete_digraph(4).unwrap());
        for v in c.values {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn weights_follow_centrality_ratios() {
        let mut g = Graph::new(vec![0.5; 4]).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 2).unwrap();
        g.add_edge(0, 3).unwrap();
        let scores = CentralityScores {
            kind: CentralityKind::Degree,
            values: vec![0.0, 2.0, 3.0, 5.0],
        };
        let w = neighbor_weights(&g, 0, &scores);
        assert_eq!(w.neighbors, vec![1, 2, 3]);
        assert_eq!(w.weights, vec![0.2, 0.3, 0.5]);
    }

    #[test]
    fn single_neighbor_weight_is_one() {
        let mut g = Graph::new(vec![0.5; 2]).unwrap();
        g.add_edge(0, 1).unwrap();
        let scores = CentralityScores {
            kind: CentralityKind::Degree,
            values: vec![1.0, 1.0],
        };
        assert_eq!(neighbor_weights(&g, 0, &scores).weights, vec![1.0]);
    }

    #[test]
    fn zero_centrality_neighborhood_is_uniform() {
        let mut g = Graph::new(vec![0.5; 3]).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 2).unwrap();
        let scores = CentralityScores {
            kind: CentralityKind::Degree,
            values: vec![5.0, 0.0, 0.0],
        };
        assert_eq!(neighbor_weights(&g, 0, &scores).weights, vec![0.5, 0.5]);
    }

    #[test]
    fn isolated_node_has_empty_weights() {
        let g = Graph::new(vec![0.5; 2]).unwrap();
        let scores = degree_centrality(&g);
        assert!(neighbor_weights(&g, 0, &scores).weights.is_empty());
    }

    #[test]
    fn rank_slices_at_n100() {
        let scores = CentralityScores {
            kind: CentralityKind::Degree,
            values: (0..100).map(|i| (100 - i) as f64).collect(),
        };
        let top = rank_slice(&scores, RankSlice::Top, 0.1).unwrap();
        assert_eq!(top, (0..10).collect::<Vec<_>>());
        let middle = rank_slice(&scores, RankSlice::Middle, 0.1).unwrap();
        assert_eq!(middle, (45..55).collect::<Vec<_>>());
        let bottom = rank_slice(&scores, RankSlice::Bottom, 0.1).unwrap();
        assert_eq!(bottom, (90..100).collect::<Vec<_>>());
    }

    #[test]
    fn rank_slice_ties_break_by_id() {
        let scores = CentralityScores {
            kind: CentralityKind::Degree,
            values: vec![1.0; 10],
        };
        let top = rank_slice(&scores, RankSlice::Top, 0.2).unwrap();
        assert_eq!(top, vec![0, 1]);
    }

    #[test]
    fn rank_slice_rejects_empty() {
        let scores = CentralityScores {
            kind: CentralityKind::Degree,
            values: vec![1.0; 4],
        };
        assert!(matches!(
            rank_slice(&scores, RankSlice::Top, 0.1),
            Err(SliceError::EmptySlice { .. })
        ));
    }
}
