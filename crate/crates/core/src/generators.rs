//! Synthetic graph and signal generators for experiments and tests.

use crate::graph::{Graph, GraphError, GraphRole};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Path graph on `n` nodes with unit weights.
pub fn path(n: usize) -> Graph {
    let adj = DMatrix::from_fn(n, n, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
    Graph::from_adjacency(adj, GraphRole::Communication).expect("path graph is always valid")
}

/// Complete graph on `n` nodes with unit weights.
pub fn complete(n: usize) -> Graph {
    let adj = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 });
    Graph::from_adjacency(adj, GraphRole::Communication).expect("complete graph is always valid")
}

/// Erdos-Renyi draw with unit weights; may be disconnected.
pub fn erdos_renyi(n: usize, edge_prob: f64, rng: &mut impl Rng) -> DMatrix<f64> {
    let mut adj = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < edge_prob {
                adj[(i, j)] = 1.0;
                adj[(j, i)] = 1.0;
            }
        }
    }
    adj
}

/// Redraw Erdos-Renyi graphs until one is connected.
pub fn connected_erdos_renyi(
    n: usize,
    edge_prob: f64,
    rng: &mut impl Rng,
    max_tries: usize,
) -> Result<Graph, GraphError> {
    for _ in 0..max_tries {
        let adj = erdos_renyi(n, edge_prob, rng);
        if let Ok(g) = Graph::from_adjacency(adj, GraphRole::Communication) {
            return Ok(g);
        }
    }
    Err(GraphError::Disconnected)
}

/// Uniform points in a `side`-length square, connected below `radius`.
/// Returns positions alongside the (possibly disconnected) adjacency.
pub fn random_geometric(
    n: usize,
    side: f64,
    radius: f64,
    rng: &mut impl Rng,
) -> (Vec<(f64, f64)>, DMatrix<f64>) {
    let positions: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random::<f64>() * side, rng.random::<f64>() * side))
        .collect();
    let adj = threshold_adjacency(&positions, radius);
    (positions, adj)
}

/// Unit-weight adjacency connecting points closer than `radius`.
pub fn threshold_adjacency(positions: &[(f64, f64)], radius: f64) -> DMatrix<f64> {
    let n = positions.len();
    let mut adj = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = positions[i].0 - positions[j].0;
            let dy = positions[i].1 - positions[j].1;
            if (dx * dx + dy * dy).sqrt() < radius {
                adj[(i, j)] = 1.0;
                adj[(j, i)] = 1.0;
            }
        }
    }
    adj
}

/// Standard-normal GFT coefficients for a bandlimited test signal.
pub fn random_spectrum(bandwidth: usize, rng: &mut impl Rng) -> DVector<f64> {
    DVector::from_fn(bandwidth, |_, _| StandardNormal.sample(rng))
}
