//! Deterministic synthetic graphs for tests, benchmarks and surrogate
//! workloads.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, NodeId};

pub fn complete(n: u32) -> Graph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    Graph::from_edges(n as usize, &edges)
}

/// Node 0 joined to `leaves` leaves.
pub fn star(leaves: u32) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves as usize + 1, &edges)
}

pub fn path(n: u32) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(n as usize, &edges)
}

pub fn cycle(n: u32) -> Graph {
    let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    if n > 2 {
        edges.push((n - 1, 0));
    }
    Graph::from_edges(n as usize, &edges)
}

/// Erdős–Rényi `G(n, p)`.
pub fn gnp(n: u32, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n as usize, &edges)
}

/// Chung–Lu graph with power-law expected degrees `~ i^(-1/(exponent-1))`
/// scaled to an average degree of about `avg_degree`. Heavy-tailed like web
/// and social graphs; duplicate samples and self-loops are dropped.
pub fn chung_lu(n: u32, avg_degree: f64, exponent: f64, seed: u64) -> Graph {
    assert!(exponent > 2.0, "exponent must exceed 2");
    if n < 2 {
        return Graph::from_edges(n as usize, &[]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alpha = 1.0 / (exponent - 1.0);
    let weights: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-alpha)).collect();
    let dist = WeightedIndex::new(&weights).expect("positive weights");
    let m = (avg_degree * n as f64 / 2.0).round() as usize;
    let edges: Vec<(NodeId, NodeId)> = (0..m)
        .map(|_| {
            (
                dist.sample(&mut rng) as NodeId,
                dist.sample(&mut rng) as NodeId,
            )
        })
        .collect();
    Graph::from_edges(n as usize, &edges)
}

/// Road-like lattice: a `width x height` grid keeping each edge with
/// probability `keep`, plus a diagonal in each cell with probability
/// `diagonal`. Low, flat degrees and a small maximum coreness.
pub fn road_grid(width: u32, height: u32, keep: f64, diagonal: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |x: u32, y: u32| y * width + x;
    let mut edges = Vec::new();
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width && rng.gen_bool(keep) {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < height && rng.gen_bool(keep) {
                edges.push((id(x, y), id(x, y + 1)));
            }
            if x + 1 < width && y + 1 < height && rng.gen_bool(diagonal) {
                edges.push((id(x, y), id(x + 1, y + 1)));
            }
        }
    }
    Graph::from_edges((width * height) as usize, &edges)
}
