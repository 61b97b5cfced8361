//! Ground-truth coreness by minimum-degree peeling in `O(|V| + |E|)`.

use crate::graph::{Graph, NodeId};

/// Per-node coreness plus the summary statistics reported for a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct CorenessResult {
    coreness: Vec<u32>,
    k_max: u32,
    k_avg: f64,
}

impl CorenessResult {
    pub fn new(coreness: Vec<u32>) -> Self {
        let k_max = coreness.iter().copied().max().unwrap_or(0);
        let k_avg = if coreness.is_empty() {
            0.0
        } else {
            coreness.iter().map(|&c| c as u64).sum::<u64>() as f64 / coreness.len() as f64
        };
        Self {
            coreness,
            k_max,
            k_avg,
        }
    }

    pub fn coreness(&self) -> &[u32] {
        &self.coreness
    }

    pub fn into_coreness(self) -> Vec<u32> {
        self.coreness
    }

    #[inline]
    pub fn get(&self, u: NodeId) -> u32 {
        self.coreness[u as usize]
    }

    pub fn len(&self) -> usize {
        self.coreness.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coreness.is_empty()
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn k_avg(&self) -> f64 {
        self.k_avg
    }
}

/// One disagreement between a candidate coreness array and the truth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub node: NodeId,
    pub candidate: u32,
    pub truth: u32,
}

/// Bucket-queue peeling (Batagelj–Zaversnik).
///
/// Nodes are kept in an array sorted by current degree with a start index
/// per degree bin; removing the minimum node and decrementing a neighbor is a
/// constant-time swap to the front of the neighbor's bin. Initial bin order
/// is ascending node id, which makes the peeling order deterministic.
pub fn peel_coreness(g: &Graph) -> CorenessResult {
    let n = g.node_count();
    if n == 0 {
        return CorenessResult::new(Vec::new());
    }
    let max_deg = g.max_degree();

    let mut deg: Vec<u32> = g.nodes().map(|u| g.degree(u) as u32).collect();
    let mut bin_start = vec![0usize; max_deg + 2];
    for &d in &deg {
        bin_start[d as usize + 1] += 1;
    }
    for d in 1..bin_start.len() {
        bin_start[d] += bin_start[d - 1];
    }

    let mut order = vec![0 as NodeId; n];
    let mut pos = vec![0usize; n];
    {
        let mut next = bin_start.clone();
        for u in g.nodes() {
            let d = deg[u as usize] as usize;
            pos[u as usize] = next[d];
            order[next[d]] = u;
            next[d] += 1;
        }
    }

    for i in 0..n {
        let u = order[i];
        let du = deg[u as usize];
        for &v in g.neighbors(u) {
            let dv = deg[v as usize];
            if dv > du {
                // Swap v with the first node of its bin, then shrink the bin.
                let first = bin_start[dv as usize];
                let w = order[first];
                let pv = pos[v as usize];
                if w != v {
                    order[first] = v;
                    order[pv] = w;
                    pos[v as usize] = first;
                    pos[w as usize] = pv;
                }
                bin_start[dv as usize] += 1;
                deg[v as usize] = dv - 1;
            }
        }
    }

    CorenessResult::new(deg)
}

/// Lists every node where `candidate` disagrees with `truth`.
///
/// Panics if the two results cover a different number of nodes.
pub fn verify(candidate: &CorenessResult, truth: &CorenessResult) -> Vec<Mismatch> {
    assert_eq!(
        candidate.len(),
        truth.len(),
        "coreness arrays cover different node counts"
    );
    candidate
        .coreness()
        .iter()
        .zip(truth.coreness())
        .enumerate()
        .filter(|(_, (c, t))| c != t)
        .map(|(i, (&c, &t))| Mismatch {
            node: i as NodeId,
            candidate: c,
            truth: t,
        })
        .collect()
}
