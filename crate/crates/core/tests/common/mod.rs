//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use std::collections::HashSet;

use kcore::Graph;

/// Graphs on at most 8 nodes as adjacency bitmasks, `adj[u] >> v & 1`.
pub type Small = Vec<u8>;

/// Coreness by definition: `u` has coreness `>= k` iff it survives repeated
/// deletion of nodes with fewer than `k` surviving neighbors.
pub fn naive_coreness(g: &Graph) -> Vec<u32> {
    let n = g.node_count();
    let mut core = vec![0u32; n];
    for k in 1.. {
        let mut alive = vec![true; n];
        loop {
            let doomed: Vec<usize> = (0..n)
                .filter(|&u| alive[u])
                .filter(|&u| {
                    let live = g
                        .neighbors(u as u32)
                        .iter()
                        .filter(|&&v| alive[v as usize])
                        .count();
                    live < k as usize
                })
                .collect();
            if doomed.is_empty() {
                break;
            }
            for u in doomed {
                alive[u] = false;
            }
        }
        if !alive.iter().any(|&a| a) {
            break;
        }
        for u in 0..n {
            if alive[u] {
                core[u] = k;
            }
        }
    }
    core
}

/// Largest `t <= current_core` with at least `t` entries `>= t`.
pub fn index_by_definition(estimates: &[u32], current_core: u32) -> u32 {
    (0..=current_core.min(estimates.len() as u32))
        .rev()
        .find(|&t| estimates.iter().filter(|&&e| e >= t).count() >= t as usize)
        .unwrap_or(0)
}

pub fn small_to_graph(adj: &[u8]) -> Graph {
    let n = adj.len() as u32;
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| adj[u as usize] >> v & 1 == 1)
        .collect();
    Graph::from_edges(adj.len(), &edges)
}

/// Iso-invariant vertex colors by repeated neighborhood refinement.
fn refine(adj: &[u8]) -> Vec<usize> {
    let n = adj.len();
    let mut color: Vec<usize> = adj.iter().map(|a| a.count_ones() as usize).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|u| {
                let mut nb: Vec<usize> = (0..n)
                    .filter(|&v| adj[u] >> v & 1 == 1)
                    .map(|v| color[v])
                    .collect();
                nb.sort_unstable();
                (color[u], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| distinct.binary_search(s).unwrap())
            .collect();
        let before = color.iter().collect::<HashSet<_>>().len();
        color = next;
        if distinct.len() == before {
            return color;
        }
    }
}

/// Canonical edge bitmask: the largest mask over all vertex orders that
/// list color classes in order.
pub fn canonical(adj: &[u8]) -> u64 {
    let n = adj.len();
    let color = refine(adj);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&u| color[u]);
    for &u in &order {
        match cells.last_mut() {
            Some(cell) if color[cell[0]] == color[u] => cell.push(u),
            _ => cells.push(vec![u]),
        }
    }
    let mut best = 0u64;
    let mut current = Vec::with_capacity(n);
    search(adj, &mut cells, 0, &mut current, &mut best);
    best
}

fn mask_of(adj: &[u8], order: &[usize]) -> u64 {
    let mut mask = 0u64;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            mask <<= 1;
            mask |= (adj[order[i]] >> order[j] & 1) as u64;
        }
    }
    mask
}

fn search(
    adj: &[u8],
    cells: &mut [Vec<usize>],
    cell: usize,
    current: &mut Vec<usize>,
    best: &mut u64,
) {
    if cell == cells.len() {
        *best = (*best).max(mask_of(adj, current));
        return;
    }
    if cells[cell].is_empty() {
        search(adj, cells, cell + 1, current, best);
        return;
    }
    for i in 0..cells[cell].len() {
        let u = cells[cell].swap_remove(i);
        current.push(u);
        search(adj, cells, cell, current, best);
        current.pop();
        cells[cell].push(u);
        let last = cells[cell].len() - 1;
        cells[cell].swap(i, last);
    }
}

/// One representative of every isomorphism class of graphs on exactly `n`
/// nodes, built by attaching a new node to every class on `n - 1` nodes in
/// every possible way.
pub fn nonisomorphic(max_n: usize) -> Vec<Vec<Small>> {
    assert!(max_n <= 8);
    let mut levels: Vec<Vec<Small>> = vec![vec![vec![]]];
    for n in 1..=max_n {
        let mut seen = HashSet::new();
        let mut level = Vec::new();
        for base in &levels[n - 1] {
            for subset in 0u16..(1 << (n - 1)) {
                let mut adj = base.clone();
                adj.push(subset as u8);
                for (v, row) in adj.iter_mut().enumerate().take(n - 1) {
                    if subset >> v & 1 == 1 {
                        *row |= 1 << (n - 1);
                    }
                }
                if seen.insert(canonical(&adj)) {
                    level.push(adj);
                }
            }
        }
        levels.push(level);
    }
    levels
}
