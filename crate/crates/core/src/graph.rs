//! Immutable undirected graph in compressed adjacency form.
//!
//! Every node owns a contiguous, strictly increasing slice of the shared
//! `neighbors` array, so membership queries are a binary search and a full
//! neighborhood scan touches one cache-friendly run of memory. Node ids are
//! dense (`0..node_count`); the original ids from the source file are kept in
//! a relabeling table so results can be reported against them.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use thiserror::Error;

/// Dense node identifier in `0..Graph::node_count()`.
pub type NodeId = u32;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph has {0} nodes, more than a 32-bit node id can address")]
    TooManyNodes(usize),
    #[error("graph invariant violated: {0}")]
    Invariant(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<NodeId>,
    labels: Vec<u64>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph over `node_count` dense ids from an edge list.
    ///
    /// Edges are symmetrized, self-loops dropped and parallel edges
    /// collapsed. Original labels are the dense ids themselves.
    ///
    /// Panics if an endpoint is `>= node_count`.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)]) -> Self {
        let labels = (0..node_count as u64).collect();
        Self::build(labels, edges.iter().copied())
    }

    fn build(labels: Vec<u64>, edges: impl Iterator<Item = (NodeId, NodeId)> + Clone) -> Self {
        let n = labels.len();
        let mut degree = vec![0usize; n];
        for (u, v) in edges.clone() {
            assert!(
                (u as usize) < n && (v as usize) < n,
                "edge ({u}, {v}) out of range for {n} nodes"
            );
            if u != v {
                degree[u as usize] += 1;
                degree[v as usize] += 1;
            }
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut acc = 0;
        for d in &degree {
            acc += d;
            offsets.push(acc);
        }

        let mut fill = offsets[..n].to_vec();
        let mut raw = vec![0 as NodeId; acc];
        for (u, v) in edges {
            if u != v {
                raw[fill[u as usize]] = v;
                fill[u as usize] += 1;
                raw[fill[v as usize]] = u;
                fill[v as usize] += 1;
            }
        }
        drop(fill);

        // Sort each slice and compact duplicates in place.
        let mut write = 0;
        let mut start = 0;
        for u in 0..n {
            let end = offsets[u + 1];
            let slice = &mut raw[start..end];
            slice.sort_unstable();
            let mut last = None;
            for i in start..end {
                let v = raw[i];
                if last != Some(v) {
                    raw[write] = v;
                    write += 1;
                    last = Some(v);
                }
            }
            start = end;
            offsets[u + 1] = write;
        }
        raw.truncate(write);
        raw.shrink_to_fit();

        Graph {
            edge_count: write / 2,
            offsets,
            neighbors: raw,
            labels,
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of undirected edges.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        let u = u as usize;
        self.offsets[u + 1] - self.offsets[u]
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        let u = u as usize;
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Position of `v` inside `neighbors(u)`, found by binary search.
    #[inline]
    pub fn neighbor_position(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.neighbors(u).binary_search(&v).ok()
    }

    #[inline]
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbor_position(u, v).is_some()
    }

    /// Prefix sums of degrees, length `node_count + 1`.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// The flat neighbor array all slices point into.
    pub fn adjacency(&self) -> &[NodeId] {
        &self.neighbors
    }

    /// Original id of a dense node.
    #[inline]
    pub fn label(&self, u: NodeId) -> u64 {
        self.labels[u as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Dense id for an original label, if the label occurs in the graph.
    pub fn node_for_label(&self, label: u64) -> Option<NodeId> {
        // Labels are strictly increasing by construction.
        self.labels.binary_search(&label).ok().map(|i| i as NodeId)
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        0..self.node_count() as NodeId
    }

    pub fn max_degree(&self) -> usize {
        self.nodes().map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn average_degree(&self) -> f64 {
        if self.node_count() == 0 {
            0.0
        } else {
            2.0 * self.edge_count as f64 / self.node_count() as f64
        }
    }

    /// Checks every structural invariant: offsets shape, sorted duplicate-free
    /// slices, no self-loops, and symmetry.
    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.node_count();
        let fail = |m: String| Err(GraphError::Invariant(m));
        if self.offsets.len() != n + 1 || self.offsets[0] != 0 {
            return fail("offsets must have length n+1 and start at 0".into());
        }
        if self.offsets[n] != 2 * self.edge_count || self.neighbors.len() != self.offsets[n] {
            return fail("offsets[n] must equal twice the edge count".into());
        }
        for u in self.nodes() {
            if self.offsets[u as usize] > self.offsets[u as usize + 1] {
                return fail(format!("offsets decrease at node {u}"));
            }
            let nbrs = self.neighbors(u);
            if nbrs.windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!("neighbors of {u} not strictly increasing"));
            }
            for &v in nbrs {
                if v == u {
                    return fail(format!("self-loop at {u}"));
                }
                if v as usize >= n || !self.has_edge(v, u) {
                    return fail(format!("edge {u}-{v} has no reverse"));
                }
            }
        }
        if self.labels.windows(2).any(|w| w[0] >= w[1]) {
            return fail("labels not strictly increasing".into());
        }
        Ok(())
    }

    /// Writes each undirected edge once (`low high`, original labels) in
    /// the same plain-text format [`load_edge_list`] reads.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(
            out,
            "# Nodes: {} Edges: {}",
            self.node_count(),
            self.edge_count
        )?;
        for u in self.nodes() {
            for &v in self.neighbors(u) {
                if u < v {
                    writeln!(out, "{}\t{}", self.label(u), self.label(v))?;
                }
            }
        }
        Ok(())
    }
}

/// Parses a SNAP-style edge list.
///
/// Lines starting with `#` and blank lines are skipped; every other line
/// must hold exactly two non-negative integer ids separated by whitespace.
/// Dense ids are assigned in ascending order of original id. Nodes that only
/// appear in self-loops are kept, with degree 0.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<Graph, GraphError> {
    let mut raw: Vec<(u64, u64)> = Vec::new();
    for (index, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lineno = index + 1;
        let mut tokens = trimmed.split_whitespace();
        let mut id = |what: &str| -> Result<u64, GraphError> {
            let token = tokens.next().ok_or_else(|| GraphError::Parse {
                line: lineno,
                message: format!("missing {what} id"),
            })?;
            token.parse::<u64>().map_err(|_| GraphError::Parse {
                line: lineno,
                message: format!("invalid {what} id {token:?}"),
            })
        };
        let src = id("source")?;
        let dst = id("target")?;
        if let Some(extra) = tokens.next() {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("unexpected trailing token {extra:?}"),
            });
        }
        raw.push((src, dst));
    }

    let mut labels: Vec<u64> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.len() > NodeId::MAX as usize {
        return Err(GraphError::TooManyNodes(labels.len()));
    }

    let dense = |x: u64| labels.binary_search(&x).expect("label collected above") as NodeId;
    let edges: Vec<(NodeId, NodeId)> = raw.iter().map(|&(a, b)| (dense(a), dense(b))).collect();
    drop(raw);
    Ok(Graph::build(labels, edges.iter().copied()))
}

/// Opens an edge-list file, decoding gzip transparently (detected by the
/// magic bytes, not the extension).
pub fn load_path(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    let mut file = File::open(path.as_ref())?;
    let mut magic = [0u8; 2];
    let read = file.read(&mut magic)?;
    let file = File::open(path.as_ref())?;
    if read == 2 && magic == [0x1f, 0x8b] {
        load_edge_list(BufReader::with_capacity(1 << 20, MultiGzDecoder::new(file)))
    } else {
        load_edge_list(BufReader::with_capacity(1 << 20, file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Graph {
        load_edge_list(text.as_bytes()).unwrap()
    }

    #[test]
    fn triangle() {
        let g = parse("0 1\n1 2\n2 0\n");
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(g.nodes().all(|u| g.degree(u) == 2));
        assert_eq!(g.neighbors(1), &[0, 2]);
        g.validate().unwrap();
    }

    #[test]
    fn self_loop_endpoint_is_kept() {
        let g = parse("5 5\n5 7\n");
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.labels(), &[5, 7]);

        let g = parse("3 3\n1 2\n");
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.degree(g.node_for_label(3).unwrap()), 0);
    }

    #[test]
    fn comments_tabs_duplicates_and_direction() {
        let g = parse("# Directed graph\n# FromNodeId\tToNodeId\n10\t20\n20\t10\n10 20\n\n30 10\n");
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(0), &[1, 2]);
        g.validate().unwrap();
    }

    #[test]
    fn star_and_path() {
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(star.degree(0), 4);
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(path.neighbors(0), &[1]);
    }

    #[test]
    fn empty_input_is_empty_graph() {
        let g = parse("# only a comment\n");
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.offsets(), &[0]);
        g.validate().unwrap();
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match load_edge_list("0 1\n# c\n1 x\n".as_bytes()) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match load_edge_list("0 1\n7\n".as_bytes()) {
            Err(GraphError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            load_edge_list("0 1 2\n".as_bytes()),
            Err(GraphError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            load_edge_list("-1 2\n".as_bytes()),
            Err(GraphError::Parse { line: 1, .. })
        ));
    }

    #[test]
    #[should_panic]
    fn degree_out_of_range_panics() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        g.degree(2);
    }

    #[test]
    fn gzip_is_decoded() {
        use flate2::write::GzEncoder;
        use flate2::Compression;

        let dir = std::env::temp_dir().join(format!("kcore-gz-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tri.txt.gz");
        let mut enc = GzEncoder::new(File::create(&path).unwrap(), Compression::fast());
        enc.write_all(b"0 1\n1 2\n2 0\n").unwrap();
        enc.finish().unwrap();
        let g = load_path(&path).unwrap();
        assert_eq!(g.edge_count(), 3);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
