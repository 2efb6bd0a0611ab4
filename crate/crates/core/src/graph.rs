//! Directed graphs used as synchronization substrates.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

/// Largest vertex count accepted by [`DiGraph::lattice`].
pub const MAX_LATTICE_VERTICES: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid graph size: {0}")]
    InvalidSize(String),
    #[error("lattice with {0} vertices exceeds capacity")]
    Capacity(String),
    #[error("invalid edge ({u}, {v}): {reason}")]
    InvalidEdge { u: usize, v: usize, reason: &'static str },
    #[error("edge list parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Simple directed graph: no self-loops, no repeated directed edge.
///
/// Edges keep their insertion order; every edge labeling in this crate is
/// aligned with that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
    /// For each vertex, indices of edges touching it in either orientation.
    incident: Vec<Vec<usize>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl DiGraph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if n_vertices == 0 {
            return Err(GraphError::InvalidSize("graph needs at least one vertex".into()));
        }
        let mut incident = vec![Vec::new(); n_vertices];
        let mut lookup = HashMap::with_capacity(edges.len());
        for (idx, &(u, v)) in edges.iter().enumerate() {
            if u >= n_vertices || v >= n_vertices {
                return Err(GraphError::InvalidEdge {
                    u,
                    v,
                    reason: "endpoint out of range",
                });
            }
            if u == v {
                return Err(GraphError::InvalidEdge {
                    u,
                    v,
                    reason: "self-loop",
                });
            }
            if lookup.insert((u, v), idx).is_some() {
                return Err(GraphError::InvalidEdge {
                    u,
                    v,
                    reason: "duplicate directed edge",
                });
            }
            incident[u].push(idx);
            incident[v].push(idx);
        }
        Ok(Self {
            n_vertices,
            edges,
            incident,
            lookup,
        })
    }

    /// All ordered pairs `(u, v)` with `u != v`, listed `u`-major.
    pub fn complete(n: usize) -> Result<Self, GraphError> {
        if n < 2 {
            return Err(GraphError::InvalidSize(format!(
                "complete digraph needs n >= 2, got {n}"
            )));
        }
        let edges = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Self::new(n, edges)
    }

    /// The grid `{0..side}^dim` with one edge per adjacent pair, oriented
    /// toward the coordinatewise larger endpoint.
    ///
    /// Vertex indices are mixed-radix with the first coordinate most
    /// significant, so index order is lexicographic order of coordinates.
    pub fn lattice(side: usize, dim: usize) -> Result<Self, GraphError> {
        if side < 2 || dim == 0 {
            return Err(GraphError::InvalidSize(format!(
                "lattice needs side >= 2 and dim >= 1, got side={side} dim={dim}"
            )));
        }
        let n = (0..dim)
            .try_fold(1usize, |acc, _| acc.checked_mul(side))
            .filter(|&n| n <= MAX_LATTICE_VERTICES)
            .ok_or_else(|| GraphError::Capacity(format!("{side}^{dim}")))?;
        // strides[k] = side^(dim-1-k)
        let strides: Vec<usize> = (0..dim).map(|k| side.pow((dim - 1 - k) as u32)).collect();
        let mut edges = Vec::with_capacity(dim * (side - 1) * (n / side));
        for v in 0..n {
            for &stride in &strides {
                if (v / stride) % side + 1 < side {
                    edges.push((v, v + stride));
                }
            }
        }
        Self::new(n, edges)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Index of the directed edge `(u, v)`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.lookup.get(&(u, v)).copied()
    }

    /// Edge indices touching `v` in either orientation.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    /// Number of edges touching `v`, counting both orientations.
    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// True when every ordered pair of distinct vertices is an edge.
    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n_vertices * (self.n_vertices - 1)
    }

    /// Distinct neighbours of `v` in the underlying undirected graph.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident[v].iter().map(move |&e| {
            let (a, b) = self.edges[e];
            if a == v {
                b
            } else {
                a
            }
        })
    }

    /// Connectivity of the underlying undirected graph.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n_vertices];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n_vertices
    }

    /// Greedy independent set scanning vertices in index order.
    ///
    /// The result has at least `n / (max_degree + 1)` members.
    pub fn greedy_independent_set(&self) -> VertexSet {
        let mut blocked = vec![false; self.n_vertices];
        let mut chosen = Vec::new();
        for v in 0..self.n_vertices {
            if blocked[v] {
                continue;
            }
            chosen.push(v);
            for w in self.neighbors(v) {
                blocked[w] = true;
            }
        }
        VertexSet(chosen)
    }

    /// True when no edge joins two members of `set` in either orientation.
    pub fn is_independent(&self, set: &VertexSet) -> bool {
        let mut member = vec![false; self.n_vertices];
        for &v in set.iter() {
            member[v] = true;
        }
        self.edges.iter().all(|&(u, v)| !(member[u] && member[v]))
    }

    /// Edge-list text: `"n m"` then one `"u v"` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(16 * (self.edges.len() + 1));
        let _ = writeln!(out, "{} {}", self.n_vertices, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            reason: "missing header".into(),
        })?;
        let (n, m) = parse_pair(header, hline + 1)?;
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            edges.push(parse_pair(line, idx + 1)?);
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: hline + 1,
                reason: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Self::new(n, edges)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, GraphError> {
        Self::from_edge_list(&std::fs::read_to_string(path)?)
    }

    pub fn store(&self, path: impl AsRef<std::path::Path>) -> Result<(), GraphError> {
        std::fs::write(path, self.to_edge_list())?;
        Ok(())
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize), GraphError> {
    let err = |reason: String| GraphError::Parse {
        line: lineno,
        reason,
    };
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        it.next()
            .ok_or_else(|| err("expected two integers".into()))?
            .parse()
            .map_err(|e| err(format!("{e}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(err("trailing tokens".into()));
    }
    Ok((a, b))
}

/// Sorted set of distinct vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Sorts and deduplicates `vertices`.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Self(vertices)
    }

    pub fn all(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_counts() {
        let k3 = DiGraph::complete(3).unwrap();
        assert_eq!(k3.n_edges(), 6);
        let k2 = DiGraph::complete(2).unwrap();
        assert_eq!(k2.edges(), &[(0, 1), (1, 0)]);
        let k5 = DiGraph::complete(5).unwrap();
        assert!((0..5).all(|v| k5.degree(v) == 8));
        assert!(k5.is_complete());
        assert!(DiGraph::complete(1).is_err());
    }

    #[test]
    fn complete_edge_count_sweep() {
        for n in 2..=50 {
            let g = DiGraph::complete(n).unwrap();
            assert_eq!(g.n_edges(), n * (n - 1));
            assert_eq!(g.n_edges(), 2 * (n * (n - 1) / 2));
        }
    }

    #[test]
    fn lattice_counts() {
        let g = DiGraph::lattice(3, 2).unwrap();
        assert_eq!(g.n_vertices(), 9);
        assert_eq!(g.n_edges(), 12);
        assert_eq!(g.max_degree(), 4);
        let p = DiGraph::lattice(2, 1).unwrap();
        assert_eq!(p.edges(), &[(0, 1)]);
        assert_eq!(DiGraph::lattice(4, 3).unwrap().max_degree(), 6);
        for side in 2..6 {
            for dim in 1..4 {
                let g = DiGraph::lattice(side, dim).unwrap();
                assert_eq!(g.n_edges(), dim * (side - 1) * side.pow(dim as u32 - 1));
                assert!(g.max_degree() <= 2 * dim);
                assert!(g.is_connected());
            }
        }
    }

    #[test]
    fn lattice_orientation_is_coordinatewise_increasing() {
        let g = DiGraph::lattice(3, 2).unwrap();
        for &(u, v) in g.edges() {
            let (ur, uc) = (u / 3, u % 3);
            let (vr, vc) = (v / 3, v % 3);
            assert!(ur <= vr && uc <= vc);
            assert_eq!((vr - ur) + (vc - uc), 1);
        }
    }

    #[test]
    fn lattice_rejections() {
        assert!(matches!(DiGraph::lattice(1, 2), Err(GraphError::InvalidSize(_))));
        assert!(matches!(DiGraph::lattice(3, 0), Err(GraphError::InvalidSize(_))));
        assert!(matches!(DiGraph::lattice(1001, 2), Err(GraphError::Capacity(_))));
        assert!(matches!(DiGraph::lattice(10, 7), Err(GraphError::Capacity(_))));
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(DiGraph::complete(4).unwrap().max_degree(), 6);
        assert_eq!(DiGraph::new(2, vec![(0, 1)]).unwrap().max_degree(), 1);
    }

    #[test]
    fn invalid_edges() {
        assert!(DiGraph::new(3, vec![(0, 0)]).is_err());
        assert!(DiGraph::new(3, vec![(0, 3)]).is_err());
        assert!(DiGraph::new(3, vec![(0, 1), (0, 1)]).is_err());
        // Opposite orientations are distinct edges.
        assert!(DiGraph::new(3, vec![(0, 1), (1, 0)]).is_ok());
    }

    #[test]
    fn independent_sets() {
        let k5 = DiGraph::complete(5).unwrap();
        assert_eq!(k5.greedy_independent_set().len(), 1);

        let grid = DiGraph::lattice(4, 2).unwrap();
        let set = grid.greedy_independent_set();
        assert!(set.len() >= 8);
        assert!(grid.is_independent(&set));
        // Even-parity class of the checkerboard.
        assert!(set.iter().all(|&v| (v / 4 + v % 4) % 2 == 0));

        let empty = DiGraph::new(7, vec![]).unwrap();
        assert_eq!(empty.greedy_independent_set(), VertexSet::all(7));
    }

    #[test]
    fn independent_set_size_guarantee() {
        for g in [
            DiGraph::lattice(5, 3).unwrap(),
            DiGraph::lattice(40, 2).unwrap(),
            DiGraph::complete(9).unwrap(),
        ] {
            let set = g.greedy_independent_set();
            assert!(g.is_independent(&set));
            assert!(set.len() * (g.max_degree() + 1) >= g.n_vertices());
        }
        assert_eq!(DiGraph::lattice(40, 2).unwrap().greedy_independent_set().len(), 800);
    }

    #[test]
    fn connectivity() {
        assert!(DiGraph::complete(3).unwrap().is_connected());
        assert!(!DiGraph::new(4, vec![(0, 1), (2, 3)]).unwrap().is_connected());
        assert!(DiGraph::lattice(3, 2).unwrap().is_connected());
        assert!(DiGraph::new(1, vec![]).unwrap().is_connected());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = DiGraph::lattice(3, 2).unwrap();
        let text = g.to_edge_list();
        assert!(text.starts_with("9 12\n0 3\n0 1\n"));
        let back = DiGraph::from_edge_list(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_edge_list(), text);
    }

    #[test]
    fn edge_list_errors() {
        assert!(DiGraph::from_edge_list("").is_err());
        assert!(DiGraph::from_edge_list("3 2\n0 1\n").is_err());
        assert!(DiGraph::from_edge_list("3 1\n0 x\n").is_err());
        assert!(DiGraph::from_edge_list("3 1\n0 1 2\n").is_err());
    }

    #[test]
    fn store_and_load() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let g = DiGraph::complete(4).unwrap();
        g.store(&path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), g.to_edge_list());
        assert_eq!(DiGraph::load(&path).unwrap(), g);
    }
}
