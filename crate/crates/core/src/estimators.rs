//! Estimators for the edge labeling: trivial, triangle voting, and exhaustive MAP.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::DiGraph;
use crate::group::GroupTable;
use crate::model::{edge_differences, EdgeLabeling, ModelError, SyncProblem, VertexLabeling};

/// Largest number of gauge-fixed configurations [`map_estimator`] will enumerate.
pub const MAP_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("unsupported graph: {0}")]
    UnsupportedGraph(String),
    #[error("MAP search space of {configs} configurations exceeds budget {budget}")]
    Capacity { configs: String, budget: u64 },
    #[error("unknown estimator {0:?}, expected trivial, triangle or map")]
    UnknownEstimator(String),
    #[error("edge ({0}, {1}) not in graph")]
    MissingEdge(usize, usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    Trivial,
    Triangle,
    Map,
}

impl EstimatorKind {
    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Trivial => "trivial",
            EstimatorKind::Triangle => "triangle",
            EstimatorKind::Map => "map",
        }
    }
}

impl FromStr for EstimatorKind {
    type Err = EstimatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trivial" => Ok(EstimatorKind::Trivial),
            "triangle" => Ok(EstimatorKind::Triangle),
            "map" => Ok(EstimatorKind::Map),
            other => Err(EstimatorError::UnknownEstimator(other.to_string())),
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Returns the observations unchanged.
pub fn trivial_estimator(y: &EdgeLabeling) -> EdgeLabeling {
    y.clone()
}

/// Two-hop vote counts for one edge, indexed by group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteTally {
    counts: Vec<usize>,
}

impl VoteTally {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Element with the most votes; ties go to the smallest index.
    pub fn winner(&self) -> usize {
        Self::winner_of(&self.counts)
    }

    fn winner_of(counts: &[usize]) -> usize {
        let mut best = 0;
        for g in 1..counts.len() {
            if counts[g] > counts[best] {
                best = g;
            }
        }
        best
    }
}

/// Dense `n × n` view of observations on a complete digraph.
struct ObservationMatrix {
    n: usize,
    values: Vec<usize>,
}

impl ObservationMatrix {
    fn new(problem: &SyncProblem, y: &EdgeLabeling) -> Result<Self, EstimatorError> {
        let graph = problem.graph();
        if !graph.is_complete() {
            return Err(EstimatorError::UnsupportedGraph(
                "triangle estimator needs a complete digraph".into(),
            ));
        }
        if graph.n_vertices() < 3 {
            return Err(EstimatorError::UnsupportedGraph(
                "triangle estimator needs at least 3 vertices".into(),
            ));
        }
        problem.check_edge_labeling(y)?;
        let n = graph.n_vertices();
        let mut values = vec![problem.group().identity(); n * n];
        for (&(u, v), &obs) in graph.edges().iter().zip(y.as_slice()) {
            values[u * n + v] = obs;
        }
        Ok(Self { n, values })
    }

    #[inline]
    fn get(&self, u: usize, v: usize) -> usize {
        self.values[u * self.n + v]
    }

    fn tally(&self, group: &GroupTable, u: usize, v: usize, counts: &mut [usize]) {
        counts.iter_mut().for_each(|c| *c = 0);
        for w in (0..self.n).filter(|&w| w != u && w != v) {
            counts[group.mul(self.get(u, w), self.get(w, v))] += 1;
        }
    }
}

/// Counts, for each group element `g`, the vertices `w ∉ {u, v}` with
/// `y(u, w)·y(w, v) = g`.
pub fn triangle_votes(
    problem: &SyncProblem,
    y: &EdgeLabeling,
    edge: (usize, usize),
) -> Result<VoteTally, EstimatorError> {
    let obs = ObservationMatrix::new(problem, y)?;
    let (u, v) = edge;
    problem
        .graph()
        .edge_index(u, v)
        .ok_or(EstimatorError::MissingEdge(u, v))?;
    let mut counts = vec![0; problem.group().order()];
    obs.tally(problem.group(), u, v, &mut counts);
    Ok(VoteTally { counts })
}

/// Per edge, the element with the most two-hop votes (smallest index on ties).
pub fn triangle_estimator(
    problem: &SyncProblem,
    y: &EdgeLabeling,
) -> Result<EdgeLabeling, EstimatorError> {
    let obs = ObservationMatrix::new(problem, y)?;
    let group = problem.group();
    let mut counts = vec![0; group.order()];
    let out = problem
        .graph()
        .edges()
        .iter()
        .map(|&(u, v)| {
            obs.tally(group, u, v, &mut counts);
            VoteTally::winner_of(&counts)
        })
        .collect();
    Ok(EdgeLabeling(out))
}

/// An orbit `[x] = {g·x}` stored by its representative with `x(0) = e`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orbit {
    representative: VertexLabeling,
}

impl Orbit {
    /// Canonicalizes `x` by left-multiplying with `x(0)⁻¹`.
    pub fn of(group: &GroupTable, x: &VertexLabeling) -> Self {
        let representative = match x.as_slice().first() {
            Some(&first) => x.translate(group, group.inverse(first)),
            None => x.clone(),
        };
        Self { representative }
    }

    pub fn representative(&self) -> &VertexLabeling {
        &self.representative
    }

    /// ψ of any member; all members share it.
    pub fn edge_labeling(&self, graph: &DiGraph, group: &GroupTable) -> EdgeLabeling {
        edge_differences(graph, group, &self.representative)
    }

    pub fn contains(&self, group: &GroupTable, x: &VertexLabeling) -> bool {
        same_orbit(group, &self.representative, x)
    }

    /// All `|G|` members, ordered by the translating element.
    pub fn members(&self, group: &GroupTable) -> Vec<VertexLabeling> {
        (0..group.order())
            .map(|g| self.representative.translate(group, g))
            .collect()
    }
}

/// True iff `x2 = g·x1` for a single `g`.
pub fn same_orbit(group: &GroupTable, x1: &VertexLabeling, x2: &VertexLabeling) -> bool {
    if x1.len() != x2.len() {
        return false;
    }
    let Some((&a, &b)) = x1.as_slice().first().zip(x2.as_slice().first()) else {
        return true;
    };
    let g = group.mul(b, group.inverse(a));
    x1.as_slice()
        .iter()
        .zip(x2.as_slice())
        .all(|(&p, &q)| group.mul(g, p) == q)
}

/// Strong-recovery event: entrywise equality of edge labelings.
pub fn exact_recovery(estimate: &EdgeLabeling, truth: &EdgeLabeling) -> bool {
    estimate == truth
}

/// Number of edges where the estimate differs from the truth.
pub fn edge_errors(estimate: &EdgeLabeling, truth: &EdgeLabeling) -> usize {
    estimate
        .as_slice()
        .iter()
        .zip(truth.as_slice())
        .filter(|(a, b)| a != b)
        .count()
}

/// Number of gauge-fixed configurations, `|G|^(n-1)`, or `None` on overflow.
pub fn map_search_size(problem: &SyncProblem) -> Option<u64> {
    let order = problem.group().order() as u64;
    let free = problem.graph().n_vertices().saturating_sub(1) as u32;
    order.checked_pow(free)
}

/// Exhaustive MAP over orbits.
///
/// Vertex 0 is pinned to the identity, so each orbit is visited exactly once.
/// Under the uniform prior the posterior of `x` is monotone in the number of
/// edges where `ψ(x)` agrees with `y`: increasing when `1 - p > p/(|G|-1)`,
/// decreasing when smaller, constant when equal. Configurations are visited in
/// lexicographic order of `(x(1), …, x(n-1))` and only a strictly better
/// score replaces the incumbent, so ties resolve to the first in that order.
pub fn map_estimator(problem: &SyncProblem, y: &EdgeLabeling) -> Result<Orbit, EstimatorError> {
    let graph = problem.graph();
    let group = problem.group();
    problem.check_edge_labeling(y)?;
    if !graph.is_connected() {
        return Err(EstimatorError::UnsupportedGraph(
            "MAP over orbits needs a connected graph".into(),
        ));
    }
    match map_search_size(problem) {
        Some(size) if size <= MAP_BUDGET => {}
        other => {
            return Err(EstimatorError::Capacity {
                configs: other.map_or_else(
                    || format!("{}^{}", group.order(), graph.n_vertices() - 1),
                    |s| s.to_string(),
                ),
                budget: MAP_BUDGET,
            })
        }
    }

    let p = problem.flip_prob();
    let k = group.order() as f64;
    let agree_weight = 1.0 - p;
    let disagree_weight = p / (k - 1.0);
    let direction: i64 = if agree_weight > disagree_weight {
        1
    } else if agree_weight < disagree_weight {
        -1
    } else {
        0
    };

    // Each edge is scored once both endpoints are assigned, at its later vertex.
    let n = graph.n_vertices();
    let mut closing: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        if u < v {
            closing[v].push((e, u, false));
        } else {
            closing[u].push((e, v, true));
        }
    }

    let mut search = MapSearch {
        group,
        y: y.as_slice(),
        closing: &closing,
        direction,
        labels: vec![group.identity(); n],
        best_score: i64::MIN,
        best: vec![group.identity(); n],
    };
    search.descend(1, 0);
    Ok(Orbit {
        representative: VertexLabeling(search.best),
    })
}

struct MapSearch<'a> {
    group: &'a GroupTable,
    y: &'a [usize],
    /// `(edge, earlier endpoint, later endpoint is the tail)`.
    closing: &'a [Vec<(usize, usize, bool)>],
    direction: i64,
    labels: Vec<usize>,
    best_score: i64,
    best: Vec<usize>,
}

impl MapSearch<'_> {
    fn descend(&mut self, vertex: usize, agreements: i64) {
        if vertex == self.labels.len() {
            let score = self.direction * agreements;
            if score > self.best_score {
                self.best_score = score;
                self.best.copy_from_slice(&self.labels);
            }
            return;
        }
        for a in 0..self.group.order() {
            self.labels[vertex] = a;
            let mut gained = 0;
            for &(e, other, later_is_tail) in &self.closing[vertex] {
                let b = self.labels[other];
                let diff = if later_is_tail {
                    self.group.difference(a, b)
                } else {
                    self.group.difference(b, a)
                };
                if diff == self.y[e] {
                    gained += 1;
                }
            }
            self.descend(vertex + 1, agreements + gained);
        }
    }
}
