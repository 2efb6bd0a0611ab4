//! The generative model: uniform vertex prior, edge differences, and the
//! uniform observation kernel with flip probability `p`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DiGraph;
use crate::group::GroupTable;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("flip probability {0} outside [0, 1]")]
    FlipProb(f64),
    #[error("group order {0} too small, synchronization needs at least 2 elements")]
    GroupTooSmall(usize),
    #[error("shape mismatch: expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("label {label} at position {position} is not an element of a group of order {order}")]
    Label {
        label: usize,
        position: usize,
        order: usize,
    },
    #[error("log-likelihood is infinite for flip probability {0}; compare agreement counts instead")]
    InfiniteLog(f64),
}

/// A group element per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexLabeling(pub Vec<usize>);

/// A group element per edge, aligned with the graph's edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeLabeling(pub Vec<usize>);

impl VertexLabeling {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Global left translation `u ↦ g·x(u)`.
    pub fn translate(&self, group: &GroupTable, g: usize) -> Self {
        Self(self.0.iter().map(|&a| group.mul(g, a)).collect())
    }
}

impl EdgeLabeling {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Deterministic randomness for one trial.
///
/// Vertex labels come from ChaCha stream 0 and edge `i` draws from stream
/// `i + 1`, so observation sampling does not depend on the order in which
/// edges are visited.
#[derive(Debug, Clone)]
pub struct TrialStream {
    seed: u64,
    base: ChaCha8Rng,
}

impl TrialStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            base: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn vertex_rng(&self) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(0);
        rng
    }

    pub fn edge_rng(&self, edge: usize) -> ChaCha8Rng {
        let mut rng = self.base.clone();
        rng.set_stream(edge as u64 + 1);
        rng
    }
}

/// i.i.d. uniform group elements, one per vertex.
pub fn sample_uniform_labels<R: Rng + ?Sized>(
    group: &GroupTable,
    n_vertices: usize,
    rng: &mut R,
) -> VertexLabeling {
    VertexLabeling(
        (0..n_vertices)
            .map(|_| rng.random_range(0..group.order()))
            .collect(),
    )
}

/// One noise draw of the uniform kernel: identity with probability `1 - p`,
/// otherwise uniform over the non-identity elements.
pub fn sample_noise<R: Rng + ?Sized>(group: &GroupTable, flip_prob: f64, rng: &mut R) -> usize {
    let e = group.identity();
    let u: f64 = rng.random();
    if u >= flip_prob || group.order() < 2 {
        return e;
    }
    let r = rng.random_range(0..group.order() - 1);
    if r >= e {
        r + 1
    } else {
        r
    }
}

/// A synchronization instance: graph, group, uniform prior, and uniform
/// observation kernel with flip probability `flip_prob`.
#[derive(Debug, Clone)]
pub struct SyncProblem {
    graph: DiGraph,
    group: GroupTable,
    flip_prob: f64,
}

impl SyncProblem {
    pub fn new(graph: DiGraph, group: GroupTable, flip_prob: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&flip_prob) {
            return Err(ModelError::FlipProb(flip_prob));
        }
        if group.order() < 2 {
            return Err(ModelError::GroupTooSmall(group.order()));
        }
        Ok(Self {
            graph,
            group,
            flip_prob,
        })
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn flip_prob(&self) -> f64 {
        self.flip_prob
    }

    /// Checks length and element range of a vertex labeling.
    pub fn check_vertex_labeling(&self, x: &VertexLabeling) -> Result<(), ModelError> {
        check_labels(x.as_slice(), self.graph.n_vertices(), self.group.order())
    }

    pub fn check_edge_labeling(&self, y: &EdgeLabeling) -> Result<(), ModelError> {
        check_labels(y.as_slice(), self.graph.n_edges(), self.group.order())
    }

    /// `ψ(x)(u, v) = x(u)⁻¹·x(v)` in edge order.
    pub fn edge_differences(&self, x: &VertexLabeling) -> Result<EdgeLabeling, ModelError> {
        self.check_vertex_labeling(x)?;
        Ok(edge_differences(&self.graph, &self.group, x))
    }

    pub fn sample_vertex_labels(&self, stream: &TrialStream) -> VertexLabeling {
        sample_uniform_labels(&self.group, self.graph.n_vertices(), &mut stream.vertex_rng())
    }

    /// Observations `Y(u, v) = x(u)⁻¹·x(v)·N(u, v)` with independent noise per edge.
    pub fn sample_observations(
        &self,
        x: &VertexLabeling,
        stream: &TrialStream,
    ) -> Result<EdgeLabeling, ModelError> {
        let truth = self.edge_differences(x)?;
        let y = truth
            .0
            .iter()
            .enumerate()
            .map(|(e, &d)| {
                let noise = sample_noise(&self.group, self.flip_prob, &mut stream.edge_rng(e));
                self.group.mul(d, noise)
            })
            .collect();
        Ok(EdgeLabeling(y))
    }

    /// `log Q(y | ψ)`: each agreeing edge contributes `log(1 - p)`, each
    /// disagreeing edge `log(p / (|G| - 1))`.
    pub fn log_likelihood(&self, y: &EdgeLabeling, psi_x: &EdgeLabeling) -> Result<f64, ModelError> {
        let p = self.flip_prob;
        if p <= 0.0 || p >= 1.0 {
            return Err(ModelError::InfiniteLog(p));
        }
        let m = self.graph.n_edges();
        if y.len() != m || psi_x.len() != m {
            return Err(ModelError::Shape {
                expected: m,
                got: if y.len() != m { y.len() } else { psi_x.len() },
            });
        }
        let agree = agreements(y, psi_x);
        let (log_agree, log_disagree) = self.edge_log_weights();
        Ok(agree as f64 * log_agree + (m - agree) as f64 * log_disagree)
    }

    /// `(log(1 - p), log(p / (|G| - 1)))`.
    pub fn edge_log_weights(&self) -> (f64, f64) {
        let p = self.flip_prob;
        (
            (1.0 - p).ln(),
            (p / (self.group.order() - 1) as f64).ln(),
        )
    }
}

/// ψ without validation; labels must already be in range.
pub fn edge_differences(graph: &DiGraph, group: &GroupTable, x: &VertexLabeling) -> EdgeLabeling {
    EdgeLabeling(
        graph
            .edges()
            .iter()
            .map(|&(u, v)| group.difference(x.0[u], x.0[v]))
            .collect(),
    )
}

/// Number of positions where the two labelings agree.
pub fn agreements(a: &EdgeLabeling, b: &EdgeLabeling) -> usize {
    a.0.iter().zip(&b.0).filter(|(x, y)| x == y).count()
}

fn check_labels(labels: &[usize], expected: usize, order: usize) -> Result<(), ModelError> {
    if labels.len() != expected {
        return Err(ModelError::Shape {
            expected,
            got: labels.len(),
        });
    }
    if let Some((position, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= order) {
        return Err(ModelError::Label {
            label,
            position,
            order,
        });
    }
    Ok(())
}

/// A sampled trial bundled for serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub graph: String,
    pub group: String,
    pub flip_prob: f64,
    pub x: VertexLabeling,
    pub y: EdgeLabeling,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> GroupTable {
        GroupTable::cyclic(n).unwrap()
    }

    #[test]
    fn constant_labeling_has_identity_differences() {
        let prob = SyncProblem::new(DiGraph::lattice(3, 2).unwrap(), z(5), 0.1).unwrap();
        let x = VertexLabeling(vec![3; 9]);
        let psi = prob.edge_differences(&x).unwrap();
        assert!(psi.0.iter().all(|&d| d == 0));
    }

    #[test]
    fn z2_single_edge_difference() {
        let prob = SyncProblem::new(DiGraph::new(2, vec![(0, 1)]).unwrap(), z(2), 0.1).unwrap();
        let psi = prob.edge_differences(&VertexLabeling(vec![0, 1])).unwrap();
        assert_eq!(psi.0, vec![1]);
    }

    #[test]
    fn translation_leaves_differences_unchanged() {
        let s3 = GroupTable::symmetric(3).unwrap();
        let prob = SyncProblem::new(DiGraph::complete(4).unwrap(), s3.clone(), 0.2).unwrap();
        let x = VertexLabeling(vec![1, 4, 5, 2]);
        let psi = prob.edge_differences(&x).unwrap();
        for g in 0..6 {
            assert_eq!(prob.edge_differences(&x.translate(&s3, g)).unwrap(), psi);
        }
    }

    #[test]
    fn shape_and_label_errors() {
        let prob = SyncProblem::new(DiGraph::complete(3).unwrap(), z(2), 0.1).unwrap();
        assert!(matches!(
            prob.edge_differences(&VertexLabeling(vec![0, 1])),
            Err(ModelError::Shape { expected: 3, got: 2 })
        ));
        assert!(matches!(
            prob.edge_differences(&VertexLabeling(vec![0, 1, 2])),
            Err(ModelError::Label { .. })
        ));
    }

    #[test]
    fn problem_validation() {
        let g = DiGraph::complete(3).unwrap();
        assert!(SyncProblem::new(g.clone(), z(2), 1.5).is_err());
        assert!(SyncProblem::new(g.clone(), z(2), -0.1).is_err());
        assert!(matches!(
            SyncProblem::new(g.clone(), z(1), 0.1),
            Err(ModelError::GroupTooSmall(1))
        ));
        assert!(SyncProblem::new(g.clone(), z(2), 0.0).is_ok());
        assert!(SyncProblem::new(g, z(2), 1.0).is_ok());
    }

    #[test]
    fn trivial_group_samples_identity() {
        let z1 = z(1);
        let mut rng = TrialStream::new(3).vertex_rng();
        let x = sample_uniform_labels(&z1, 50, &mut rng);
        assert!(x.0.iter().all(|&a| a == 0));
    }

    #[test]
    fn uniform_labels_frequency() {
        let z4 = z(4);
        let n = 100_000;
        let x = sample_uniform_labels(&z4, n, &mut TrialStream::new(11).vertex_rng());
        let q = 0.25;
        let sigma = (n as f64 * q * (1.0 - q)).sqrt();
        for a in 0..4 {
            let count = x.0.iter().filter(|&&v| v == a).count() as f64;
            assert!((count - n as f64 * q).abs() <= 3.0 * sigma, "element {a}: {count}");
        }
    }

    #[test]
    fn same_seed_same_labels() {
        let prob = SyncProblem::new(DiGraph::complete(10).unwrap(), z(3), 0.3).unwrap();
        let s = TrialStream::new(99);
        let x1 = prob.sample_vertex_labels(&s);
        let x2 = prob.sample_vertex_labels(&TrialStream::new(99));
        assert_eq!(x1, x2);
        assert_eq!(
            prob.sample_observations(&x1, &s).unwrap(),
            prob.sample_observations(&x2, &TrialStream::new(99)).unwrap()
        );
        assert_ne!(x1, prob.sample_vertex_labels(&TrialStream::new(100)));
    }

    #[test]
    fn noiseless_observations_equal_truth() {
        let prob = SyncProblem::new(DiGraph::complete(6).unwrap(), z(3), 0.0).unwrap();
        let s = TrialStream::new(5);
        let x = prob.sample_vertex_labels(&s);
        assert_eq!(
            prob.sample_observations(&x, &s).unwrap(),
            prob.edge_differences(&x).unwrap()
        );
    }

    #[test]
    fn full_flip_on_z2_flips_everything() {
        let prob = SyncProblem::new(DiGraph::complete(6).unwrap(), z(2), 1.0).unwrap();
        let s = TrialStream::new(5);
        let x = prob.sample_vertex_labels(&s);
        let y = prob.sample_observations(&x, &s).unwrap();
        let psi = prob.edge_differences(&x).unwrap();
        assert!(y.0.iter().zip(&psi.0).all(|(a, b)| a != b));
    }

    #[test]
    fn wrong_values_split_evenly() {
        // 100_000 edges via a star-free trick: many disjoint single edges.
        let n_edges = 100_000;
        let edges: Vec<_> = (0..n_edges).map(|i| (2 * i, 2 * i + 1)).collect();
        let graph = DiGraph::new(2 * n_edges, edges).unwrap();
        let prob = SyncProblem::new(graph, z(4), 0.3).unwrap();
        let s = TrialStream::new(2024);
        let x = prob.sample_vertex_labels(&s);
        let y = prob.sample_observations(&x, &s).unwrap();
        let psi = prob.edge_differences(&x).unwrap();
        let n = n_edges as f64;
        let mut wrong = 0usize;
        let mut by_offset = [0usize; 4];
        for (&obs, &d) in y.0.iter().zip(&psi.0) {
            // Noise element N = d⁻¹·obs.
            let noise = prob.group().difference(d, obs);
            by_offset[noise] += 1;
            if obs != d {
                wrong += 1;
            }
        }
        let check = |count: usize, q: f64| {
            let sigma = (n * q * (1.0 - q)).sqrt();
            assert!((count as f64 - n * q).abs() <= 3.0 * sigma, "{count} vs {q}");
        };
        check(wrong, 0.3);
        for &c in &by_offset[1..] {
            check(c, 0.1);
        }
    }

    #[test]
    fn edge_streams_are_order_independent() {
        let s = TrialStream::new(7);
        let forward: Vec<u64> = (0..20).map(|e| s.edge_rng(e).random()).collect();
        let backward: Vec<u64> = (0..20).rev().map(|e| s.edge_rng(e).random()).collect();
        let mut reversed = backward;
        reversed.reverse();
        assert_eq!(forward, reversed);
    }

    #[test]
    fn log_likelihood_values() {
        let path = DiGraph::new(6, (0..5).map(|i| (i, i + 1)).collect()).unwrap();
        let prob = SyncProblem::new(path, z(3), 0.25).unwrap();
        let psi = EdgeLabeling(vec![0, 1, 2, 0, 1]);
        let ll = prob.log_likelihood(&psi, &psi).unwrap();
        assert!((ll - 5.0 * 0.75f64.ln()).abs() < 1e-12);

        let path3 = DiGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let prob = SyncProblem::new(path3, z(2), 0.25).unwrap();
        let ll = prob
            .log_likelihood(&EdgeLabeling(vec![0, 1, 1]), &EdgeLabeling(vec![0, 1, 0]))
            .unwrap();
        assert!((ll - 0.140625f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log_likelihood_rejects_degenerate_p() {
        let g = DiGraph::complete(3).unwrap();
        let y = EdgeLabeling(vec![0; 6]);
        for p in [0.0, 1.0] {
            let prob = SyncProblem::new(g.clone(), z(2), p).unwrap();
            assert_eq!(prob.log_likelihood(&y, &y), Err(ModelError::InfiniteLog(p)));
        }
    }

    #[test]
    fn likelihood_normalizes_over_all_observations() {
        // Exhaustive sum of Q(y | ψ) over y ∈ G^E for |E| <= 3, |G| <= 3.
        let graphs = [
            DiGraph::new(2, vec![(0, 1)]).unwrap(),
            DiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap(),
            DiGraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap(),
        ];
        for graph in graphs {
            for order in [2, 3] {
                let prob = SyncProblem::new(graph.clone(), z(order), 0.37).unwrap();
                let m = graph.n_edges();
                let psi = prob
                    .edge_differences(&VertexLabeling((0..graph.n_vertices()).map(|v| v % order).collect()))
                    .unwrap();
                let mut total = 0.0;
                for code in 0..order.pow(m as u32) {
                    let y: Vec<usize> = (0..m).map(|i| (code / order.pow(i as u32)) % order).collect();
                    total += prob.log_likelihood(&EdgeLabeling(y), &psi).unwrap().exp();
                }
                assert!((total - 1.0).abs() < 1e-12, "sum = {total}");
            }
        }
    }

    #[test]
    fn observations_on_two_edges_factorize() {
        let graph = DiGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let prob = SyncProblem::new(graph, z(2), 0.3).unwrap();
        let x = VertexLabeling(vec![0, 0, 0]);
        let trials = 40_000u64;
        let mut joint = [[0usize; 2]; 2];
        for t in 0..trials {
            let y = prob.sample_observations(&x, &TrialStream::new(t)).unwrap();
            joint[y.0[0]][y.0[1]] += 1;
        }
        let n = trials as f64;
        for a in 0..2 {
            for b in 0..2 {
                let q = [0.7, 0.3][a] * [0.7, 0.3][b];
                let sigma = (n * q * (1.0 - q)).sqrt();
                assert!((joint[a][b] as f64 - n * q).abs() <= 4.0 * sigma);
            }
        }
    }

    #[test]
    fn labeling_json() {
        let x = VertexLabeling(vec![0, 2, 1]);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[0,2,1]");
        let back: VertexLabeling = serde_json::from_str("[0,2,1]").unwrap();
        assert_eq!(back, x);
    }
}
