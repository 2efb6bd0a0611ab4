//! Finite-group synchronization on graphs.
//!
//! Vertices carry hidden elements of a finite group; every directed edge
//! `(u, v)` reports the difference `x(u)⁻¹·x(v)` through a noisy channel that
//! is correct with probability `1 - p` and otherwise uniformly wrong. The crate
//! provides:
//!
//! - [`group`]: Cayley tables for cyclic, symmetric and product groups.
//! - [`graph`]: complete digraphs, lattices, edge-list I/O, independent sets.
//! - [`model`]: the sampler for labelings and observations, and the likelihood.
//! - [`estimators`]: trivial, triangle-voting and exhaustive MAP estimators.
//! - [`bounds`]: two-hop vote probabilities, the triangle failure bound and
//!   the offset-vertex bounds for sparse graphs.
//! - [`experiment`]: seeded trials, offset-vertex detection and sweeps.
//! - [`verify`]: a self-contained property suite used by the `verify` command.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod bounds;
pub mod estimators;
pub mod experiment;
pub mod graph;
pub mod group;
pub mod model;
pub mod verify;

pub use estimators::{EstimatorKind, Orbit, VoteTally};
pub use graph::{DiGraph, VertexSet};
pub use group::GroupTable;
pub use model::{EdgeLabeling, SyncProblem, TrialStream, VertexLabeling};
