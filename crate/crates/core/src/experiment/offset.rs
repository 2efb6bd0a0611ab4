//! Offset-vertex events: a vertex whose every incident observation is what
//! the truth would produce if that vertex's label were `x(u)·g`.

use crate::graph::{DiGraph, VertexSet};
use crate::group::GroupTable;
use crate::model::{EdgeLabeling, VertexLabeling};

/// The labeling `x̄` with `x̄(u0) = x(u0)·g` and `x̄ = x` elsewhere.
pub fn shifted_labeling(
    group: &GroupTable,
    x: &VertexLabeling,
    u0: usize,
    g: usize,
) -> VertexLabeling {
    let mut out = x.clone();
    out.0[u0] = group.mul(x.0[u0], g);
    out
}

/// Value an edge incident to `u` reads when `u` is offset by `g`:
/// `(x(u)·g)⁻¹·x(w)` on `(u, w)` and `x(w)⁻¹·x(u)·g` on `(w, u)`.
fn offset_value(
    graph: &DiGraph,
    group: &GroupTable,
    x: &VertexLabeling,
    u: usize,
    g: usize,
    edge: usize,
) -> usize {
    let (a, b) = graph.edges()[edge];
    let shifted = group.mul(x.0[u], g);
    if a == u {
        group.difference(shifted, x.0[b])
    } else {
        group.difference(x.0[a], shifted)
    }
}

/// True when every observation on an edge touching `u` is offset by `g`.
/// Isolated vertices never qualify.
pub fn is_offset_vertex(
    graph: &DiGraph,
    group: &GroupTable,
    x: &VertexLabeling,
    y: &EdgeLabeling,
    u: usize,
    g: usize,
) -> bool {
    let incident = graph.incident_edges(u);
    !incident.is_empty()
        && incident
            .iter()
            .all(|&e| y.0[e] == offset_value(graph, group, x, u, g, e))
}

/// First candidate (in sorted order) that is an offset vertex for `g`.
pub fn detect_offset_vertex(
    group: &GroupTable,
    graph: &DiGraph,
    x: &VertexLabeling,
    y: &EdgeLabeling,
    g: usize,
    candidates: &VertexSet,
) -> Option<usize> {
    debug_assert_ne!(g, group.identity());
    candidates
        .iter()
        .copied()
        .find(|&u| is_offset_vertex(graph, group, x, y, u, g))
}

/// Overwrites the observations around `u0` so that `u0` is offset by `g`.
pub fn plant_offset(
    graph: &DiGraph,
    group: &GroupTable,
    x: &VertexLabeling,
    y: &mut EdgeLabeling,
    u0: usize,
    g: usize,
) {
    for &e in graph.incident_edges(u0) {
        y.0[e] = offset_value(graph, group, x, u0, g, e);
    }
}
