//! Offset vertices on a lattice: the truth is beaten by a one-vertex shift,
//! so no estimator recovers exactly.
//!
//! cargo run --release --example map_impossibility

use groupsync::bounds::offset_exists_lower_bound;
use groupsync::estimators::{map_estimator, EstimatorKind};
use groupsync::experiment::{detect_offset_vertex, shifted_labeling, CellContext};
use groupsync::graph::DiGraph;
use groupsync::group::GroupTable;
use groupsync::model::{edge_differences, SyncProblem, TrialStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = 0.3;
    let cell = CellContext::new(
        DiGraph::lattice(40, 2)?,
        GroupTable::cyclic(2)?,
        p,
        40,
        EstimatorKind::Map,
        9,
    )?;
    let (graph, group) = (cell.problem.graph(), cell.problem.group());
    let g = cell.offset_element;
    let mut hits = 0;
    for t in 0..100 {
        let rec = cell.sample(t)?;
        if let Some(u) = detect_offset_vertex(group, graph, &rec.x, &rec.y, g, &cell.candidates) {
            hits += 1;
            if hits == 1 {
                let ll = |x| cell.problem.log_likelihood(&rec.y, &edge_differences(graph, group, x));
                let shifted = shifted_labeling(group, &rec.x, u, g);
                println!(
                    "trial {t}: vertex {u} is offset; LL(truth) = {:.3}, LL(shifted) = {:.3}",
                    ll(&rec.x)?,
                    ll(&shifted)?
                );
            }
        }
    }
    let bound = offset_exists_lower_bound(p, graph.max_degree(), 2, cell.candidates.len())?;
    println!("offset event in {hits}/100 trials; lower bound on its probability {bound:.4}");

    // On a small path the exact MAP estimate is available and fails too.
    let path = DiGraph::new(6, (0..5).map(|i| (i, i + 1)).collect())?;
    let problem = SyncProblem::new(path.clone(), GroupTable::cyclic(2)?, p)?;
    for seed in 0.. {
        let stream = TrialStream::new(seed);
        let x = problem.sample_vertex_labels(&stream);
        let y = problem.sample_observations(&x, &stream)?;
        let all = groupsync::VertexSet::all(6);
        if detect_offset_vertex(problem.group(), &path, &x, &y, 1, &all).is_some() {
            let est = map_estimator(&problem, &y)?;
            let wrong = est.edge_labeling(&path, problem.group()) != edge_differences(&path, problem.group(), &x);
            println!("path of 6, seed {seed}: offset vertex present, MAP wrong = {wrong}");
            break;
        }
    }
    Ok(())
}
