//! Sample a labeling and its noisy differences, then score candidates.
//!
//! cargo run --example noisy_observations

use groupsync::graph::DiGraph;
use groupsync::group::GroupTable;
use groupsync::model::{agreements, edge_differences, SyncProblem, TrialStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let graph = DiGraph::complete(6)?;
    let group = GroupTable::symmetric(3)?;
    let problem = SyncProblem::new(graph.clone(), group.clone(), 0.2)?;

    let stream = TrialStream::new(42);
    let x = problem.sample_vertex_labels(&stream);
    let y = problem.sample_observations(&x, &stream)?;
    let psi = edge_differences(&graph, &group, &x);

    println!("x = {:?}", x.as_slice());
    println!(
        "{} of {} observations are clean",
        agreements(&psi, &y),
        graph.n_edges()
    );
    println!("log-likelihood of the truth: {:.4}", problem.log_likelihood(&y, &psi)?);

    // A global shift is invisible to the observations.
    let shifted = x.translate(&group, 3);
    let psi2 = edge_differences(&graph, &group, &shifted);
    assert_eq!(psi, psi2);
    println!("shifted by element 3: same differences, same likelihood");
    Ok(())
}
