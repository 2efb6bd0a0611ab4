//! Complete digraphs, lattices, independent sets and the edge-list format.
//!
//! cargo run --example graphs

use groupsync::graph::DiGraph;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k5 = DiGraph::complete(5)?;
    println!("K5: {} vertices, {} directed edges", k5.n_vertices(), k5.n_edges());

    let grid = DiGraph::lattice(40, 2)?;
    let set = grid.greedy_independent_set();
    println!(
        "40x40 lattice: {} edges, max degree {}, greedy independent set of {}",
        grid.n_edges(),
        grid.max_degree(),
        set.len()
    );
    assert!(grid.is_independent(&set));

    let small = DiGraph::lattice(3, 2)?;
    let text = small.to_edge_list();
    print!("{text}");

    let dir = std::env::temp_dir().join("groupsync-graphs-example.txt");
    small.store(&dir)?;
    let back = DiGraph::load(&dir)?;
    assert_eq!(back.to_edge_list(), text);
    println!("round trip through {} ok", dir.display());
    Ok(())
}
