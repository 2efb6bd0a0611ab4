//! Run a sweep from a JSON config file and write CSV plus JSON.
//!
//! cargo run --release --example sweep_config [config.json]

use groupsync::experiment::{run_sweep, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sweep.json").into());
    let mut cfg = ExperimentConfig::load(&path)?;
    let out = std::env::temp_dir().join("groupsync-sweep.csv");
    cfg.output = Some(out.clone());
    let result = run_sweep(&cfg)?;
    print!("{}", result.to_csv()?);
    eprintln!("wrote {} and its .json sibling", out.display());
    Ok(())
}
