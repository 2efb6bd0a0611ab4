//! Recovery frequency of the triangle estimator on complete digraphs.
//!
//! cargo run --release --example triangle_recovery [p]

use groupsync::bounds::{critical_flip_prob, recovery_failure_bound};
use groupsync::experiment::{run_sweep, ExperimentConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(0.1);
    let cfg = ExperimentConfig::from_json(&format!(
        r#"{{"graph":{{"family":"complete"}},"group":"cyclic:2","flip_probs":[{p}],
            "sizes":[10,20,30,40,60],"estimator":"triangle","trials":200,"seed":1}}"#
    ))?;
    println!("p = {p}, critical p = {}", critical_flip_prob(2));
    println!("{:>4} {:>10} {:>20} {:>12}", "n", "frequency", "95% interval", "bound");
    for cell in run_sweep(&cfg)?.cells {
        let bound = recovery_failure_bound(cell.n, p, 2)
            .map(|b| format!("{b:.3e}"))
            .unwrap_or_else(|_| "-".into());
        println!(
            "{:>4} {:>10.3} {:>9.3} - {:<8.3} {:>12}",
            cell.n, cell.frequency, cell.wilson_lo, cell.wilson_hi, bound
        );
    }
    Ok(())
}
