//! Two-hop probabilities and the recovery bounds across p.
//!
//! cargo run --example bounds_table [group order]

use groupsync::bounds::{
    critical_flip_prob, decay_quantity, recovery_failure_bound, two_hop_correct_prob,
    two_hop_wrong_prob,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    println!("|G| = {k}, p_c = {:.4}", critical_flip_prob(k));
    println!("{:>5} {:>8} {:>8} {:>14}", "p", "f", "h", "bound n=200");
    for i in 0..=20 {
        let p = i as f64 / 20.0;
        let bound = recovery_failure_bound(200, p, k)
            .map(|b| format!("{b:.3e}"))
            .unwrap_or_else(|_| "n/a".into());
        println!(
            "{p:>5.2} {:>8.4} {:>8.4} {bound:>14}",
            two_hop_correct_prob(p, k)?,
            two_hop_wrong_prob(p, k)?
        );
    }

    // Probability that no vertex in a set of a is offset, with degree d.
    for a in [10.0, 100.0, 1000.0] {
        println!("p=0.3 d=4 a={a}: {:.4}", decay_quantity(0.3, a, 4.0, (k - 1) as f64)?);
    }
    Ok(())
}
