use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use groupsync::bounds::{
    critical_flip_prob, offset_exists_lower_bound, recovery_failure_bound, two_hop_correct_prob,
    two_hop_wrong_prob,
};
use groupsync::estimators::EstimatorKind;
use groupsync::experiment::{
    run_sweep, run_trial, CellContext, ExperimentConfig, ExperimentError, GraphSpec, GroupSpec,
};
use groupsync::verify;

const EXIT_PROPERTY_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "groupsync", version, about = "Finite-group synchronization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded trial and print its result as JSON.
    Simulate {
        /// complete:N | lattice:SIDE,DIM | file:PATH
        #[arg(long)]
        graph: String,
        /// cyclic:K | sym:K | prod:A*B
        #[arg(long)]
        group: String,
        #[arg(long)]
        p: f64,
        /// trivial | triangle | map
        #[arg(long, default_value = "triangle")]
        estimator: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the sampled labeling and observations here.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Run a sweep from a JSON config and print the CSV summary.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Override the worker count from the config.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print closed-form probabilities and bounds as CSV.
    Bounds {
        #[arg(long)]
        group_order: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        n: usize,
        /// Degree bound for the offset-vertex bound.
        #[arg(long)]
        d: Option<usize>,
        /// Independent-set size for the offset-vertex bound.
        #[arg(long)]
        set_size: Option<usize>,
    },
    /// Run the property suite; exits 1 if any check fails.
    Verify,
}

fn simulate(
    graph: &str,
    group: &str,
    p: f64,
    estimator: &str,
    seed: u64,
    record: Option<PathBuf>,
) -> Result<(), ExperimentError> {
    let graph_spec: GraphSpec = graph.parse()?;
    let graph = graph_spec.build()?;
    let group_spec: GroupSpec = group.parse()?;
    let kind: EstimatorKind = estimator.parse()?;
    let size = match graph_spec {
        GraphSpec::Complete(n) => n,
        GraphSpec::Lattice { side, .. } => side,
        GraphSpec::File(_) => graph.n_vertices(),
    };
    let cell = CellContext::new(graph, group_spec.build()?, p, size, kind, seed)?;
    let result = run_trial(&cell, 0)?;
    if let Some(path) = record {
        let mut rec = cell.sample(0)?;
        rec.graph = graph_spec.to_string();
        rec.group = group_spec.to_string();
        std::fs::write(&path, serde_json::to_string_pretty(&rec)?)
            .map_err(|source| ExperimentError::Io { path, source })?;
    }
    println!("{}", serde_json::to_string(&result)?);
    Ok(())
}

fn bounds_row(
    order: usize,
    p: f64,
    n: usize,
    d: Option<usize>,
    set_size: Option<usize>,
) -> Result<String, String> {
    let f = two_hop_correct_prob(p, order).map_err(|e| e.to_string())?;
    let h = two_hop_wrong_prob(p, order).map_err(|e| e.to_string())?;
    let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let failure = recovery_failure_bound(n, p, order).ok();
    let offset = match (d, set_size) {
        (Some(d), Some(m)) => Some(offset_exists_lower_bound(p, d, order, m).map_err(|e| e.to_string())?),
        (None, None) => None,
        _ => return Err("--d and --set-size go together".into()),
    };
    Ok(format!(
        "group_order,p,n,f,h,p_c,failure_bound,offset_bound\n{order},{p},{n},{f},{h},{},{},{}",
        critical_flip_prob(order),
        fmt(failure),
        fmt(offset)
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<(), String> = match cli.command {
        Command::Simulate {
            graph,
            group,
            p,
            estimator,
            seed,
            record,
        } => simulate(&graph, &group, p, &estimator, seed, record).map_err(|e| e.to_string()),
        Command::Sweep { config, workers } => ExperimentConfig::load(&config)
            .and_then(|mut cfg| {
                if workers.is_some() {
                    cfg.workers = workers;
                }
                run_sweep(&cfg)
            })
            .and_then(|res| {
                for cell in res.cells.iter().filter(|c| c.error.is_some()) {
                    eprintln!("cell n={} p={}: {}", cell.n, cell.p, cell.error.as_deref().unwrap_or(""));
                }
                print!("{}", res.to_csv()?);
                Ok(())
            })
            .map_err(|e| e.to_string()),
        Command::Bounds {
            group_order,
            p,
            n,
            d,
            set_size,
        } => bounds_row(group_order, p, n, d, set_size).map(|row| println!("{row}")),
        Command::Verify => {
            let results = verify::run_all();
            for r in &results {
                println!("[{}] {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
            }
            if results.iter().all(|r| r.passed) {
                return ExitCode::SUCCESS;
            }
            return ExitCode::from(EXIT_PROPERTY_FAILURE);
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
