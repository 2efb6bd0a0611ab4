//! Seeded Monte Carlo experiments.
//!
//! A sweep is a grid of cells `(size, p)`. Each trial of a cell draws its own
//! [`TrialStream`] from `(master seed, size, p, trial index)`, so results do
//! not depend on scheduling or on the number of worker threads.

mod offset;
mod stats;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{offset_exists_lower_bound, recovery_failure_bound};
use crate::estimators::{
    edge_errors, map_estimator, map_search_size, trivial_estimator, triangle_estimator,
    EstimatorError, EstimatorKind, MAP_BUDGET,
};
use crate::graph::{DiGraph, GraphError, VertexSet};
use crate::group::{GroupError, GroupTable};
use crate::model::{ModelError, SyncProblem, TrialRecord, TrialStream};

pub use offset::{detect_offset_vertex, is_offset_vertex, plant_offset, shifted_labeling};
pub use stats::{binomial_sd, wilson_interval, Z_95};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl ExperimentError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// `complete:N`, `lattice:SIDE,DIM` or `file:PATH`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    Complete(usize),
    Lattice { side: usize, dim: usize },
    File(PathBuf),
}

impl GraphSpec {
    pub fn build(&self) -> Result<DiGraph, ExperimentError> {
        Ok(match self {
            GraphSpec::Complete(n) => DiGraph::complete(*n)?,
            GraphSpec::Lattice { side, dim } => DiGraph::lattice(*side, *dim)?,
            GraphSpec::File(path) => DiGraph::load(path)?,
        })
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize, ExperimentError> {
    s.trim()
        .parse()
        .map_err(|_| ExperimentError::Config(format!("invalid {what}: {s:?}")))
}

impl FromStr for GraphSpec {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| ExperimentError::Config(format!("graph spec {s:?} lacks ':'")))?;
        match kind {
            "complete" => Ok(GraphSpec::Complete(parse_usize(arg, "vertex count")?)),
            "lattice" => {
                let (side, dim) = arg.split_once(',').ok_or_else(|| {
                    ExperimentError::Config(format!("lattice spec {arg:?} must be SIDE,DIM"))
                })?;
                Ok(GraphSpec::Lattice {
                    side: parse_usize(side, "lattice side")?,
                    dim: parse_usize(dim, "lattice dimension")?,
                })
            }
            "file" if !arg.is_empty() => Ok(GraphSpec::File(PathBuf::from(arg))),
            _ => Err(ExperimentError::Config(format!("unknown graph spec {s:?}"))),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Lattice { side, dim } => write!(f, "lattice:{side},{dim}"),
            GraphSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// `cyclic:K`, `sym:K`, or `prod:A*B` with `A`, `B` group specs
/// (right-associative, so `prod:cyclic:2*prod:cyclic:2*cyclic:3` nests).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Symmetric(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupTable, ExperimentError> {
        Ok(match self {
            GroupSpec::Cyclic(k) => GroupTable::cyclic(*k)?,
            GroupSpec::Symmetric(k) => GroupTable::symmetric(*k)?,
            GroupSpec::Product(a, b) => GroupTable::direct_product(&a.build()?, &b.build()?)?,
        })
    }
}

impl FromStr for GroupSpec {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| ExperimentError::Config(format!("group spec {s:?} lacks ':'")))?;
        match kind {
            "cyclic" => Ok(GroupSpec::Cyclic(parse_usize(arg, "cyclic order")?)),
            "sym" => Ok(GroupSpec::Symmetric(parse_usize(arg, "symmetric degree")?)),
            "prod" => {
                let (a, b) = arg.split_once('*').ok_or_else(|| {
                    ExperimentError::Config(format!("product spec {arg:?} must be A*B"))
                })?;
                Ok(GroupSpec::Product(Box::new(a.parse()?), Box::new(b.parse()?)))
            }
            _ => Err(ExperimentError::Config(format!("unknown group spec {s:?}"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(k) => write!(f, "cyclic:{k}"),
            GroupSpec::Symmetric(k) => write!(f, "sym:{k}"),
            GroupSpec::Product(a, b) => write!(f, "prod:{a}*{b}"),
        }
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Graph family of a sweep; the cell size picks the member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GraphFamily {
    /// `K_n` with `n` = size.
    Complete,
    /// `{0..size}^dim`.
    Lattice { dim: usize },
    /// A fixed graph; size must be its vertex count (or sizes left empty).
    File { path: PathBuf },
}

impl GraphFamily {
    pub fn spec(&self, size: usize) -> GraphSpec {
        match self {
            GraphFamily::Complete => GraphSpec::Complete(size),
            GraphFamily::Lattice { dim } => GraphSpec::Lattice { side: size, dim: *dim },
            GraphFamily::File { path } => GraphSpec::File(path.clone()),
        }
    }
}

fn default_trials() -> usize {
    1
}

/// A sweep over `sizes × flip_probs`, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub graph: GraphFamily,
    pub group: GroupSpec,
    pub flip_probs: Vec<f64>,
    #[serde(default)]
    pub sizes: Vec<usize>,
    pub estimator: String,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// CSV path; the JSON summary goes next to it with a `.json` extension.
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Worker threads; `None` uses rayon's default pool. Never affects results.
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| ExperimentError::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn estimator_kind(&self) -> Result<EstimatorKind, ExperimentError> {
        self.estimator
            .parse()
            .map_err(|e: EstimatorError| ExperimentError::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if self.flip_probs.is_empty() {
            return bad("flip_probs is empty".into());
        }
        if let Some(p) = self.flip_probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return bad(format!("flip probability {p} outside [0, 1]"));
        }
        if self.workers == Some(0) {
            return bad("workers must be >= 1".into());
        }
        self.estimator_kind()?;
        match &self.graph {
            GraphFamily::Complete => {
                if self.sizes.is_empty() || self.sizes.iter().any(|&n| n < 2) {
                    return bad("complete graphs need sizes >= 2".into());
                }
            }
            GraphFamily::Lattice { dim } => {
                if *dim == 0 || self.sizes.is_empty() || self.sizes.iter().any(|&s| s < 2) {
                    return bad("lattices need dim >= 1 and sides >= 2".into());
                }
            }
            GraphFamily::File { .. } => {}
        }
        Ok(())
    }
}

/// Everything a trial in one `(size, p)` cell needs, built once per cell.
#[derive(Debug, Clone)]
pub struct CellContext {
    pub size: usize,
    pub problem: SyncProblem,
    pub estimator: EstimatorKind,
    /// Vertices scanned for offset events (greedy independent set).
    pub candidates: VertexSet,
    /// Offset element, the first non-identity element.
    pub offset_element: usize,
    pub master_seed: u64,
}

impl CellContext {
    pub fn new(
        graph: DiGraph,
        group: GroupTable,
        flip_prob: f64,
        size: usize,
        estimator: EstimatorKind,
        master_seed: u64,
    ) -> Result<Self, ExperimentError> {
        let candidates = graph.greedy_independent_set();
        let problem = SyncProblem::new(graph, group, flip_prob)?;
        let offset_element = problem
            .group()
            .first_non_identity()
            .expect("SyncProblem guarantees order >= 2");
        Ok(Self {
            size,
            problem,
            estimator,
            candidates,
            offset_element,
            master_seed,
        })
    }

    /// Seed of trial `index` in this cell.
    pub fn trial_seed(&self, index: u64) -> u64 {
        derive_trial_seed(self.master_seed, self.size, self.problem.flip_prob(), index)
    }

    /// True when the MAP estimator would exceed its enumeration budget.
    pub fn map_over_budget(&self) -> bool {
        map_search_size(&self.problem).is_none_or(|s| s > MAP_BUDGET)
    }

    /// Draws the hidden labeling and observations of trial `index`.
    pub fn sample(&self, index: u64) -> Result<TrialRecord, ExperimentError> {
        let seed = self.trial_seed(index);
        let stream = TrialStream::new(seed);
        let x = self.problem.sample_vertex_labels(&stream);
        let y = self.problem.sample_observations(&x, &stream)?;
        Ok(TrialRecord {
            seed,
            graph: format!(
                "n_vertices={},n_edges={}",
                self.problem.graph().n_vertices(),
                self.problem.graph().n_edges()
            ),
            group: format!("order={}", self.problem.group().order()),
            flip_prob: self.problem.flip_prob(),
            x,
            y,
        })
    }
}

/// Mixes `(master, size, p, index)` into a trial seed.
pub fn derive_trial_seed(master: u64, size: usize, flip_prob: f64, index: u64) -> u64 {
    let mut h = stats::mix64(master);
    for word in [size as u64, flip_prob.to_bits(), index] {
        h = stats::mix64(h ^ word);
    }
    h
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub seed: u64,
    pub n: usize,
    pub p: f64,
    pub exact_recovery: bool,
    /// Edges where the estimate differs from ψ(x). `None` when the MAP
    /// budget was exceeded and only the offset-event implication was used.
    pub edge_error_count: Option<usize>,
    pub offset_vertex_found: Option<usize>,
    /// True when `exact_recovery` is only an upper bound (MAP over budget:
    /// an offset event proves failure, its absence proves nothing).
    pub recovery_upper_bound_only: bool,
    pub wall_time: f64,
}

/// Runs trial `index` of a cell.
pub fn run_trial(cell: &CellContext, index: u64) -> Result<TrialResult, ExperimentError> {
    let start = Instant::now();
    let record = cell.sample(index)?;
    let problem = &cell.problem;
    let truth = problem.edge_differences(&record.x)?;
    let offset = detect_offset_vertex(
        problem.group(),
        problem.graph(),
        &record.x,
        &record.y,
        cell.offset_element,
        &cell.candidates,
    );

    let estimate = match cell.estimator {
        EstimatorKind::Trivial => Some(trivial_estimator(&record.y)),
        EstimatorKind::Triangle => Some(triangle_estimator(problem, &record.y)?),
        EstimatorKind::Map if cell.map_over_budget() => None,
        EstimatorKind::Map => Some(
            map_estimator(problem, &record.y)?.edge_labeling(problem.graph(), problem.group()),
        ),
    };
    let (exact_recovery, edge_error_count, upper_only) = match estimate {
        Some(est) => {
            let errors = edge_errors(&est, &truth);
            (errors == 0, Some(errors), false)
        }
        None => (offset.is_none(), None, true),
    };
    Ok(TrialResult {
        seed: record.seed,
        n: cell.size,
        p: problem.flip_prob(),
        exact_recovery,
        edge_error_count,
        offset_vertex_found: offset,
        recovery_upper_bound_only: upper_only,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Aggregate of one `(size, p)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub mean_edge_errors: Option<f64>,
    pub offset_events: usize,
    pub recovery_upper_bound_only: bool,
    /// Triangle-estimator failure bound on `K_n`, when defined.
    pub failure_bound: Option<f64>,
    /// Lower bound on the offset-event probability, when defined.
    pub offset_bound: Option<f64>,
    /// The bound reported in the CSV: `failure_bound` for the triangle
    /// estimator, `offset_bound` otherwise.
    pub analytic_bound: Option<f64>,
    pub error: Option<String>,
}

impl SweepCell {
    fn failed(n: usize, p: f64, error: String) -> Self {
        Self {
            n,
            p,
            trials: 0,
            successes: 0,
            frequency: 0.0,
            wilson_lo: 0.0,
            wilson_hi: 1.0,
            mean_edge_errors: None,
            offset_events: 0,
            recovery_upper_bound_only: false,
            failure_bound: None,
            offset_bound: None,
            analytic_bound: None,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub estimator: String,
    pub group: String,
    pub seed: u64,
    pub cells: Vec<SweepCell>,
}

pub const CSV_HEADER: [&str; 9] = [
    "n",
    "p",
    "trials",
    "successes",
    "frequency",
    "wilson_lo",
    "wilson_hi",
    "mean_edge_errors",
    "analytic_bound",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl SweepResult {
    pub fn to_csv(&self) -> Result<String, ExperimentError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER)?;
        for c in &self.cells {
            let freq = if c.trials == 0 {
                String::new()
            } else {
                c.frequency.to_string()
            };
            w.write_record([
                c.n.to_string(),
                c.p.to_string(),
                c.trials.to_string(),
                c.successes.to_string(),
                freq,
                c.wilson_lo.to_string(),
                c.wilson_hi.to_string(),
                opt(c.mean_edge_errors),
                opt(c.analytic_bound),
            ])?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| ExperimentError::Config(format!("csv flush: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String, ExperimentError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes `path` (CSV) and `path` with extension `.json`.
    pub fn write(&self, path: &Path) -> Result<(), ExperimentError> {
        std::fs::write(path, self.to_csv()?).map_err(|e| ExperimentError::io(path, e))?;
        let json_path = path.with_extension("json");
        std::fs::write(&json_path, self.to_json()?)
            .map_err(|e| ExperimentError::io(&json_path, e))?;
        Ok(())
    }
}

fn run_cell(
    cfg: &ExperimentConfig,
    kind: EstimatorKind,
    group: &GroupTable,
    size: usize,
    p: f64,
) -> Result<SweepCell, ExperimentError> {
    let graph = cfg.graph.spec(size).build()?;
    if let GraphFamily::File { .. } = cfg.graph {
        if size != graph.n_vertices() {
            return Err(ExperimentError::Config(format!(
                "size {size} does not match file graph with {} vertices",
                graph.n_vertices()
            )));
        }
    }
    let cell = CellContext::new(graph, group.clone(), p, size, kind, cfg.seed)?;
    let results = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(&cell, i))
        .collect::<Result<Vec<_>, _>>()?;

    let trials = results.len();
    let successes = results.iter().filter(|r| r.exact_recovery).count();
    let offset_events = results
        .iter()
        .filter(|r| r.offset_vertex_found.is_some())
        .count();
    let counted: Vec<usize> = results.iter().filter_map(|r| r.edge_error_count).collect();
    let mean_edge_errors = (!counted.is_empty())
        .then(|| counted.iter().sum::<usize>() as f64 / counted.len() as f64);
    let (wilson_lo, wilson_hi) = wilson_interval(successes, trials, Z_95);

    let graph = cell.problem.graph();
    let order = group.order();
    let failure_bound = if graph.is_complete() && graph.n_vertices() >= 3 {
        recovery_failure_bound(graph.n_vertices(), p, order).ok()
    } else {
        None
    };
    let offset_bound = if graph.max_degree() > 0 {
        offset_exists_lower_bound(p, graph.max_degree(), order, cell.candidates.len()).ok()
    } else {
        None
    };
    let analytic_bound = match kind {
        EstimatorKind::Triangle => failure_bound,
        _ => offset_bound,
    };
    Ok(SweepCell {
        n: size,
        p,
        trials,
        successes,
        frequency: successes as f64 / trials as f64,
        wilson_lo,
        wilson_hi,
        mean_edge_errors,
        offset_events,
        recovery_upper_bound_only: results.iter().any(|r| r.recovery_upper_bound_only),
        failure_bound,
        offset_bound,
        analytic_bound,
        error: None,
    })
}

/// Runs every cell of the sweep and, if `cfg.output` is set, writes the CSV
/// and JSON summaries. Cell-level failures are recorded in the cell.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, ExperimentError> {
    cfg.validate()?;
    let kind = cfg.estimator_kind()?;
    let group = cfg.group.build()?;
    let sizes = match (&cfg.graph, cfg.sizes.is_empty()) {
        (GraphFamily::File { path }, true) => vec![DiGraph::load(path)?.n_vertices()],
        _ => cfg.sizes.clone(),
    };

    let body = || {
        sizes
            .iter()
            .flat_map(|&n| cfg.flip_probs.iter().map(move |&p| (n, p)))
            .map(|(n, p)| {
                run_cell(cfg, kind, &group, n, p)
                    .unwrap_or_else(|e| SweepCell::failed(n, p, e.to_string()))
            })
            .collect::<Vec<_>>()
    };
    let cells = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| ExperimentError::Config(format!("thread pool: {e}")))?
            .install(body),
        None => body(),
    };

    let result = SweepResult {
        estimator: kind.name().to_string(),
        group: cfg.group.to_string(),
        seed: cfg.seed,
        cells,
    };
    if let Some(path) = &cfg.output {
        result.write(path)?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(json: &str) -> ExperimentConfig {
        ExperimentConfig::from_json(json).unwrap()
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("complete:30".parse::<GraphSpec>().unwrap(), GraphSpec::Complete(30));
        assert_eq!(
            "lattice:40,2".parse::<GraphSpec>().unwrap(),
            GraphSpec::Lattice { side: 40, dim: 2 }
        );
        assert_eq!(
            "file:/tmp/g.txt".parse::<GraphSpec>().unwrap(),
            GraphSpec::File("/tmp/g.txt".into())
        );
        assert!("grid:3".parse::<GraphSpec>().is_err());
        assert!("lattice:3".parse::<GraphSpec>().is_err());

        let g: GroupSpec = "prod:cyclic:2*prod:cyclic:2*sym:3".parse().unwrap();
        assert_eq!(g.to_string(), "prod:cyclic:2*prod:cyclic:2*sym:3");
        assert_eq!(g.build().unwrap().order(), 24);
        assert_eq!("sym:5".parse::<GroupSpec>().unwrap().build().unwrap().order(), 120);
        assert!("sym:6".parse::<GroupSpec>().unwrap().build().is_err());
        assert!("dihedral:4".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn config_validation() {
        let ok = r#"{"graph":{"family":"complete"},"group":"cyclic:2","flip_probs":[0.1],
                     "sizes":[10],"estimator":"triangle","trials":3,"seed":7}"#;
        assert_eq!(config(ok).trials, 3);
        for bad in [
            r#"{"graph":{"family":"complete"},"group":"cyclic:2","flip_probs":[1.5],"sizes":[10],"estimator":"triangle"}"#,
            r#"{"graph":{"family":"complete"},"group":"cyclic:2","flip_probs":[0.1],"sizes":[10],"estimator":"spectral"}"#,
            r#"{"graph":{"family":"complete"},"group":"cyclic:2","flip_probs":[0.1],"sizes":[10],"estimator":"map","trials":0}"#,
            r#"{"graph":{"family":"lattice","dim":2},"group":"cyclic:2","flip_probs":[0.1],"sizes":[1],"estimator":"map"}"#,
            r#"{"graph":{"family":"torus"},"group":"cyclic:2","flip_probs":[0.1],"sizes":[4],"estimator":"map"}"#,
        ] {
            assert!(matches!(
                ExperimentConfig::from_json(bad),
                Err(ExperimentError::Config(_))
            ));
        }
    }

    #[test]
    fn trial_is_deterministic() {
        let cell = CellContext::new(
            DiGraph::complete(12).unwrap(),
            GroupTable::cyclic(3).unwrap(),
            0.2,
            12,
            EstimatorKind::Triangle,
            99,
        )
        .unwrap();
        let a = run_trial(&cell, 5).unwrap();
        let b = run_trial(&cell, 5).unwrap();
        assert_eq!(
            (a.seed, a.exact_recovery, a.edge_error_count, a.offset_vertex_found),
            (b.seed, b.exact_recovery, b.edge_error_count, b.offset_vertex_found)
        );
        assert_ne!(cell.trial_seed(5), cell.trial_seed(6));
    }

    #[test]
    fn noiseless_trials_recover() {
        for (graph, kind) in [
            (DiGraph::complete(6).unwrap(), EstimatorKind::Trivial),
            (DiGraph::complete(6).unwrap(), EstimatorKind::Triangle),
            (DiGraph::complete(6).unwrap(), EstimatorKind::Map),
            (DiGraph::lattice(3, 2).unwrap(), EstimatorKind::Map),
        ] {
            let cell = CellContext::new(graph, GroupTable::cyclic(3).unwrap(), 0.0, 6, kind, 1)
                .unwrap();
            let r = run_trial(&cell, 0).unwrap();
            assert!(r.exact_recovery, "{kind}");
            assert_eq!(r.edge_error_count, Some(0));
        }
    }

    #[test]
    fn map_over_budget_uses_offset_implication() {
        let cell = CellContext::new(
            DiGraph::lattice(8, 2).unwrap(),
            GroupTable::cyclic(2).unwrap(),
            0.3,
            8,
            EstimatorKind::Map,
            3,
        )
        .unwrap();
        assert!(cell.map_over_budget());
        let r = run_trial(&cell, 0).unwrap();
        assert!(r.recovery_upper_bound_only);
        assert_eq!(r.edge_error_count, None);
        assert_eq!(r.exact_recovery, r.offset_vertex_found.is_none());
    }

    #[test]
    fn triangle_on_lattice_is_a_cell_error() {
        let cfg = config(
            r#"{"graph":{"family":"lattice","dim":2},"group":"cyclic:2","flip_probs":[0.1],
                "sizes":[3],"estimator":"triangle","trials":2}"#,
        );
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.cells.len(), 1);
        assert!(res.cells[0].error.is_some());
        assert_eq!(res.cells[0].trials, 0);
    }

    #[test]
    fn noiseless_sweep_is_perfect() {
        let cfg = config(
            r#"{"graph":{"family":"complete"},"group":"sym:3","flip_probs":[0.0],
                "sizes":[4,6],"estimator":"triangle","trials":1,"seed":5}"#,
        );
        let res = run_sweep(&cfg).unwrap();
        assert!(res.cells.iter().all(|c| c.frequency == 1.0 && c.trials == 1));
        let csv = res.to_csv().unwrap();
        assert!(csv.starts_with(
            "n,p,trials,successes,frequency,wilson_lo,wilson_hi,mean_edge_errors,analytic_bound\n"
        ));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn sweep_writes_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("sweep.csv");
        let mut cfg = config(
            r#"{"graph":{"family":"lattice","dim":1},"group":"cyclic:2","flip_probs":[0.3],
                "sizes":[5],"estimator":"map","trials":10,"seed":5}"#,
        );
        cfg.output = Some(out.clone());
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(std::fs::read_to_string(&out).unwrap(), res.to_csv().unwrap());
        let json: SweepResult =
            serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap())
                .unwrap();
        assert_eq!(json.cells.len(), 1);
        assert_eq!(json.cells[0].successes, res.cells[0].successes);
    }

    #[test]
    fn file_graph_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cycle.txt");
        DiGraph::new(5, (0..5).map(|i| (i, (i + 1) % 5)).collect())
            .unwrap()
            .store(&path)
            .unwrap();
        let cfg = ExperimentConfig {
            graph: GraphFamily::File { path },
            group: GroupSpec::Cyclic(3),
            flip_probs: vec![0.2],
            sizes: vec![],
            estimator: "map".into(),
            trials: 4,
            seed: 0,
            output: None,
            workers: Some(2),
        };
        let res = run_sweep(&cfg).unwrap();
        assert_eq!(res.cells[0].n, 5);
        assert_eq!(res.cells[0].trials, 4);
    }
}
