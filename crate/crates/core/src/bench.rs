//! Benchmark harness: run BFS experiment matrices, compute TEPS and
//! harmonic means, and emit per-run and per-level reports as CSV or JSON.

use crate::engine::{bfs_with_workers, DirectionPolicy, ForceMode, LevelMetrics};
use crate::error::{Error, Result};
use crate::gen::{generate_kronecker, GeneratorSpec};
use crate::graph::Graph;
use crate::io::{load_edge_list, normalize_edges, EdgeListFile};
use crate::partition::{partition, PartitionSpec, PartitionStrategy};
use crate::validate::validate_tree;
use crate::UNREACHED;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug)]
pub enum Workload {
    Generate(GeneratorSpec),
    Load {
        file: EdgeListFile,
        symmetrize: bool,
        dedup: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    TopDown,
    DirectionOptimized,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::TopDown => write!(f, "topdown"),
            Algorithm::DirectionOptimized => write!(f, "dirop"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub workload: Workload,
    pub partition: PartitionSpec,
    pub policy: DirectionPolicy,
    pub algorithm: Algorithm,
    pub source_count: usize,
    pub runs_per_source: usize,
    pub seed: u64,
    pub workers: usize,
    pub validate: bool,
    /// Apply the local-ID reorder and degree-sorted adjacency optimizations.
    pub optimize_layout: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub run_id: usize,
    pub source: usize,
    pub algorithm: Algorithm,
    pub partitions: usize,
    pub strategy: &'static str,
    pub time_ms: f64,
    pub teps: f64,
    pub switch_level: Option<u32>,
    pub edges_inspected: u64,
    pub reached_vertices: usize,
    pub reached_undirected_edges: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelRow {
    pub run_id: usize,
    #[serde(flatten)]
    pub metrics: LevelMetrics,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub runs: usize,
    pub harmonic_mean_teps: f64,
    pub mean_time_ms: f64,
    pub total_edges_inspected: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub records: Vec<RunRecord>,
    pub levels: Vec<LevelRow>,
    pub summary: Summary,
}

/// Graph500 TEPS: undirected edges of the reached component over elapsed
/// seconds. The count is undirected even though traversal touches doubled
/// arcs.
pub fn compute_teps(reached_undirected_edges: u64, elapsed_seconds: f64) -> Result<f64> {
    if elapsed_seconds <= 0.0 {
        return Err(Error::NonPositiveElapsed(elapsed_seconds));
    }
    Ok(reached_undirected_edges as f64 / elapsed_seconds)
}

/// n / sum(1/rate): the right average for rates over fixed work.
pub fn harmonic_mean(rates: &[f64]) -> Result<f64> {
    if rates.is_empty() || rates.iter().any(|&r| r <= 0.0 || !r.is_finite()) {
        return Err(Error::InvalidRates);
    }
    Ok(rates.len() as f64 / rates.iter().map(|r| 1.0 / r).sum::<f64>())
}

/// Undirected edges with both endpoints reached (self-loops count once).
pub fn reached_undirected_edges(graph: &Graph, levels: &[u32]) -> u64 {
    let mut arcs = 0u64;
    for v in 0..graph.vertex_count() {
        if levels[v] == UNREACHED {
            continue;
        }
        arcs += graph.neighbors(v).filter(|&u| levels[u] != UNREACHED).count() as u64;
    }
    arcs / 2
}

/// Build or load the workload graph.
pub fn build_graph(workload: &Workload) -> Result<Graph> {
    match workload {
        Workload::Generate(spec) => {
            let edges = generate_kronecker(spec)?;
            Graph::build_csr(&edges, spec.vertex_count())
        }
        Workload::Load {
            file,
            symmetrize,
            dedup,
        } => {
            let mut loaded = load_edge_list(file)?;
            if *symmetrize || *dedup {
                normalize_edges(&mut loaded.edges, *dedup);
            }
            Graph::build_csr(&loaded.edges, loaded.vertex_count)
        }
    }
}

/// Sample `count` search keys uniformly from the non-isolated vertices.
pub fn sample_sources(graph: &Graph, count: usize, seed: u64) -> Result<Vec<usize>> {
    let n = graph.vertex_count();
    if n == 0 || (0..n).all(|v| graph.degree_unchecked(v) == 0) {
        return Err(Error::InvalidConfig("graph has no non-isolated vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sources = Vec::with_capacity(count);
    while sources.len() < count {
        let v = rng.gen_range(0..n);
        if graph.degree_unchecked(v) > 0 {
            sources.push(v);
        }
    }
    Ok(sources)
}

fn strategy_name(s: PartitionStrategy) -> &'static str {
    match s {
        PartitionStrategy::Specialized => "specialized",
        PartitionStrategy::Random => "random",
    }
}

/// Run the configured experiment: build and partition the graph once, sample
/// sources, execute `source_count * runs_per_source` searches, optionally
/// validate each, and collect per-run and per-level rows.
///
/// Timing covers BFS state initialization, kernels, communication, and
/// parent aggregation; graph construction and partitioning are excluded.
pub fn run_experiment(config: &RunConfig) -> Result<RunReport> {
    if config.source_count == 0 || config.runs_per_source == 0 {
        return Err(Error::InvalidConfig(
            "source_count and runs_per_source must be >= 1".into(),
        ));
    }
    let graph = build_graph(&config.workload)?;
    let mut pg = partition(&graph, &config.partition)?;
    if config.optimize_layout {
        crate::partition::reorder_all_partitions(&mut pg);
        crate::partition::sort_adjacency_by_degree(&mut pg);
    }

    let policy = match config.algorithm {
        Algorithm::TopDown => DirectionPolicy {
            force_mode: Some(ForceMode::TopDownOnly),
            ..config.policy
        },
        Algorithm::DirectionOptimized => config.policy,
    };
    let sources = sample_sources(&graph, config.source_count, config.seed)?;

    let mut records = Vec::new();
    let mut levels_rows = Vec::new();
    let mut run_id = 0;
    for &source in &sources {
        for _ in 0..config.runs_per_source {
            let out = bfs_with_workers(&pg, source, &policy, config.workers.max(1))?;
            if config.validate {
                let report = validate_tree(&graph, source, &out)?;
                if !report.passed {
                    return Err(Error::ValidationFailed {
                        source_vertex: source,
                        report: report.to_json(),
                    });
                }
            }
            let reached_edges = reached_undirected_edges(&graph, &out.levels);
            let teps = compute_teps(reached_edges, out.total_time_ms / 1e3)?;
            records.push(RunRecord {
                run_id,
                source,
                algorithm: config.algorithm,
                partitions: pg.partition_count(),
                strategy: strategy_name(config.partition.strategy),
                time_ms: out.total_time_ms,
                teps,
                switch_level: out.switch_level,
                edges_inspected: out.total_edges_inspected(),
                reached_vertices: out.reached_count(),
                reached_undirected_edges: reached_edges,
            });
            for m in &out.per_level {
                levels_rows.push(LevelRow {
                    run_id,
                    metrics: m.clone(),
                });
            }
            run_id += 1;
        }
    }

    let rates: Vec<f64> = records.iter().map(|r| r.teps).collect();
    let summary = Summary {
        runs: records.len(),
        harmonic_mean_teps: harmonic_mean(&rates)?,
        mean_time_ms: records.iter().map(|r| r.time_ms).sum::<f64>() / records.len() as f64,
        total_edges_inspected: records.iter().map(|r| r.edges_inspected).sum(),
    };

    Ok(RunReport {
        records,
        levels: levels_rows,
        summary,
    })
}

pub const RUN_CSV_HEADER: &str =
    "run_id,source,algorithm,partitions,strategy,time_ms,teps,switch_level";
pub const LEVEL_CSV_HEADER: &str = "run_id,level,step_type,time_ms,edges_inspected,\
frontier_size,avg_frontier_degree,bits_pushed,bits_pulled";

impl RunReport {
    pub fn to_run_csv(&self) -> String {
        let mut s = String::from(RUN_CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            let switch = r
                .switch_level
                .map(|l| l.to_string())
                .unwrap_or_default();
            s.push_str(&format!(
                "{},{},{},{},{},{:.6},{:.3},{}\n",
                r.run_id, r.source, r.algorithm, r.partitions, r.strategy, r.time_ms, r.teps, switch
            ));
        }
        s
    }

    pub fn to_level_csv(&self) -> String {
        let mut s = String::from(LEVEL_CSV_HEADER);
        s.push('\n');
        for row in &self.levels {
            let m = &row.metrics;
            s.push_str(&format!(
                "{},{},{},{:.6},{},{},{:.6},{},{}\n",
                row.run_id,
                m.level,
                m.step_type,
                m.time_ms,
                m.edges_inspected,
                m.frontier_size,
                m.avg_frontier_degree,
                m.bits_pushed,
                m.bits_pulled
            ));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
