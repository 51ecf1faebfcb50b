//! Benchmark CLI.
//!
//! Examples:
//!   dobfs --generate 16 --partitions 2 --strategy specialized \
//!         --capacity-frac 0.15 --algorithm dirop --sources 16 --runs 4 \
//!         --validate --format csv --out results.csv --per-level
//!   dobfs --load twitter.txt --dedup --algorithm topdown --sources 8
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error.

use clap::Parser;
use dobfs::bench::{run_experiment, Algorithm, RunConfig, Workload};
use dobfs::engine::{DirectionPolicy, ForceMode};
use dobfs::gen::GeneratorSpec;
use dobfs::io::EdgeListFile;
use dobfs::partition::{PartitionSpec, PartitionStrategy};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "dobfs", about = "Direction-optimized BFS benchmark harness")]
struct Args {
    /// Generate a Kronecker graph: SCALE[,EDGEFACTOR[,SEED]]
    #[arg(long, value_name = "SPEC", conflicts_with = "load")]
    generate: Option<String>,

    /// Load an edge-list file
    #[arg(long, value_name = "PATH")]
    load: Option<PathBuf>,

    /// Treat the loaded file as binary (u64 LE pairs)
    #[arg(long, requires = "load")]
    binary: bool,

    /// Canonicalize loaded pairs to undirected orientation
    #[arg(long, requires = "load")]
    symmetrize: bool,

    /// Remove duplicate undirected edges on load
    #[arg(long, requires = "load")]
    dedup: bool,

    /// Total partition count (1 host + N-1 accelerators)
    #[arg(long, default_value_t = 1)]
    partitions: usize,

    #[arg(long, value_parser = ["specialized", "random"], default_value = "specialized")]
    strategy: String,

    /// Accelerator capacity as a fraction of total arcs
    #[arg(long, default_value_t = 0.15)]
    capacity_frac: f64,

    #[arg(long, value_parser = ["topdown", "dirop"], default_value = "dirop")]
    algorithm: String,

    /// Switch to bottom-up when host frontier out-edges reach this fraction
    /// of all arcs
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    /// Bottom-up levels before returning to top-down
    #[arg(long, default_value_t = 3)]
    bottom_up_steps: u32,

    /// Force bottom-up from this level (experiments)
    #[arg(long, value_name = "LEVEL")]
    force_bottom_up_after: Option<u32>,

    /// Number of search keys
    #[arg(long, default_value_t = 16)]
    sources: usize,

    /// Repetitions per search key
    #[arg(long, default_value_t = 4)]
    runs: usize,

    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Worker threads (affects timing only, never results)
    #[arg(long, default_value_t = 1)]
    workers: usize,

    /// Serialize each partition kernel for byte-identical parent output
    #[arg(long)]
    deterministic: bool,

    /// Validate every BFS output against the sequential oracle
    #[arg(long)]
    validate: bool,

    /// Skip the local-reorder and adjacency-sort optimizations
    #[arg(long)]
    no_layout_opt: bool,

    #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
    format: String,

    /// Output path; per-level CSV goes to PATH with a .levels.csv suffix
    #[arg(long)]
    out: Option<PathBuf>,

    /// Emit per-level rows
    #[arg(long)]
    per_level: bool,

    /// Write the partition map CSV to this path and exit
    #[arg(long)]
    dump_partition_map: Option<PathBuf>,
}

fn parse_generate(spec: &str) -> Result<GeneratorSpec, String> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err("expected SCALE[,EDGEFACTOR[,SEED]]".into());
    }
    let scale: u32 = parts[0].trim().parse().map_err(|e| format!("scale: {e}"))?;
    let edgefactor: usize = parts
        .get(1)
        .map(|s| s.trim().parse().map_err(|e| format!("edgefactor: {e}")))
        .transpose()?
        .unwrap_or(dobfs::gen::DEFAULT_EDGEFACTOR);
    let seed: u64 = parts
        .get(2)
        .map(|s| s.trim().parse().map_err(|e| format!("seed: {e}")))
        .transpose()?
        .unwrap_or(1);
    Ok(GeneratorSpec::new(scale, edgefactor, seed))
}

fn build_config(args: &Args) -> Result<RunConfig, String> {
    let workload = match (&args.generate, &args.load) {
        (Some(spec), None) => Workload::Generate(parse_generate(spec)?),
        (None, Some(path)) => Workload::Load {
            file: if args.binary {
                EdgeListFile::binary(path)
            } else {
                EdgeListFile::text(path)
            },
            symmetrize: args.symmetrize,
            dedup: args.dedup,
        },
        _ => return Err("exactly one of --generate / --load is required".into()),
    };

    if args.partitions == 0 {
        return Err("--partitions must be >= 1".into());
    }
    if !(0.0..=1.0).contains(&args.capacity_frac) {
        return Err("--capacity-frac must be in [0, 1]".into());
    }
    if !(0.0..=1.0).contains(&args.alpha) || args.alpha == 0.0 {
        return Err("--alpha must be in (0, 1]".into());
    }
    if args.bottom_up_steps == 0 {
        return Err("--bottom-up-steps must be >= 1".into());
    }

    // capacity in arcs is resolved against the built graph below
    let strategy = match args.strategy.as_str() {
        "specialized" => PartitionStrategy::Specialized,
        _ => PartitionStrategy::Random,
    };
    let algorithm = match args.algorithm.as_str() {
        "topdown" => Algorithm::TopDown,
        _ => Algorithm::DirectionOptimized,
    };

    Ok(RunConfig {
        workload,
        partition: PartitionSpec {
            strategy,
            accelerator_count: args.partitions - 1,
            accelerator_capacity: 0, // filled in after the graph is built
            seed: args.seed,
        },
        policy: DirectionPolicy {
            alpha_fraction: args.alpha,
            bottom_up_steps: args.bottom_up_steps,
            force_mode: args.force_bottom_up_after.map(ForceMode::BottomUpAfterLevel),
        },
        algorithm,
        source_count: args.sources,
        runs_per_source: args.runs,
        seed: args.seed,
        workers: if args.deterministic { 1 } else { args.workers },
        validate: args.validate,
        optimize_layout: !args.no_layout_opt,
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let mut config = match build_config(&args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("configuration error: {msg}");
            return ExitCode::from(2);
        }
    };

    // resolve the capacity fraction into an arc budget
    let graph = match dobfs::bench::build_graph(&config.workload) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("workload error: {e}");
            return ExitCode::from(2);
        }
    };
    config.partition.accelerator_capacity =
        ((graph.arc_count() as f64) * args.capacity_frac).floor() as u64;

    if let Some(path) = &args.dump_partition_map {
        let pg = match dobfs::partition::partition(&graph, &config.partition) {
            Ok(pg) => pg,
            Err(e) => {
                eprintln!("partition error: {e}");
                return ExitCode::from(2);
            }
        };
        if let Err(e) = pg.write_partition_map(path) {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
        return ExitCode::SUCCESS;
    }

    let report = match run_experiment(&config) {
        Ok(r) => r,
        Err(e @ dobfs::Error::ValidationFailed { .. }) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let output = match args.format.as_str() {
        "json" => report.to_json(),
        _ => {
            let mut s = report.to_run_csv();
            if args.per_level && args.out.is_none() {
                s.push('\n');
                s.push_str(&report.to_level_csv());
            }
            s
        }
    };

    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &output) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            if args.per_level && args.format == "csv" {
                let lp = path.with_extension("levels.csv");
                if let Err(e) = std::fs::write(&lp, report.to_level_csv()) {
                    eprintln!("cannot write {}: {e}", lp.display());
                    return ExitCode::from(2);
                }
            }
        }
        None => println!("{output}"),
    }

    eprintln!(
        "{} runs, harmonic mean {:.0} TEPS, mean time {:.3} ms",
        report.summary.runs, report.summary.harmonic_mean_teps, report.summary.mean_time_ms
    );
    ExitCode::SUCCESS
}
