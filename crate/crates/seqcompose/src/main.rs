//! Command-line front end: generate synthetic invocation logs, mine them,
//! score rule files against planted compositions, and run benchmark grids.
//!
//! Settings resolve with precedence flags > config file > defaults; the seed
//! additionally falls back to the `SEQCOMPOSE_SEED` environment variable
//! before the default. Every run prints its resolved settings. Failures
//! print one `error[<class>]: …` line to stderr and exit nonzero.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use seqcompose::error::{Error, Result};
use seqcompose::eval::{
    self, match_rules, noise_ratio, precision_pct, EvalReport, GridCell, MatchCriteria,
    REPORT_HEADER,
};
use seqcompose::log::{parse_log, sessionize};
use seqcompose::miners::{self, Algorithm, MiningParams};
use seqcompose::multilevel::{self, MultilevelParams, ThresholdBase};
use seqcompose::pattern::HierarchyLevel;
use seqcompose::workload::{
    generate_dataset, read_compositions, write_dataset, DatasetPaths, GeneratorConfig,
    InclusiveRange,
};

const SEED_ENV: &str = "SEQCOMPOSE_SEED";

#[derive(Parser)]
#[command(name = "seqcompose")]
#[command(about = "Synthetic service-invocation logs and two-level sequential pattern mining")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Generate a synthetic dataset: log CSV, catalog, compositions, manifest
    Generate(GenerateArgs),
    /// Mine a log into association rules
    Mine(MineArgs),
    /// Score a rules file against ground-truth compositions
    Eval(EvalArgs),
    /// Run an algorithm/threshold grid over freshly generated datasets
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Optional JSON config with generator keys; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of services in the catalog
    #[arg(long)]
    services: Option<usize>,
    /// Minimum operations per service
    #[arg(long)]
    ops_min: Option<u64>,
    /// Maximum operations per service
    #[arg(long)]
    ops_max: Option<u64>,
    /// Number of ground-truth compositions to plant
    #[arg(long)]
    compositions: Option<usize>,
    /// Composition length range
    #[arg(long)]
    comp_len_min: Option<u64>,
    #[arg(long)]
    comp_len_max: Option<u64>,
    /// Number of sessions in the log
    #[arg(long)]
    sessions: Option<usize>,
    /// Noise invocations per session range
    #[arg(long)]
    noise_min: Option<u64>,
    #[arg(long)]
    noise_max: Option<u64>,
    /// Invocations between planted occurrences range
    #[arg(long)]
    plant_gap_min: Option<u64>,
    #[arg(long)]
    plant_gap_max: Option<u64>,
    /// RNG seed (fallback: config file, then SEQCOMPOSE_SEED, then 42)
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for the four dataset files
    #[arg(long, default_value = "data")]
    out: PathBuf,
}

#[derive(Args)]
struct MineArgs {
    /// Optional JSON config with mining keys; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Invocation log CSV to mine
    #[arg(long)]
    log: PathBuf,
    /// apriori | patterngrowth | closed | multilevel
    #[arg(long)]
    algorithm: Option<String>,
    /// Minimum support as a percent of sessions
    #[arg(long)]
    min_support: Option<f64>,
    /// Minimum rule confidence as a percent
    #[arg(long)]
    min_confidence: Option<f64>,
    /// service | operation (baselines only; multilevel spans both)
    #[arg(long)]
    level: Option<String>,
    /// Keep only the n best-ranked rules
    #[arg(long)]
    top_n: Option<usize>,
    /// Level-1 absolute support floor (multilevel only)
    #[arg(long)]
    l1_floor: Option<usize>,
    /// reduced | original: session count the level-2 percent is taken of
    #[arg(long)]
    threshold_base: Option<String>,
    /// Rules output file (JSON lines); multilevel also writes a stage trace
    /// next to it
    #[arg(long, default_value = "rules.jsonl")]
    out: PathBuf,
}

#[derive(Args)]
struct EvalArgs {
    /// Rules file (JSON lines) to score
    #[arg(long)]
    rules: PathBuf,
    /// Ground-truth compositions JSON
    #[arg(long)]
    truth: PathBuf,
    /// Expected association count (default: number of compositions)
    #[arg(long)]
    expected: Option<usize>,
    /// Labels echoed into the report row
    #[arg(long, default_value = "custom")]
    algorithm: String,
    #[arg(long, default_value_t = 0.0)]
    min_support: f64,
    #[arg(long, default_value_t = 0.0)]
    min_confidence: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// Optional JSON config with generator keys for the benchmark datasets
    #[arg(long)]
    config: Option<PathBuf>,
    /// Grid: "default" (the six standard rows), "empty", or a JSON file of cells
    #[arg(long, default_value = "default")]
    grid: String,
    /// Number of seeds to run; datasets are regenerated per seed
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    /// Base seed; seed k of n runs with base + k
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for per-seed and aggregated reports
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    /// Worker threads for grid cells within one seed
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Commands::Generate(args) => cmd_generate(args),
        Commands::Mine(args) => cmd_mine(args),
        Commands::Eval(args) => cmd_eval(args),
        Commands::Bench(args) => cmd_bench(args),
    };
    if let Err(e) = result {
        eprintln!("error[{}]: {}", e.class(), e);
        std::process::exit(1);
    }
}

/// Seed fallback shared by generate and bench: flag, then a seed actually
/// present in the config file, then environment, then the default.
fn resolve_seed(flag: Option<u64>, config_seed: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag.or(config_seed) {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::Config(format!("{SEED_ENV} must be an unsigned integer, got {text:?}"))
        }),
        Err(_) => Ok(GeneratorConfig::default().seed),
    }
}

fn read_json_config<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

/// Reads a generator config file, reporting whether it spelled out a seed
/// (a missing key falls back to defaults and must not shadow the
/// environment fallback).
fn read_generator_config(path: &Path) -> Result<(GeneratorConfig, Option<u64>)> {
    let value: serde_json::Value = read_json_config(path)?;
    let has_seed = value.get("seed").is_some();
    let config: GeneratorConfig =
        serde_json::from_value(value).map_err(|e| Error::json(path, e))?;
    let config_seed = has_seed.then_some(config.seed);
    Ok((config, config_seed))
}

/// Applies generate flags on top of a base config (file or defaults).
fn resolve_generator_config(args: &GenerateArgs) -> Result<GeneratorConfig> {
    let (mut config, config_seed) = match &args.config {
        Some(path) => read_generator_config(path)?,
        None => (GeneratorConfig::default(), None),
    };

    let range = |r: InclusiveRange, lo: Option<u64>, hi: Option<u64>| {
        InclusiveRange(lo.unwrap_or(r.lo()), hi.unwrap_or(r.hi()))
    };
    if let Some(v) = args.services {
        config.n_services = v;
    }
    config.ops_per_service_range = range(config.ops_per_service_range, args.ops_min, args.ops_max);
    if let Some(v) = args.compositions {
        config.n_compositions = v;
    }
    config.composition_length_range = range(
        config.composition_length_range,
        args.comp_len_min,
        args.comp_len_max,
    );
    if let Some(v) = args.sessions {
        config.n_sessions = v;
    }
    config.noise_invocations_per_session_range = range(
        config.noise_invocations_per_session_range,
        args.noise_min,
        args.noise_max,
    );
    config.plant_gap_range = range(config.plant_gap_range, args.plant_gap_min, args.plant_gap_max);
    config.seed = resolve_seed(args.seed, config_seed)?;
    Ok(config)
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let config = resolve_generator_config(&args)?;
    println!(
        "resolved config: {}",
        serde_json::to_string(&config).expect("config serializes")
    );
    let dataset = generate_dataset(&config)?;
    write_dataset(&args.out, &dataset)?;
    let paths = DatasetPaths::in_dir(&args.out);
    println!(
        "generated {} sessions, {} records, {} compositions, {} planted occurrences",
        config.n_sessions,
        dataset.records.len(),
        dataset.compositions.len(),
        dataset.manifest.plants.len()
    );
    println!(
        "wrote {} {} {} {}",
        paths.log.display(),
        paths.catalog.display(),
        paths.compositions.display(),
        paths.manifest.display()
    );
    Ok(())
}

/// Mining keys accepted in a `--config` file; all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct MineFileConfig {
    algorithm: Option<String>,
    min_support_pct: Option<f64>,
    min_confidence_pct: Option<f64>,
    level: Option<String>,
    top_n: Option<usize>,
    l1_floor_count: Option<usize>,
    threshold_base: Option<String>,
}

struct ResolvedMine {
    algorithm: Algorithm,
    min_support_pct: f64,
    min_confidence_pct: f64,
    level: HierarchyLevel,
    top_n: Option<usize>,
    l1_floor_count: usize,
    threshold_base: ThresholdBase,
}

fn parse_level(s: &str) -> Result<HierarchyLevel> {
    match s {
        "service" => Ok(HierarchyLevel::Service),
        "operation" => Ok(HierarchyLevel::Operation),
        other => Err(Error::Config(format!(
            "unknown level {other:?}: expected service or operation"
        ))),
    }
}

fn resolve_mine(args: &MineArgs) -> Result<ResolvedMine> {
    let file: MineFileConfig = match &args.config {
        Some(path) => read_json_config(path)?,
        None => MineFileConfig::default(),
    };
    let algorithm = args
        .algorithm
        .clone()
        .or(file.algorithm)
        .unwrap_or_else(|| "apriori".into())
        .parse::<Algorithm>()?;
    let level = args
        .level
        .clone()
        .or(file.level)
        .map(|s| parse_level(&s))
        .transpose()?
        .unwrap_or(HierarchyLevel::Operation);
    let threshold_base = args
        .threshold_base
        .clone()
        .or(file.threshold_base)
        .map(|s| s.parse::<ThresholdBase>())
        .transpose()?
        .unwrap_or_default();
    Ok(ResolvedMine {
        algorithm,
        min_support_pct: args.min_support.or(file.min_support_pct).unwrap_or(3.5),
        min_confidence_pct: args.min_confidence.or(file.min_confidence_pct).unwrap_or(3.5),
        level,
        top_n: args.top_n.or(file.top_n),
        l1_floor_count: args.l1_floor.or(file.l1_floor_count).unwrap_or(2),
        threshold_base,
    })
}

fn cmd_mine(args: MineArgs) -> Result<()> {
    let resolved = resolve_mine(&args)?;
    println!(
        "resolved mine: algorithm={} min_support={} min_confidence={} level={} top_n={} l1_floor={} threshold_base={}",
        resolved.algorithm,
        resolved.min_support_pct,
        resolved.min_confidence_pct,
        resolved.level,
        resolved
            .top_n
            .map_or_else(|| "all".to_string(), |n| n.to_string()),
        resolved.l1_floor_count,
        resolved.threshold_base
    );

    let text = std::fs::read_to_string(&args.log).map_err(|e| Error::io(&args.log, e))?;
    let records = parse_log(&text)?;
    let sessions = sessionize(&records);

    match resolved.algorithm {
        Algorithm::Multilevel => {
            let params = MultilevelParams {
                l2_min_support_pct: resolved.min_support_pct,
                l2_min_confidence_pct: resolved.min_confidence_pct,
                l1_floor_count: resolved.l1_floor_count,
                top_n: resolved.top_n,
                threshold_base: resolved.threshold_base,
            };
            let rec = multilevel::recommend(&sessions, &params)?;
            miners::write_rules(&args.out, &rec.rules)?;
            let trace_path = args.out.with_extension("trace.json");
            rec.trace.write(&trace_path)?;
            println!(
                "level 1: candidates={} average_support={:.2} kept={} reduced_sessions={}/{}",
                rec.trace.l1_candidate_count,
                rec.trace.l1_average_support,
                rec.trace.l1_kept_count,
                rec.trace.reduced_session_count,
                rec.trace.original_session_count
            );
            println!(
                "mined: candidates={} frequent={} rules={} written={}",
                rec.stats.candidate_count,
                rec.stats.frequent_count,
                rec.stats.rule_count,
                rec.rules.len()
            );
            println!("wrote {} and {}", args.out.display(), trace_path.display());
        }
        baseline => {
            let params = MiningParams {
                min_support_pct: resolved.min_support_pct,
                min_confidence_pct: resolved.min_confidence_pct,
                level: resolved.level,
                max_pattern_length: None,
            };
            let frequent = miners::mine(baseline, &sessions, &params)?;
            let mut rules =
                miners::generate_rules(&frequent, &sessions, resolved.min_confidence_pct)?;
            miners::rank_rules(&mut rules);
            let total = rules.len();
            if let Some(n) = resolved.top_n {
                rules.truncate(n);
            }
            miners::write_rules(&args.out, &rules)?;
            println!(
                "mined: candidates={} frequent={} rules={} written={}",
                frequent.stats.candidate_count,
                frequent.stats.frequent_count,
                total,
                rules.len()
            );
            println!("wrote {}", args.out.display());
        }
    }
    Ok(())
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let rules = miners::read_rules(&args.rules)?;
    let compositions = read_compositions(&args.truth)?;
    let expected = args.expected.unwrap_or(compositions.len());
    println!(
        "resolved eval: rules={} truth={} expected={}",
        args.rules.display(),
        args.truth.display(),
        expected
    );

    let started = std::time::Instant::now();
    let matching_count = match_rules(&rules, &compositions, &MatchCriteria::default())?;
    let report = EvalReport {
        algorithm: args.algorithm,
        min_support_pct: args.min_support,
        min_confidence_pct: args.min_confidence,
        candidate_count: 0,
        frequent_count: 0,
        rule_count: rules.len(),
        matching_count,
        precision_pct: precision_pct(matching_count, compositions.len())?,
        noise_ratio: noise_ratio(rules.len(), expected)?,
        wall_time_ms: started.elapsed().as_millis() as u64,
    };
    println!("{REPORT_HEADER}");
    println!("{}", report.csv_row());
    Ok(())
}

fn resolve_grid(name: &str) -> Result<Vec<GridCell>> {
    match name {
        "default" => Ok(eval::default_grid()),
        "empty" => Ok(Vec::new()),
        path => eval::read_grid(Path::new(path)),
    }
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.seeds == 0 {
        return Err(Error::Config("--seeds must be at least 1".into()));
    }
    let grid = resolve_grid(&args.grid)?;
    let (base_config, config_seed) = match &args.config {
        Some(path) => read_generator_config(path)?,
        None => (GeneratorConfig::default(), None),
    };
    let base_seed = resolve_seed(args.seed, config_seed)?;
    println!(
        "resolved bench: grid={} cells={} seeds={} base_seed={} jobs={}",
        args.grid,
        grid.len(),
        args.seeds,
        base_seed,
        args.jobs
    );
    std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;

    let mut per_seed: Vec<Vec<EvalReport>> = Vec::new();
    for k in 0..args.seeds {
        let seed = base_seed + k;
        let config = GeneratorConfig {
            seed,
            ..base_config.clone()
        };
        let dataset = generate_dataset(&config)?;
        let seed_dir = args.out.join(format!("seed-{seed}"));
        write_dataset(&seed_dir.join("dataset"), &dataset)?;
        let reports = eval::run_benchmark(&dataset, &grid, args.jobs)?;
        eval::write_report_csv(&seed_dir.join("report.csv"), &reports)?;
        eval::write_plot_csv(&seed_dir.join("plot.csv"), &reports)?;
        println!("seed {seed}: {} rows -> {}", reports.len(), seed_dir.display());
        per_seed.push(reports);
    }

    write_mean_reports(&args.out, &grid, &per_seed)?;
    println!(
        "wrote {} and {}",
        args.out.join("report_mean.csv").display(),
        args.out.join("plot_mean.csv").display()
    );
    Ok(())
}

/// Aggregates per-seed reports cell-wise into mean rows. Counters become
/// fractional means; the header stays identical so the files stay joinable.
fn write_mean_reports(out: &Path, grid: &[GridCell], per_seed: &[Vec<EvalReport>]) -> Result<()> {
    let seeds = per_seed.len() as f64;
    let mut report_text = String::from(REPORT_HEADER);
    report_text.push('\n');
    let mut plot_text = String::from("label,noise_ratio\n");
    for (i, cell) in grid.iter().enumerate() {
        let mean = |f: &dyn Fn(&EvalReport) -> f64| {
            per_seed.iter().map(|rs| f(&rs[i])).sum::<f64>() / seeds
        };
        let label = format!(
            "{} {}/{}",
            cell.algorithm, cell.min_support_pct, cell.min_confidence_pct
        );
        report_text.push_str(&format!(
            "{},{},{},{:.2},{:.2},{:.2},{:.2},{:.2},{:.2},{:.0}\n",
            cell.algorithm,
            cell.min_support_pct,
            cell.min_confidence_pct,
            mean(&|r| r.candidate_count as f64),
            mean(&|r| r.frequent_count as f64),
            mean(&|r| r.rule_count as f64),
            mean(&|r| r.matching_count as f64),
            mean(&|r| r.precision_pct),
            mean(&|r| r.noise_ratio),
            mean(&|r| r.wall_time_ms as f64),
        ));
        plot_text.push_str(&format!("{},{:.2}\n", label, mean(&|r| r.noise_ratio)));
    }
    let report_path = out.join("report_mean.csv");
    std::fs::write(&report_path, report_text).map_err(|e| Error::io(&report_path, e))?;
    let plot_path = out.join("plot_mean.csv");
    std::fs::write(&plot_path, plot_text).map_err(|e| Error::io(&plot_path, e))
}
