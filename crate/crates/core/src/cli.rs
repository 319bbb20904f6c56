//! The `gc` command line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bench::{run_bench, BenchConfig, Manifest};
use crate::error::{Error, Result};
use crate::graph::{
    check_instance, compute_cardinalities, infer_graph_type, GraphType, PropertyGraph,
};
use crate::insight::{extract_insights, run_strategy, FuzzyCMedoids, SearchConfig, Strategy};
use crate::io::{
    generate_synthetic_graph, load_tabular_as_graph, read_config, read_graph, read_graph_type,
    read_matrix_csv, write_graph, write_graph_type, write_insight_report, write_json,
    write_matrix_csv, write_trace_csv, InsightReport, SyntheticSpec,
};
use crate::matrix::DenseMatrix;
use crate::validation::{validate_indicators, Mode, ValidationConfig};

#[derive(Debug, Parser)]
#[command(
    name = "gc",
    version,
    about = "Comparison indicators and node comparison insights over property graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Infer the graph type and relationship cardinalities.
    Schema(SchemaArgs),
    /// Collect and validate the indicators of a node type.
    Indicators(IndicatorArgs),
    /// Search a partition of the indicators and rank node comparison insights.
    Insights(InsightArgs),
    /// Run every strategy over the datasets of a manifest.
    Bench(BenchArgs),
    /// Generate a synthetic graph from a spec file.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct SchemaArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Check the graph against this graph type instead of inferring one.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Lazy,
    Eager,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph file (.json, .jsonl) or a CSV table with one node per row.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub node_type: Option<String>,
    /// TOML or JSON file with `validation`, `search` and `clusterer` sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "lazy")]
    pub mode: ModeArg,
    #[arg(long)]
    pub max_len: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IndicatorArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// Output directory for matrix.csv, trace.csv and timing.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InsightArgs {
    #[command(flatten)]
    pub input: GraphInput,
    /// A validated indicator matrix, used instead of --graph.
    #[arg(long, conflicts_with = "graph")]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ls")]
    pub strategy: StrategyArg,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub knn: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub top_n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Rd,
    Lp,
    Sls,
    Ls,
    Exp,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Rd => Strategy::Rd,
            StrategyArg::Lp => Strategy::Lp,
            StrategyArg::Sls => Strategy::Sls,
            StrategyArg::Ls => Strategy::Ls,
            StrategyArg::Exp => Strategy::Exp,
        }
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Dataset manifest (TOML).
    #[arg(long)]
    pub manifest: PathBuf,
    /// Comma-separated strategies; all five by default.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub strategy: Vec<StrategyArg>,
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    #[arg(long, default_value_t = 4)]
    pub k_max: usize,
    #[arg(long, default_value_t = 10)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub knn: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Worker threads; all cores by default.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Settings accepted through `--config`; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub validation: ValidationConfig,
    pub search: SearchConfig,
    pub clusterer: FuzzyCMedoids,
    pub top_n: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct Timing {
    pub card: f64,
    pub cand: f64,
    pub valid: f64,
    pub total: f64,
}

fn load_run_config(path: Option<&Path>) -> Result<RunConfig> {
    path.map_or_else(|| Ok(RunConfig::default()), read_config)
}

fn load_graph(path: &Path, node_type: &str) -> Result<PropertyGraph> {
    if path.extension().is_some_and(|e| e == "csv") {
        load_tabular_as_graph(File::open(path)?, node_type)
    } else {
        read_graph(path)
    }
}

fn required<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::InvalidConfig(format!("--{flag} is required")))
}

fn schema_of(g: &PropertyGraph) -> Result<GraphType> {
    compute_cardinalities(g, &infer_graph_type(g))
}

fn collect(
    input: &GraphInput,
    cfg: &RunConfig,
) -> Result<(crate::validation::ValidationOutput, Timing)> {
    let node_type = required(&input.node_type, "node-type")?;
    let g = load_graph(required(&input.graph, "graph")?, node_type)?;
    let mut vcfg = cfg.validation.clone();
    if let Some(l) = input.max_len {
        vcfg.max_len = l;
    }
    let mode = match input.mode {
        ModeArg::Lazy => Mode::Lazy,
        ModeArg::Eager => Mode::Eager,
    };
    let t0 = Instant::now();
    let s = schema_of(&g)?;
    let card = t0.elapsed().as_secs_f64();
    let out = validate_indicators(&g, &s, node_type, &vcfg, mode)?;
    let timing = Timing {
        card,
        cand: out.stats.candidate_secs,
        valid: out.stats.validation_secs,
        total: t0.elapsed().as_secs_f64(),
    };
    Ok((out, timing))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn cmd_schema(a: &SchemaArgs) -> Result<()> {
    let g = read_graph(&a.graph)?;
    let s = match &a.schema {
        Some(p) => {
            let declared = read_graph_type(File::open(p)?)?;
            let report = check_instance(&g, &declared);
            for v in &report.violations {
                eprintln!("violation: {v}");
            }
            compute_cardinalities(&g, &declared)?
        }
        None => schema_of(&g)?,
    };
    let mut out = std::io::stdout().lock();
    writeln!(out, "node type\tinstances\tproperties")?;
    for (name, t) in &s.node_types {
        let n = s.node_instances(&g, name)?.len();
        let props: Vec<&str> = t.base.props.iter().map(String::as_str).collect();
        writeln!(out, "{name}\t{n}\t{}", props.join(","))?;
    }
    writeln!(
        out,
        "\nedge type\tsource\ttarget\tcard src\tcard tgt\tinstances"
    )?;
    for (name, t) in &s.edge_types {
        let n = s.edge_instances(&g, name).len();
        writeln!(
            out,
            "{name}\t{}\t{}\t{}\t{}\t{n}",
            t.src, t.tgt, t.card_src, t.card_tgt
        )?;
    }
    if let Some(p) = &a.out {
        write_graph_type(&s, create(p)?)?;
    }
    Ok(())
}

fn cmd_indicators(a: &IndicatorArgs) -> Result<()> {
    let cfg = load_run_config(a.input.config.as_deref())?;
    let (out, timing) = collect(&a.input, &cfg)?;
    let accepted = out.trace.accepted().count();
    println!(
        "{} candidates, {} evaluated, {} accepted, {} x {} matrix",
        out.stats.candidates,
        out.stats.evaluated.len(),
        accepted,
        out.matrix.n_rows(),
        out.matrix.n_cols()
    );
    println!("card\tcand\tvalid\ttotal");
    println!(
        "{:.6}\t{:.6}\t{:.6}\t{:.6}",
        timing.card, timing.cand, timing.valid, timing.total
    );
    if let Some(dir) = &a.out {
        std::fs::create_dir_all(dir)?;
        write_matrix_csv(&out.matrix, create(&dir.join("matrix.csv"))?)?;
        write_trace_csv(&out.trace, create(&dir.join("trace.csv"))?)?;
        write_json(&timing, create(&dir.join("timing.json"))?)?;
    }
    Ok(())
}

fn cmd_insights(a: &InsightArgs) -> Result<()> {
    let cfg = load_run_config(a.input.config.as_deref())?;
    let m = match &a.matrix {
        Some(p) => DenseMatrix::try_from(&read_matrix_csv(File::open(p)?)?.complete_rows())?,
        None => DenseMatrix::try_from(&collect(&a.input, &cfg)?.0.matrix)?,
    };
    let mut search = cfg.search.clone();
    search.k = a.k.unwrap_or(search.k);
    search.seed = a.seed.unwrap_or(search.seed);
    search.tau = a.tau.unwrap_or(search.tau);
    search.restarts = a.restarts.unwrap_or(search.restarts);
    search.laplacian.k_nn = a.knn.unwrap_or(search.laplacian.k_nn);
    let strategy = Strategy::from(a.strategy);
    let result = run_strategy(&m, strategy, &search, &cfg.clusterer)?;
    let top_n = a.top_n.or(cfg.top_n).unwrap_or(5);
    let insights = extract_insights(&m, result, strategy, search.seed, top_n);
    let report = InsightReport::new(&m, &insights);
    match &a.out {
        Some(p) => write_insight_report(&report, create(p)?)?,
        None => write_insight_report(&report, std::io::stdout().lock())?,
    }
    Ok(())
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let manifest = Manifest::load(&a.manifest)?;
    let mut cfg = BenchConfig {
        k_min: a.k_min,
        k_max: a.k_max,
        repeats: a.repeats,
        seed: a.seed,
        ..Default::default()
    };
    if !a.strategy.is_empty() {
        cfg.strategies = a.strategy.iter().map(|&s| s.into()).collect();
    }
    cfg.search.tau = a.tau.unwrap_or(cfg.search.tau);
    cfg.search.restarts = a.restarts.unwrap_or(cfg.search.restarts);
    cfg.search.laplacian.k_nn = a.knn.unwrap_or(cfg.search.laplacian.k_nn);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let report = pool.install(|| -> Result<_> {
        let datasets = manifest
            .datasets
            .iter()
            .map(|d| Ok((d.name.clone(), d.matrix()?)))
            .collect::<Result<Vec<_>>>()?;
        run_bench(&datasets, &cfg, &FuzzyCMedoids::default())
    })?;
    for c in &report.summary {
        println!(
            "{}\t{}\tK={}\tscore {:.4} ± {:.4}\twall {:.4}s ± {:.4}",
            c.dataset,
            c.strategy,
            c.k,
            c.score.mean,
            c.score.sd,
            c.wall_seconds.mean,
            c.wall_seconds.sd
        );
    }
    if let Some(p) = &a.out {
        write_json(&report, create(p)?)?;
    }
    Ok(())
}

fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let spec: SyntheticSpec = read_config(&a.spec)?;
    let g = generate_synthetic_graph(&spec, a.seed)?;
    write_graph(&g, &a.out)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Schema(a) => cmd_schema(a),
        Command::Indicators(a) => cmd_indicators(a),
        Command::Insights(a) => cmd_insights(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Generate(a) => cmd_generate(a),
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn main_with_args<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 4 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
