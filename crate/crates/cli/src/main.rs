use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forestrecom::chains::{
    chain_rng, initial_balanced_state, initial_forest_state, ChainParams, Variant,
    DEFAULT_INIT_ATTEMPTS,
};
use forestrecom::ensemble::{
    balance_profile, mixing_report, rejection_sample_balanced, render_partition, sample_ensemble,
    write_records, EnsembleRecord, RunConfig,
};
use forestrecom::exact::{balanced_distribution, band_state, exact_distribution, EnumOptions};
use forestrecom::graph::{self, Graph};
use forestrecom::spanning::count_spanning_trees;
use forestrecom::{Error, ForestState, PartitionView, Result};

#[derive(Parser)]
#[command(
    name = "forestrecom",
    version,
    about = "Spanning-tree partition sampling and exact oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Gen {
        /// Generator: path, cycle, grid, double_cycle, grid_with_hole, cylinder.
        name: String,
        params: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the exact spanning-tree count.
    Count {
        #[arg(long)]
        graph: String,
    },
    /// Print the exact partition distribution as a table.
    Exact {
        #[arg(long)]
        graph: String,
        #[arg(short)]
        k: usize,
        #[arg(short, default_value_t = 0.0)]
        c: f64,
        /// Restrict to balanced partitions (c is then ignored).
        #[arg(long)]
        balanced: bool,
        /// Enumerate above the vertex guard.
        #[arg(long)]
        force: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw an ensemble of partitions.
    Sample(RunArgs),
    /// Draw balanced partitions by rejection from the forest walk.
    Reject(RunArgs),
    /// Distance to the exact target over a grid of step counts.
    MixReport {
        #[arg(long)]
        graph: String,
        #[arg(short)]
        k: usize,
        #[arg(short, default_value_t = 0.0)]
        c: f64,
        #[arg(long, value_enum, default_value_t = VariantArg::ForestWalk)]
        variant: VariantArg,
        /// Comma-separated step counts.
        #[arg(long, value_delimiter = ',', default_value = "0,10,100,1000")]
        steps: Vec<u64>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start ReCom on a double cycle from the band partition.
        #[arg(long)]
        band_start: bool,
        #[arg(long)]
        force: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a partition as a PPM or SVG image.
    Render {
        #[arg(long)]
        graph: String,
        /// Partition as `0,1|2,3`.
        #[arg(long, conflicts_with = "records")]
        partition: Option<String>,
        /// Ensemble output to take a record from.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 10)]
        cell: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Recom,
    ForestWalk,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Recom => Variant::Recom,
            VariantArg::ForestWalk => Variant::ForestWalk,
        }
    }
}

/// A config file and flags that override it.
#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// `name:p1,p2` generator or edge-list path.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short)]
    k: Option<usize>,
    #[arg(short)]
    c: Option<f64>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long)]
    burn_in: Option<u64>,
    #[arg(long)]
    thin: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    chains: Option<usize>,
    #[arg(long)]
    max_tries: Option<usize>,
    /// Records file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    stats: Option<PathBuf>,
    #[arg(long)]
    render: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path).map_err(|e| match e {
                Error::Io(io) => Error::Config(format!("{}: {io}", path.display())),
                other => other,
            })?,
            None => RunConfig::default(),
        };
        if let Some(spec) = &self.graph {
            cfg.graph = graph_spec(spec)?;
        }
        let ch = &mut cfg.chain;
        if let Some(v) = self.seed {
            ch.seed = v;
        }
        if let Some(v) = self.k {
            ch.k = v;
        }
        if let Some(v) = self.c {
            ch.c = v;
        }
        if let Some(v) = self.variant {
            ch.variant = v.into();
        }
        if let Some(v) = self.burn_in {
            ch.burn_in = v;
        }
        if let Some(v) = self.thin {
            ch.thin = v;
        }
        if let Some(v) = self.samples {
            ch.samples = v;
        }
        if let Some(v) = self.chains {
            ch.chains = v;
        }
        if let Some(v) = self.max_tries {
            ch.max_tries = v;
        }
        let out = &mut cfg.output;
        if self.output.is_some() {
            out.samples = self.output.clone();
        }
        if self.stats.is_some() {
            out.stats = self.stats.clone();
        }
        if self.render.is_some() {
            out.render = self.render.clone();
        }
        cfg.check()?;
        Ok(cfg)
    }
}

fn graph_spec(spec: &str) -> Result<forestrecom::ensemble::GraphSpec> {
    let mut gs = forestrecom::ensemble::GraphSpec::default();
    match spec.split_once(':') {
        Some((name, params)) if !Path::new(spec).exists() => {
            gs.generator = Some(name.to_string());
            gs.params = params
                .split(',')
                .filter(|p| !p.is_empty())
                .map(|p| {
                    p.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bad generator parameter `{p}`")))
                })
                .collect::<Result<_>>()?;
        }
        _ => gs.edge_list = Some(PathBuf::from(spec)),
    }
    Ok(gs)
}

fn load_graph(spec: &str) -> Result<Arc<Graph>> {
    RunConfig {
        graph: graph_spec(spec)?,
        ..RunConfig::default()
    }
    .build_graph()
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn finish_run(cfg: &RunConfig, g: &Graph, records: &[EnsembleRecord]) -> Result<()> {
    let mut out = sink(cfg.output.samples.as_deref())?;
    write_records(records, &mut out)?;
    out.flush()?;
    if let (Some(path), Some(profile)) = (&cfg.output.stats, balance_profile(records)) {
        std::fs::write(path, profile.to_csv())?;
    }
    if let (Some(path), Some(last)) = (&cfg.output.render, records.last()) {
        render_partition(g, &last.partition(), path, cfg.output.cell)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            name,
            params,
            output,
        } => {
            let g = graph::from_generator(&name, &params)?;
            let mut out = sink(output.as_deref())?;
            out.write_all(g.to_edge_list().as_bytes())?;
            out.flush()?;
        }
        Command::Count { graph } => {
            let g = load_graph(&graph)?;
            println!("{}", count_spanning_trees(&g).value());
        }
        Command::Exact {
            graph,
            k,
            c,
            balanced,
            force,
            output,
        } => {
            let g = load_graph(&graph)?;
            let opts = EnumOptions {
                override_guard: force,
                part_size: None,
            };
            let dist = if balanced {
                balanced_distribution(&g, k, opts)?
            } else {
                exact_distribution(&g, k, c, opts)?
            };
            let mut out = sink(output.as_deref())?;
            out.write_all(dist.to_table().as_bytes())?;
            out.flush()?;
        }
        Command::Sample(args) => {
            let cfg = args.config()?;
            let g = cfg.build_graph()?;
            let records = sample_ensemble(&cfg, &g)?;
            finish_run(&cfg, &g, &records)?;
        }
        Command::Reject(args) => {
            let cfg = args.config()?;
            let g = cfg.build_graph()?;
            let report = rejection_sample_balanced(&cfg, &g)?;
            eprintln!(
                "accepted {} of {} tries: rate {:.6}, 95% interval [{:.6}, {:.6}]",
                report.accepted,
                report.tries,
                report.rate(),
                report.interval.0,
                report.interval.1
            );
            finish_run(&cfg, &g, &report.records)?;
        }
        Command::MixReport {
            graph,
            k,
            c,
            variant,
            steps,
            trials,
            seed,
            band_start,
            force,
            output,
        } => {
            let g = load_graph(&graph)?;
            let params = ChainParams {
                k,
                c,
                variant: variant.into(),
                seed,
                ..ChainParams::default()
            };
            params.validate(g.n())?;
            let init = if band_start {
                let len = g.n() / 2;
                if k != 3 || len % 3 != 0 || g.edge_tags().is_none() {
                    return Err(Error::InvalidArgument(
                        "band start needs a double cycle of length 3n and k = 3".into(),
                    ));
                }
                ForestState::from_partition(g.clone(), &band_state(len / 3, 0))?
            } else {
                let mut rng = chain_rng(seed, u64::MAX);
                match params.variant {
                    Variant::Recom => {
                        initial_balanced_state(&g, k, DEFAULT_INIT_ATTEMPTS, &mut rng)?
                    }
                    Variant::ForestWalk => initial_forest_state(&g, k, &mut rng)?,
                }
            };
            let opts = EnumOptions {
                override_guard: force,
                part_size: None,
            };
            let report = mixing_report(&g, &params, &init, &steps, trials, opts)?;
            let mut out = sink(output.as_deref())?;
            out.write_all(report.to_csv().as_bytes())?;
            out.flush()?;
            if let Some(b) = report.conductance_bound {
                eprintln!("conductance lower bound on mixing time: {b:.3}");
            }
        }
        Command::Render {
            graph,
            partition,
            records,
            index,
            cell,
            output,
        } => {
            let g = load_graph(&graph)?;
            let p = match (partition, records) {
                (Some(text), _) => PartitionView::parse(g.n(), &text)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)?;
                    let line = text.lines().nth(index).ok_or_else(|| {
                        Error::InvalidArgument(format!("no record at line {index}"))
                    })?;
                    let rec: EnsembleRecord =
                        serde_json::from_str(line).map_err(|e| Error::Parse {
                            line: index + 1,
                            msg: e.to_string(),
                        })?;
                    rec.partition()
                }
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "give --partition or --records".into(),
                    ))
                }
            };
            if cell == 0 {
                return Err(Error::InvalidArgument("cell size must be positive".into()));
            }
            render_partition(&g, &p, &output, cell)?;
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Config(_)
        | Error::Parse { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidSize { .. } => 2,
        Error::StepFailure { .. }
        | Error::InitializationFailure { .. }
        | Error::BudgetExhausted { .. } => 3,
        Error::SizeGuard { .. } => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
