use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use msploc::io::{
    cache_gc, inspect, load_graphs, run_enumerate, run_evaluate, EnumerationCache, Format, InspectFilter, InspectRow,
    IoError, RunConfig, RunOptions, RunSummary, CACHE_ENV,
};

#[derive(Parser)]
#[command(name = "msploc", version, about = "Localization graph sums for weighted Fermat quintics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate flat regular graphs and write graphs.json.
    Enumerate(RunArgs),
    /// Enumerate, evaluate every graph and write all artifacts.
    Evaluate(RunArgs),
    /// List graphs of a graphs.json file, optionally filtered.
    Inspect(InspectArgs),
    /// Maintain the enumeration cache.
    Cache {
        #[command(subcommand)]
        command: CacheCommand,
    },
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    config: PathBuf,
    /// Output directory; defaults to the configured one, then `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// symbolic, zero or tabulated:<csv path>.
    #[arg(long)]
    oracle: Option<String>,
    /// Comma separated list of json, csv, dot.
    #[arg(long, value_delimiter = ',')]
    formats: Option<Vec<Format>>,
    /// Cache root.
    #[arg(long, env = CACHE_ENV)]
    cache_dir: Option<PathBuf>,
    /// Skip the cache even when a root is set.
    #[arg(long)]
    no_cache: bool,
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long)]
    max_edges: Option<usize>,
    #[arg(long)]
    max_edge_degree_numerator: Option<u32>,
    #[arg(long)]
    max_vertex_genus: Option<u32>,
    #[arg(long)]
    max_web_edges: Option<usize>,
}

#[derive(Args)]
struct InspectArgs {
    /// A graphs.json artifact.
    graphs: PathBuf,
    /// Keep graphs with at least one edge of this type (repeatable).
    #[arg(long = "has", value_parser = InspectFilter::parse_edge_type)]
    has: Vec<msploc::graph::EdgeType>,
    /// Keep graphs with no edge of this type (repeatable).
    #[arg(long = "lacks", value_parser = InspectFilter::parse_edge_type)]
    lacks: Vec<msploc::graph::EdgeType>,
    /// Vertex counts per level as n0/n1/ninf.
    #[arg(long, value_parser = InspectFilter::parse_levels)]
    levels: Option<[usize; 3]>,
    /// Automorphism group order.
    #[arg(long)]
    aut: Option<u64>,
    /// Exact canonical form.
    #[arg(long)]
    canonical: Option<String>,
    /// Print DOT instead of the table.
    #[arg(long)]
    dot: bool,
}

#[derive(Subcommand)]
enum CacheCommand {
    /// Remove temporaries, unreadable entries and, optionally, old ones.
    Gc {
        #[arg(long, env = CACHE_ENV)]
        cache_dir: PathBuf,
        /// Also remove entries older than this many days.
        #[arg(long)]
        max_age_days: Option<u64>,
    },
}

fn load_config(args: &RunArgs) -> Result<(msploc::io::ResolvedConfig, RunOptions), IoError> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(t) = args.threads {
        cfg.threads = Some(t);
    }
    if let Some(o) = &args.oracle {
        cfg.oracle = o.clone();
    }
    if let Some(f) = &args.formats {
        cfg.formats = f.clone();
    }
    let caps = &mut cfg.caps;
    caps.max_vertices = args.max_vertices.or(caps.max_vertices);
    caps.max_edges = args.max_edges.or(caps.max_edges);
    caps.max_edge_degree_numerator = args.max_edge_degree_numerator.or(caps.max_edge_degree_numerator);
    caps.max_vertex_genus = args.max_vertex_genus.or(caps.max_vertex_genus);
    caps.max_web_edges = args.max_web_edges.or(caps.max_web_edges);
    let base = args.config.parent().unwrap_or(Path::new("")).to_path_buf();
    let resolved = cfg.resolve(&base)?;
    let cache_root = if args.no_cache { None } else { args.cache_dir.clone().or(resolved.cache_dir.clone()) };
    let out = args.out.clone().or(resolved.output.clone()).unwrap_or_else(|| PathBuf::from("out"));
    Ok((resolved, RunOptions { out, cache: cache_root.map(EnumerationCache::new) }))
}

fn report(s: &RunSummary) {
    let hit = if s.cache_hit { " (cached)" } else { "" };
    println!("{} graphs, {} pure loops{hit}", s.graphs, s.pure_loops);
    if let Some(t) = &s.total {
        println!("total: {t}");
    }
    for p in &s.written {
        println!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> Result<(), IoError> {
    match cli.command {
        Command::Enumerate(args) => {
            let (cfg, opts) = load_config(&args)?;
            report(&run_enumerate(&cfg, &opts)?);
        }
        Command::Evaluate(args) => {
            let (cfg, opts) = load_config(&args)?;
            report(&run_evaluate(&cfg, &opts)?);
        }
        Command::Inspect(args) => {
            let artifact = load_graphs(&args.graphs)?;
            let filter = InspectFilter {
                has_edge: args.has,
                lacks_edge: args.lacks,
                levels: args.levels,
                automorphisms: args.aut,
                canonical: args.canonical,
            };
            let rows = inspect(&artifact, &filter)?;
            if args.dot {
                rows.iter().for_each(|r| print!("{}", r.dot));
            } else {
                println!("{}", InspectRow::HEADER);
                rows.iter().for_each(|r| println!("{r}"));
            }
        }
        Command::Cache { command: CacheCommand::Gc { cache_dir, max_age_days } } => {
            let age = max_age_days.map(|d| Duration::from_secs(d * 86_400));
            let r = cache_gc(&cache_dir, age)?;
            println!("removed {}, kept {}", r.removed.len(), r.kept);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
