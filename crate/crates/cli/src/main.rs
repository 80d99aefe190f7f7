use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use citenet_core::communities::CommunityError;
use citenet_core::config::PipelineConfig;
use citenet_core::extract::{self, CodeDocument, CodeRegistry};
use citenet_core::fixture;
use citenet_core::pipeline::{self, PipelineError, Stage};
use citenet_core::report::{self, Annotations, ReportError};
use citenet_core::DiGraph;
use log::{info, warn};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "citenet", version, about = "Citation-network analysis of legal code corpora")]
struct Cli {
    /// Pipeline configuration file (TOML). Flags override its values.
    #[arg(long, global = true, env = "CITENET_CONFIG", value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the citation edge list from a directory of `<slug>.txt` files
    Extract {
        #[arg(long, value_name = "DIR")]
        corpus: PathBuf,
        #[arg(long, value_name = "FILE")]
        registry: PathBuf,
        /// Edge list destination (stdout when omitted)
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
        /// Node sidecar destination (defaults to the edge list path with a `.nodes` extension)
        #[arg(long, value_name = "FILE")]
        nodes: Option<PathBuf>,
    },
    /// Full analysis report
    Analyze(AnalysisArgs),
    /// Rankings and rich club only
    Richclub(AnalysisArgs),
    /// Communities of the network without its rich club
    Communities(AnalysisArgs),
    /// Random-graph baselines and the structural verdict
    Nulls(AnalysisArgs),
    /// DOT and/or GraphML rendering of a graph annotated by a report
    Export {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_name = "FILE")]
        report: PathBuf,
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        graphml: Option<PathBuf>,
    },
    /// Write the bundled synthetic 52-code corpus and its registry
    Fixture {
        #[arg(short, long, value_name = "DIR")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Edge list (`citing<TAB>cited<TAB>count`)
    edges: PathBuf,
    /// Node sidecar (defaults to the edge list path with a `.nodes` extension, if present)
    #[arg(long, value_name = "FILE")]
    nodes: Option<PathBuf>,
    /// Registry used to restore display names
    #[arg(long, value_name = "FILE")]
    registry: Option<PathBuf>,
}

#[derive(Args)]
struct AnalysisArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Report destination (stdout when omitted)
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
    /// Identifier recorded in the report provenance
    #[arg(long)]
    run_id: Option<String>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    seed: Option<u64>,
    /// Samples per random-graph baseline
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    k_citing: Option<usize>,
    #[arg(long)]
    k_cited: Option<usize>,
    #[arg(long)]
    min_community_size: Option<usize>,
    /// Watts-Strogatz rewiring probability
    #[arg(long)]
    ws_p: Option<f64>,
    /// Swap attempts per edge in degree-preserving rewiring
    #[arg(long)]
    rewire_budget_factor: Option<usize>,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Degenerate(_) => 4,
            CliError::Output(_) => 1,
        }
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Config(e) => CliError::Usage(e.to_string()),
            PipelineError::Community(CommunityError::Graph(e)) => CliError::Input(e.to_string()),
            e => CliError::Degenerate(e.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    String::from_utf8(read(path)?)
        .map_err(|e| CliError::Input(format!("{}: invalid UTF-8 at byte {}", path.display(), e.utf8_error().valid_up_to())))
}

fn write(path: &Path, content: &str) -> Result<()> {
    fs::write(path, content).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, content: &str) -> Result<()> {
    match output {
        Some(p) => write(p, content),
        None => std::io::stdout()
            .lock()
            .write_all(content.as_bytes())
            .map_err(|e| CliError::Output(format!("stdout: {e}"))),
    }
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load_config(path: Option<&Path>, o: &Overrides) -> Result<PipelineConfig> {
    let mut config = match path {
        Some(p) => {
            let text = read_text(p)?;
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?
        }
        None => PipelineConfig::default(),
    };
    if let Some(v) = o.seed {
        config.seed = v;
    }
    if let Some(v) = o.samples {
        config.null_samples = v;
    }
    if let Some(v) = o.k_citing {
        config.k_citing = v;
    }
    if let Some(v) = o.k_cited {
        config.k_cited = v;
    }
    if let Some(v) = o.min_community_size {
        config.min_community_size = v;
    }
    if let Some(v) = o.ws_p {
        config.ws_p = v;
    }
    if let Some(v) = o.rewire_budget_factor {
        config.rewire_budget_factor = v;
    }
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

fn load_registry(path: &Path) -> Result<(CodeRegistry, Vec<u8>)> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::Input(format!("{}: invalid UTF-8 at byte {}", path.display(), e.valid_up_to())))?;
    let reg = extract::load_registry(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok((reg, bytes))
}

/// Loads the graph and returns it with the input fingerprints.
fn load_graph(args: &GraphArgs) -> Result<(DiGraph, Vec<String>)> {
    let edges = read(&args.edges)?;
    let mut inputs = vec![pipeline::input_fingerprint(&file_name(&args.edges), &edges)];
    let edges = String::from_utf8(edges)
        .map_err(|e| CliError::Input(format!("{}: invalid UTF-8 at byte {}", args.edges.display(), e.utf8_error().valid_up_to())))?;
    let nodes_path = match &args.nodes {
        Some(p) => Some(p.clone()),
        None => Some(args.edges.with_extension("nodes")).filter(|p| p.is_file() && *p != args.edges),
    };
    let sidecar = match &nodes_path {
        Some(p) => {
            let text = read_text(p)?;
            inputs.push(pipeline::input_fingerprint(&file_name(p), text.as_bytes()));
            Some(text)
        }
        None => None,
    };
    let parsed = report::parse_edge_list(&edges, sidecar.as_deref())
        .map_err(|e| CliError::Input(format!("{}: {e}", args.edges.display())))?;
    for w in &parsed.warnings {
        warn!("{}: {w}", args.edges.display());
    }
    let mut g = parsed.graph;
    if let Some(p) = &args.registry {
        let (reg, bytes) = load_registry(p)?;
        inputs.push(pipeline::input_fingerprint(&file_name(p), &bytes));
        let ids: Vec<_> = g.nodes().collect();
        for v in ids {
            if let Some(entry) = reg.get(g.slug(v)) {
                let name = entry.display_name.clone();
                g.set_display_name(v, name).expect("node exists");
            }
        }
    }
    info!("loaded {} nodes, {} arcs", g.node_count(), g.arc_count());
    Ok((g, inputs))
}

fn extract(corpus: &Path, registry: &Path, output: Option<&Path>, nodes: Option<&Path>) -> Result<()> {
    let (reg, _) = load_registry(registry)?;
    let entries = fs::read_dir(corpus).map_err(|e| CliError::Input(format!("{}: {e}", corpus.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();
    let mut docs = Vec::with_capacity(paths.len());
    for p in &paths {
        let slug = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let bytes = read(p)?;
        let text = extract::normalize_bytes(&bytes)
            .map(|_| String::from_utf8(bytes).expect("validated"))
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        docs.push(CodeDocument::new(slug, text));
    }
    let edges = extract::build_edge_list(&docs, &reg).map_err(|e| CliError::Input(e.to_string()))?;
    info!("{} documents, {} citation pairs", docs.len(), edges.len());
    let mut slugs: Vec<&str> = reg.entries().iter().map(|e| e.slug.as_str()).collect();
    slugs.sort_unstable();
    let sidecar: String = slugs.iter().map(|s| format!("{s}\n")).collect();
    let nodes = nodes
        .map(Path::to_path_buf)
        .or_else(|| output.map(|o| o.with_extension("nodes")));
    emit(output, &edges.to_tsv())?;
    if let Some(p) = nodes {
        write(&p, &sidecar)?;
    }
    Ok(())
}

fn analysis(stage: Option<Stage>, args: &AnalysisArgs, config_path: Option<&Path>) -> Result<()> {
    let config = load_config(config_path, &args.overrides)?;
    let (g, inputs) = load_graph(&args.graph)?;
    let prov = pipeline::provenance(&config, inputs, args.run_id.clone());
    let text = match stage {
        None => report::write_report(&pipeline::analyze(&g, &config, prov)?),
        Some(stage) => report::to_canonical(&pipeline::analyze_partial(&g, &config, prov, stage)?),
    };
    emit(args.output.as_deref(), &text)
}

fn export(graph: &GraphArgs, report_path: &Path, dot: Option<&Path>, graphml: Option<&Path>) -> Result<()> {
    let (g, _) = load_graph(graph)?;
    let text = read_text(report_path)?;
    let rep = report::read_report(&text).map_err(|e| CliError::Input(format!("{}: {e}", report_path.display())))?;
    let ann = Annotations::from_report(&g, &rep).map_err(|e| CliError::Input(e.to_string()))?;
    let as_input = |e: ReportError| CliError::Input(e.to_string());
    let dot_text = write_dot_or_none(&g, &ann, dot.is_some() || graphml.is_none()).map_err(as_input)?;
    let graphml_text = match graphml {
        Some(_) => Some(report::write_graphml(&g, &ann).map_err(as_input)?),
        None => None,
    };
    if let Some(t) = dot_text {
        emit(dot, &t)?;
    }
    if let (Some(p), Some(t)) = (graphml, graphml_text) {
        write(p, &t)?;
    }
    Ok(())
}

fn write_dot_or_none(g: &DiGraph, ann: &Annotations, wanted: bool) -> std::result::Result<Option<String>, ReportError> {
    wanted.then(|| report::write_dot(g, ann)).transpose()
}

fn write_fixture(out: &Path) -> Result<()> {
    let corpus = out.join("corpus");
    fs::create_dir_all(&corpus).map_err(|e| CliError::Output(format!("{}: {e}", corpus.display())))?;
    write(&out.join("registry.tsv"), &fixture::registry_tsv())?;
    write(&out.join("README.md"), fixture::README)?;
    for doc in fixture::documents() {
        write(&corpus.join(format!("{}.txt", doc.slug)), &doc.text)?;
    }
    info!("fixture written to {}", out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let config = cli.config.as_deref();
    match &cli.command {
        Command::Extract {
            corpus,
            registry,
            output,
            nodes,
        } => extract(corpus, registry, output.as_deref(), nodes.as_deref()),
        Command::Analyze(a) => analysis(None, a, config),
        Command::Richclub(a) => analysis(Some(Stage::RichClub), a, config),
        Command::Communities(a) => analysis(Some(Stage::Communities), a, config),
        Command::Nulls(a) => analysis(Some(Stage::NullModels), a, config),
        Command::Export {
            graph,
            report,
            dot,
            graphml,
        } => export(graph, report, dot.as_deref(), graphml.as_deref()),
        Command::Fixture { out } => write_fixture(out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
