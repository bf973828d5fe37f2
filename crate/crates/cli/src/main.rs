//! `dirnet`: command-line front end for directed network analysis.
//!
//! Networks travel as JSON on standard input or in a positional file, so
//! commands compose with pipes:
//!
//!     dirnet model circle --nodes 6 | dirnet persist dowker-si --maxdim 1
//!
//! Exit status is 0 on success, 2 for invalid input and 3 when a size guard
//! refuses the computation.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use dirnet_core::clustering::{merge_tree, nonreciprocal, reciprocal};
use dirnet_core::distance::{
    dn_exact_with, dn_upper_linf, dn_to_point, DnOptions, DEFAULT_DN_BUDGET,
};
use dirnet_core::epsilon::{is_epsilon_system, max_min_mass, Cover, MassMode};
use dirnet_core::io::{diagram_to_value, NetworkDocument, UltrametricDocument};
use dirnet_core::network::FiniteNetwork;
use dirnet_core::persistence::{diagrams, FiltrationKind, DEFAULT_SIMPLEX_BUDGET};
use dirnet_core::sampling::{
    run_convergence_experiment, sample_circle, sample_iid, ExperimentConfig, GroundTruth, Method,
};
use dirnet_core::Error;

/// Overrides the simplex budget of every filtration.
const SIMPLEX_BUDGET_VAR: &str = "DIRNET_SIMPLEX_BUDGET";
/// Overrides the map-pair budget of exact network distance.
const DN_BUDGET_VAR: &str = "DIRNET_DN_BUDGET";

#[derive(Parser)]
#[command(
    name = "dirnet",
    version,
    about = "Distances, clustering and persistent homology of directed networks",
    after_help = "Budgets: DIRNET_SIMPLEX_BUDGET caps the simplices of a filtration \
                  (default 2000000); DIRNET_DN_BUDGET caps the map pairs |X|^|Y|·|Y|^|X| \
                  searched by exact network distance (default 2176782336)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hierarchical clustering; prints the ultrametric {"nodes", "u"}.
    Cluster {
        method: ClusterMethod,
        /// Network JSON file (standard input when absent or "-").
        input: Option<PathBuf>,
        /// Print the dendrogram {"leaves", "leaf_heights", "merges"} instead.
        #[arg(long)]
        tree: bool,
    },
    /// Persistence diagrams in dimensions 0..=K as [{"dim", "pairs"}, ...].
    Persist {
        filtration: FiltrationArg,
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        maxdim: usize,
        /// Print barcodes, one "[b, d)" line per bar, instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Network distance.
    Dist {
        #[command(subcommand)]
        which: DistCommand,
    },
    /// Model networks.
    Model {
        #[command(subcommand)]
        which: ModelCommand,
    },
    /// ε-systems and max-min block mass.
    Epsilon {
        #[command(subcommand)]
        which: EpsilonCommand,
    },
    /// Draw an i.i.d. sample and print the induced subnetwork.
    Sample(SampleArgs),
    /// Run a seeded convergence experiment described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads for the trials.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Print CSV rows instead of the JSON report.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClusterMethod {
    Nr,
    R,
}

#[derive(Clone, Copy, ValueEnum)]
enum FiltrationArg {
    Rips,
    DowkerSi,
    DowkerSo,
}

#[derive(Subcommand)]
enum DistCommand {
    /// Exact distance between two networks; prints {"value"}.
    Exact {
        a: PathBuf,
        b: PathBuf,
        /// Also print an optimal map pair {"phi", "psi"} as node ids.
        #[arg(long)]
        witness: bool,
    },
    /// Closed-form distance to the one-node network with weight ALPHA.
    ToPoint {
        #[arg(allow_negative_numbers = true)]
        alpha: f64,
        input: Option<PathBuf>,
    },
    /// Half the entrywise ℓ∞ distance of two same-size weight matrices, an
    /// upper bound on the network distance.
    Linf { a: PathBuf, b: PathBuf },
}

#[derive(Subcommand)]
enum ModelCommand {
    /// Directed circle on N evenly spaced nodes.
    Circle {
        #[arg(long)]
        nodes: usize,
    },
}

#[derive(Subcommand)]
enum EpsilonCommand {
    /// Test whether a cover is an ε-system; prints {"epsilon_system": bool}.
    Check {
        #[arg(long)]
        eps: f64,
        /// JSON array of blocks, each an array of node ids.
        #[arg(long)]
        cover: PathBuf,
        /// Also require every block to lie in one declared component.
        #[arg(long)]
        refined: bool,
        input: Option<PathBuf>,
    },
    /// Largest least block mass over refined ε-systems of the support.
    Search {
        #[arg(long)]
        eps: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        input: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Greedy,
}

#[derive(Args)]
struct SampleArgs {
    /// Number of i.i.d. draws; repeated nodes are kept once.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    /// Sample the continuous directed circle instead of an input network.
    #[arg(long, conflicts_with = "input")]
    circle: bool,
    /// Measured network JSON (uniform measure when "measure" is absent).
    input: Option<PathBuf>,
}

/// Experiment config file. `ground_truth` is either "circle" or a network
/// document.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    ground_truth: TruthSpec,
    method: Method,
    epsilon: f64,
    #[serde(default)]
    sizes: Option<Vec<usize>>,
    #[serde(default)]
    trials: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    dowker_dim: Option<usize>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TruthSpec {
    Named(String),
    Network(NetworkDocument),
}

#[derive(Serialize)]
struct MassReport {
    value: f64,
    cover: Vec<Vec<String>>,
    components_assumed: bool,
}

enum Failure {
    Input(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Vec::new();
    match run(cli.command, &mut out) {
        Ok(()) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(&out).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command, out: &mut Vec<u8>) -> Outcome<()> {
    match command {
        Command::Cluster {
            method,
            input,
            tree,
        } => {
            let net = read_network(input.as_ref())?;
            let u = match method {
                ClusterMethod::Nr => nonreciprocal(&net),
                ClusterMethod::R => reciprocal(&net),
            };
            if tree {
                emit(out, &merge_tree(&u)?)
            } else {
                emit(out, &UltrametricDocument::from(&u))
            }
        }
        Command::Persist {
            filtration,
            input,
            maxdim,
            text,
        } => {
            let budget = simplex_budget()?;
            let net = read_network(input.as_ref())?;
            let kind = match filtration {
                FiltrationArg::Rips => FiltrationKind::Rips,
                FiltrationArg::DowkerSi => FiltrationKind::DowkerSink,
                FiltrationArg::DowkerSo => FiltrationKind::DowkerSource,
            };
            let dgms = diagrams(&net, kind, maxdim, budget)?;
            if text {
                for d in &dgms {
                    out.extend_from_slice(format!("dim {}\n{}", d.dim(), d.barcode()).as_bytes());
                }
                Ok(())
            } else {
                let values: Vec<Value> = dgms.iter().map(diagram_to_value).collect();
                emit(out, &values)
            }
        }
        Command::Dist { which } => match which {
            DistCommand::Exact { a, b, witness } => {
                let budget = dn_budget()?;
                let (x, y) = (read_network(Some(&a))?, read_network(Some(&b))?);
                let r = dn_exact_with(&x, &y, DnOptions { budget, witness })?;
                match r.witness {
                    Some(w) => {
                        let ids = |net: &FiniteNetwork, map: &[usize]| -> Vec<String> {
                            map.iter().map(|&i| net.nodes()[i].clone()).collect()
                        };
                        emit(
                            out,
                            &json!({
                                "value": r.value,
                                "phi": ids(&y, &w.phi),
                                "psi": ids(&x, &w.psi),
                            }),
                        )
                    }
                    None => emit(out, &json!({ "value": r.value })),
                }
            }
            DistCommand::ToPoint { alpha, input } => {
                if !alpha.is_finite() {
                    return Err(Failure::Input(format!("ALPHA must be finite, got {alpha}")));
                }
                let x = read_network(input.as_ref())?;
                emit(out, &json!({ "value": dn_to_point(&x, alpha) }))
            }
            DistCommand::Linf { a, b } => {
                let (x, y) = (read_network(Some(&a))?, read_network(Some(&b))?);
                emit(out, &json!({ "value": dn_upper_linf(&x, &y.rows())? }))
            }
        },
        Command::Model { which } => match which {
            ModelCommand::Circle { nodes } => {
                let net = FiniteNetwork::directed_circle(nodes)?;
                emit(out, &NetworkDocument::from_network(&net))
            }
        },
        Command::Epsilon { which } => match which {
            EpsilonCommand::Check {
                eps,
                cover,
                refined,
                input,
            } => {
                let doc = read_document(input.as_ref())?;
                let m = doc.measured()?;
                let net = m.network();
                let blocks: Vec<Vec<String>> = serde_json::from_str(&read_text(Some(&cover))?)
                    .map_err(|e| json_error("cover", e))?;
                let blocks = blocks
                    .iter()
                    .map(|b| b.iter().map(|id| node_index(net, id)).collect())
                    .collect::<Outcome<Vec<Vec<usize>>>>()?;
                let cover = Cover::new(blocks)?;
                let ok = is_epsilon_system(net, &cover, eps, refined, m.components())?;
                emit(out, &json!({ "epsilon_system": ok }))
            }
            EpsilonCommand::Search { eps, mode, input } => {
                let m = read_document(input.as_ref())?.measured()?;
                let mode = match mode {
                    ModeArg::Exact => MassMode::Exact,
                    ModeArg::Greedy => MassMode::Greedy,
                };
                let s = max_min_mass(&m, eps, mode)?;
                let nodes = m.network().nodes();
                emit(
                    out,
                    &MassReport {
                        value: s.value,
                        cover: s
                            .cover
                            .blocks()
                            .iter()
                            .map(|b| b.iter().map(|&i| nodes[i].clone()).collect())
                            .collect(),
                        components_assumed: s.components_assumed,
                    },
                )
            }
        },
        Command::Sample(args) => {
            let net = if args.circle {
                sample_circle(args.n, args.seed)?
            } else {
                let m = read_document(args.input.as_ref())?.measured()?;
                sample_iid(&m, args.n, args.seed)?
            };
            emit(out, &NetworkDocument::from_network(&net))
        }
        Command::Experiment { config, jobs, csv } => {
            if jobs == 0 {
                return Err(Failure::Input("--jobs must be at least 1".into()));
            }
            let cfg = experiment_config(&read_text(Some(&config))?)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Failure::Input(format!("cannot start {jobs} workers: {e}")))?;
            let report = pool.install(|| run_convergence_experiment(&cfg))?;
            if csv {
                out.extend_from_slice(report.to_csv().as_bytes());
                Ok(())
            } else {
                emit(out, &report)
            }
        }
    }
}

fn emit<T: Serialize>(out: &mut Vec<u8>, value: &T) -> Outcome<()> {
    serde_json::to_writer(&mut *out, value)
        .map_err(|e| Failure::Input(format!("cannot serialize output: {e}")))?;
    out.push(b'\n');
    Ok(())
}

fn read_text(path: Option<&PathBuf>) -> Outcome<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => fs::read_to_string(p)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("cannot read standard input: {e}")))?;
            Ok(s)
        }
    }
}

fn read_document(path: Option<&PathBuf>) -> Outcome<NetworkDocument> {
    let source = path.map_or("standard input".to_string(), |p| p.display().to_string());
    NetworkDocument::from_json(&read_text(path)?)
        .map_err(|e| Failure::Input(format!("{source}: {e}")))
}

fn read_network(path: Option<&PathBuf>) -> Outcome<FiniteNetwork> {
    Ok(read_document(path)?.network()?)
}

fn node_index(net: &FiniteNetwork, id: &str) -> Outcome<usize> {
    net.index_of(id)
        .ok_or_else(|| Failure::Input(format!("cover names unknown node id {id:?}")))
}

fn json_error(what: &str, e: serde_json::Error) -> Failure {
    Failure::Input(format!("{what}: line {} column {}: {e}", e.line(), e.column()))
}

fn env_budget(var: &str, default: f64) -> Outcome<f64> {
    match std::env::var(var) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|b| *b >= 0.0)
            .ok_or_else(|| Failure::Input(format!("{var} must be a nonnegative number, got {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn simplex_budget() -> Outcome<usize> {
    Ok(env_budget(SIMPLEX_BUDGET_VAR, DEFAULT_SIMPLEX_BUDGET as f64)? as usize)
}

fn dn_budget() -> Outcome<f64> {
    env_budget(DN_BUDGET_VAR, DEFAULT_DN_BUDGET)
}

fn experiment_config(text: &str) -> Outcome<ExperimentConfig> {
    let file: ExperimentFile =
        serde_json::from_str(text).map_err(|e| json_error("experiment config", e))?;
    let truth = match file.ground_truth {
        TruthSpec::Named(name) if name == "circle" => GroundTruth::ContinuousCircle,
        TruthSpec::Named(name) => {
            return Err(Failure::Input(format!(
                "unknown ground truth {name:?}; use \"circle\" or a network document"
            )))
        }
        TruthSpec::Network(doc) => GroundTruth::Finite(doc.measured()?),
    };
    let mut cfg = ExperimentConfig::new(truth, file.method, file.epsilon);
    if let Some(sizes) = file.sizes {
        cfg.sizes = sizes;
    }
    if let Some(trials) = file.trials {
        cfg.trials = trials;
    }
    if let Some(seed) = file.seed {
        cfg.seed = seed;
    }
    if let Some(dim) = file.dowker_dim {
        cfg.dowker_dim = dim;
    }
    cfg.dn_budget = dn_budget()?;
    cfg.simplex_budget = simplex_budget()?;
    Ok(cfg)
}
