use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use qoce::eval::{self, TokenSet};
use qoce::graph::{read_edge_list, write_edge_list, Graph};
use qoce::pipeline::{self, DetectionConfig};
use qoce::seeding;

#[derive(Parser)]
#[command(
    name = "qoce",
    version,
    about = "Overlapping community detection by clique expansion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct DetectArgs {
    /// Random walk steps.
    #[arg(long, default_value_t = 3)]
    t0: usize,
    /// Sampling threshold; vertices need strictly more mass than this.
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    /// Weight of the linear size penalty.
    #[arg(long, default_value_t = 0.2)]
    alpha: f64,
    /// Sweep window.
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 4)]
    min_clique: usize,
    #[arg(long, default_value_t = 0.75)]
    overlap_threshold: f64,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long)]
    workers: Option<usize>,
}

impl DetectArgs {
    fn config(&self) -> DetectionConfig {
        let mut cfg = DetectionConfig {
            t0: self.t0,
            mu: self.mu,
            alpha: self.alpha,
            window: self.window,
            min_clique: self.min_clique,
            overlap_threshold: self.overlap_threshold,
            ..DetectionConfig::default()
        };
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Detect communities and write one per line.
    Detect {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[command(flatten)]
        params: DetectArgs,
        /// Also write the conductance profile of every sweep as CSV.
        #[arg(long)]
        profile_csv: Option<PathBuf>,
    },
    /// Print the filtered seed cliques.
    Seeds {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 4)]
        min_clique: usize,
        #[arg(long, default_value_t = 0.75)]
        overlap_threshold: f64,
    },
    /// Average F1 of detected communities against ground truth.
    Eval {
        #[arg(long)]
        detected: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Clean the ground truth against this graph first.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Write a planted-clique graph and its ground truth.
    GenPlanted {
        #[arg(long)]
        cliques: usize,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        bridges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_graph: PathBuf,
        #[arg(long)]
        out_truth: PathBuf,
    },
    /// Restrict a graph to its largest component and clean its ground truth.
    Clean {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        out_graph: PathBuf,
        #[arg(long)]
        out_truth: PathBuf,
    },
    /// Average F1 for each value of one parameter, as CSV on stdout.
    Sensitivity {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// One of t0, mu, alpha, window.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[command(flatten)]
        params: DetectArgs,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph> {
    read_edge_list(path).with_context(|| format!("reading graph {}", path.display()))
}

fn load_communities(path: &Path) -> Result<Vec<TokenSet>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let raw = pipeline::read_communities(BufReader::new(file))
        .with_context(|| format!("reading communities {}", path.display()))?;
    Ok(eval::token_sets(&raw))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    ))
}

fn write_token_sets(path: &Path, sets: &[TokenSet]) -> Result<()> {
    let mut out = create(path)?;
    for s in sets {
        writeln!(out, "{}", s.iter().cloned().collect::<Vec<_>>().join(" "))?;
    }
    out.flush()?;
    Ok(())
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Detect {
            graph,
            output,
            params,
            profile_csv,
        } => {
            let g = load_graph(&graph)?;
            let detection = pipeline::detect_parallel(&g, &params.config())?;
            let mut out = create(&output)?;
            pipeline::write_communities(&detection.communities, &mut out)?;
            out.flush()?;
            if let Some(path) = profile_csv {
                let mut csv = create(&path)?;
                pipeline::write_profiles(&detection.traces, &mut csv)?;
                csv.flush()?;
            }
            eprintln!(
                "{} seeds, {} communities, {} warnings",
                detection.seed_count,
                detection.communities.len(),
                detection.warnings.len()
            );
        }
        Command::Seeds {
            graph,
            min_clique,
            overlap_threshold,
        } => {
            let g = load_graph(&graph)?;
            let seeds = seeding::build_seeds_with(&g, min_clique, overlap_threshold);
            let stdout = std::io::stdout();
            pipeline::write_seeds(&g, &seeds, stdout.lock())?;
        }
        Command::Eval {
            detected,
            truth,
            graph,
        } => {
            let detected = load_communities(&detected)?;
            let mut truth = load_communities(&truth)?;
            if let Some(path) = graph {
                let g = load_graph(&path)?;
                truth = eval::clean_ground_truth(&g, &truth).1.communities;
            }
            println!("{:.4}", eval::avg_f1(&detected, &truth));
        }
        Command::GenPlanted {
            cliques,
            size,
            bridges,
            seed,
            out_graph,
            out_truth,
        } => {
            let (g, truth) = eval::gen_planted(cliques, size, bridges, seed)?;
            let mut out = create(&out_graph)?;
            write_edge_list(&g, &mut out)?;
            out.flush()?;
            write_token_sets(&out_truth, &truth.communities)?;
        }
        Command::Clean {
            graph,
            truth,
            out_graph,
            out_truth,
        } => {
            let g = load_graph(&graph)?;
            let raw = load_communities(&truth)?;
            let (clean, cleaned) = eval::clean_ground_truth(&g, &raw);
            let mut out = create(&out_graph)?;
            write_edge_list(&clean, &mut out)?;
            out.flush()?;
            write_token_sets(&out_truth, &cleaned.communities)?;
        }
        Command::Sensitivity {
            graph,
            truth,
            param,
            values,
            params,
        } => {
            let g = load_graph(&graph)?;
            let truth = load_communities(&truth)?;
            println!("{param},avg_f1,communities");
            for value in values {
                let mut cfg = params.config();
                match param.as_str() {
                    "t0" => cfg.t0 = value as usize,
                    "mu" => cfg.mu = value,
                    "alpha" => cfg.alpha = value,
                    "window" | "w" => cfg.window = value as usize,
                    other => {
                        bail!("unknown parameter `{other}` (expected t0, mu, alpha or window)")
                    }
                }
                let detection = pipeline::detect_parallel(&g, &cfg)?;
                let detected = eval::token_sets(&detection.communities.member_sets());
                println!(
                    "{value},{:.4},{}",
                    eval::avg_f1(&detected, &truth),
                    detection.communities.len()
                );
            }
        }
    }
    Ok(())
}
