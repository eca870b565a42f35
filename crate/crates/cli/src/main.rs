//! `pbspm`: temporal link-prediction experiments from the command line.

mod commands;
mod error;
mod fetch;
mod manifest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pbspm_core::evaluation::{Method, ScoreAveraging};
use pbspm_core::EdgeFormat;

use crate::error::CliError;
use crate::manifest::{parse_float_grid, parse_list, Emit, RunManifest};

#[derive(Parser)]
#[command(
    name = "pbspm",
    version,
    about = "Popularity-aware structural perturbation link prediction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate methods and write precision reports and top-L predictions.
    Predict(RunArgs),
    /// Precision versus alpha (per p_fresher) and optionally versus m/n.
    Sweep(RunArgs),
    /// Eigenvalues and eigengaps of the training adjacency, and the selected m.
    Spectrum(RunArgs),
    /// Leading-eigenvalue correction, correlation change and per-node numbers.
    Diagnose(RunArgs),
    /// Download a dataset and verify its SHA-256 checksum.
    Fetch(FetchArgs),
    /// Write a seeded synthetic temporal edge list.
    Synth(SynthArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// TOML manifest; flags given on the command line override its values.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    /// tsv (whitespace separated) or csv.
    #[arg(long)]
    format: Option<EdgeFormat>,
    #[arg(long)]
    dataset: Option<String>,
    /// Comma separated: CN,AA,RA,Katz,SRW,SPM,PBSPM,FastPBSPM.
    #[arg(long)]
    method: Option<String>,
    /// Value, comma list or start:stop[:step] grid.
    #[arg(long)]
    alpha: Option<String>,
    /// Value, comma list or start:stop[:step] grid.
    #[arg(long = "p-fresher")]
    p_fresher: Option<String>,
    #[arg(long = "p-h")]
    p_h: Option<f64>,
    #[arg(long)]
    realizations: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Integer m values: "all", a comma list or start:stop[:step].
    #[arg(long = "m-grid")]
    m_grid: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "L")]
    l: Option<usize>,
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
    /// Comma separated: csv,json.
    #[arg(long)]
    emit: Option<String>,
    #[arg(long = "score-averaging")]
    score_averaging: Option<ScoreAveraging>,
    #[arg(long = "probe-fraction")]
    probe_fraction: Option<f64>,
    /// Default L to the probe size before dropping pairs with unseen nodes.
    #[arg(long = "unfiltered-l")]
    unfiltered_l: bool,
    #[arg(long = "katz-damping")]
    katz_damping: Option<f64>,
    /// Sum Katz paths up to this length instead of the closed form.
    #[arg(long = "katz-max-path")]
    katz_max_path: Option<usize>,
    #[arg(long = "srw-steps")]
    srw_steps: Option<usize>,
    /// Relative eigengap threshold for automatic m selection.
    #[arg(long = "gap-threshold")]
    gap_threshold: Option<f64>,
}

impl RunArgs {
    fn into_manifest(self) -> Result<RunManifest, CliError> {
        let mut m = match &self.manifest {
            Some(path) => RunManifest::load(path)?,
            None => RunManifest::default(),
        };
        if let Some(v) = self.input {
            m.input = v;
        }
        if let Some(v) = self.format {
            m.format = v;
        }
        if let Some(v) = self.dataset {
            m.dataset = Some(v);
        }
        if let Some(v) = self.method {
            m.methods = parse_list::<Method>(&v)?;
        }
        if let Some(v) = self.alpha {
            m.alphas = parse_float_grid(&v)?;
        }
        if let Some(v) = self.p_fresher {
            m.p_freshers = parse_float_grid(&v)?;
        }
        if let Some(v) = self.p_h {
            m.p_h = v;
        }
        if let Some(v) = self.realizations {
            m.realizations = v;
        }
        if let Some(v) = self.m {
            m.m = Some(v);
        }
        if let Some(v) = self.m_grid {
            m.m_grid = Some(v);
        }
        if let Some(v) = self.seed {
            m.seed = v;
        }
        if let Some(v) = self.l {
            m.l = Some(v);
        }
        if let Some(v) = self.out_dir {
            m.out_dir = v;
        }
        if let Some(v) = self.emit {
            m.emit = parse_list::<Emit>(&v)?;
        }
        if let Some(v) = self.score_averaging {
            m.score_averaging = v;
        }
        if let Some(v) = self.probe_fraction {
            m.probe_fraction = v;
        }
        if self.unfiltered_l {
            m.unfiltered_l = true;
        }
        if let Some(v) = self.katz_damping {
            m.katz_damping = Some(v);
        }
        if let Some(v) = self.katz_max_path {
            m.katz_max_path_length = Some(v);
        }
        if let Some(v) = self.srw_steps {
            m.srw_steps = v;
        }
        if let Some(v) = self.gap_threshold {
            m.gap_threshold = v;
        }
        Ok(m)
    }
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long)]
    url: String,
    /// Expected SHA-256 of the downloaded bytes, hex encoded.
    #[arg(long)]
    sha256: String,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 200)]
    nodes: usize,
    /// Edges each arriving node creates.
    #[arg(long, default_value_t = 3)]
    links: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

fn print_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Predict(args) => print_written(&commands::cmd_predict(&args.into_manifest()?)?),
        Command::Sweep(args) => print_written(&commands::cmd_sweep(&args.into_manifest()?)?),
        Command::Spectrum(args) => {
            let (m, paths) = commands::cmd_spectrum(&args.into_manifest()?)?;
            println!("selected m = {m}");
            print_written(&paths);
        }
        Command::Diagnose(args) => print_written(&commands::cmd_diagnose(&args.into_manifest()?)?),
        Command::Fetch(args) => {
            let digest = fetch::fetch(&args.url, &args.sha256, &args.output)?;
            println!("wrote {} (sha256 {digest})", args.output.display());
        }
        Command::Synth(args) => {
            let graph = pbspm_core::synthetic::active_growth(args.nodes, args.links, args.seed)?;
            let file = std::fs::File::create(&args.output).map_err(|e| CliError::io(&args.output, e))?;
            let mut out = std::io::BufWriter::new(file);
            graph
                .write_edge_list(&mut out)
                .map_err(|e| CliError::io(&args.output, e))?;
            std::io::Write::flush(&mut out).map_err(|e| CliError::io(&args.output, e))?;
            println!(
                "wrote {} ({} nodes, {} edges)",
                args.output.display(),
                graph.n(),
                graph.edge_count()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
