mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "stabboot", version, about = "Quarter-turn Clifford ansatz experiments")]
struct Cli {
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, global = true, env = "STABBOOT_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact enumeration against the single-layer closed forms.
    TheoremCheck(TheoremCheckArgs),
    /// Monte Carlo p(+1) over a grid of n and domain-wall fractions r.
    ProbScan(ProbScanArgs),
    /// Synthetic binary classification dataset with quartile-binned features.
    GenData(GenDataArgs),
    /// Sampling phase plus surrogate-guided search on a dataset.
    Bootstrap(BootstrapArgs),
    /// Random Clifford circuits through all three evaluators.
    OracleValidate(OracleValidateArgs),
    /// Invert p = 1/(4 n^nu) for theory values or a prob-scan CSV.
    ExponentFit(ExponentFitArgs),
    /// Build one ansatz circuit and evaluate an observable on it.
    Eval(EvalArgs),
}

#[derive(Args, serde::Serialize)]
pub struct TheoremCheckArgs {
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    /// Entanglement naming convention: frozen, direction-flip or swapped (debug).
    #[arg(long, default_value = "frozen")]
    pub convention: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
pub struct ProbScanArgs {
    /// Comma-separated qubit counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    /// Comma-separated X fractions in [0, 1].
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub r_list: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub layers: usize,
    #[arg(long, default_value = "revlinear")]
    pub ent: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
pub struct GenDataArgs {
    #[arg(long)]
    pub n_samples: usize,
    #[arg(long)]
    pub n_features: usize,
    #[arg(long, default_value_t = 1.0)]
    pub class_sep: f64,
    #[arg(long, default_value_t = 0.5)]
    pub informative_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, serde::Serialize)]
pub struct BootstrapArgs {
    /// Dataset written by gen-data.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub layers: usize,
    #[arg(long, default_value = "revlinear")]
    pub ent: String,
    /// `z`, `x`, `dw:<r>` or an explicit letter string such as `ZZXX`.
    #[arg(long, default_value = "z")]
    pub observable: String,
    #[arg(long, default_value_t = 200)]
    pub sample_budget: usize,
    #[arg(long, default_value_t = 50)]
    pub opt_iterations: usize,
    #[arg(long, default_value_t = 100)]
    pub n_trees: usize,
    #[arg(long, default_value_t = 2)]
    pub min_leaf: usize,
    #[arg(long, default_value_t = 0.5)]
    pub feature_fraction: f64,
    #[arg(long, default_value_t = 512)]
    pub pool_size: usize,
    #[arg(long, default_value_t = 64)]
    pub mutation_count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON-lines trace, one record per evaluation.
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(long)]
    pub summary: PathBuf,
    /// Also write the best circuit in dump format to this path.
    #[arg(long)]
    pub dump_circuit: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
pub struct OracleValidateArgs {
    #[arg(long, default_value_t = 500)]
    pub circuits: usize,
    #[arg(long, default_value_t = 8)]
    pub n_max: usize,
    #[arg(long, default_value_t = 40)]
    pub max_gates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
pub struct ExponentFitArgs {
    /// prob-scan CSV to fit row by row.
    #[arg(long, conflicts_with = "theory")]
    pub input: Option<PathBuf>,
    /// Fit the closed-form endpoint probabilities: strong or weak.
    #[arg(long)]
    pub theory: Option<String>,
    /// Qubit counts for --theory.
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10,12,14,16,18,20")]
    pub n_list: Vec<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, serde::Serialize)]
pub struct EvalArgs {
    /// `n=<int>,layers=<int>,ent=linear|revlinear`.
    #[arg(long)]
    pub ansatz: String,
    /// Comma-separated quarter-turn indices, qubit-major within each layer.
    #[arg(long, value_delimiter = ',')]
    pub angles: Vec<u8>,
    #[arg(long, default_value = "z")]
    pub observable: String,
    /// Print the circuit, one gate per line, before the result.
    #[arg(long)]
    pub dump_circuit: bool,
}

fn configure_threads(threads: Option<usize>) -> anyhow::Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            if !e.to_string().contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
    };
    if let Err(e) = configure_threads(cli.threads) {
        eprintln!("error: {e:#}");
        return ExitCode::FAILURE;
    }
    let result = match &cli.command {
        Command::TheoremCheck(a) => commands::theorem_check(a),
        Command::ProbScan(a) => commands::prob_scan(a),
        Command::GenData(a) => commands::gen_data(a),
        Command::Bootstrap(a) => commands::bootstrap(a),
        Command::OracleValidate(a) => commands::oracle_validate(a),
        Command::ExponentFit(a) => commands::exponent_fit(a),
        Command::Eval(a) => commands::eval(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
