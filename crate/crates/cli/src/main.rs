mod commands;
mod error;
mod io;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "debranges", version, about = "Sampling, frames and multiplexing in de Branges spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve phase nodes and write `n,lambda,residual`.
    Nodes(NodesArgs),
    /// Evaluate K(center, x) on a real grid and check its norm by quadrature.
    Kernel(KernelArgs),
    /// Sample a kernel combination at the nodes (`n,lambda,re,im`).
    Sample(SampleArgs),
    /// Rebuild a function on a grid from a sample CSV.
    Reconstruct(ReconstructArgs),
    /// Estimate frame bounds on a probe subspace and write the JSON report.
    Bounds(BoundsArgs),
    /// Encode two signals, pass them through a noisy channel and decode.
    Multiplex(MultiplexArgs),
    /// Run the invariant checks and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Functions {
    /// Generator E as JSON.
    #[arg(long, value_name = "PATH")]
    pub hb: Option<PathBuf>,
    /// Second generator F as JSON.
    #[arg(long, value_name = "PATH")]
    pub hb2: Option<PathBuf>,
    /// Built-in pair: `pw` or `nonpw`. Supplies both E and F.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Window {
    /// Phase offset, reduced into [0, π).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = parse_alpha)]
    pub alpha: f64,
    #[arg(long, default_value_t = -50, allow_negative_numbers = true)]
    pub n_lo: i64,
    #[arg(long, default_value_t = 50, allow_negative_numbers = true)]
    pub n_hi: i64,
    /// Largest accepted node residual.
    #[arg(long, default_value_t = debranges::nodes::RESIDUAL_TOL)]
    pub tol_residual: f64,
}

#[derive(Debug, Args)]
pub struct NodesArgs {
    #[command(flatten)]
    pub functions: Functions,
    #[command(flatten)]
    pub window: Window,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub functions: Functions,
    /// Kernel center as `re,im`.
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub center: String,
    /// Real grid `a:b:step`.
    #[arg(long, default_value = "-3:3:0.25", allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_quad_rel: f64,
    #[arg(long, default_value_t = 64.0)]
    pub quad_half_width: f64,
    #[arg(long, default_value_t = 18)]
    pub quad_max_depth: u32,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub functions: Functions,
    #[command(flatten)]
    pub window: Window,
    /// Combination JSON `{"centers": [[re,im],...], "coefficients": [[re,im],...]}`; random from `--seed` when absent.
    #[arg(long, value_name = "PATH")]
    pub r#ref: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the sampled combination as JSON.
    #[arg(long, value_name = "PATH")]
    pub ref_out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub functions: Functions,
    /// Sample CSV with columns `n,lambda,re,im`.
    #[arg(long, value_name = "PATH")]
    pub samples: PathBuf,
    #[arg(long, default_value = "-3:3:0.25", allow_hyphen_values = true)]
    pub grid: String,
    /// Reference combination; adds an `err` column.
    #[arg(long, value_name = "PATH")]
    pub r#ref: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub functions: Functions,
    #[command(flatten)]
    pub window: Window,
    /// Weight each sample by 1/K(λ,λ).
    #[arg(long)]
    pub normalize: bool,
    /// Probe kernel centers on a real grid `a:b:step`; six fixed probes when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MultiplexArgs {
    #[command(flatten)]
    pub functions: Functions,
    #[command(flatten)]
    pub window: Window,
    /// Per-component noise standard deviation.
    #[arg(long, default_value_t = 0.0)]
    pub sigma: f64,
    /// Drop probability per sample.
    #[arg(long, default_value_t = 0.0)]
    pub drop: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Evaluation grid for the decode errors.
    #[arg(long, default_value = "-2:2:0.25", allow_hyphen_values = true)]
    pub grid: String,
    /// Signal in H(E); random from `--seed` when absent.
    #[arg(long, value_name = "PATH")]
    pub r#ref: Option<PathBuf>,
    /// Signal in H(F); random from `--seed` when absent.
    #[arg(long, value_name = "PATH")]
    pub ref2: Option<PathBuf>,
    /// Write the received stream as `n,lambda,m_re,m_im`.
    #[arg(long, value_name = "PATH")]
    pub stream_out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub functions: Functions,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn parse_alpha(text: &str) -> Result<f64, String> {
    let value: f64 = text.parse().map_err(|e| format!("{e}"))?;
    if !value.is_finite() {
        return Err("must be finite".into());
    }
    let reduced = value.rem_euclid(PI);
    Ok(if reduced >= PI { 0.0 } else { reduced })
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Nodes(a) => commands::nodes(a),
        Command::Kernel(a) => commands::kernel(a),
        Command::Sample(a) => commands::sample(a),
        Command::Reconstruct(a) => commands::reconstruct(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Multiplex(a) => commands::multiplex(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

