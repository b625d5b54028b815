use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

/// Empirical Bayesian super-resolution and deblurring.
#[derive(Parser, Debug)]
#[command(name = "ebsr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Super-resolve a low-resolution image.
    Sr(SolveArgs),
    /// Remove a known Gaussian blur (no decimation).
    Deblur(SolveArgs),
    /// Blur, decimate and add seeded Gaussian noise to a sharp image.
    Degrade(DegradeArgs),
    /// Upscale with a plain interpolator.
    Baseline(BaselineArgs),
    /// Compare an estimate against a reference and print metrics as JSON.
    Eval(EvalArgs),
}

#[derive(Args, Debug, Clone)]
struct KernelArgs {
    /// Blur std in pixels. Defaults to 2r/3 for zoom factor r.
    #[arg(long, value_parser = positive)]
    kernel_std: Option<f64>,
    /// Odd blur support. Defaults to 2r + 1.
    #[arg(long, value_parser = odd)]
    kernel_size: Option<usize>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// Zoom factor; ignored by `deblur`, which always uses 1.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    scale: u32,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    iters: u32,
    /// Filter bank JSON; the built-in derivative bank is used otherwise.
    #[arg(long)]
    filters: Option<PathBuf>,
    /// Known noise std. Disables noise estimation.
    #[arg(long, value_parser = non_negative)]
    sigma: Option<f64>,
    /// Write the per-iteration JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    kernel: KernelArgs,
}

#[derive(Args, Debug)]
struct DegradeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    scale: u32,
    #[arg(long, default_value_t = 0.0, value_parser = non_negative)]
    noise_sigma: f64,
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    kernel: KernelArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Nn,
    Bicubic,
}

#[derive(Args, Debug)]
struct BaselineArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    scale: u32,
    #[arg(long, value_enum)]
    method: Method,
}

#[derive(Args, Debug)]
struct EvalArgs {
    reference: PathBuf,
    estimate: PathBuf,
    /// Pixels dropped from every border before measuring.
    #[arg(long, default_value_t = 0)]
    shave: usize,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got {s}")),
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a non-negative number, got {s}")),
    }
}

fn odd(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v % 2 == 1 => Ok(v),
        _ => Err(format!("expected an odd positive integer, got {s}")),
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("EBSR_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("EBSR_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Sr(a) => commands::solve(&a, a.scale as usize),
        Command::Deblur(a) => commands::solve(&a, 1),
        Command::Degrade(a) => commands::degrade(&a),
        Command::Baseline(a) => commands::baseline(&a),
        Command::Eval(a) => commands::eval(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
