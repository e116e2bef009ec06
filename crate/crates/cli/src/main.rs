//! `greedyq`: experiment driver for greedy quantization sequences.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use greedyq_core::Distribution1D;

pub use config::ExperimentConfig;

/// Input the user got wrong; exits with status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

#[derive(Parser, Debug)]
#[command(name = "greedyq", version, about = "Greedy quantization experiments")]
pub struct Cli {
    /// Output file (CSV or JSON depending on the command).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Omit the timestamp line from CSV output.
    #[arg(long, global = true)]
    deterministic: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a greedy sequence; writes JSON, or CSV when --out ends in .csv.
    Build(BuildArgs),
    /// Quantization cubature trace of a test function.
    Integrate(IntegrateArgs),
    /// Grow a product or Box-Müller grid.
    Grid(GridArgs),
    /// Star discrepancy of a point file.
    Disc(DiscArgs),
    /// Diagnostic suites on a greedy sequence.
    Diagnose(DiagnoseArgs),
    /// Option pricing benchmarks.
    Price(PriceArgs),
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    dist: Distribution1D,
    #[arg(long)]
    n: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TestFn {
    One,
    X,
    X2,
    Abs,
    Sin,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Full,
    Recursive,
}

#[derive(Args, Debug)]
struct IntegrateArgs {
    #[arg(long)]
    dist: Distribution1D,
    #[arg(long = "fn", value_enum)]
    func: TestFn,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Recursive)]
    mode: Mode,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GridMethod {
    Product,
    Boxmuller,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Marginal law of every coordinate (product grids only).
    #[arg(long, default_value = "normal")]
    law: Distribution1D,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = GridMethod::Product)]
    method: GridMethod,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum DiscMethod {
    Formula,
    Brute,
}

#[derive(Args, Debug)]
struct DiscArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum, default_value_t = DiscMethod::Formula)]
    method: DiscMethod,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Rate,
    Mismatch,
    Weights,
    Stationarity,
    Quasi,
}

#[derive(Args, Debug)]
struct DiagnoseArgs {
    #[arg(long)]
    dist: Distribution1D,
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long)]
    n: usize,
    /// Error order for the rate and quasi suites.
    #[arg(long, default_value_t = 2.0)]
    r: f64,
    /// Measurement order for the mismatch suite.
    #[arg(long, default_value_t = 2.5)]
    s: f64,
    /// Exponent for the quasi suite.
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Instrument {
    Call1d,
    Basket3d,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum PriceMethod {
    Greedy,
    GreedyUniform,
    VdcWeighted,
    VdcUniform,
    Product,
    Boxmuller,
    Mc,
}

#[derive(Args, Debug)]
struct PriceArgs {
    #[arg(long, value_enum)]
    instrument: Instrument,
    #[arg(long, value_enum)]
    method: PriceMethod,
    /// Grid size, or sample count for `mc`.
    #[arg(long)]
    n: usize,
    /// Monte Carlo samples of the basket reference price.
    #[arg(long, default_value_t = 1_000_000)]
    mc_samples: usize,
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

impl Cli {
    pub fn config(&self) -> ExperimentConfig {
        let mut cfg = ExperimentConfig {
            seed: self.seed,
            out: self.out.clone(),
            ..Default::default()
        };
        match &self.command {
            Command::Build(a) => {
                cfg.command = "build".into();
                cfg.dist = Some(a.dist.to_string());
                cfg.n = Some(a.n);
            }
            Command::Integrate(a) => {
                cfg.command = "integrate".into();
                cfg.dist = Some(a.dist.to_string());
                cfg.n = Some(a.n);
                cfg.method = Some(format!("{}-{}", value_name(a.func), value_name(a.mode)));
            }
            Command::Grid(a) => {
                cfg.command = "grid".into();
                cfg.dist = Some(a.law.to_string());
                cfg.n = Some(a.n);
                cfg.d = Some(a.d);
                cfg.method = Some(value_name(a.method));
            }
            Command::Disc(a) => {
                cfg.command = "disc".into();
                cfg.d = Some(a.d);
                cfg.method = Some(value_name(a.method));
            }
            Command::Diagnose(a) => {
                cfg.command = "diagnose".into();
                cfg.dist = Some(a.dist.to_string());
                cfg.n = Some(a.n);
                cfg.method = Some(value_name(a.suite));
                match a.suite {
                    Suite::Rate => cfg.r = Some(a.r),
                    Suite::Mismatch => cfg.s = Some(a.s),
                    Suite::Quasi => {
                        cfg.r = Some(a.r);
                        cfg.rho = Some(a.rho);
                    }
                    Suite::Weights | Suite::Stationarity => {}
                }
            }
            Command::Price(a) => {
                cfg.command = "price".into();
                cfg.n = Some(a.n);
                cfg.method = Some(format!(
                    "{}-{}",
                    value_name(a.instrument),
                    value_name(a.method)
                ));
            }
        }
        cfg
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
