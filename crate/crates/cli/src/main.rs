//! Command-line front end: Monte-Carlo sweeps, sphere-packing bounds, turbo
//! distance estimates, and configuration validation.
//!
//! Exit codes: 0 on success, 2 for configuration or usage errors, 3 for
//! runtime failures (I/O, numerics).

use clap::{Args, Parser, Subcommand};
use jamlink::bounds::{self, BoundError};
use jamlink::sim::{run_sweep_with, SimError, SweepConfig};
use jamlink::turbo::{default_interleaver, estimate_dmin, InterleaverDef, TurboSpec};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "jamlink", version, about = "Coded telecommand links under jamming")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the Monte-Carlo sweep described by a JSON configuration.
    Simulate(SimulateArgs),
    /// Evaluate sphere-packing lower bounds on a grid of operating points.
    Bound(BoundArgs),
    /// Estimate the minimum distance of a turbo code frame size.
    Dmin(DminArgs),
    /// Parse and validate a JSON configuration without running it.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Sweep configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the seed stored in the configuration.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (results are identical for any value).
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct BoundArgs {
    /// Code rate k/n in (0, 1).
    #[arg(long)]
    code_rate: f64,
    /// Block length n in coded bits.
    #[arg(long)]
    block_len: usize,
    /// Eb/N0 grid in dB (comma separated).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    ebn0_db: Vec<f64>,
    /// Time-averaged Eb/J0 in dB; with --rho adds the pulsed-jamming column.
    #[arg(long, requires = "rho")]
    ebj0_db: Option<f64>,
    /// Pulse duty cycle in (0, 1].
    #[arg(long, requires = "ebj0_db")]
    rho: Option<f64>,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DminArgs {
    /// Information frame size in bits.
    #[arg(long)]
    k: usize,
    /// Interleaver definition (JSON); defaults to the built-in one for k.
    #[arg(long)]
    interleaver: Option<String>,
    /// Largest information weight enumerated (2, 3, or 4).
    #[arg(long, default_value_t = 3)]
    max_input_weight: usize,
}

#[derive(Args)]
struct ValidateArgs {
    /// Sweep configuration (JSON).
    #[arg(long)]
    config: PathBuf,
}

struct CliError {
    code: u8,
    msg: String,
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            msg: msg.into(),
        }
    }

    fn runtime(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_RUNTIME,
            msg: msg.into(),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(_) => CliError::config(e.to_string()),
            SimError::Runtime(_) | SimError::Io(_) => CliError::runtime(e.to_string()),
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::InvalidParameter(_) => CliError::config(e.to_string()),
            BoundError::QuadratureDidNotConverge(_) | BoundError::NotRepresentable(_) => {
                CliError::runtime(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Bound(args) => bound(args),
        Command::Dmin(args) => dmin(args),
        Command::Validate(args) => validate(args),
    }
}

fn load_config(path: &PathBuf) -> Result<SweepConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    SweepConfig::from_json(&text).map_err(CliError::from)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    let mut cfg = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    let total = cfg.sweep.grid.len();
    let variable = cfg.sweep.variable.as_str();
    let output = run_sweep_with(&cfg, args.workers, |idx, r| {
        eprintln!(
            "point {}/{total}: {variable} = {} dB, cer {:.3e}, fer {:.3e} \
             ({} frames, {:.1} s)",
            idx + 1,
            r.value_db,
            r.cer,
            r.fer,
            r.frames,
            r.wall_secs
        );
    })?;
    emit(args.out.as_ref(), &output.csv)
}

fn bound(args: BoundArgs) -> Result<(), CliError> {
    if args.ebn0_db.is_empty() {
        return Err(CliError::config("--ebn0-db needs at least one value"));
    }
    let jam = args.ebj0_db.zip(args.rho);
    let mut csv = String::from(if jam.is_some() {
        "ebn0_db,sp59,esplb\n"
    } else {
        "ebn0_db,sp59\n"
    });
    for &ebn0 in &args.ebn0_db {
        let sp59 = bounds::sp59(args.code_rate, args.block_len, ebn0)?;
        write!(csv, "{ebn0},{sp59}").expect("string write");
        if let Some((ebj0, rho)) = jam {
            let esplb = bounds::esplb(args.code_rate, args.block_len, ebn0, ebj0, rho)?;
            write!(csv, ",{esplb}").expect("string write");
        }
        csv.push('\n');
    }
    emit(args.out.as_ref(), &csv)
}

fn dmin(args: DminArgs) -> Result<(), CliError> {
    let def = match &args.interleaver {
        Some(text) => serde_json::from_str::<InterleaverDef>(text)
            .map_err(|e| CliError::config(format!("interleaver definition: {e}")))?,
        None => default_interleaver(args.k).ok_or_else(|| {
            CliError::config(format!(
                "no default interleaver for k = {}; pass --interleaver",
                args.k
            ))
        })?,
    };
    let spec = TurboSpec::standard(args.k, &def).map_err(|e| CliError::config(e.to_string()))?;
    let report =
        estimate_dmin(&spec, args.max_input_weight).map_err(|e| CliError::config(e.to_string()))?;
    println!("k {}", args.k);
    println!(
        "interleaver {}",
        serde_json::to_string(&def).expect("definition serializes")
    );
    println!("d_min_upper {}", report.d_min_upper);
    println!("a_min {}", report.a_min);
    println!("w_min {}", report.w_min);
    println!("input_weight_cap {}", report.search_input_weight_cap);
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    println!(
        "ok: {} point(s) over {}",
        cfg.sweep.grid.len(),
        cfg.sweep.variable.as_str()
    );
    Ok(())
}
