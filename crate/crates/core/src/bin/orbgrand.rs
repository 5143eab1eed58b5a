//! Command-line front end for the Monte-Carlo harness.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use orbgrand_ai::decoder::DecoderKind;
use orbgrand_ai::sim::{self, Experiment, ExperimentConfig};
use orbgrand_ai::Error;

#[derive(Parser)]
#[command(name = "orbgrand", version, about = "ORBGRAND-AI / GCD decoding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep Eb/N0 and write BLER and query statistics as CSV.
    Sweep(SweepArgs),
    /// Decode one received sequence with every configured decoder.
    DecodeOne {
        #[arg(long)]
        config: PathBuf,
        /// File of whitespace-separated received values.
        #[arg(long)]
        y: PathBuf,
        /// Eb/N0 defining the channel model (default: first configured point).
        #[arg(long)]
        ebn0: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        decoders: Option<Vec<String>>,
    },
    /// Run the exhaustive ML baseline over the configured sweep.
    Oracle(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated subset of AI,GP,GT,ML.
    #[arg(long)]
    decoders: Option<String>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    ebn0: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    min_errors: Option<u64>,
}

enum Failure {
    Config(Error),
    Runtime(Error),
}

fn load_config(args: &SweepArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(d) = &args.decoders {
        cfg.set("decoders", d)?;
    }
    if let Some(e) = &args.ebn0 {
        cfg.set("ebn0", e)?;
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(m) = args.min_errors {
        cfg.min_block_errors = m;
    }
    Ok(cfg)
}

fn sweep(args: &SweepArgs, force_ml: bool) -> Result<(), Failure> {
    let mut cfg = load_config(args).map_err(Failure::Config)?;
    if force_ml {
        cfg.decoders = vec![DecoderKind::Ml];
    }
    let exp = Experiment::new(cfg).map_err(Failure::Config)?;
    let rows = exp.run_sweep().map_err(Failure::Runtime)?;
    match &args.out {
        Some(path) => sim::write_csv(path, &rows).map_err(Failure::Runtime)?,
        None => print!("{}", sim::rows_to_csv(&rows)),
    }
    Ok(())
}

fn decode_one(
    config: &PathBuf,
    y_path: &PathBuf,
    ebn0: Option<f64>,
    decoders: &Option<Vec<String>>,
) -> Result<(), Failure> {
    let mut cfg = ExperimentConfig::load(config).map_err(Failure::Config)?;
    if let Some(d) = decoders {
        cfg.set("decoders", &d.join(",")).map_err(Failure::Config)?;
    }
    let exp = Experiment::new(cfg).map_err(Failure::Config)?;
    let text = fs::read_to_string(y_path).map_err(|source| {
        Failure::Runtime(Error::Io {
            path: y_path.clone(),
            source,
        })
    })?;
    let y = sim::parse_soft_sequence(&text).map_err(Failure::Runtime)?;
    if y.len() != exp.code().n() {
        return Err(Failure::Runtime(Error::LengthMismatch {
            expected: exp.code().n(),
            got: y.len(),
        }));
    }
    let ebn0 = ebn0.unwrap_or(exp.config.ebn0_db[0]);
    let model = exp.channel(ebn0).map_err(Failure::Config)?;
    println!(
        "code [{}, {}], b = {}, rho = {}, Eb/N0 = {ebn0} dB, sigma = {:.6}",
        exp.code().n(),
        exp.code().k(),
        exp.config.b,
        exp.config.rho,
        model.sigma()
    );
    for &kind in &exp.config.decoders {
        let res = exp.suite.decode(kind, &y, &model).map_err(Failure::Runtime)?;
        let word = res
            .codeword
            .as_ref()
            .map(|c| c.iter().map(|b| char::from(b'0' + b)).collect::<String>())
            .unwrap_or_else(|| "-".into());
        println!(
            "{kind}: status={} queries={} discarded={} loglik_full={:.6} codeword={word}",
            res.status, res.queries, res.discarded, res.loglik_full
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(args) => sweep(args, false),
        Command::Oracle(args) => sweep(args, true),
        Command::DecodeOne {
            config,
            y,
            ebn0,
            decoders,
        } => decode_one(config, y, *ebn0, decoders),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
