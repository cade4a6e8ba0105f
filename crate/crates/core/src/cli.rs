//! Command-line front end: `init-model`, `generate`, `verify`, `bench`.
//!
//! Exit codes: 0 success, 1 verification failure or runtime I/O error,
//! 2 usage error (bad flags, invalid or unreadable inputs).

use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use crate::bench::{
    default_grid, emit_records, run_benchmark, speed_ratios, BenchOptions, Mode,
};
use crate::error::Error;
use crate::fast::{fast_generate, fast_generate_counted};
use crate::model::{build_model, load_model, save_model, Activation, ModelConfig};
use crate::naive::naive_generate_counted;
use crate::samples::{read_samples, write_samples};
use crate::verify::{compare, equivalence_grid, random_signal, verify_model, Comparison};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "dilated-stream", version, about = "Streaming generation for dilated causal convolution stacks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a seeded model and write it to a model file.
    InitModel(InitModelArgs),
    /// Generate samples with the fast or naive generator.
    Generate(GenerateArgs),
    /// Compare fast, naive and full-sequence outputs.
    Verify(VerifyArgs),
    /// Time both generators across network depth and write a CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct InitModelArgs {
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub layers: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub blocks: u32,
    /// Filter width (taps per filter).
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub width: u32,
    /// Dilation base.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..))]
    pub base: u32,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub channels: u32,
    #[arg(long, default_value = "tanh")]
    pub activation: Activation,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value = "fast")]
    pub mode: Mode,
    /// Sample file to seed generation; defaults to a single zero sample.
    #[arg(long)]
    pub primer: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["model", "random_grid"])))]
pub struct VerifyArgs {
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Verify the built-in seeded grid of 144 configs instead of one model.
    #[arg(long)]
    pub random_grid: bool,
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    /// Relative tolerance; 0 means exact equality.
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
    /// Seed of the random teacher-forcing signal.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Also compare the free-run output (primed with the first samples of
    /// the test signal) against a previously written sample file.
    #[arg(long, requires = "model")]
    pub reference: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub layers_from: u32,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    pub layers_to: u32,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub blocks: u32,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u32).range(1..))]
    pub repeats: u32,
    #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    pub steps: u32,
    #[arg(long, default_value_t = 3)]
    pub warmup: u32,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
    pub channels: u32,
    /// Per config and mode wall-clock budget in seconds; runs over it are skipped.
    #[arg(long)]
    pub budget_secs: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::InitModel(a) => cmd_init_model(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Bench(a) => cmd_bench(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig(_)
        | Error::DimensionMismatch(_)
        | Error::NonFinite(_)
        | Error::MalformedModel(_)
        | Error::MalformedSamples { .. } => EXIT_USAGE,
        Error::Io(io) if io.kind() == std::io::ErrorKind::NotFound => EXIT_USAGE,
        _ => EXIT_VERIFY_FAILED,
    }
}

type CmdResult = Result<u8, Error>;

pub fn cmd_init_model(args: &InitModelArgs) -> CmdResult {
    let config = ModelConfig {
        blocks: args.blocks as usize,
        layers_per_block: args.layers as usize,
        filter_width: args.width as usize,
        dilation_base: args.base as usize,
        hidden_channels: args.channels as usize,
        activation: args.activation,
        init_seed: args.seed,
    };
    let model = build_model(config)?;
    save_model(&model, &args.out)?;
    let caps: Vec<String> = config.queue_capacities().iter().map(usize::to_string).collect();
    println!("receptive field: {}", model.receptive_field());
    println!("queue capacities: {}", caps.join(","));
    Ok(EXIT_OK)
}

pub fn cmd_generate(args: &GenerateArgs) -> CmdResult {
    let model = load_model(&args.model)?;
    let primer = match &args.primer {
        Some(path) => read_samples(path)?,
        None => Vec::new(),
    };
    let start = Instant::now();
    let (samples, counts) = match args.mode {
        Mode::Fast => fast_generate_counted(&model, &primer, args.steps),
        Mode::Naive => naive_generate_counted(&model, &primer, args.steps),
    };
    let elapsed = start.elapsed().as_secs_f64();
    write_samples(&samples, &args.out)?;
    if args.steps > 0 {
        eprintln!(
            "{}: {} steps, {:.1} steps/s, {:.1} MACs/step",
            args.mode,
            args.steps,
            args.steps as f64 / elapsed.max(f64::MIN_POSITIVE),
            counts.multiply_accumulates as f64 / args.steps as f64
        );
    }
    Ok(EXIT_OK)
}

fn print_comparison(label: &str, c: &Comparison) {
    let status = if c.passed { "ok" } else { "MISMATCH" };
    match c.first_mismatch {
        Some(i) if !c.passed => println!(
            "{label}{:<30} max |dev| = {:e}  {status} (first at sample {i})",
            c.name, c.max_abs_deviation
        ),
        _ => println!("{label}{:<30} max |dev| = {:e}  {status}", c.name, c.max_abs_deviation),
    }
}

pub fn cmd_verify(args: &VerifyArgs) -> CmdResult {
    if !(args.tol >= 0.0 && args.tol.is_finite()) {
        return Err(Error::InvalidConfig(format!("--tol must be a non-negative number, got {}", args.tol)));
    }
    let models = match &args.model {
        Some(path) => vec![load_model(path)?],
        None => equivalence_grid()
            .into_iter()
            .map(build_model)
            .collect::<Result<_, _>>()?,
    };
    let mut all_passed = true;
    for (i, model) in models.iter().enumerate() {
        let report = verify_model(model, args.steps, args.tol, args.seed);
        let c = report.config;
        let label = if models.len() > 1 {
            format!(
                "[{i:3}] blocks={} L={} w={} C={} {:<6} ",
                c.blocks,
                c.layers_per_block,
                c.filter_width,
                c.hidden_channels,
                c.activation.as_str()
            )
        } else {
            String::new()
        };
        for comparison in &report.comparisons {
            print_comparison(&label, comparison);
        }
        all_passed &= report.passed();
        if let Some(path) = &args.reference {
            let reference = read_samples(path)?;
            let signal = random_signal(args.steps, args.seed);
            let ours = fast_generate(model, &signal[..signal.len().min(8)], args.steps);
            let cmp = compare("free-run fast vs reference", &ours, &reference, args.tol);
            print_comparison(&label, &cmp);
            all_passed &= cmp.passed;
        }
    }
    if all_passed {
        println!("verify: all comparisons passed ({} model(s))", models.len());
        Ok(EXIT_OK)
    } else {
        println!("verify: FAILED");
        Ok(EXIT_VERIFY_FAILED)
    }
}

pub fn cmd_bench(args: &BenchArgs) -> CmdResult {
    if args.layers_from > args.layers_to {
        return Err(Error::InvalidConfig(format!(
            "--layers-from {} exceeds --layers-to {}",
            args.layers_from, args.layers_to
        )));
    }
    let budget = match args.budget_secs {
        Some(s) if s.is_finite() && s >= 0.0 => Some(Duration::from_secs_f64(s)),
        Some(s) => return Err(Error::InvalidConfig(format!("invalid --budget-secs {s}"))),
        None => None,
    };
    let grid = default_grid(
        args.blocks as usize,
        args.layers_from as usize..=args.layers_to as usize,
        args.channels as usize,
    );
    let options = BenchOptions {
        steps: args.steps as usize,
        repeats: args.repeats as usize,
        warmup: args.warmup as usize,
        budget,
        ..BenchOptions::default()
    };
    let report = run_benchmark(&grid, &options)?;
    for skipped in &report.skipped {
        eprintln!(
            "skipped: {} L={} over budget after {} repeat(s)",
            skipped.mode, skipped.config.layers_per_block, skipped.completed_repeats
        );
    }
    if report.records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    emit_records(&report.records, &args.out)?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "{:>3}  {:>14}", "L", "fast/naive")?;
    for (layers, ratio) in speed_ratios(&report.records) {
        writeln!(out, "{layers:>3}  {ratio:>14.6}")?;
    }
    Ok(EXIT_OK)
}
