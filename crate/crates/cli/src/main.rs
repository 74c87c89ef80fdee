mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{EquiMode, Failure, SuiteArg};
use report::{CommandReport, InputDigest};

#[derive(Parser)]
#[command(
    name = "mitlab",
    version,
    about = "Multiplier ideals and integrability thresholds of toric psh models"
)]
struct Cli {
    /// Emit the full JSON report.
    #[arg(long, global = true, conflicts_with = "tsv")]
    json: bool,
    /// Emit tab-separated rows with a header.
    #[arg(long, global = true)]
    tsv: bool,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Include wall-clock time (JSON field, or a line on stderr).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Thresholds of z2^m against the single-step series models.
    Cluster {
        #[arg(long = "M", default_value_t = 2)]
        base: u32,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, default_value_t = 14)]
        mmax: u32,
    },
    /// Integrability threshold of one monomial.
    Threshold {
        #[arg(long)]
        model: PathBuf,
        /// Exponents, comma separated, e.g. 0,2.
        #[arg(long, allow_hyphen_values = true)]
        monomial: String,
        /// Also bracket the threshold with the shell quadrature.
        #[arg(long)]
        numeric: bool,
    },
    /// Jumping coefficients up to a cutoff, with witnessing monomials.
    Spectrum {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
        #[arg(long, default_value = "2")]
        cutoff: String,
    },
    /// Minimal generators of the multiplier ideal at c.
    Staircase {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        c: String,
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
    },
    /// Integrability of e^{-2u1} - e^{-2u2}.
    Equi {
        #[arg(long, value_enum)]
        mode: EquiMode,
        /// profiles: two profile files; models: two model files;
        /// pipeline: model, chi and analytic profile files.
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// profiles: integer k >= 1 (default 1); models: exponent w >= 0 (default 0).
        #[arg(long)]
        weight: Option<String>,
    },
    /// Seeded property suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Cluster { .. } => "cluster",
            Command::Threshold { .. } => "threshold",
            Command::Spectrum { .. } => "spectrum",
            Command::Staircase { .. } => "staircase",
            Command::Equi { .. } => "equi",
            Command::Verify { .. } => "verify",
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("MITLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n >= 1)
        .ok_or_else(|| Failure::usage(format!("MITLAB_THREADS: expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("MITLAB_THREADS: {e}")))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    configure_threads()?;
    let name = cli.command.name();
    let mut digest = InputDigest::new(name);
    let start = Instant::now();
    let out = match &cli.command {
        Command::Cluster { base, kmax, mmax } => commands::cluster(*base, *kmax, *mmax, &mut digest),
        Command::Threshold {
            model,
            monomial,
            numeric,
        } => commands::threshold(model, monomial, *numeric, &mut digest),
        Command::Spectrum {
            model,
            max_degree,
            cutoff,
        } => commands::spectrum(model, *max_degree, cutoff, &mut digest),
        Command::Staircase { model, c, max_degree } => commands::staircase(model, c, *max_degree, &mut digest),
        Command::Equi { mode, files, weight } => commands::equi(*mode, files, weight.as_deref(), &mut digest),
        Command::Verify { suite } => commands::run_verify(*suite, cli.seed, &mut digest),
    }?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;

    let rendered = if cli.json {
        let report = CommandReport {
            command: name,
            input_digest: digest.finish(),
            payload: &out.payload,
            timing_ms: cli.timing.then_some(elapsed_ms),
        };
        let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
        s.push('\n');
        s
    } else if cli.tsv {
        out.tsv
    } else {
        out.text
    };
    let mut stdout = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = stdout.write_all(rendered.as_bytes()).and_then(|_| stdout.flush());
    if cli.timing && !cli.json {
        eprintln!("elapsed: {elapsed_ms:.1} ms");
    }
    Ok(out.status.code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
