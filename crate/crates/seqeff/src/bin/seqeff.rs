//! Batch CLI: select dimensions, the product under test, suites, samples,
//! seed, and tolerances; run the verification suites; emit reports as JSON
//! or text. Exit codes: 0 all pass, 1 suite failure, 2 invalid spec.

use clap::{Parser, Subcommand};
use seqeff::family::{FamilySpec, ProductSpec};
use seqeff::matrix::Tolerance;
use seqeff::runner::{self, OutputFormat, RunSpec};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "seqeff", about = "Verify sequential products on the standard effect algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and write reports.
    Run(RunArgs),
    /// Print the suite inventory.
    ListSuites,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Hilbert space dimension (repeatable).
    #[arg(long = "dim", required = true)]
    dims: Vec<usize>,
    /// Product under test: "standard" or an inline family spec as JSON,
    /// e.g. '{"kind":"borel","lambda":1.0}'.
    #[arg(long, default_value = "standard")]
    product: String,
    /// Read the family spec from a JSON file instead of --product.
    #[arg(long)]
    family_file: Option<PathBuf>,
    /// Suite id (repeatable); defaults to all suites.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Equality tolerance override.
    #[arg(long)]
    tol_eq: Option<f64>,
    /// PSD tolerance override.
    #[arg(long)]
    tol_psd: Option<f64>,
    /// Write reports to this file (otherwise stdout only).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Treat vacuous suites as passing.
    #[arg(long)]
    allow_vacuous: bool,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

fn invalid(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("run `seqeff run --help` for usage");
    ExitCode::from(2)
}

fn parse_product(args: &RunArgs) -> Result<ProductSpec, String> {
    if let Some(path) = &args.family_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let spec: FamilySpec =
            serde_json::from_str(&text).map_err(|e| format!("bad family spec: {e}"))?;
        return Ok(ProductSpec::Family(spec));
    }
    if args.product == "standard" {
        return Ok(ProductSpec::standard());
    }
    if args.product.trim_start().starts_with('{') {
        let spec: FamilySpec = serde_json::from_str(&args.product)
            .map_err(|e| format!("bad family spec: {e}"))?;
        return Ok(ProductSpec::Family(spec));
    }
    Ok(ProductSpec::Named(args.product.clone()))
}

fn run_command(args: &RunArgs) -> ExitCode {
    let product = match parse_product(args) {
        Ok(p) => p,
        Err(e) => return invalid(e),
    };
    let defaults = Tolerance::default();
    let tol = match Tolerance::new(
        args.tol_eq.unwrap_or(defaults.eq_tol),
        args.tol_psd.unwrap_or(defaults.psd_tol),
        defaults.cluster_gap,
    ) {
        Ok(t) => t,
        Err(e) => return invalid(e),
    };
    let suites = if args.suites.is_empty() {
        vec!["all".to_string()]
    } else {
        args.suites.clone()
    };
    let spec = RunSpec {
        dims: args.dims.clone(),
        product,
        suites,
        samples: args.samples,
        seed: args.seed,
        tol,
        allow_vacuous: args.allow_vacuous,
    };
    let reports = match runner::run(&spec) {
        Ok(r) => r,
        Err(e) => return invalid(e),
    };
    let format = match args.format {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Text => OutputFormat::Text,
    };
    let rendered = match format {
        OutputFormat::Json => runner::render_json(&reports),
        OutputFormat::Text => runner::render_text(&reports),
    };
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, &rendered) {
            return invalid(format!("cannot write {}: {e}", path.display()));
        }
    }
    println!("{rendered}");
    if runner::all_passed(&reports, args.allow_vacuous) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => run_command(&args),
        Command::ListSuites => {
            print!("{}", runner::list_suites());
            ExitCode::SUCCESS
        }
    }
}
