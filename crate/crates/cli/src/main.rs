use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spectra_cli::{emit, load_config, run, CliError, Command, ExperimentConfig, Format};

#[derive(Parser)]
#[command(name = "spectra", version, about = "Experiments on root systems, random walks on SU(2)/SO(3) and matrix products")]
struct Cli {
    #[command(subcommand)]
    command: Top,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock timings (the report is then not reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Top {
    #[command(flatten)]
    Experiment(Command),
    /// Run an experiment described by a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn threads_from_env() {
    if let Some(n) = std::env::var("SPECTRA_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let config = match cli.command {
        Top::Experiment(command) => ExperimentConfig { command, seed: cli.seed, output: cli.output, format: cli.format },
        Top::Run { config } => load_config(&config)?,
    };
    let report = run(&config, cli.timings)?;
    if let Some(text) = emit(&report)? {
        print!("{text}");
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn main() -> ExitCode {
    // Usage errors exit with 1; 2 is reserved for module errors.
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    threads_from_env();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.render());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
