use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use tccli::{parse_config, run_experiment, write_outputs, CliError, CliResult, ExperimentRegistry};

/// Run one driven Tavis-Cummings experiment from a TOML config.
#[derive(Parser, Debug)]
#[command(name = "tccli", version, about)]
struct Args {
    /// Experiment config (TOML).
    config: PathBuf,

    /// Output directory; overrides [output] dir.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Random seed; required by the uncertainty experiment only.
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads for independent scan points.
    #[arg(long)]
    threads: Option<usize>,

    /// Also write a matplotlib script next to the CSV.
    #[arg(long)]
    emit_plot: bool,
}

fn run(args: Args) -> CliResult<()> {
    if let Some(k) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .map_err(|e| CliError::Threads(e.to_string()))?;
    }
    let registry = ExperimentRegistry::builtin();
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::Io { path: args.config.clone(), source: e })?;
    let mut config = parse_config(&text, &registry)?;
    if let Some(dir) = args.output {
        config.output_dir = dir;
    }
    if args.seed.is_some() {
        config.seed = args.seed;
    }
    config.emit_plot |= args.emit_plot;
    let bundle = run_experiment(&config, &registry)?;
    for path in write_outputs(&config, &bundle)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tccli: {e}");
            ExitCode::FAILURE
        }
    }
}
