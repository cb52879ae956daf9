//! Experiment harness for `tcsim`: TOML configs in, CSV tables out.

pub mod bundle;
pub mod config;
pub mod error;
pub mod experiments;
pub mod plot;
pub mod registry;

use std::path::PathBuf;
use std::time::Instant;

pub use bundle::{read_table, Column, ResultBundle, Table};
pub use config::{parse_config, ExperimentConfig};
pub use error::{CliError, CliResult};
pub use plot::emit_plot_script;
pub use registry::{Experiment, ExperimentRegistry};

/// Runs the configured experiment. Tables are a deterministic function of
/// the config (and seed); only the metadata carries wall time.
pub fn run_experiment(config: &ExperimentConfig, registry: &ExperimentRegistry) -> CliResult<ResultBundle> {
    config.validate(registry)?;
    let experiment = registry.lookup(&config.experiment)?;
    let start = Instant::now();
    let tables = experiment
        .run(config)
        .map_err(|source| CliError::Experiment { experiment: config.experiment.clone(), source })?;
    let elapsed = start.elapsed().as_secs_f64();
    let mut meta = vec![
        ("tool".to_string(), format!("tccli {}", env!("CARGO_PKG_VERSION"))),
        ("experiment".to_string(), config.experiment.clone()),
        ("description".to_string(), experiment.description().to_string()),
        ("wall_time_s".to_string(), format!("{elapsed:.3}")),
        ("units".to_string(), "frequencies MHz (linear), times ns, energies as labeled".to_string()),
    ];
    if let Some(seed) = config.seed {
        meta.push(("seed".to_string(), seed.to_string()));
    }
    meta.push(("config".to_string(), config.source.trim_end().to_string()));
    Ok(ResultBundle { experiment: config.experiment.clone(), meta, tables })
}

/// Writes the bundle (and the plot script when requested) under
/// `config.output_dir`; returns the paths written.
pub fn write_outputs(config: &ExperimentConfig, bundle: &ResultBundle) -> CliResult<Vec<PathBuf>> {
    let mut written = bundle.write(&config.output_dir)?;
    if config.emit_plot {
        let path = config.output_dir.join(format!("{}_plot.py", bundle.experiment));
        std::fs::write(&path, emit_plot_script(bundle)?).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
