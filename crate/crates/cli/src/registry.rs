use std::collections::BTreeMap;

use crate::bundle::Table;
use crate::config::ExperimentConfig;
use crate::error::{CliError, CliResult};
use crate::experiments;

/// One runnable experiment. Implementations turn a validated config into
/// labeled tables; the harness handles metadata, files and plotting.
pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Uses random draws, so a seed is mandatory (and otherwise forbidden).
    fn needs_seed(&self) -> bool {
        false
    }

    fn run(&self, config: &ExperimentConfig) -> tcsim::Result<Vec<Table>>;
}

pub struct ExperimentRegistry {
    entries: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl ExperimentRegistry {
    pub fn empty() -> Self {
        Self { entries: BTreeMap::new() }
    }

    /// All experiments shipped with the tool.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(experiments::GroundScan));
        r.register(Box::new(experiments::MeanField));
        r.register(Box::new(experiments::Sweep));
        r.register(Box::new(experiments::Spectrum));
        r.register(Box::new(experiments::Uncertainty));
        r.register(Box::new(experiments::Calibrate));
        r.register(Box::new(experiments::ParityCheck));
        r
    }

    /// Adds or replaces an experiment under its name.
    pub fn register(&mut self, experiment: Box<dyn Experiment>) {
        self.entries.insert(experiment.name(), experiment);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn lookup(&self, name: &str) -> CliResult<&dyn Experiment> {
        self.get(name).ok_or_else(|| CliError::UnknownExperiment { name: name.into(), known: self.names().join(", ") })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for ExperimentRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}
