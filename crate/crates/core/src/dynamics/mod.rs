//! Lindblad evolution of the swept experiment.

mod integrate;
mod lindblad;
mod onset;
mod schedule;
mod spectrum;
mod sweep;

pub use integrate::{evolve, TRACE_DRIFT_LIMIT};
pub use lindblad::{dissipator, lindblad_rhs, LindbladGenerator, DEPHASING_CONVENTION};
pub use onset::{quasi_steady_onset_series, window_slopes};
pub use schedule::{critical_coupling, ratio_to_detuning, schedule_ratio, SweepSchedule};
pub use spectrum::{instantaneous_spectrum, Spectrum, SpectrumTracker, TrackedLevels, MATCH_AMBIGUITY};
pub use sweep::{
    evolve_sweep, evolve_sweep_with, quasi_steady_onset, EigenSample, SweepOptions, TrajectoryRecord,
    POSITIVITY_LIMIT,
};
