//! Measured quantities from density matrices or probability tables.

mod readout;
mod table;
mod uncertainty;

pub use readout::{apply_readout_correction, CorrectedTable, Direction, ReadoutModel};
pub use table::{
    group_by_excitation, joint_probabilities, jz_from_probabilities, ProbabilityTable, EPS_CORR,
    NORMALIZATION_TOLERANCE,
};
pub use uncertainty::{
    draw_offsets, monte_carlo_ground_scan, monte_carlo_uncertainty, MonteCarloConfig, OffsetDistribution,
    UncertaintySummary,
};
