//! Ground-state phase-transition curves: finite-N scans in the symmetric
//! sector, the mean-field limit, and critical-exponent fits.

mod exponent;
mod mean_field;
mod scan;
mod symmetric;

pub use exponent::{fit_critical_exponent, log_spaced_window, Observable, Side, FIT_WINDOW, MIN_FIT_POINTS};
pub use mean_field::{mean_field_ground_state, mean_field_scan};
pub use scan::{
    converged_ground_state, full_space_ground_state, ground_state_point, ground_state_scan, ratio_grid, ScanPoint,
    CUTOFF_TOLERANCE, DEGENERACY_GAP,
};
pub use symmetric::{build_symmetric_hamiltonian, SymmetricSector};
