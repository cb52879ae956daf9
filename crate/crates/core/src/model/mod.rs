//! Operators and Hamiltonians of the driven Tavis-Cummings model.
//!
//! Configured frequencies are linear frequencies in MHz; every matrix is
//! returned in angular units (rad/ns) so that time is measured in ns.

mod basis;
mod hamiltonian;
mod operators;
mod params;

pub use basis::CompositeBasis;
pub use hamiltonian::{
    build_driven_tc_hamiltonian, build_driven_tc_hamiltonian_sparse, build_driven_tc_hamiltonian_with,
    build_undriven_tc_hamiltonian, dicke_critical_coupling, parity_commutator_norm, SweptHamiltonian,
};
pub use operators::{build_operator_set, OperatorSet};
pub use params::{angular, rate_per_ns, SystemParams, MHZ_TO_RAD_PER_NS, RATES_ARE_ANGULAR};

pub(crate) use operators::{annihilation, photon_diag, sigma_minus, sigma_z_diag};
