//! Collective-spin quantum battery charged through a shared squeezed-vacuum
//! reservoir.

// Negated comparisons are how parameter checks reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod metrics;
pub mod reservoir;
pub mod spin;
pub mod state_prep;
pub mod steady;

pub use density::{Basis, DensityMatrix, Ket};
pub use dynamics::{
    charging_power, evolve, evolve_to_steady, observables_along, uniform_grid, ObservableSeries,
    PowerSummary, QuenchSchedule, Trajectory,
};
pub use error::{Error, Result};
pub use geometry::{Parity, SystemGeometry};
pub use linalg::{CMatrix, CVector, C64};
pub use metrics::{report, BatteryHamiltonian, ErgotropyReport, Party};
pub use reservoir::{jump_operator, squeezing_params, RelativePhase, ReservoirParams};
pub use spin::{clebsch_gordan, ladder_matrices, HalfInt, SpinSector};
pub use state_prep::{initial_state, spin_coherent, ChargerPrep};
pub use steady::{
    steady_state, steady_state_with_weights, SteadyStateProjector, SteadyStateWeights,
};
