//! Linearized multimode optomechanics without the standard library.
//!
//! The crate assembles the drift and noise matrices of a linearized
//! cavity/mechanical network, solves the steady-state Lyapunov equation
//! for final phonon occupations, and carries the analytic dark-mode and
//! dark-state machinery used to decide when collective mechanical modes
//! decouple from every cooling channel.
//!
//! All rates are dimensionless multiples of the first mechanical frequency.
//! Mode ordering is canonical everywhere: cavities, then mechanical modes,
//! then the same sequence daggered.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod atomic;
pub mod darkmode;
pub mod lyapunov;
pub mod model;

pub use num_complex::Complex64;

pub use atomic::{AtomicEigenReport, LevelSystem};
pub use darkmode::{ChainModes, DarkModeReport, HybridModes};
pub use lyapunov::{CovarianceMatrix, PhononReport, StabilityReport, SteadyState};
pub use model::{
    CavityMode, CouplingEdge, CouplingKind, DriftMatrix, MechanicalMode, ModeRef, NoiseMatrix,
    ParameterMode, SteadyAmplitudes, SystemConfig, Topology,
};
