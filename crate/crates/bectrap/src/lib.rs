//! Mean-field dynamics of an interacting wavepacket in a weakly anharmonic
//! trap, with the classical averaged-resonance model that predicts when the
//! packet stays localized.
//!
//! The pieces, bottom up:
//!
//! * [`grid`], [`state`], [`params`], [`frame`] — domain types: spatial grid,
//!   wavefunction, scenario parameters, action-angle maps.
//! * [`gpe`] — split-step Fourier integrator for the 1D Gross-Pitaevskii
//!   equation and scalar observables of the evolving state.
//! * [`classical`] — orbit-averaged Hamiltonian in the rotating frame, its
//!   fixed points and separatrix, and the confinement fraction `F(u, beta)`.
//! * [`trajectories`] — driven classical orbits under the prescribed
//!   oscillating-Gaussian potential, plus their slow (orbit-averaged)
//!   components.
//! * [`phase_space`] — Husimi and initial-Wigner representations for
//!   comparing quantum states against the classical structures.
//! * [`sweep`], [`commands`], [`output`] — batch runs, CLI entry points,
//!   and on-disk artifact formats.
//!
//! See the crate examples for one runnable program per capability.

pub mod classical;
pub mod commands;
pub mod config;
pub mod contour;
pub mod error;
pub mod frame;
pub mod gpe;
pub mod grid;
pub mod output;
pub mod params;
pub mod phase_space;
pub mod state;
pub mod sweep;
pub mod trajectories;
pub mod units;

pub use error::{Error, Result};
pub use frame::{from_action_angle, to_action_angle, wrap_angle, PhasePoint, RotatingFrame};
pub use grid::SpatialGrid;
pub use params::ModelParams;
pub use state::{make_initial_state, WaveState};
