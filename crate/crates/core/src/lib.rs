//! Pseudospectral laboratory for the Amick-Schonbek Boussinesq system in one
//! and two space dimensions.

pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod fft;
pub mod grid;
pub mod integrator;
pub mod model;
pub mod singularity;
pub mod solitary;

pub use diagnostics::{axis_slice, Diagnostics, NormRecord};
pub use error::{Error, Result};
pub use experiment::{
    parse_config, preset, run, ExperimentConfig, RunOutcome, RunReport, RunStatus,
};
pub use grid::{Axis, Dims, SpectralField, TorusGrid};
pub use integrator::{evolve, rk4_step, EvolveConfig, Rk4};
pub use model::{AsSystem, FieldId, ModelParams, WaveState};
pub use singularity::{
    fit_ssf, stop_check, SingularityFit, SingularityTracker, TrackingConfig, WindowPolicy,
};
pub use solitary::{build_initial_data, line_extend, solve_profile, InitialData, SolitaryProfile};
