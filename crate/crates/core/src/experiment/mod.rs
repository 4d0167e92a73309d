//! Config-driven experiments: presets, the run harness and snapshot IO.

mod config;
mod runner;
mod snapshot;

pub use config::{
    parse_config, preset, DiagnosticsSpec, ExperimentConfig, GridSpec, InitialSpec, ModelSpec,
    OutputSpec, TimeSpec, PRESET_NAMES,
};
pub use runner::{run, RunOutcome, RunReport, RunStatus, StopDetail};
pub use snapshot::{
    read_snapshot, snapshot_bytes, snapshot_from_bytes, write_snapshot, SNAPSHOT_MAGIC,
    SNAPSHOT_VERSION,
};
