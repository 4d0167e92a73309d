//! The run harness: initial data, evolution with observers, artifacts.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use super::config::{ExperimentConfig, InitialSpec};
use super::snapshot::{read_snapshot, write_snapshot};
use crate::diagnostics::{
    write_norms_csv, write_slices_csv, AxisSlice, Diagnostics, NormRecord, NormSeries, SliceSeries,
};
use crate::error::{Error, Result};
use crate::grid::{Dims, TorusGrid};
use crate::integrator::{evolve, Control, EvolveConfig, Observer, StopEvent};
use crate::model::{AsSystem, ModelParams, WaveState};
use crate::singularity::{write_fit_csv, SingularityFit, SingularityTracker};
use crate::solitary::{build_initial_data, line_extend, solve_profile, InitialData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Completed,
    Stopped,
    Fault,
}

/// Machine-readable summary written as `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub preset: Option<String>,
    pub status: RunStatus,
    pub steps_taken: usize,
    pub t_final: f64,
    pub stop: Option<StopEvent>,
    /// Field/axis and fitted width behind a singularity stop.
    pub stop_detail: Option<StopDetail>,
    pub fault: Option<String>,
    pub wall_seconds: f64,
    /// Norm records whose spectral tail ratio exceeded the warning level.
    pub resolution_warnings: usize,
    pub fits_unavailable: usize,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StopDetail {
    pub field: String,
    pub axis: String,
    pub delta: f64,
    pub threshold: f64,
}

/// Everything a run produced, in memory.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub final_state: WaveState,
    pub params: ModelParams,
    pub norms: Vec<NormRecord>,
    pub fits: Vec<SingularityFit>,
    pub slices: Vec<AxisSlice>,
}

impl ExperimentConfig {
    /// Constructs the initial state on the configured grid.
    pub fn initial_state(&self) -> Result<WaveState> {
        let grid = self.grid.build()?;
        if let InitialSpec::Snapshot { path } = &self.initial {
            let (s, _) = read_snapshot(path)?;
            let g = &s.grid;
            if g.dims() != grid.dims()
                || g.nx() != grid.nx()
                || g.ny() != grid.ny()
                || g.lx() != grid.lx()
                || g.ly() != grid.ly()
            {
                return Err(Error::Config {
                    path: "initial.path".into(),
                    message: "snapshot grid differs from the configured grid".into(),
                });
            }
            return Ok(s);
        }
        if let Some(c) = self.initial.speed() {
            let line = Arc::new(TorusGrid::new(Dims::One, grid.nx(), 1, grid.lx(), 0.0)?);
            let profile = solve_profile(c, self.model.eps_disp, line, None)?;
            let data = match self.initial {
                InitialSpec::LineWave { .. } => {
                    return if grid.is_2d() {
                        line_extend(&profile, grid)
                    } else {
                        Ok(profile.to_state())
                    };
                }
                InitialSpec::GaussianOnEta { amp, alpha, .. } => InitialData::GaussianOnEta {
                    profile: &profile,
                    amp,
                    alpha,
                },
                InitialSpec::GaussianOnVx { amp, alpha, .. } => InitialData::GaussianOnVx {
                    profile: &profile,
                    amp,
                    alpha,
                },
                InitialSpec::GaussianOnVy { amp, alpha, .. } => InitialData::GaussianOnVy {
                    profile: &profile,
                    amp,
                    alpha,
                },
                InitialSpec::CosDeform { a, .. } => InitialData::CosDeform {
                    profile: &profile,
                    a,
                },
                _ => unreachable!("speed() is only set for profile data"),
            };
            return build_initial_data(grid, &data);
        }
        let data = match self.initial {
            InitialSpec::Cavitation { kappa, alpha } => InitialData::Cavitation { kappa, alpha },
            InitialSpec::Localized { kappa, alpha } => InitialData::Localized { kappa, alpha },
            _ => unreachable!("all other kinds handled above"),
        };
        build_initial_data(grid, &data)
    }
}

/// Writes snapshots at the configured step indices.
struct SnapshotWriter<'a> {
    dir: Option<&'a Path>,
    steps: Vec<usize>,
    params: ModelParams,
    files: Vec<PathBuf>,
}

fn snapshot_name(t: f64) -> String {
    format!("snapshot_t{t:.4}.asbq")
}

impl Observer for SnapshotWriter<'_> {
    fn observe(&mut self, step: usize, s: &WaveState) -> Result<Control> {
        if let Some(dir) = self.dir {
            if self.steps.binary_search(&step).is_ok() {
                let path = dir.join(snapshot_name(s.t));
                write_snapshot(&path, s, &self.params)?;
                self.files.push(path);
            }
        }
        Ok(Control::Continue)
    }
}

fn write_with(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// Runs an experiment. With `out_dir` every artifact is written there
/// (norms.csv, fits.csv, slices.csv, snapshots, config.json, report.json);
/// without it nothing touches the disk.
///
/// An integration fault persists `last_good.asbq` and a fault report before
/// the error is returned.
pub fn run(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<RunOutcome> {
    config.validate()?;
    let started = Instant::now();
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("config.json");
        fs::write(&path, config.to_json()).map_err(|e| Error::io(&path, e))?;
    }
    let params = config.model.params();
    let s0 = config.initial_state()?;
    let grid = s0.grid.clone();
    let t0 = s0.t;
    let steps = config.time.steps;
    let dt = (config.time.t_end - t0) / steps as f64;

    let mut norms = NormSeries::new(
        &grid,
        params,
        config.norm_stride(),
        config.diagnostics.normalize,
    );
    let mut slices = SliceSeries::new(config.slice_stride(), config.diagnostics.slice_axes.clone());
    let mut snapshots = SnapshotWriter {
        dir: out_dir,
        steps: config
            .output
            .snapshot_times
            .iter()
            .map(|t| ((t - t0) / dt).round())
            .filter(|s| *s >= 0.0)
            .map(|s| s as usize)
            .collect(),
        params,
        files: Vec::new(),
    };
    snapshots.steps.sort_unstable();
    snapshots.steps.dedup();
    let mut tracker = SingularityTracker::new(config.tracking.clone(), config.fit_stride())?;
    let mut system = AsSystem::with_dealiasing(grid.clone(), params, config.model.dealias)?;

    // Observers filter on their own strides; the tracker goes last so a
    // stop step is still recorded by the others.
    let evolve_cfg = EvolveConfig::new(config.time.t_end, steps);
    let result = evolve(
        s0,
        &evolve_cfg,
        &mut system,
        &mut [&mut norms, &mut slices, &mut snapshots, &mut tracker],
    );

    let mut files = snapshots.files;
    let (final_state, log) = match result {
        Ok(v) => v,
        Err(Error::IntegrationFault {
            step,
            stage,
            last_good,
        }) => {
            if let Some(dir) = out_dir {
                let path = dir.join("last_good.asbq");
                write_snapshot(&path, &last_good, &params)?;
                files.push(path);
                let report = RunReport {
                    preset: config.preset.clone(),
                    status: RunStatus::Fault,
                    steps_taken: step - 1,
                    t_final: last_good.t,
                    stop: None,
                    stop_detail: None,
                    fault: Some(format!("non-finite value at step {step}, stage {stage}")),
                    wall_seconds: started.elapsed().as_secs_f64(),
                    resolution_warnings: norms.warnings,
                    fits_unavailable: tracker.unavailable,
                    files: files.clone(),
                };
                write_report(dir, &report)?;
            }
            return Err(Error::IntegrationFault {
                step,
                stage,
                last_good,
            });
        }
        Err(e) => return Err(e),
    };

    // The last state is always part of the series.
    let first_norm = norms.initial().copied();
    let norm_warnings = norms.warnings;
    let mut norm_records = norms.records;
    if norm_records.last().map(|r| r.t) != Some(final_state.t) {
        let mut rec = Diagnostics::new(&grid, params).record(&final_state)?;
        if config.diagnostics.normalize {
            if let Some(first) = &first_norm {
                rec = rec.normalized_by(first);
            }
        }
        norm_records.push(rec);
    }
    let mut slice_records = slices.slices;
    if slice_records.last().map(|r| r.t) != Some(final_state.t) {
        for &axis in &config.diagnostics.slice_axes {
            slice_records.push(crate::diagnostics::axis_slice(&final_state, axis)?);
        }
    }

    let stop_detail = tracker.decision.map(|d| StopDetail {
        field: d.field.to_string(),
        axis: format!("k{}", d.axis),
        delta: d.delta,
        threshold: d.threshold,
    });
    let status = if log.stop.is_some() {
        RunStatus::Stopped
    } else {
        RunStatus::Completed
    };

    if let Some(dir) = out_dir {
        let path = dir.join("norms.csv");
        write_with(&path, |w| write_norms_csv(w, &norm_records))?;
        files.push(path);
        if config.tracking.enabled {
            let path = dir.join("fits.csv");
            write_with(&path, |w| write_fit_csv(w, &tracker.history))?;
            files.push(path);
        }
        let path = dir.join("slices.csv");
        write_with(&path, |w| write_slices_csv(w, &slice_records))?;
        files.push(path);
        if config.output.final_snapshot {
            let path = dir.join("final.asbq");
            write_snapshot(&path, &final_state, &params)?;
            files.push(path);
        }
    }

    let report = RunReport {
        preset: config.preset.clone(),
        status,
        steps_taken: log.steps_taken,
        t_final: final_state.t,
        stop: log.stop,
        stop_detail,
        fault: None,
        wall_seconds: started.elapsed().as_secs_f64(),
        resolution_warnings: norm_warnings,
        fits_unavailable: tracker.unavailable,
        files,
    };
    if let Some(dir) = out_dir {
        write_report(dir, &report)?;
    }
    Ok(RunOutcome {
        report,
        final_state,
        params,
        norms: norm_records,
        fits: tracker.history,
        slices: slice_records,
    })
}

fn write_report(dir: &Path, report: &RunReport) -> Result<()> {
    let path = dir.join("report.json");
    let text = serde_json::to_string_pretty(report).expect("report serialises");
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}
