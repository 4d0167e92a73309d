//! JSON experiment configuration and the preset table.

use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::grid::{Axis, Dims, TorusGrid};
use crate::model::{FieldId, ModelParams};
use crate::singularity::{TrackingConfig, WindowPolicy};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dims: Dims,
    pub nx: usize,
    #[serde(default = "one")]
    pub ny: usize,
    pub lx: f64,
    #[serde(default)]
    pub ly: f64,
}

fn one() -> usize {
    1
}

impl GridSpec {
    pub fn build(&self) -> Result<Arc<TorusGrid>> {
        Ok(Arc::new(TorusGrid::new(
            self.dims, self.nx, self.ny, self.lx, self.ly,
        )?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub eps_nl: f64,
    pub eps_disp: f64,
    /// 2/3-rule truncation of the nonlinear fluxes.
    #[serde(default)]
    pub dealias: bool,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            eps_nl: 1.0,
            eps_disp: 1.0,
            dealias: false,
        }
    }
}

impl ModelSpec {
    pub fn params(&self) -> ModelParams {
        ModelParams {
            eps_nl: self.eps_nl,
            eps_disp: self.eps_disp,
        }
    }
}

fn default_alpha() -> f64 {
    1.0
}

/// Initial data. Profile-based kinds construct the solitary wave of speed
/// `c` on the `x` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    LineWave {
        c: f64,
    },
    GaussianOnEta {
        c: f64,
        amp: f64,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    GaussianOnVx {
        c: f64,
        amp: f64,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    GaussianOnVy {
        c: f64,
        amp: f64,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    CosDeform {
        c: f64,
        a: f64,
    },
    Cavitation {
        kappa: f64,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    Localized {
        kappa: f64,
        #[serde(default = "default_alpha")]
        alpha: f64,
    },
    /// Restart from an `ASBQ` snapshot on the same grid.
    Snapshot {
        path: PathBuf,
    },
}

impl InitialSpec {
    pub fn speed(&self) -> Option<f64> {
        match *self {
            InitialSpec::LineWave { c }
            | InitialSpec::GaussianOnEta { c, .. }
            | InitialSpec::GaussianOnVx { c, .. }
            | InitialSpec::GaussianOnVy { c, .. }
            | InitialSpec::CosDeform { c, .. } => Some(c),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_end: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsSpec {
    /// Steps between norm records; default `steps / 200`.
    pub norm_stride: Option<usize>,
    /// Divide each norm series by its initial value.
    pub normalize: bool,
    /// Steps between axis slices; default `steps / 20`.
    pub slice_stride: Option<usize>,
    pub slice_axes: Vec<Axis>,
}

impl Default for DiagnosticsSpec {
    fn default() -> Self {
        Self {
            norm_stride: None,
            normalize: false,
            slice_stride: None,
            slice_axes: vec![Axis::X],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    /// Overridden by the command line.
    pub dir: Option<PathBuf>,
    /// Snapshots are written at the steps nearest to these times.
    pub snapshot_times: Vec<f64>,
    pub final_snapshot: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            dir: None,
            snapshot_times: Vec::new(),
            final_snapshot: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Name of the preset this configuration was expanded from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    pub grid: GridSpec,
    #[serde(default)]
    pub model: ModelSpec,
    pub initial: InitialSpec,
    pub time: TimeSpec,
    #[serde(default)]
    pub diagnostics: DiagnosticsSpec,
    #[serde(default)]
    pub tracking: TrackingConfig,
    #[serde(default)]
    pub output: OutputSpec,
}

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::Config {
        path: path.to_string(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    pub fn dt(&self) -> f64 {
        self.time.t_end / self.time.steps as f64
    }

    pub fn norm_stride(&self) -> usize {
        self.diagnostics
            .norm_stride
            .unwrap_or(self.time.steps / 200)
            .max(1)
    }

    pub fn slice_stride(&self) -> usize {
        self.diagnostics
            .slice_stride
            .unwrap_or(self.time.steps / 20)
            .max(1)
    }

    pub fn fit_stride(&self) -> usize {
        self.tracking.stride.unwrap_or(self.time.steps / 20).max(1)
    }

    /// Step indices of the requested snapshot times.
    pub fn snapshot_steps(&self) -> Vec<usize> {
        let dt = self.dt();
        let mut steps: Vec<usize> = self
            .output
            .snapshot_times
            .iter()
            .map(|t| (t / dt).round() as usize)
            .collect();
        steps.sort_unstable();
        steps.dedup();
        steps
    }

    /// Semantic checks beyond the schema.
    pub fn validate(&self) -> Result<()> {
        self.grid
            .build()
            .map_err(|e| config_err("grid", e.to_string()))?;
        self.model
            .params()
            .validate()
            .map_err(|e| config_err("model", e.to_string()))?;
        if self.time.steps == 0 {
            return Err(config_err("time.steps", "must be >= 1"));
        }
        if !(self.time.t_end > 0.0 && self.time.t_end.is_finite()) {
            return Err(config_err("time.t_end", "must be a positive number"));
        }
        for (name, v) in [
            ("diagnostics.norm_stride", self.diagnostics.norm_stride),
            ("diagnostics.slice_stride", self.diagnostics.slice_stride),
            ("tracking.stride", self.tracking.stride),
        ] {
            if v == Some(0) {
                return Err(config_err(name, "must be >= 1"));
            }
        }
        if let Some(c) = self.initial.speed() {
            if self.model.eps_nl != self.model.eps_disp {
                return Err(config_err(
                    "initial",
                    "solitary-wave data need eps_nl == eps_disp",
                ));
            }
            if !(c > 1.0) {
                return Err(config_err("initial.c", format!("need c > 1, got {c}")));
            }
        }
        match self.initial {
            InitialSpec::Cavitation { kappa, .. } if !(kappa < 0.0) => {
                return Err(config_err(
                    "initial.kappa",
                    "cavitation data need kappa < 0",
                ))
            }
            InitialSpec::Localized { kappa, .. } if !(kappa > 0.0) => {
                return Err(config_err("initial.kappa", "localized data need kappa > 0"))
            }
            _ => {}
        }
        if self.grid.dims == Dims::One && self.diagnostics.slice_axes.contains(&Axis::Y) {
            return Err(config_err("diagnostics.slice_axes", "no y axis in 1D"));
        }
        for (i, t) in self.output.snapshot_times.iter().enumerate() {
            if !(*t >= 0.0 && *t <= self.time.t_end) {
                return Err(config_err(
                    &format!("output.snapshot_times[{i}]"),
                    format!("{t} outside [0, t_end]"),
                ));
            }
        }
        self.tracking
            .window
            .validate()
            .map_err(|e| config_err("tracking.window", e.to_string()))?;
        if !(self.tracking.kappa_stop >= 0.0) {
            return Err(config_err("tracking.kappa_stop", "must be >= 0"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}

/// Recursively merges `overlay` into `base`; objects merge key by key,
/// everything else is replaced.
fn merge(base: &mut Value, overlay: Value) {
    match (base, overlay) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    // A different initial-data kind replaces the whole object.
                    Some(slot) if k != "initial" || same_kind(slot, &v) => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

fn same_kind(a: &Value, b: &Value) -> bool {
    match (a.get("kind"), b.get("kind")) {
        (_, None) => true,
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

/// Parses a JSON configuration. A `preset` key expands to the preset's
/// explicit configuration, with the remaining keys merged on top.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| config_err("", format!("invalid JSON: {e}")))?;
    if !value.is_object() {
        return Err(config_err("", "configuration must be a JSON object"));
    }
    let value = match value.get("preset") {
        None => value,
        Some(Value::String(name)) => {
            let mut base = serde_json::to_value(preset(name)?).expect("preset serialises");
            merge(&mut base, value.clone());
            base
        }
        Some(_) => return Err(config_err("preset", "expected a preset name")),
    };
    if value.get("initial").is_none() {
        return Err(config_err("initial", "initial data are mandatory"));
    }
    let config: ExperimentConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        config_err(
            if path == "." { "" } else { &path },
            e.into_inner().to_string(),
        )
    })?;
    config.validate()?;
    Ok(config)
}

/// Every preset name, full-resolution runs followed by their desk variants.
pub const PRESET_NAMES: &[&str] = &[
    "c2_gauss_plus",
    "c2_gauss_minus",
    "c2_gauss_vx",
    "c2_gauss_vy",
    "c2_cos",
    "c11_gauss",
    "c11_cos",
    "cavitation_1d",
    "cavitation_k-0.9_a1",
    "cavitation_k-1_a1",
    "cavitation_k-1_a0.5",
    "localized_k1",
    "localized_k10",
    "dsw_eps1e-2",
    "c2_gauss_plus_desk",
    "c2_gauss_minus_desk",
    "c2_gauss_vx_desk",
    "c2_gauss_vy_desk",
    "c2_cos_desk",
    "c11_gauss_desk",
    "c11_cos_desk",
    "cavitation_1d_desk",
    "cavitation_k-0.9_a1_desk",
    "cavitation_k-1_a1_desk",
    "cavitation_k-1_a0.5_desk",
    "localized_k1_desk",
    "localized_k10_desk",
    "dsw_eps1e-2_desk",
];

fn grid2(nx: usize, ny: usize, lx: f64, ly: f64) -> GridSpec {
    GridSpec {
        dims: Dims::Two,
        nx,
        ny,
        lx,
        ly,
    }
}

fn tracking(fields: Vec<FieldId>, stride: usize, stop: bool) -> TrackingConfig {
    TrackingConfig {
        enabled: true,
        fields,
        axes: vec![Axis::X, Axis::Y],
        window: WindowPolicy::default(),
        kappa_stop: 1.0,
        stop,
        stride: Some(stride),
    }
}

struct Base {
    grid: GridSpec,
    model: ModelSpec,
    initial: InitialSpec,
    t_end: f64,
    steps: usize,
    tracking: TrackingConfig,
    slice_axes: Vec<Axis>,
    snapshot_times: Vec<f64>,
}

impl Base {
    fn finish(self, name: &str) -> ExperimentConfig {
        ExperimentConfig {
            preset: Some(name.to_string()),
            grid: self.grid,
            model: self.model,
            initial: self.initial,
            time: TimeSpec {
                t_end: self.t_end,
                steps: self.steps,
            },
            diagnostics: DiagnosticsSpec {
                norm_stride: Some((self.steps / 200).max(1)),
                normalize: false,
                slice_stride: Some((self.steps / 50).max(1)),
                slice_axes: self.slice_axes,
            },
            tracking: self.tracking,
            output: OutputSpec {
                dir: None,
                snapshot_times: self.snapshot_times,
                final_snapshot: true,
            },
        }
    }
}

/// Scales `steps` with the grid refinement so `dt · k_max` stays fixed.
fn desk_steps(steps: usize, factor: usize) -> usize {
    (steps / factor).max(1)
}

/// Expands a preset name to its explicit configuration.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let (base_name, desk) = match name.strip_suffix("_desk") {
        Some(b) => (b, true),
        None => (name, false),
    };
    let sym = ModelSpec::default();
    let no_tracking = TrackingConfig::default();
    let xy = vec![Axis::X, Axis::Y];
    let base = match base_name {
        "c2_gauss_plus" | "c2_gauss_minus" | "c2_gauss_vx" | "c2_gauss_vy" | "c2_cos" => {
            let c = 2.0;
            let initial = match base_name {
                "c2_gauss_plus" => InitialSpec::GaussianOnEta {
                    c,
                    amp: 0.3,
                    alpha: 1.0,
                },
                "c2_gauss_minus" => InitialSpec::GaussianOnEta {
                    c,
                    amp: -0.3,
                    alpha: 1.0,
                },
                "c2_gauss_vx" => InitialSpec::GaussianOnVx {
                    c,
                    amp: 0.1,
                    alpha: 1.0,
                },
                "c2_gauss_vy" => InitialSpec::GaussianOnVy {
                    c,
                    amp: 0.1,
                    alpha: 1.0,
                },
                _ => InitialSpec::CosDeform { c, a: 0.4 },
            };
            // Desk: N_x 2^12 -> 2^10, N_y 2^7 -> 2^6.
            let (grid, steps) = if desk {
                (grid2(1 << 10, 1 << 6, 10.0, 3.0), desk_steps(10_000, 4))
            } else {
                (grid2(1 << 12, 1 << 7, 10.0, 3.0), 10_000)
            };
            Base {
                grid,
                model: sym,
                initial,
                t_end: 20.0,
                steps,
                tracking: no_tracking,
                slice_axes: xy,
                snapshot_times: vec![0.0, 20.0],
            }
        }
        "c11_gauss" | "c11_cos" => {
            let c = 1.1;
            let initial = if base_name == "c11_gauss" {
                InitialSpec::GaussianOnEta {
                    c,
                    amp: 0.01,
                    alpha: 1.0,
                }
            } else {
                InitialSpec::CosDeform { c, a: 0.4 }
            };
            // Desk: N_x 2^14 -> 2^12, N_y 2^7 -> 2^6.
            let (grid, steps) = if desk {
                (grid2(1 << 12, 1 << 6, 40.0, 3.0), desk_steps(20_000, 4))
            } else {
                (grid2(1 << 14, 1 << 7, 40.0, 3.0), 20_000)
            };
            Base {
                grid,
                model: sym,
                initial,
                t_end: 100.0,
                steps,
                tracking: no_tracking,
                slice_axes: xy,
                snapshot_times: vec![0.0, 20.0, 100.0],
            }
        }
        "cavitation_1d" => {
            // Full: 2^18 modes. Desk: 2^14. L = 2 keeps periodic images
            // away from the origin until t = 6.
            let (nx, steps) = if desk {
                (1 << 14, 30_000)
            } else {
                (1 << 18, 480_000)
            };
            let fit_every = steps / 300;
            Base {
                grid: GridSpec {
                    dims: Dims::One,
                    nx,
                    ny: 1,
                    lx: 2.0,
                    ly: 0.0,
                },
                model: sym,
                initial: InitialSpec::Cavitation {
                    kappa: -1.0,
                    alpha: 1.0,
                },
                t_end: 6.0,
                steps,
                tracking: tracking(vec![FieldId::Eta, FieldId::Vx], fit_every, true),
                slice_axes: vec![Axis::X],
                snapshot_times: vec![0.0],
            }
        }
        "cavitation_k-0.9_a1" => {
            let (n, steps) = if desk {
                (1 << 10, 2_500)
            } else {
                (1 << 12, 10_000)
            };
            Base {
                grid: grid2(n, n, 5.0, 5.0),
                model: sym,
                initial: InitialSpec::Cavitation {
                    kappa: -0.9,
                    alpha: 1.0,
                },
                t_end: 10.0,
                steps,
                tracking: tracking(vec![FieldId::Eta], steps / 100, false),
                slice_axes: xy,
                snapshot_times: vec![0.0, 2.5, 4.0, 5.1, 10.0],
            }
        }
        "cavitation_k-1_a1" | "cavitation_k-1_a0.5" => {
            let alpha = if base_name == "cavitation_k-1_a1" {
                1.0
            } else {
                0.5
            };
            let (nx, ny) = match (alpha == 1.0, desk) {
                (true, false) => (1 << 12, 1 << 12),
                (true, true) => (1 << 10, 1 << 10),
                (false, false) => (1 << 13, 1 << 11),
                (false, true) => (1 << 11, 1 << 9),
            };
            let steps = if desk { 2_500 } else { 10_000 };
            Base {
                grid: grid2(nx, ny, 3.0, 3.0),
                model: sym,
                initial: InitialSpec::Cavitation { kappa: -1.0, alpha },
                t_end: 5.0,
                steps,
                tracking: tracking(vec![FieldId::Eta], steps / 250, true),
                slice_axes: xy,
                snapshot_times: vec![0.0],
            }
        }
        "localized_k1" | "localized_k10" => {
            let kappa = if base_name == "localized_k1" {
                1.0
            } else {
                10.0
            };
            let (n, steps) = if desk {
                (1 << 9, 2_000)
            } else {
                (1 << 12, 16_000)
            };
            Base {
                grid: grid2(n, n, 5.0, 5.0),
                model: sym,
                initial: InitialSpec::Localized { kappa, alpha: 1.0 },
                t_end: if kappa == 1.0 { 10.0 } else { 8.0 },
                steps,
                tracking: no_tracking,
                slice_axes: xy,
                snapshot_times: if kappa == 1.0 {
                    vec![0.0, 10.0]
                } else {
                    vec![0.0, 2.0, 4.0, 6.92, 8.0]
                },
            }
        }
        "dsw_eps1e-2" => {
            let (n, steps) = if desk {
                (1 << 10, 2_500)
            } else {
                (1 << 12, 10_000)
            };
            Base {
                grid: grid2(n, n, 3.0, 3.0),
                model: ModelSpec {
                    eps_nl: 1.0,
                    eps_disp: 1e-2,
                    dealias: false,
                },
                initial: InitialSpec::Localized {
                    kappa: 1.0,
                    alpha: 1.0,
                },
                t_end: 5.0,
                steps,
                tracking: no_tracking,
                slice_axes: xy,
                snapshot_times: vec![0.0, 5.0],
            }
        }
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    Ok(base.finish(name))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_table_is_complete() {
        let figure_runs = [
            "c2_gauss_plus",
            "c2_gauss_minus",
            "c2_gauss_vx",
            "c2_gauss_vy",
            "c2_cos",
            "c11_gauss",
            "c11_cos",
            "cavitation_1d",
            "cavitation_k-0.9_a1",
            "cavitation_k-1_a1",
            "cavitation_k-1_a0.5",
            "localized_k1",
            "localized_k10",
            "dsw_eps1e-2",
        ];
        for run in figure_runs {
            assert!(PRESET_NAMES.contains(&run), "{run}");
            assert!(
                PRESET_NAMES.contains(&format!("{run}_desk").as_str()),
                "{run}"
            );
        }
        assert_eq!(PRESET_NAMES.len(), 2 * figure_runs.len());
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            c.validate().unwrap();
            assert_eq!(c.preset.as_deref(), Some(*name));
        }
        assert!(matches!(preset("nope"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn preset_parameters() {
        let c = preset("c2_gauss_plus").unwrap();
        assert_eq!(
            (c.grid.nx, c.grid.ny, c.grid.lx, c.grid.ly),
            (4096, 128, 10.0, 3.0)
        );
        assert_eq!(
            c.initial,
            InitialSpec::GaussianOnEta {
                c: 2.0,
                amp: 0.3,
                alpha: 1.0
            }
        );
        assert_eq!((c.time.t_end, c.time.steps), (20.0, 10_000));

        let c = preset("c11_cos").unwrap();
        assert_eq!(
            (c.grid.nx, c.grid.ny, c.grid.lx, c.grid.ly),
            (16384, 128, 40.0, 3.0)
        );
        assert_eq!(c.initial, InitialSpec::CosDeform { c: 1.1, a: 0.4 });
        assert_eq!((c.time.t_end, c.time.steps), (100.0, 20_000));

        let c = preset("cavitation_k-1_a1").unwrap();
        assert_eq!((c.grid.nx, c.grid.ny, c.grid.lx), (4096, 4096, 3.0));
        assert!(c.tracking.enabled && c.tracking.stop);
        let c = preset("cavitation_k-1_a1_desk").unwrap();
        assert_eq!((c.grid.nx, c.grid.ny), (1024, 1024));

        let c = preset("dsw_eps1e-2").unwrap();
        assert_eq!((c.model.eps_nl, c.model.eps_disp), (1.0, 1e-2));
        assert_eq!(c.time.t_end, 5.0);
    }

    #[test]
    fn json_round_trip() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            let back = parse_config(&c.to_json()).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn preset_overrides_merge() {
        let c = parse_config(
            r#"{"preset": "c2_gauss_plus", "grid": {"nx": 256, "ny": 16}, "time": {"steps": 100}}"#,
        )
        .unwrap();
        assert_eq!((c.grid.nx, c.grid.ny, c.grid.lx), (256, 16, 10.0));
        assert_eq!((c.time.steps, c.time.t_end), (100, 20.0));
        let c = parse_config(
            r#"{"preset": "c2_gauss_plus", "initial": {"kind": "line_wave", "c": 1.5}}"#,
        )
        .unwrap();
        assert_eq!(c.initial, InitialSpec::LineWave { c: 1.5 });
    }

    #[test]
    fn schema_errors_carry_paths() {
        match parse_config("{}") {
            Err(Error::Config { path, .. }) => assert_eq!(path, "initial"),
            other => panic!("{other:?}"),
        }
        match parse_config(r#"{"preset": "c2_cos", "grid": {"nx": 256, "bogus": 1}}"#) {
            Err(Error::Config { path, message }) => {
                assert!(path.starts_with("grid"), "{path}");
                assert!(message.contains("bogus"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        match parse_config(
            r#"{"grid": {"dims": "1", "nx": 64, "lx": 1}, "initial": {"kind": "cavitation", "kappa": "x"}, "time": {"t_end": 1, "steps": 10}}"#,
        ) {
            // Tagged enums report the enclosing object.
            Err(Error::Config { path, .. }) => assert!(path.starts_with("initial"), "{path}"),
            other => panic!("{other:?}"),
        }
        match parse_config(
            r#"{"grid": {"dims": "1", "nx": 64, "lx": 1}, "initial": {"kind": "cavitation", "kappa": 1}, "time": {"t_end": 1, "steps": 10}}"#,
        ) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "initial.kappa"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_config(r#"{"preset": "missing"}"#),
            Err(Error::UnknownPreset(_))
        ));
        assert!(parse_config("[1]").is_err());
        assert!(parse_config("{").is_err());
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(
            r#"{"grid": {"dims": "1", "nx": 64, "lx": 1}, "initial": {"kind": "cavitation", "kappa": -0.5}, "time": {"t_end": 1, "steps": 400}}"#,
        )
        .unwrap();
        assert_eq!(c.model, ModelSpec::default());
        assert_eq!(c.norm_stride(), 2);
        assert_eq!(c.slice_stride(), 20);
        assert!(!c.tracking.enabled);
        assert!(c.output.final_snapshot);
        assert_eq!(
            c.initial,
            InitialSpec::Cavitation {
                kappa: -0.5,
                alpha: 1.0
            }
        );
    }
}
