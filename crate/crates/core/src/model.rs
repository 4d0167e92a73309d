//! Tendencies of the Amick-Schonbek system.
//!
//! With nonlinearity `a = ε_nl` and dispersion `d = ε_disp`:
//!
//! ```text
//! η_t = -∇·((1 + a η) v)
//! v_t = -(1 - d Δ)^{-1} ∇(η + a |v|²/2)
//! ```
//!
//! `a = d = ε` is the original scaling, `a = 1, d = ε` the long-wave
//! rescaling used for dispersive shock experiments. Both right-hand sides are
//! written as perfect derivatives, so the zero mode of every tendency
//! vanishes identically and the velocity tendency is a (filtered) gradient.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::Fourier;
use crate::grid::{Axis, TorusGrid};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub eps_nl: f64,
    pub eps_disp: f64,
}

impl ModelParams {
    /// Same small parameter in front of nonlinearity and dispersion.
    pub fn symmetric(eps: f64) -> Self {
        Self {
            eps_nl: eps,
            eps_disp: eps,
        }
    }

    /// Long-wave rescaled form: unit nonlinearity, dispersion `eps`.
    pub fn rescaled(eps: f64) -> Self {
        Self {
            eps_nl: 1.0,
            eps_disp: eps,
        }
    }

    /// Parameters accepted by the evolution code. `eps_disp = 0` is the
    /// dispersionless shallow-water limit and is refused.
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_nl >= 0.0 && self.eps_nl.is_finite()) {
            return Err(Error::Model(format!(
                "eps_nl = {} must be >= 0",
                self.eps_nl
            )));
        }
        if !(self.eps_disp > 0.0 && self.eps_disp.is_finite()) {
            return Err(Error::Model(format!(
                "eps_disp = {} must be > 0 (the dispersionless limit is not supported)",
                self.eps_disp
            )));
        }
        Ok(())
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::symmetric(1.0)
    }
}

/// The unknowns `(η, v)` at one instant, in physical space.
///
/// `vy` is empty on 1D grids.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveState {
    pub t: f64,
    pub grid: Arc<TorusGrid>,
    pub eta: Vec<f64>,
    pub vx: Vec<f64>,
    pub vy: Vec<f64>,
}

impl WaveState {
    pub fn rest(grid: Arc<TorusGrid>) -> Self {
        let n = grid.len();
        let ny = if grid.is_2d() { n } else { 0 };
        Self {
            t: 0.0,
            eta: vec![0.0; n],
            vx: vec![0.0; n],
            vy: vec![0.0; ny],
            grid,
        }
    }

    pub fn new(
        grid: Arc<TorusGrid>,
        t: f64,
        eta: Vec<f64>,
        vx: Vec<f64>,
        vy: Vec<f64>,
    ) -> Result<Self> {
        let s = Self {
            t,
            grid,
            eta,
            vx,
            vy,
        };
        s.check_shape()?;
        Ok(s)
    }

    pub fn check_shape(&self) -> Result<()> {
        let n = self.grid.len();
        let ny = if self.grid.is_2d() { n } else { 0 };
        if self.eta.len() != n || self.vx.len() != n || self.vy.len() != ny {
            return Err(Error::GridMismatch(format!(
                "state fields have lengths ({}, {}, {}), grid expects ({n}, {n}, {ny})",
                self.eta.len(),
                self.vx.len(),
                self.vy.len()
            )));
        }
        Ok(())
    }

    pub fn fields(&self) -> [&[f64]; 3] {
        [&self.eta, &self.vx, &self.vy]
    }

    pub fn fields_mut(&mut self) -> [&mut Vec<f64>; 3] {
        [&mut self.eta, &mut self.vx, &mut self.vy]
    }

    pub fn field(&self, id: FieldId) -> &[f64] {
        match id {
            FieldId::Eta => &self.eta,
            FieldId::Vx => &self.vx,
            FieldId::Vy => &self.vy,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.fields()
            .iter()
            .all(|f| f.iter().all(|v| v.is_finite()))
    }

    /// Largest absolute value over all components.
    pub fn max_abs(&self) -> f64 {
        self.fields()
            .iter()
            .flat_map(|f| f.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldId {
    Eta,
    Vx,
    Vy,
}

impl FieldId {
    pub const ALL: [FieldId; 3] = [FieldId::Eta, FieldId::Vx, FieldId::Vy];

    pub fn name(self) -> &'static str {
        match self {
            FieldId::Eta => "eta",
            FieldId::Vx => "vx",
            FieldId::Vy => "vy",
        }
    }

    /// Fields present on a grid of the given dimension.
    pub fn present(grid: &TorusGrid) -> &'static [FieldId] {
        if grid.is_2d() {
            &Self::ALL
        } else {
            &Self::ALL[..2]
        }
    }
}

impl std::fmt::Display for FieldId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for FieldId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eta" => Ok(FieldId::Eta),
            "vx" | "v" => Ok(FieldId::Vx),
            "vy" => Ok(FieldId::Vy),
            other => Err(Error::InvalidArgument(format!("unknown field `{other}`"))),
        }
    }
}

/// Minimum over the grid of `1 + ε_nl η`; the depth in units of the rest
/// depth. Negative values are reported, not rejected.
pub fn cavitation_indicator(s: &WaveState, p: &ModelParams) -> f64 {
    s.eta
        .iter()
        .fold(f64::INFINITY, |m, &e| m.min(1.0 + p.eps_nl * e))
}

/// Pseudospectral tendency evaluator with preallocated buffers.
#[derive(Debug, Clone)]
pub struct AsSystem {
    grid: Arc<TorusGrid>,
    params: ModelParams,
    fourier: Fourier,
    dx: Vec<f64>,
    dy: Vec<f64>,
    dx_helm: Vec<f64>,
    dy_helm: Vec<f64>,
    mask: Option<Vec<f64>>,
    flux_x: Vec<f64>,
    flux_y: Vec<f64>,
    spec_a: Vec<Complex64>,
    spec_b: Vec<Complex64>,
}

impl AsSystem {
    pub fn new(grid: Arc<TorusGrid>, params: ModelParams) -> Result<Self> {
        Self::with_dealiasing(grid, params, false)
    }

    /// `dealias` truncates the spectra of the nonlinear fluxes with the 2/3
    /// rule before differentiation.
    pub fn with_dealiasing(
        grid: Arc<TorusGrid>,
        params: ModelParams,
        dealias: bool,
    ) -> Result<Self> {
        params.validate()?;
        let dx = grid.first_derivative_symbol(Axis::X);
        let dy = if grid.is_2d() {
            grid.first_derivative_symbol(Axis::Y)
        } else {
            vec![0.0; grid.spectrum_len()]
        };
        let helm: Vec<f64> = grid
            .laplacian_symbol()
            .iter()
            .map(|k2| 1.0 / (1.0 + params.eps_disp * k2))
            .collect();
        let dx_helm = dx.iter().zip(&helm).map(|(a, b)| a * b).collect();
        let dy_helm = dy.iter().zip(&helm).map(|(a, b)| a * b).collect();
        let n = grid.len();
        let ns = grid.spectrum_len();
        Ok(Self {
            fourier: grid.fourier(),
            mask: dealias.then(|| grid.two_thirds_mask()),
            grid,
            params,
            dx,
            dy,
            dx_helm,
            dy_helm,
            flux_x: vec![0.0; n],
            flux_y: vec![0.0; n],
            spec_a: vec![Complex64::default(); ns],
            spec_b: vec![Complex64::default(); ns],
        })
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    /// Writes the tendency of `s` into `out` (whose `t` is left untouched).
    pub fn eval(&mut self, s: &WaveState, out: &mut WaveState) -> Result<()> {
        if !s.grid.same_shape(&self.grid) || !out.grid.same_shape(&self.grid) {
            return Err(Error::GridMismatch(
                "state grid differs from the evaluator grid".into(),
            ));
        }
        let a = self.params.eps_nl;
        let two_d = self.grid.is_2d();

        // η_t = -∇·((1 + aη) v)
        for (((fx, fy), &eta), (n, &vx)) in self
            .flux_x
            .iter_mut()
            .zip(self.flux_y.iter_mut())
            .zip(&s.eta)
            .zip(s.vx.iter().enumerate())
        {
            let depth = 1.0 + a * eta;
            *fx = depth * vx;
            if two_d {
                *fy = depth * s.vy[n];
            }
        }
        self.fourier.forward(&self.flux_x, &mut self.spec_a);
        if two_d {
            self.fourier.forward(&self.flux_y, &mut self.spec_b);
            for (n, (ca, cb)) in self.spec_a.iter_mut().zip(&self.spec_b).enumerate() {
                let z = *ca * self.dx[n] + *cb * self.dy[n];
                *ca = minus_i(z);
            }
        } else {
            for (ca, &sym) in self.spec_a.iter_mut().zip(&self.dx) {
                *ca = minus_i(*ca * sym);
            }
        }
        if let Some(mask) = &self.mask {
            apply_mask(&mut self.spec_a, mask);
        }
        self.fourier.inverse(&self.spec_a, &mut out.eta);

        // v_t = -(1 - dΔ)^{-1} ∇(η + a|v|²/2)
        let g = &mut self.flux_x;
        for (n, gv) in g.iter_mut().enumerate() {
            let mut kinetic = s.vx[n] * s.vx[n];
            if two_d {
                kinetic += s.vy[n] * s.vy[n];
            }
            *gv = s.eta[n] + 0.5 * a * kinetic;
        }
        self.fourier.forward(g, &mut self.spec_b);
        if let Some(mask) = &self.mask {
            apply_mask(&mut self.spec_b, mask);
        }
        for (n, (ca, &cb)) in self.spec_a.iter_mut().zip(&self.spec_b).enumerate() {
            *ca = minus_i(cb * self.dx_helm[n]);
        }
        self.fourier.inverse(&self.spec_a, &mut out.vx);
        if two_d {
            for (n, (ca, &cb)) in self.spec_a.iter_mut().zip(&self.spec_b).enumerate() {
                *ca = minus_i(cb * self.dy_helm[n]);
            }
            self.fourier.inverse(&self.spec_a, &mut out.vy);
        }
        Ok(())
    }

    /// Allocating convenience wrapper around [`AsSystem::eval`].
    pub fn tendency(&mut self, s: &WaveState) -> Result<WaveState> {
        let mut out = WaveState::rest(self.grid.clone());
        out.t = s.t;
        self.eval(s, &mut out)?;
        Ok(out)
    }
}

#[inline]
fn minus_i(z: Complex64) -> Complex64 {
    Complex64::new(z.im, -z.re)
}

fn apply_mask(spec: &mut [Complex64], mask: &[f64]) {
    for (c, m) in spec.iter_mut().zip(mask) {
        *c *= *m;
    }
}

/// Tendency of a 2D state.
pub fn rhs_2d(s: &WaveState, p: &ModelParams) -> Result<WaveState> {
    if !s.grid.is_2d() {
        return Err(Error::GridMismatch("rhs_2d needs a 2D grid".into()));
    }
    s.check_shape()?;
    AsSystem::new(s.grid.clone(), *p)?.tendency(s)
}

/// Tendency of a 1D state.
pub fn rhs_1d(s: &WaveState, p: &ModelParams) -> Result<WaveState> {
    if s.grid.is_2d() {
        return Err(Error::GridMismatch("rhs_1d needs a 1D grid".into()));
    }
    s.check_shape()?;
    AsSystem::new(s.grid.clone(), *p)?.tendency(s)
}
