//! Norm series, resolution monitor and axis slices.

use std::io::Write;

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft::Fourier;
use crate::grid::{h1_seminorm, Axis, TorusGrid};
use crate::integrator::{Control, Observer};
use crate::model::{cavitation_indicator, FieldId, ModelParams, WaveState};

/// Tail ratios above this value mean the spectrum is not decaying to the
/// rounding level before the highest modes.
pub const TAIL_WARN: f64 = 1e-6;

/// Modes with `max(|kx|/kx_max, |ky|/ky_max)` at or above this fraction of
/// the cut-off count as the spectral tail.
const TAIL_BAND: f64 = 0.9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct FieldNorms {
    pub linf: f64,
    pub l2: f64,
    pub l4: f64,
    /// `‖∇f‖_{L²}`
    pub h1: f64,
}

/// One row of the norm series. In 1D the `vy` entries are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormRecord {
    pub t: f64,
    pub eta: FieldNorms,
    pub vx: FieldNorms,
    pub vy: FieldNorms,
    pub min_eta: f64,
    pub max_eta: f64,
    /// `min(1 + ε_nl η)`
    pub cavitation: f64,
    pub mean_eta: f64,
    pub mean_vx: f64,
    pub mean_vy: f64,
    pub curl_l2: f64,
    pub tail_ratio: f64,
}

/// Header of the norm series CSV, in [`NormRecord`] field order.
pub const NORMS_CSV_HEADER: &str = "t,eta_linf,eta_l2,eta_l4,eta_h1,vx_linf,vx_l2,vx_l4,vx_h1,\
vy_linf,vy_l2,vy_l4,vy_h1,min_eta,max_eta,cavitation,mean_eta,mean_vx,mean_vy,curl_l2,tail_ratio";

impl NormRecord {
    pub fn field(&self, id: FieldId) -> &FieldNorms {
        match id {
            FieldId::Eta => &self.eta,
            FieldId::Vx => &self.vx,
            FieldId::Vy => &self.vy,
        }
    }

    pub fn resolution_warning(&self) -> bool {
        self.tail_ratio > TAIL_WARN
    }

    /// Divides every norm by its value in `reference` (zero references are
    /// left alone). Extrema, means, cavitation and monitors are unchanged.
    pub fn normalized_by(&self, reference: &NormRecord) -> NormRecord {
        let div = |a: f64, b: f64| if b != 0.0 { a / b } else { a };
        let scale = |a: &FieldNorms, b: &FieldNorms| FieldNorms {
            linf: div(a.linf, b.linf),
            l2: div(a.l2, b.l2),
            l4: div(a.l4, b.l4),
            h1: div(a.h1, b.h1),
        };
        NormRecord {
            eta: scale(&self.eta, &reference.eta),
            vx: scale(&self.vx, &reference.vx),
            vy: scale(&self.vy, &reference.vy),
            ..*self
        }
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![self.t];
        for f in [&self.eta, &self.vx, &self.vy] {
            cols.extend([f.linf, f.l2, f.l4, f.h1]);
        }
        cols.extend([
            self.min_eta,
            self.max_eta,
            self.cavitation,
            self.mean_eta,
            self.mean_vx,
            self.mean_vy,
            self.curl_l2,
            self.tail_ratio,
        ]);
        cols.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn write_norms_csv(mut w: impl Write, records: &[NormRecord]) -> std::io::Result<()> {
    writeln!(w, "{NORMS_CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Reusable evaluator of [`NormRecord`]s on one grid.
#[derive(Debug)]
pub struct Diagnostics {
    params: ModelParams,
    fourier: Fourier,
    spec: Vec<Complex64>,
    spec_vx: Vec<Complex64>,
    tail: Vec<bool>,
    dx: Vec<f64>,
    dy: Vec<f64>,
}

impl Diagnostics {
    pub fn new(grid: &TorusGrid, params: ModelParams) -> Self {
        let nxh = grid.nxh();
        let kx_max = grid.k_max(Axis::X);
        let ky_max = if grid.is_2d() {
            grid.k_max(Axis::Y)
        } else {
            1.0
        };
        let tail = (0..grid.spectrum_len())
            .map(|n| {
                let (kx, ky) = grid.mode(n % nxh, n / nxh);
                (kx.abs() / kx_max).max(ky.abs() / ky_max) >= TAIL_BAND
            })
            .collect();
        Self {
            params,
            fourier: grid.fourier(),
            spec: vec![Complex64::default(); grid.spectrum_len()],
            spec_vx: vec![Complex64::default(); grid.spectrum_len()],
            tail,
            dx: grid.first_derivative_symbol(Axis::X),
            dy: if grid.is_2d() {
                grid.first_derivative_symbol(Axis::Y)
            } else {
                Vec::new()
            },
        }
    }

    fn field_norms(&mut self, grid: &TorusGrid, values: &[f64]) -> (FieldNorms, f64, f64) {
        let cell = grid.cell_measure();
        let (mut linf, mut s2, mut s4, mut sum) = (0.0f64, 0.0, 0.0, 0.0);
        for &v in values {
            linf = linf.max(v.abs());
            let v2 = v * v;
            s2 += v2;
            s4 += v2 * v2;
            sum += v;
        }
        self.fourier.forward(values, &mut self.spec);
        let (mut all, mut top) = (0.0f64, 0.0f64);
        for (c, &is_tail) in self.spec.iter().zip(&self.tail) {
            let m = c.norm();
            all = all.max(m);
            if is_tail {
                top = top.max(m);
            }
        }
        let norms = FieldNorms {
            linf,
            l2: (cell * s2).sqrt(),
            l4: (cell * s4).powf(0.25),
            h1: h1_seminorm(grid, &self.spec),
        };
        let ratio = if all > 0.0 { top / all } else { 0.0 };
        (norms, sum / values.len() as f64, ratio)
    }

    pub fn record(&mut self, s: &WaveState) -> Result<NormRecord> {
        s.check_shape()?;
        let grid = s.grid.clone();
        if grid.nx() != self.fourier.nx() || grid.ny() != self.fourier.ny() {
            return Err(Error::GridMismatch(
                "state grid differs from the diagnostics grid".into(),
            ));
        }
        let (eta, mean_eta, r_eta) = self.field_norms(&grid, &s.eta);
        let (vx, mean_vx, r_vx) = self.field_norms(&grid, &s.vx);
        let mut tail_ratio = r_eta.max(r_vx);
        let (mut vy, mut mean_vy, mut curl_l2) = (FieldNorms::default(), 0.0, 0.0);
        if grid.is_2d() {
            std::mem::swap(&mut self.spec, &mut self.spec_vx);
            let (n, m, r) = self.field_norms(&grid, &s.vy);
            vy = n;
            mean_vy = m;
            tail_ratio = tail_ratio.max(r);
            // curl v = ∂x vy - ∂y vx, spectrally.
            let (dx, dy) = (&self.dx, &self.dy);
            let nxh = grid.nxh();
            let mut total = 0.0;
            for n in 0..self.spec.len() {
                let c = self.spec[n] * dx[n] - self.spec_vx[n] * dy[n];
                total += grid.half_weight(n % nxh) * c.norm_sqr();
            }
            curl_l2 = (total * grid.domain_measure()).sqrt();
        }
        let (min_eta, max_eta) = s
            .eta
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        Ok(NormRecord {
            t: s.t,
            eta,
            vx,
            vy,
            min_eta,
            max_eta,
            cavitation: cavitation_indicator(s, &self.params),
            mean_eta,
            mean_vx,
            mean_vy,
            curl_l2,
            tail_ratio,
        })
    }
}

/// One-off [`NormRecord`] of a state.
pub fn record(s: &WaveState, params: &ModelParams) -> Result<NormRecord> {
    Diagnostics::new(&s.grid, *params).record(s)
}

/// Observer collecting norm records; optionally normalised by the first
/// record.
#[derive(Debug)]
pub struct NormSeries {
    diagnostics: Diagnostics,
    stride: usize,
    normalize: bool,
    first: Option<NormRecord>,
    pub records: Vec<NormRecord>,
    pub warnings: usize,
}

impl NormSeries {
    pub fn new(grid: &TorusGrid, params: ModelParams, stride: usize, normalize: bool) -> Self {
        Self {
            diagnostics: Diagnostics::new(grid, params),
            stride: stride.max(1),
            normalize,
            first: None,
            records: Vec::new(),
            warnings: 0,
        }
    }

    /// Un-normalised first record.
    pub fn initial(&self) -> Option<&NormRecord> {
        self.first.as_ref()
    }
}

impl Observer for NormSeries {
    fn observe(&mut self, step: usize, s: &WaveState) -> Result<Control> {
        if !step.is_multiple_of(self.stride) {
            return Ok(Control::Continue);
        }
        let rec = self.diagnostics.record(s)?;
        if rec.resolution_warning() {
            if self.warnings == 0 {
                log::warn!(
                    "spectral tail ratio {:.2e} at t = {} exceeds {TAIL_WARN:e}",
                    rec.tail_ratio,
                    rec.t
                );
            }
            self.warnings += 1;
        }
        let reference = *self.first.get_or_insert(rec);
        self.records.push(if self.normalize {
            rec.normalized_by(&reference)
        } else {
            rec
        });
        Ok(Control::Continue)
    }
}

/// Fields sampled along the line through the origin node.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSlice {
    pub t: f64,
    pub axis: Axis,
    pub coord: Vec<f64>,
    pub eta: Vec<f64>,
    pub vx: Vec<f64>,
    pub vy: Vec<f64>,
}

/// Samples the state on the `x` axis (row through `y = 0`) or `y` axis
/// (column through `x = 0`). In 1D only the `x` axis exists and `vy` is
/// zero.
pub fn axis_slice(s: &WaveState, axis: Axis) -> Result<AxisSlice> {
    let g = &s.grid;
    let (nx, ny) = (g.nx(), g.ny());
    let zeros = |n| vec![0.0; n];
    match axis {
        Axis::X => {
            let j = g.origin_y();
            let row = |f: &[f64]| f[j * nx..(j + 1) * nx].to_vec();
            Ok(AxisSlice {
                t: s.t,
                axis,
                coord: g.x().to_vec(),
                eta: row(&s.eta),
                vx: row(&s.vx),
                vy: if g.is_2d() { row(&s.vy) } else { zeros(nx) },
            })
        }
        Axis::Y => {
            if !g.is_2d() {
                return Err(Error::InvalidArgument("no y axis on a 1D grid".into()));
            }
            let i = g.origin_x();
            let col = |f: &[f64]| (0..ny).map(|j| f[j * nx + i]).collect();
            Ok(AxisSlice {
                t: s.t,
                axis,
                coord: g.y().to_vec(),
                eta: col(&s.eta),
                vx: col(&s.vx),
                vy: col(&s.vy),
            })
        }
    }
}

pub const SLICES_CSV_HEADER: &str = "t,axis,s,eta,vx,vy";

/// Long-format slice rows, one per node.
pub fn write_slice_rows(mut w: impl Write, slice: &AxisSlice) -> std::io::Result<()> {
    for n in 0..slice.coord.len() {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            slice.t, slice.axis, slice.coord[n], slice.eta[n], slice.vx[n], slice.vy[n]
        )?;
    }
    Ok(())
}

pub fn write_slices_csv(mut w: impl Write, slices: &[AxisSlice]) -> std::io::Result<()> {
    writeln!(w, "{SLICES_CSV_HEADER}")?;
    for s in slices {
        write_slice_rows(&mut w, s)?;
    }
    Ok(())
}

/// Observer collecting axis slices.
#[derive(Debug)]
pub struct SliceSeries {
    stride: usize,
    axes: Vec<Axis>,
    pub slices: Vec<AxisSlice>,
}

impl SliceSeries {
    pub fn new(stride: usize, axes: Vec<Axis>) -> Self {
        Self {
            stride: stride.max(1),
            axes,
            slices: Vec::new(),
        }
    }
}

impl Observer for SliceSeries {
    fn observe(&mut self, step: usize, s: &WaveState) -> Result<Control> {
        if step.is_multiple_of(self.stride) {
            for &axis in &self.axes {
                if axis == Axis::Y && !s.grid.is_2d() {
                    continue;
                }
                self.slices.push(axis_slice(s, axis)?);
            }
        }
        Ok(Control::Continue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{norm_functionals, spectral_derivative, NormKind, SpectralField};
    use std::sync::Arc;

    fn g2() -> Arc<TorusGrid> {
        Arc::new(TorusGrid::two_d(64, 64, 2.0, 2.0).unwrap())
    }

    #[test]
    fn rest_state() {
        let g = g2();
        let r = record(&WaveState::rest(g), &ModelParams::default()).unwrap();
        assert_eq!(r.eta, FieldNorms::default());
        assert_eq!(r.vy, FieldNorms::default());
        assert_eq!(r.cavitation, 1.0);
        assert_eq!(r.tail_ratio, 0.0);
        assert_eq!(r.curl_l2, 0.0);
    }

    #[test]
    fn norms_agree_with_quadrature_and_parseval() {
        let g = g2();
        let mut s = WaveState::rest(g.clone());
        s.eta = g.sample(|x, y| (-(x * x + 0.5 * y * y)).exp() * (1.0 + 0.3 * x));
        let r = record(&s, &ModelParams::default()).unwrap();
        let q =
            norm_functionals(&g, &s.eta, &[NormKind::L2, NormKind::L4, NormKind::LInf]).unwrap();
        assert!((r.eta.l2 - q[0]).abs() <= 1e-12 * q[0]);
        assert!((r.eta.l4 - q[1]).abs() <= 1e-12 * q[1]);
        assert_eq!(r.eta.linf, q[2]);
        let mut spec = vec![Complex64::default(); g.spectrum_len()];
        g.fourier().forward(&s.eta, &mut spec);
        let parseval = crate::grid::l2_parseval(&g, &spec);
        assert!((r.eta.l2 - parseval).abs() <= 1e-12 * parseval);
        // H¹ against quadrature of spectral gradients.
        let f = SpectralField::from_physical(g.clone(), &s.eta).unwrap();
        let gx = spectral_derivative(&f, Axis::X, 1).unwrap().into_physical();
        let gy = spectral_derivative(&f, Axis::Y, 1).unwrap().into_physical();
        let quad =
            (g.cell_measure() * gx.iter().zip(&gy).map(|(a, b)| a * a + b * b).sum::<f64>()).sqrt();
        assert!((r.eta.h1 - quad).abs() <= 1e-10 * quad);
        assert!(!r.resolution_warning());
    }

    #[test]
    fn curl_of_gradient_vanishes_and_rotation_does_not() {
        let g = g2();
        let phi = SpectralField::from_fn(g.clone(), |x, y| (x.sin() * (2.0 * y).cos()).exp());
        let mut s = WaveState::rest(g.clone());
        s.vx = spectral_derivative(&phi, Axis::X, 1)
            .unwrap()
            .into_physical();
        s.vy = spectral_derivative(&phi, Axis::Y, 1)
            .unwrap()
            .into_physical();
        let r = record(&s, &ModelParams::default()).unwrap();
        assert!(r.curl_l2 < 1e-12, "{}", r.curl_l2);
        // v = (-sin(y/2), sin(x/2)): curl = (cos(x/2) + cos(y/2))/2.
        let mut rot = WaveState::rest(g.clone());
        rot.vx = g.sample(|_, y| -(y / 2.0).sin());
        rot.vy = g.sample(|x, _| (x / 2.0).sin());
        let r = record(&rot, &ModelParams::default()).unwrap();
        let expected = (0.25 * g.domain_measure()).sqrt();
        assert!((r.curl_l2 - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn tail_ratio_flags_unresolved_data() {
        let g = g2();
        let mut s = WaveState::rest(g.clone());
        s.eta = g.sample(|x, y| (x.abs() + y.abs()).min(1.0));
        let r = record(&s, &ModelParams::default()).unwrap();
        assert!(r.resolution_warning(), "{}", r.tail_ratio);
    }

    #[test]
    fn normalization_and_csv() {
        let g = Arc::new(TorusGrid::one_d(128, 3.0).unwrap());
        let mut s = WaveState::rest(g.clone());
        s.eta = g.sample(|x, _| -0.5 * (-x * x).exp());
        let mut series = NormSeries::new(&g, ModelParams::default(), 1, true);
        series.observe(0, &s).unwrap();
        s.eta.iter_mut().for_each(|v| *v *= 2.0);
        s.t = 1.0;
        series.observe(1, &s).unwrap();
        let r = &series.records;
        assert_eq!(r[0].eta.l2, 1.0);
        assert!((r[1].eta.l4 - 2.0).abs() < 1e-14);
        assert_eq!(r[1].min_eta, -1.0);
        assert_eq!(r[1].cavitation, 0.0);
        assert_eq!(series.initial().unwrap().min_eta, -0.5);
        let mut buf = Vec::new();
        write_norms_csv(&mut buf, r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], NORMS_CSV_HEADER);
        let ncols = NORMS_CSV_HEADER.split(',').count();
        assert_eq!(ncols, 21);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == ncols));
        assert!(lines[1].starts_with("0,1,1,1,1,"));
    }

    #[test]
    fn slices_of_radial_data_agree() {
        let g = g2();
        let mut s = WaveState::rest(g.clone());
        s.eta = g.sample(|x, y| (-(x * x + y * y)).exp());
        let sx = axis_slice(&s, Axis::X).unwrap();
        let sy = axis_slice(&s, Axis::Y).unwrap();
        assert_eq!(sx.coord, sy.coord);
        for (a, b) in sx.eta.iter().zip(&sy.eta) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(sx.eta[g.origin_x()], 1.0);

        let g1 = Arc::new(TorusGrid::one_d(32, 1.0).unwrap());
        let s1 = WaveState::rest(g1);
        assert!(axis_slice(&s1, Axis::Y).is_err());
        let sl = axis_slice(&s1, Axis::X).unwrap();
        let mut buf = Vec::new();
        write_slices_csv(&mut buf, &[sl]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 33);
        assert!(text.lines().nth(1).unwrap().starts_with("0,x,"));
    }
}
