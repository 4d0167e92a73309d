//! Analyticity-strip tracking from the decay of Fourier coefficients.
//!
//! Near a complex singularity at distance `δ` from the real axis with local
//! exponent `μ`, the Fourier modulus behaves like
//!
//! ```text
//! |û(k)| ≈ C k^{-(μ+1)} e^{-δk}
//! ```
//!
//! so `log|û|` is fitted linearly in `(1, log k, k)` over a window of
//! resolved modes. A singularity reaching the real axis shows up as `δ → 0`.
//! The exponent `μ` is reported but is far less robust than `δ` on PDE data.

use std::fmt;
use std::io::Write;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::Fourier;
use crate::grid::{Axis, TorusGrid};
use crate::integrator::{Control, Observer};
use crate::model::{FieldId, WaveState};

/// Fits with a larger RMS log-misfit are flagged unreliable.
pub const RELIABLE_QUALITY: f64 = 0.5;

/// Fourier moduli along the positive half of one wavenumber axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpectrum {
    pub k: Vec<f64>,
    pub modulus: Vec<f64>,
    /// Largest modulus of the whole spectrum, the reference of the
    /// rounding floor. An axis on which the field has no content (an odd
    /// field on the orthogonal axis) then falls entirely under the floor.
    pub reference: f64,
}

/// Extracts `|û|` on the positive `k_x` (row `k_y = 0`) or `k_y` (column
/// `k_x = 0`) axis, excluding the zero mode and the Nyquist mode.
pub fn axis_modulus(grid: &TorusGrid, spec: &[Complex64], axis: Axis) -> Result<AxisSpectrum> {
    if spec.len() != grid.spectrum_len() {
        return Err(Error::GridMismatch(format!(
            "spectrum of length {} on a grid with {} modes",
            spec.len(),
            grid.spectrum_len()
        )));
    }
    let nxh = grid.nxh();
    let reference = spec.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let (k, modulus) = match axis {
        Axis::X => (1..grid.nx() / 2)
            .map(|i| (i as f64 / grid.lx(), spec[i].norm()))
            .unzip(),
        Axis::Y => {
            if !grid.is_2d() {
                return Err(Error::InvalidArgument("no k_y axis on a 1D grid".into()));
            }
            (1..grid.ny() / 2)
                .map(|j| (grid.ky()[j], spec[j * nxh].norm()))
                .unzip()
        }
    };
    Ok(AxisSpectrum {
        k,
        modulus,
        reference,
    })
}

/// Fitting window: a fraction range of the largest supplied wavenumber,
/// cut at the first mode under the rounding floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowPolicy {
    pub lo_frac: f64,
    pub hi_frac: f64,
    /// Modes below `floor_factor · f64::EPSILON · max|û|` are discarded.
    pub floor_factor: f64,
    pub min_modes: usize,
}

impl Default for WindowPolicy {
    fn default() -> Self {
        Self {
            lo_frac: 1.0 / 8.0,
            hi_frac: 3.0 / 4.0,
            floor_factor: 100.0,
            min_modes: 16,
        }
    }
}

impl WindowPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.lo_frac)
            || !(self.hi_frac > self.lo_frac && self.hi_frac <= 1.0)
        {
            return Err(Error::InvalidArgument(format!(
                "window fractions [{}, {}] must satisfy 0 <= lo < hi <= 1",
                self.lo_frac, self.hi_frac
            )));
        }
        if self.min_modes < 3 {
            return Err(Error::InvalidArgument(
                "a three-parameter fit needs at least 3 modes".into(),
            ));
        }
        Ok(())
    }

    /// Index range `[lo, hi)` of the modes used; the floor is relative to
    /// `reference` (at least the largest supplied modulus).
    pub fn select(&self, k: &[f64], modulus: &[f64], reference: f64) -> Result<(usize, usize)> {
        let k_max = k.iter().cloned().fold(0.0, f64::max);
        let max_mod = modulus.iter().cloned().fold(reference, f64::max);
        let floor = self.floor_factor * f64::EPSILON * max_mod;
        let lo = k
            .iter()
            .position(|&kv| kv >= self.lo_frac * k_max)
            .unwrap_or(k.len());
        let mut hi = lo;
        while hi < k.len()
            && k[hi] <= self.hi_frac * k_max
            && modulus[hi] >= floor
            && modulus[hi] > 0.0
        {
            hi += 1;
        }
        if hi - lo < self.min_modes {
            return Err(Error::FitUnavailable {
                usable: hi - lo,
                required: self.min_modes,
            });
        }
        Ok((lo, hi))
    }
}

/// Parameters of one regression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsfParams {
    pub delta: f64,
    pub mu: f64,
    /// Fitted `log C`.
    pub amplitude: f64,
    pub k_lo: f64,
    pub k_hi: f64,
    /// RMS misfit of `log|û|`.
    pub quality: f64,
    pub modes: usize,
}

impl SsfParams {
    pub fn reliable(&self) -> bool {
        self.quality.is_finite() && self.quality <= RELIABLE_QUALITY
    }
}

/// Least-squares fit of `log|û| = C - (μ+1) log k - δk` over the window
/// chosen by `policy`.
pub fn fit_ssf(k: &[f64], modulus: &[f64], policy: &WindowPolicy) -> Result<SsfParams> {
    fit_with_reference(k, modulus, 0.0, policy)
}

/// [`fit_ssf`] on an extracted axis, flooring against the full spectrum.
pub fn fit_axis(a: &AxisSpectrum, policy: &WindowPolicy) -> Result<SsfParams> {
    fit_with_reference(&a.k, &a.modulus, a.reference, policy)
}

fn fit_with_reference(
    k: &[f64],
    modulus: &[f64],
    reference: f64,
    policy: &WindowPolicy,
) -> Result<SsfParams> {
    if k.len() != modulus.len() {
        return Err(Error::InvalidArgument(
            "wavenumber and modulus lengths differ".into(),
        ));
    }
    policy.validate()?;
    let (lo, hi) = policy.select(k, modulus, reference)?;
    let ks = &k[lo..hi];
    let rows: Vec<[f64; 3]> = ks.iter().map(|&kv| [1.0, -kv.ln(), -kv]).collect();
    let rhs: Vec<f64> = modulus[lo..hi].iter().map(|m| m.ln()).collect();
    let coef = least_squares3(&rows, &rhs);
    let misfit = rows
        .iter()
        .zip(&rhs)
        .map(|(r, b)| {
            let e = r[0] * coef[0] + r[1] * coef[1] + r[2] * coef[2] - b;
            e * e
        })
        .sum::<f64>()
        / rows.len() as f64;
    Ok(SsfParams {
        amplitude: coef[0],
        mu: coef[1] - 1.0,
        delta: coef[2],
        k_lo: ks[0],
        k_hi: ks[ks.len() - 1],
        quality: misfit.sqrt(),
        modes: hi - lo,
    })
}

/// Householder QR solve of an `n × 3` least-squares problem. Columns are
/// scaled to unit norm first.
fn least_squares3(rows: &[[f64; 3]], rhs: &[f64]) -> [f64; 3] {
    let n = rows.len();
    let mut scale = [0.0; 3];
    for c in 0..3 {
        scale[c] = rows
            .iter()
            .map(|r| r[c] * r[c])
            .sum::<f64>()
            .sqrt()
            .max(f64::MIN_POSITIVE);
    }
    let mut a: Vec<[f64; 3]> = rows
        .iter()
        .map(|r| [r[0] / scale[0], r[1] / scale[1], r[2] / scale[2]])
        .collect();
    let mut b = rhs.to_vec();
    for c in 0..3 {
        let norm = (c..n).map(|i| a[i][c] * a[i][c]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[c][c] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (c..n).map(|i| a[i][c]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for col in c..3 {
            let d: f64 = (c..n).map(|i| v[i - c] * a[i][col]).sum::<f64>() * 2.0 / vnorm2;
            for i in c..n {
                a[i][col] -= d * v[i - c];
            }
        }
        let d: f64 = (c..n).map(|i| v[i - c] * b[i]).sum::<f64>() * 2.0 / vnorm2;
        for i in c..n {
            b[i] -= d * v[i - c];
        }
    }
    let mut x = [0.0; 3];
    for c in (0..3).rev() {
        let s: f64 = (c + 1..3).map(|k| a[c][k] * x[k]).sum();
        x[c] = (b[c] - s) / a[c][c];
    }
    [x[0] / scale[0], x[1] / scale[1], x[2] / scale[2]]
}

/// A fit attributed to a field, axis and time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularityFit {
    pub t: f64,
    pub field: FieldId,
    pub axis: Axis,
    pub params: SsfParams,
}

impl SingularityFit {
    pub fn delta(&self) -> f64 {
        self.params.delta
    }
}

/// Header of the fit history CSV.
pub const FIT_CSV_HEADER: &str = "t,field,axis,delta,mu,C,k_lo,k_hi,quality";

impl SingularityFit {
    pub fn csv_row(&self) -> String {
        let p = &self.params;
        format!(
            "{},{},k{},{},{},{},{},{},{}",
            self.t, self.field, self.axis, p.delta, p.mu, p.amplitude, p.k_lo, p.k_hi, p.quality
        )
    }
}

pub fn write_fit_csv(mut w: impl Write, fits: &[SingularityFit]) -> std::io::Result<()> {
    writeln!(w, "{FIT_CSV_HEADER}")?;
    for f in fits {
        writeln!(w, "{}", f.csv_row())?;
    }
    Ok(())
}

/// Fits one field of a state along one axis.
pub fn fit_field(
    s: &WaveState,
    field: FieldId,
    axis: Axis,
    policy: &WindowPolicy,
) -> Result<SingularityFit> {
    let grid = &s.grid;
    if !FieldId::present(grid).contains(&field) {
        return Err(Error::InvalidArgument(format!(
            "field {field} is not part of a {}D state",
            if grid.is_2d() { 2 } else { 1 }
        )));
    }
    let mut spec = vec![Complex64::default(); grid.spectrum_len()];
    grid.fourier().forward(s.field(field), &mut spec);
    let a = axis_modulus(grid, &spec, axis)?;
    Ok(SingularityFit {
        t: s.t,
        field,
        axis,
        params: fit_axis(&a, policy)?,
    })
}

/// Outcome of the stop test for one fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopDecision {
    pub stop: bool,
    pub threshold: f64,
    pub field: FieldId,
    pub axis: Axis,
    pub delta: f64,
}

impl fmt::Display for StopDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "delta = {:.4e} on field {} along k{} (threshold {:.4e})",
            self.delta, self.field, self.axis, self.threshold
        )
    }
}

/// Stop when `δ ≤ κ_stop · h`, `h` the grid spacing along the fit axis.
pub fn stop_check(fit: &SingularityFit, grid: &TorusGrid, kappa_stop: f64) -> StopDecision {
    let threshold = kappa_stop * grid.spacing(fit.axis);
    StopDecision {
        stop: fit.params.delta <= threshold,
        threshold,
        field: fit.field,
        axis: fit.axis,
        delta: fit.params.delta,
    }
}

/// Time at which a straight line through the last `tail` points of
/// `(t, δ)` reaches zero. `None` if fewer than two points or the line is
/// not decreasing.
pub fn extrapolate_collapse(series: &[(f64, f64)], tail: usize) -> Option<f64> {
    let pts = &series[series.len().saturating_sub(tail.max(2))..];
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let md = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let std: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - md)).sum();
    if stt == 0.0 {
        return None;
    }
    let slope = std / stt;
    if !(slope < 0.0) {
        return None;
    }
    Some(mt - md / slope)
}

/// Tracking options.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrackingConfig {
    pub enabled: bool,
    pub fields: Vec<FieldId>,
    /// Fitted axes; `ky` is skipped on 1D grids.
    pub axes: Vec<Axis>,
    pub window: WindowPolicy,
    pub kappa_stop: f64,
    /// Whether a reliable fit under the threshold ends the run.
    pub stop: bool,
    /// Steps between fits; `None` leaves the choice to the caller.
    pub stride: Option<usize>,
}

impl Default for TrackingConfig {
    fn default() -> Self {
        Self {
            enabled: false,
            fields: vec![FieldId::Eta],
            axes: vec![Axis::X, Axis::Y],
            window: WindowPolicy::default(),
            kappa_stop: 1.0,
            stop: true,
            stride: None,
        }
    }
}

/// Observer fitting the tracked fields at every call and applying the
/// stop policy.
#[derive(Debug)]
pub struct SingularityTracker {
    config: TrackingConfig,
    stride: usize,
    fourier: Option<Fourier>,
    spec: Vec<Complex64>,
    pub history: Vec<SingularityFit>,
    pub unavailable: usize,
    pub decision: Option<StopDecision>,
}

impl SingularityTracker {
    /// `default_stride` applies when the configuration has none.
    pub fn new(config: TrackingConfig, default_stride: usize) -> Result<Self> {
        let stride = config.stride.unwrap_or(default_stride);
        config.window.validate()?;
        if !(config.kappa_stop >= 0.0) {
            return Err(Error::InvalidArgument("kappa_stop must be >= 0".into()));
        }
        Ok(Self {
            config,
            stride: stride.max(1),
            fourier: None,
            spec: Vec::new(),
            history: Vec::new(),
            unavailable: 0,
            decision: None,
        })
    }

    /// Fits all tracked field/axis pairs of `s`, appending to the history.
    pub fn fit_state(&mut self, s: &WaveState) -> Result<Vec<SingularityFit>> {
        let grid = s.grid.clone();
        let fourier = self.fourier.get_or_insert_with(|| grid.fourier());
        if fourier.nx() != grid.nx() || fourier.ny() != grid.ny() {
            *fourier = grid.fourier();
        }
        self.spec.resize(grid.spectrum_len(), Complex64::default());
        let mut out = Vec::new();
        for &field in &self.config.fields {
            if !FieldId::present(&grid).contains(&field) {
                continue;
            }
            fourier.forward(s.field(field), &mut self.spec);
            for &axis in &self.config.axes {
                if axis == Axis::Y && !grid.is_2d() {
                    continue;
                }
                let a = axis_modulus(&grid, &self.spec, axis)?;
                match fit_axis(&a, &self.config.window) {
                    Ok(params) => out.push(SingularityFit {
                        t: s.t,
                        field,
                        axis,
                        params,
                    }),
                    Err(Error::FitUnavailable { .. }) => self.unavailable += 1,
                    Err(e) => return Err(e),
                }
            }
        }
        self.history.extend_from_slice(&out);
        Ok(out)
    }

    /// `(t, δ)` history of one field and axis.
    pub fn delta_series(&self, field: FieldId, axis: Axis) -> Vec<(f64, f64)> {
        self.history
            .iter()
            .filter(|f| f.field == field && f.axis == axis)
            .map(|f| (f.t, f.params.delta))
            .collect()
    }
}

impl Observer for SingularityTracker {
    fn observe(&mut self, step: usize, s: &WaveState) -> Result<Control> {
        if !self.config.enabled || !step.is_multiple_of(self.stride) {
            return Ok(Control::Continue);
        }
        let fits = self.fit_state(s)?;
        if !self.config.stop || self.decision.is_some() {
            return Ok(Control::Continue);
        }
        for fit in &fits {
            if !fit.params.reliable() {
                continue;
            }
            let d = stop_check(fit, &s.grid, self.config.kappa_stop);
            if d.stop {
                self.decision = Some(d);
                return Ok(Control::Stop(d.to_string()));
            }
        }
        Ok(Control::Continue)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn synthetic(delta: f64, mu: f64, c: f64, n: usize, l: f64) -> (Vec<f64>, Vec<f64>) {
        (1..n / 2)
            .map(|i| {
                let k = i as f64 / l;
                (k, (c - (mu + 1.0) * k.ln() - delta * k).exp())
            })
            .unzip()
    }

    #[test]
    fn recovers_exact_model() {
        for &(delta, mu) in &[(0.1, 0.5), (0.01, -0.85), (0.05, 1.0 / 3.0)] {
            let (k, m) = synthetic(delta, mu, 0.7, 1024, 3.0);
            let f = fit_ssf(&k, &m, &WindowPolicy::default()).unwrap();
            assert!((f.delta - delta).abs() < 1e-9, "{f:?}");
            assert!((f.mu - mu).abs() < 1e-9, "{f:?}");
            assert!((f.amplitude - 0.7).abs() < 1e-8);
            assert!(f.quality < 1e-10);
        }
    }

    #[test]
    fn pure_algebraic_tail() {
        let (k, m) = synthetic(0.0, 1.0, 0.0, 512, 1.0);
        let f = fit_ssf(&k, &m, &WindowPolicy::default()).unwrap();
        assert!(f.delta.abs() < 1e-8);
        assert!((f.mu - 1.0).abs() < 1e-6);
    }

    #[test]
    fn window_truncates_at_floor() {
        // δ = 0.2 on k up to 255: the floor cuts the window early.
        let (k, m) = synthetic(0.2, 0.0, 0.0, 512, 1.0);
        let p = WindowPolicy::default();
        let (lo, hi) = p.select(&k, &m, 0.0).unwrap();
        let floor = 100.0 * f64::EPSILON * m.iter().cloned().fold(0.0, f64::max);
        assert!(m[hi - 1] >= floor && m[hi] < floor);
        assert!(k[hi] < 0.75 * 255.0);
        assert_eq!(k[lo], 32.0);
        let (k, m) = synthetic(3.0, 0.0, 0.0, 512, 1.0);
        assert!(matches!(
            fit_ssf(&k, &m, &p),
            Err(Error::FitUnavailable { required: 16, .. })
        ));
    }

    #[test]
    fn axis_modulus_of_cosine() {
        let g = TorusGrid::two_d(32, 16, 2.0, 1.0).unwrap();
        let u = g.sample(|x, _| (1.5 * x).cos());
        let mut spec = vec![Complex64::default(); g.spectrum_len()];
        g.fourier().forward(&u, &mut spec);
        let a = axis_modulus(&g, &spec, Axis::X).unwrap();
        assert_eq!(a.k.len(), 15);
        assert!((a.modulus[2] - 0.5).abs() < 1e-14);
        assert_eq!(a.k[2], 1.5);
        let rest: f64 = a
            .modulus
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != 2)
            .map(|(_, m)| m)
            .sum();
        assert!(rest < 1e-14);
        let ay = axis_modulus(&g, &spec, Axis::Y).unwrap();
        assert_eq!(ay.k.len(), 7);
        assert!(ay.modulus.iter().all(|m| *m < 1e-14));
        let g1 = TorusGrid::one_d(32, 1.0).unwrap();
        let spec1 = vec![Complex64::default(); g1.spectrum_len()];
        assert!(axis_modulus(&g1, &spec1, Axis::Y).is_err());
    }

    #[test]
    fn gaussian_log_modulus_is_concave() {
        // exp(-x²) has coefficients ∝ exp(-k²/4).
        let g = TorusGrid::one_d(256, 4.0).unwrap();
        let u = g.sample(|x, _| (-x * x).exp());
        let mut spec = vec![Complex64::default(); g.spectrum_len()];
        g.fourier().forward(&u, &mut spec);
        let a = axis_modulus(&g, &spec, Axis::X).unwrap();
        let logs: Vec<f64> = a.modulus.iter().map(|m| m.ln()).collect();
        for i in 1..30 {
            let second = logs[i + 1] - 2.0 * logs[i] + logs[i - 1];
            let expected = -0.5 * (1.0 / 4.0f64).powi(2);
            assert!((second - expected).abs() < 1e-6, "{i}: {second}");
        }
    }

    #[test]
    fn stop_threshold() {
        let g = TorusGrid::one_d(64, 1.0).unwrap();
        let mk = |delta| SingularityFit {
            t: 1.0,
            field: FieldId::Eta,
            axis: Axis::X,
            params: SsfParams {
                delta,
                mu: 0.0,
                amplitude: 0.0,
                k_lo: 1.0,
                k_hi: 2.0,
                quality: 0.0,
                modes: 16,
            },
        };
        assert!(!stop_check(&mk(10.0 * g.hx()), &g, 1.0).stop);
        assert!(stop_check(&mk(0.0), &g, 1.0).stop);
        assert!(stop_check(&mk(-0.1), &g, 1.0).stop);
    }

    #[test]
    fn collapse_extrapolation() {
        let s: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 5.0 - 0.5 * i as f64)).collect();
        assert!((extrapolate_collapse(&s, 4).unwrap() - 10.0).abs() < 1e-12);
        let flat: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 1.0)).collect();
        assert!(extrapolate_collapse(&flat, 3).is_none());
    }

    #[test]
    fn csv_layout() {
        let (k, m) = synthetic(0.1, 0.5, 0.0, 256, 1.0);
        let params = fit_ssf(&k, &m, &WindowPolicy::default()).unwrap();
        let fit = SingularityFit {
            t: 0.5,
            field: FieldId::Vx,
            axis: Axis::Y,
            params,
        };
        let mut buf = Vec::new();
        write_fit_csv(&mut buf, &[fit]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), FIT_CSV_HEADER);
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 9);
        assert_eq!(&row[..3], &["0.5", "vx", "ky"]);
        assert_eq!(row[3].parse::<f64>().unwrap(), params.delta);
    }

    #[test]
    fn tracker_skips_smooth_data_and_stops_on_kink() {
        let g = Arc::new(TorusGrid::one_d(512, 2.0).unwrap());
        let mut tr = SingularityTracker::new(
            TrackingConfig {
                enabled: true,
                ..TrackingConfig::default()
            },
            1,
        )
        .unwrap();
        let mut smooth = WaveState::rest(g.clone());
        smooth.eta = g.sample(|x, _| (-x * x).exp());
        assert_eq!(tr.observe(0, &smooth).unwrap(), Control::Continue);
        assert!(tr.history.is_empty());
        assert_eq!(tr.unavailable, 1);

        // |sin(x/2)|-type kink on the real axis: δ ≈ 0.
        let mut kink = WaveState::rest(g.clone());
        kink.eta = g.sample(|x, _| (x / 4.0).sin().abs());
        kink.t = 1.0;
        assert!(matches!(tr.observe(1, &kink).unwrap(), Control::Stop(_)));
        let d = tr.decision.unwrap();
        assert_eq!((d.field, d.axis), (FieldId::Eta, Axis::X));
    }
}
