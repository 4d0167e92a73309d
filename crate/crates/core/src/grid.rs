//! Periodic grids, Fourier calculus and Parseval functionals.
//!
//! A grid covers `[-πL_x, πL_x) × [-πL_y, πL_y)` with nodes
//! `x_n = -πL_x + n·2πL_x/N_x`, `n = 1..N_x` (stored 0-based, so array index
//! `i` holds `n = i + 1` and `x = 0` sits at index `N_x/2 - 1`).
//! Wavenumbers follow the signed FFT ordering `0, 1, …, N/2-1, -N/2, …, -1`
//! divided by `L`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::Fourier;

/// Smallest accepted mode count per direction.
pub const MIN_MODES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dims {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    #[serde(alias = "kx")]
    X,
    #[serde(alias = "ky")]
    Y,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "kx" => Ok(Axis::X),
            "y" | "ky" => Ok(Axis::Y),
            other => Err(Error::InvalidArgument(format!("unknown axis `{other}`"))),
        }
    }
}

/// Periodic rectangular grid with wavenumber metadata.
///
/// 1D grids are stored as `N_y = 1` with `L_y = 0`, a single `y = 0` node and
/// a single `k_y = 0` mode, so every routine can treat both cases uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusGrid {
    dims: Dims,
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    x: Vec<f64>,
    y: Vec<f64>,
    kx: Vec<f64>,
    ky: Vec<f64>,
}

fn check_modes(axis: char, n: usize) -> Result<()> {
    if n < MIN_MODES || !n.is_power_of_two() {
        return Err(Error::GridSize {
            axis,
            n,
            min: MIN_MODES,
        });
    }
    Ok(())
}

fn check_scale(axis: char, value: f64) -> Result<()> {
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::GridScale { axis, value });
    }
    Ok(())
}

fn nodes(n: usize, l: f64) -> Vec<f64> {
    let h = 2.0 * PI * l / n as f64;
    (1..=n).map(|m| -PI * l + m as f64 * h).collect()
}

fn signed_mode(index: usize, n: usize) -> i64 {
    if index < n / 2 {
        index as i64
    } else {
        index as i64 - n as i64
    }
}

fn wavenumbers(n: usize, l: f64) -> Vec<f64> {
    (0..n).map(|i| signed_mode(i, n) as f64 / l).collect()
}

impl TorusGrid {
    /// Builds a grid; `ny`/`ly` are ignored for [`Dims::One`].
    pub fn new(dims: Dims, nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        match dims {
            Dims::One => Self::one_d(nx, lx),
            Dims::Two => Self::two_d(nx, ny, lx, ly),
        }
    }

    pub fn one_d(nx: usize, lx: f64) -> Result<Self> {
        check_modes('x', nx)?;
        check_scale('x', lx)?;
        Ok(Self {
            dims: Dims::One,
            nx,
            ny: 1,
            lx,
            ly: 0.0,
            x: nodes(nx, lx),
            y: vec![0.0],
            kx: wavenumbers(nx, lx),
            ky: vec![0.0],
        })
    }

    pub fn two_d(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        check_modes('x', nx)?;
        check_modes('y', ny)?;
        check_scale('x', lx)?;
        check_scale('y', ly)?;
        Ok(Self {
            dims: Dims::Two,
            nx,
            ny,
            lx,
            ly,
            x: nodes(nx, lx),
            y: nodes(ny, ly),
            kx: wavenumbers(nx, lx),
            ky: wavenumbers(ny, ly),
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn is_2d(&self) -> bool {
        self.dims == Dims::Two
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn ly(&self) -> f64 {
        self.ly
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Signed wavenumbers along `x`, length `N_x`.
    pub fn kx(&self) -> &[f64] {
        &self.kx
    }

    /// Signed wavenumbers along `y`, length `N_y` (`[0]` in 1D).
    pub fn ky(&self) -> &[f64] {
        &self.ky
    }

    /// Non-negative wavenumbers of the stored half-spectrum, length `N_x/2 + 1`.
    pub fn kx_half(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.nx / 2).map(move |i| i as f64 / self.lx)
    }

    pub fn hx(&self) -> f64 {
        2.0 * PI * self.lx / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        match self.dims {
            Dims::One => 0.0,
            Dims::Two => 2.0 * PI * self.ly / self.ny as f64,
        }
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.hx(),
            Axis::Y => self.hy(),
        }
    }

    /// Quadrature weight of one node (`h_x`, or `h_x h_y` in 2D).
    pub fn cell_measure(&self) -> f64 {
        match self.dims {
            Dims::One => self.hx(),
            Dims::Two => self.hx() * self.hy(),
        }
    }

    /// Length or area of the periodic domain.
    pub fn domain_measure(&self) -> f64 {
        match self.dims {
            Dims::One => 2.0 * PI * self.lx,
            Dims::Two => 4.0 * PI * PI * self.lx * self.ly,
        }
    }

    /// Number of physical nodes.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn nxh(&self) -> usize {
        self.nx / 2 + 1
    }

    pub fn spectrum_len(&self) -> usize {
        self.nxh() * self.ny
    }

    /// Largest resolved wavenumber along `axis` (the Nyquist wavenumber).
    pub fn k_max(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => (self.nx / 2) as f64 / self.lx,
            Axis::Y if self.is_2d() => (self.ny / 2) as f64 / self.ly,
            Axis::Y => 0.0,
        }
    }

    /// Array index of the `x = 0` node.
    pub fn origin_x(&self) -> usize {
        self.nx / 2 - 1
    }

    /// Array index of the `y = 0` node (0 in 1D).
    pub fn origin_y(&self) -> usize {
        match self.dims {
            Dims::One => 0,
            Dims::Two => self.ny / 2 - 1,
        }
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Evaluates `f(x, y)` on every node, row-major.
    pub fn sample(&self, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for &y in &self.y {
            for &x in &self.x {
                out.push(f(x, y));
            }
        }
        out
    }

    pub fn fourier(&self) -> Fourier {
        Fourier::new(self.nx, self.ny)
    }

    /// Parseval weight of half-spectrum column `i` (interior columns stand
    /// for a conjugate pair).
    pub fn half_weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.nx / 2 {
            1.0
        } else {
            2.0
        }
    }

    /// `(k_x, k_y)` of half-spectrum entry `(i, j)`.
    pub fn mode(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 / self.lx, self.ky[j])
    }

    /// Multiplier of a first derivative along `axis` for every stored mode,
    /// imaginary part only (`i·k`), Nyquist zeroed.
    pub fn first_derivative_symbol(&self, axis: Axis) -> Vec<f64> {
        let nxh = self.nxh();
        let mut out = vec![0.0; self.spectrum_len()];
        for j in 0..self.ny {
            for i in 0..nxh {
                out[j * nxh + i] = match axis {
                    Axis::X if i == self.nx / 2 => 0.0,
                    Axis::X => i as f64 / self.lx,
                    Axis::Y if self.ny > 1 && j == self.ny / 2 => 0.0,
                    Axis::Y => self.ky[j],
                };
            }
        }
        out
    }

    /// `|k|²` for every stored mode.
    pub fn laplacian_symbol(&self) -> Vec<f64> {
        let nxh = self.nxh();
        let mut out = vec![0.0; self.spectrum_len()];
        for j in 0..self.ny {
            for i in 0..nxh {
                let (kx, ky) = self.mode(i, j);
                out[j * nxh + i] = kx * kx + ky * ky;
            }
        }
        out
    }

    /// 2/3-rule mask: 1 for retained modes, 0 for modes with `|n| > N/3` in
    /// either direction.
    pub fn two_thirds_mask(&self) -> Vec<f64> {
        let nxh = self.nxh();
        let mut out = vec![1.0; self.spectrum_len()];
        for j in 0..self.ny {
            let ny_mode = signed_mode(j, self.ny).unsigned_abs() as usize;
            for i in 0..nxh {
                if 3 * i > self.nx || (self.ny > 1 && 3 * ny_mode > self.ny) {
                    out[j * nxh + i] = 0.0;
                }
            }
        }
        out
    }

    pub fn same_shape(&self, other: &TorusGrid) -> bool {
        self.dims == other.dims
            && self.nx == other.nx
            && self.ny == other.ny
            && self.lx == other.lx
            && self.ly == other.ly
    }
}

/// A field held by its Fourier coefficients, with a lazily computed
/// physical representation.
#[derive(Debug, Clone)]
pub struct SpectralField {
    grid: Arc<TorusGrid>,
    coeffs: Vec<Complex64>,
    physical: OnceLock<Vec<f64>>,
}

impl SpectralField {
    pub fn from_physical(grid: Arc<TorusGrid>, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        let mut coeffs = vec![Complex64::default(); grid.spectrum_len()];
        grid.fourier().forward(values, &mut coeffs);
        let physical = OnceLock::new();
        let _ = physical.set(values.to_vec());
        Ok(Self {
            grid,
            coeffs,
            physical,
        })
    }

    pub fn from_fn(grid: Arc<TorusGrid>, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = grid.sample(f);
        Self::from_physical(grid, &values).expect("sampled on its own grid")
    }

    pub fn from_coeffs(grid: Arc<TorusGrid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.spectrum_len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a spectrum of {}",
                coeffs.len(),
                grid.spectrum_len()
            )));
        }
        Ok(Self {
            grid,
            coeffs,
            physical: OnceLock::new(),
        })
    }

    pub fn grid(&self) -> &Arc<TorusGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Mutable coefficient access; drops the cached physical values.
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        self.physical = OnceLock::new();
        &mut self.coeffs
    }

    pub fn physical(&self) -> &[f64] {
        self.physical.get_or_init(|| {
            let mut out = vec![0.0; self.grid.len()];
            self.grid.fourier().inverse(&self.coeffs, &mut out);
            out
        })
    }

    pub fn into_physical(self) -> Vec<f64> {
        self.physical();
        self.physical.into_inner().expect("initialised above")
    }

    /// Largest violation of `c(0, -k_y) = conj c(0, k_y)` (and likewise in
    /// the Nyquist column), the symmetry a real field's half-spectrum keeps.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.grid;
        let (nxh, ny) = (g.nxh(), g.ny());
        let mut worst = 0.0f64;
        for i in [0, nxh - 1] {
            for j in 0..ny {
                let jm = (ny - j) % ny;
                let d = self.coeffs[j * nxh + i] - self.coeffs[jm * nxh + i].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    fn map_modes(&self, f: impl Fn(usize, usize, Complex64) -> Complex64) -> Self {
        let nxh = self.grid.nxh();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &c)| f(n % nxh, n / nxh, c))
            .collect();
        Self {
            grid: self.grid.clone(),
            coeffs,
            physical: OnceLock::new(),
        }
    }
}

/// Multiplies by `(i k)^order` along `axis`; order 1 zeroes the Nyquist mode.
pub fn spectral_derivative(f: &SpectralField, axis: Axis, order: u8) -> Result<SpectralField> {
    let g = f.grid.clone();
    if axis == Axis::Y && !g.is_2d() {
        return Err(Error::InvalidArgument("y derivative on a 1D grid".into()));
    }
    match order {
        1 => {
            let sym = g.first_derivative_symbol(axis);
            let nxh = g.nxh();
            Ok(f.map_modes(|i, j, c| c * Complex64::new(0.0, sym[j * nxh + i])))
        }
        2 => Ok(f.map_modes(|i, j, c| {
            let (kx, ky) = g.mode(i, j);
            let k = if axis == Axis::X { kx } else { ky };
            c * (-k * k)
        })),
        other => Err(Error::InvalidArgument(format!(
            "derivative order {other} (supported: 1, 2)"
        ))),
    }
}

/// Solves `(1 - eps Δ) g = f` mode by mode.
pub fn helmholtz_inverse(f: &SpectralField, eps: f64) -> Result<SpectralField> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Helmholtz parameter {eps} must be >= 0"
        )));
    }
    if eps == 0.0 {
        return Ok(f.clone());
    }
    let g = f.grid.clone();
    Ok(f.map_modes(|i, j, c| {
        let (kx, ky) = g.mode(i, j);
        c / (1.0 + eps * (kx * kx + ky * ky))
    }))
}

/// Translates a field by `shift` along `x`: returns `f(x - shift, y)` by
/// exact trigonometric interpolation.
pub fn translate_x(grid: &TorusGrid, values: &[f64], shift: f64) -> Vec<f64> {
    let mut fourier = grid.fourier();
    let mut spec = vec![Complex64::default(); grid.spectrum_len()];
    fourier.forward(values, &mut spec);
    let nxh = grid.nxh();
    for (n, c) in spec.iter_mut().enumerate() {
        let i = n % nxh;
        let k = i as f64 / grid.lx();
        if i == grid.nx() / 2 {
            // Nyquist mode: keep the real cosine part of the shifted mode.
            *c = Complex64::new(c.re * (k * shift).cos(), 0.0);
        } else {
            *c *= Complex64::from_polar(1.0, -k * shift);
        }
    }
    let mut out = vec![0.0; grid.len()];
    fourier.inverse(&spec, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    L2,
    L4,
    LInf,
    /// `‖∇f‖_{L²}` from the spectrum.
    H1Seminorm,
}

impl NormKind {
    /// Maps an `L^p` exponent to a norm; `p = ∞` is `f64::INFINITY`.
    pub fn from_p(p: f64) -> Result<Self> {
        match p {
            p if p == 2.0 => Ok(NormKind::L2),
            p if p == 4.0 => Ok(NormKind::L4),
            p if p == f64::INFINITY => Ok(NormKind::LInf),
            other => Err(Error::UnsupportedNorm(format!("L^{other}"))),
        }
    }
}

/// Evaluates the requested norms of a physical field.
pub fn norm_functionals(grid: &TorusGrid, values: &[f64], kinds: &[NormKind]) -> Result<Vec<f64>> {
    if values.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} values for a grid of {} nodes",
            values.len(),
            grid.len()
        )));
    }
    let mut spectrum: Option<Vec<Complex64>> = None;
    let cell = grid.cell_measure();
    kinds
        .iter()
        .map(|kind| {
            Ok(match kind {
                NormKind::LInf => values.iter().fold(0.0f64, |m, v| m.max(v.abs())),
                NormKind::L2 => (cell * values.iter().map(|v| v * v).sum::<f64>()).sqrt(),
                NormKind::L4 => {
                    (cell * values.iter().map(|v| (v * v) * (v * v)).sum::<f64>()).powf(0.25)
                }
                NormKind::H1Seminorm => {
                    let spec = spectrum.get_or_insert_with(|| {
                        let mut s = vec![Complex64::default(); grid.spectrum_len()];
                        grid.fourier().forward(values, &mut s);
                        s
                    });
                    h1_seminorm(grid, spec)
                }
            })
        })
        .collect()
}

/// `L²` norm from the half-spectrum (Parseval).
pub fn l2_parseval(grid: &TorusGrid, spec: &[Complex64]) -> f64 {
    weighted_sum(grid, spec, |_, _| 1.0).sqrt()
}

/// `‖∇f‖_{L²}` from the half-spectrum.
pub fn h1_seminorm(grid: &TorusGrid, spec: &[Complex64]) -> f64 {
    weighted_sum(grid, spec, |kx, ky| kx * kx + ky * ky).sqrt()
}

/// `‖∂_axis f‖_{L²}` from the half-spectrum, consistent with the Nyquist
/// convention of [`spectral_derivative`].
pub fn derivative_l2(grid: &TorusGrid, spec: &[Complex64], axis: Axis) -> f64 {
    let sym = grid.first_derivative_symbol(axis);
    let nxh = grid.nxh();
    let mut total = 0.0;
    for (n, c) in spec.iter().enumerate() {
        let i = n % nxh;
        total += grid.half_weight(i) * sym[n] * sym[n] * c.norm_sqr();
    }
    (total * grid.domain_measure()).sqrt()
}

fn weighted_sum(grid: &TorusGrid, spec: &[Complex64], w: impl Fn(f64, f64) -> f64) -> f64 {
    let nxh = grid.nxh();
    let mut total = 0.0;
    for (n, c) in spec.iter().enumerate() {
        let (i, j) = (n % nxh, n / nxh);
        let (kx, ky) = grid.mode(i, j);
        total += grid.half_weight(i) * w(kx, ky) * c.norm_sqr();
    }
    total * grid.domain_measure()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(v: &[f64]) -> f64 {
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    #[test]
    fn four_point_grid_matches_formula() {
        let g = TorusGrid::one_d(4, 1.0).unwrap();
        let expect = [-PI + PI / 2.0, 0.0, -PI + 1.5 * PI, PI];
        for (a, b) in g.x().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert_eq!(g.kx(), &[0.0, 1.0, -2.0, -1.0]);
    }

    #[test]
    fn grid_extent_matches_reference_setup() {
        let g = TorusGrid::two_d(1 << 12, 1 << 7, 10.0, 3.0).unwrap();
        assert!((g.x()[g.nx() - 1] - 10.0 * PI).abs() < 1e-12);
        assert!((g.x()[0] - (-10.0 * PI + g.hx())).abs() < 1e-12);
        assert!((g.y()[g.ny() - 1] - 3.0 * PI).abs() < 1e-12);
        assert_eq!(g.x()[g.origin_x()], 0.0);
        assert_eq!(g.y()[g.origin_y()], 0.0);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(
            TorusGrid::one_d(6, 1.0),
            Err(Error::GridSize { n: 6, .. })
        ));
        assert!(matches!(
            TorusGrid::two_d(8, 12, 1.0, 1.0),
            Err(Error::GridSize { axis: 'y', .. })
        ));
        assert!(matches!(
            TorusGrid::one_d(8, 0.0),
            Err(Error::GridScale { .. })
        ));
        assert!(matches!(
            TorusGrid::one_d(8, -1.0),
            Err(Error::GridScale { .. })
        ));
    }

    #[test]
    fn spacing_matches_nodes() {
        let g = TorusGrid::two_d(64, 32, 2.5, 0.7).unwrap();
        for w in g.x().windows(2) {
            assert!((w[1] - w[0] - g.hx()).abs() < 1e-13);
        }
        for w in g.y().windows(2) {
            assert!((w[1] - w[0] - g.hy()).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_of_sine() {
        let g = Arc::new(TorusGrid::one_d(64, 1.0).unwrap());
        let f = SpectralField::from_fn(g.clone(), |x, _| x.sin());
        let d = spectral_derivative(&f, Axis::X, 1).unwrap();
        let exact = g.sample(|x, _| x.cos());
        let err = d
            .physical()
            .iter()
            .zip(&exact)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        let g = Arc::new(TorusGrid::two_d(16, 8, 1.0, 2.0).unwrap());
        let f = SpectralField::from_fn(g, |_, _| 3.25);
        for axis in [Axis::X, Axis::Y] {
            for order in [1, 2] {
                let d = spectral_derivative(&f, axis, order).unwrap();
                assert!(d.physical().iter().all(|v| *v == 0.0));
            }
        }
    }

    #[test]
    fn derivative_of_gaussian() {
        let g = Arc::new(TorusGrid::one_d(1 << 10, 10.0).unwrap());
        let f = SpectralField::from_fn(g.clone(), |x, _| (-x * x).exp());
        let d = spectral_derivative(&f, Axis::X, 1).unwrap();
        let exact = g.sample(|x, _| -2.0 * x * (-x * x).exp());
        let err = d
            .physical()
            .iter()
            .zip(&exact)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn derivative_rejects_bad_requests() {
        let g = Arc::new(TorusGrid::one_d(16, 1.0).unwrap());
        let f = SpectralField::from_fn(g, |x, _| x.sin());
        assert!(spectral_derivative(&f, Axis::Y, 1).is_err());
        assert!(spectral_derivative(&f, Axis::X, 3).is_err());
    }

    #[test]
    fn helmholtz_eigenfunctions() {
        let g = Arc::new(TorusGrid::two_d(32, 32, 1.0, 1.0).unwrap());
        let f = SpectralField::from_fn(g.clone(), |x, _| x.cos());
        let h = helmholtz_inverse(&f, 1.0).unwrap();
        for (a, x) in h.physical().iter().zip(g.sample(|x, _| x.cos() / 2.0)) {
            assert!((a - x).abs() < 1e-14);
        }
        let f = SpectralField::from_fn(g.clone(), |x, y| x.cos() * y.cos());
        let h = helmholtz_inverse(&f, 1.0).unwrap();
        for (a, x) in h
            .physical()
            .iter()
            .zip(g.sample(|x, y| x.cos() * y.cos() / 3.0))
        {
            assert!((a - x).abs() < 1e-14);
        }
        let same = helmholtz_inverse(&f, 0.0).unwrap();
        assert_eq!(same.coeffs(), f.coeffs());
        assert!(helmholtz_inverse(&f, -1.0).is_err());
    }

    #[test]
    fn helmholtz_undoes_its_operator() {
        let g = Arc::new(TorusGrid::two_d(32, 16, 1.5, 0.8).unwrap());
        let f = SpectralField::from_fn(g.clone(), |x, y| {
            (x.sin() + 0.3 * (2.0 * x - y).cos()) * (0.5 * y).cos()
        });
        let eps = 0.37;
        let lap_x = spectral_derivative(&f, Axis::X, 2).unwrap();
        let lap_y = spectral_derivative(&f, Axis::Y, 2).unwrap();
        let mut op = f.clone();
        for ((c, a), b) in op
            .coeffs_mut()
            .iter_mut()
            .zip(lap_x.coeffs())
            .zip(lap_y.coeffs())
        {
            *c -= eps * (a + b);
        }
        let back = helmholtz_inverse(&op, eps).unwrap();
        for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
            assert!((a - b).norm() <= 1e-13 * b.norm().max(1e-300) + 1e-17);
        }
    }

    #[test]
    fn sine_norms() {
        let g = TorusGrid::one_d(256, 1.0).unwrap();
        let f = g.sample(|x, _| x.sin());
        let n = norm_functionals(&g, &f, &[NormKind::L2, NormKind::L4, NormKind::LInf]).unwrap();
        assert!((n[0] - PI.sqrt()).abs() < 1e-13);
        assert!((n[1] - (0.75 * PI).powf(0.25)).abs() < 1e-13);
        assert!((n[2] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn gaussian_l2() {
        let g = TorusGrid::one_d(1 << 10, 10.0).unwrap();
        let f = g.sample(|x, _| (-x * x).exp());
        let n = norm_functionals(&g, &f, &[NormKind::L2]).unwrap();
        assert!((n[0] - (PI / 2.0).powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn unsupported_p() {
        assert!(matches!(
            NormKind::from_p(3.0),
            Err(Error::UnsupportedNorm(_))
        ));
        assert_eq!(NormKind::from_p(f64::INFINITY).unwrap(), NormKind::LInf);
    }

    #[test]
    fn h1_matches_gradient_quadrature() {
        let g = Arc::new(TorusGrid::two_d(64, 64, 2.0, 2.0).unwrap());
        let f = SpectralField::from_fn(g.clone(), |x, y| (-(x * x + 2.0 * y * y)).exp());
        let dx = spectral_derivative(&f, Axis::X, 1).unwrap();
        let dy = spectral_derivative(&f, Axis::Y, 1).unwrap();
        let quad: f64 = dx
            .physical()
            .iter()
            .zip(dy.physical())
            .map(|(a, b)| a * a + b * b)
            .sum::<f64>()
            * g.cell_measure();
        let h1 = norm_functionals(&g, f.physical(), &[NormKind::H1Seminorm]).unwrap()[0];
        assert!((h1 - quad.sqrt()).abs() < 1e-10 * h1);
    }

    #[test]
    fn translation_is_exact_on_modes() {
        let g = TorusGrid::one_d(32, 1.0).unwrap();
        let f = g.sample(|x, _| (3.0 * x).sin() + 0.5 * x.cos());
        let out = translate_x(&g, &f, 0.3);
        let exact = g.sample(|x, _| (3.0 * (x - 0.3)).sin() + 0.5 * (x - 0.3).cos());
        let err = out
            .iter()
            .zip(&exact)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err < 1e-14, "{err}");
        assert!(max_abs(&out) > 0.5);
    }

    #[test]
    fn two_thirds_mask_counts() {
        let g = TorusGrid::two_d(12usize.next_power_of_two(), 8, 1.0, 1.0).unwrap();
        let m = g.two_thirds_mask();
        let nxh = g.nxh();
        // nx = 16: kept kx indices 0..=5, ny = 8: kept |ky| <= 2.
        for j in 0..g.ny() {
            for i in 0..nxh {
                let nyv = signed_mode(j, 8).abs();
                let keep = i <= 5 && nyv <= 2;
                assert_eq!(m[j * nxh + i] == 1.0, keep, "({i},{j})");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn band_limited(g: &TorusGrid, amps: &[(f64, f64)]) -> Vec<f64> {
            g.sample(|x, y| {
                amps.iter()
                    .enumerate()
                    .map(|(m, (a, b))| {
                        let kx = (m % 5) as f64 / g.lx();
                        let ky = (m / 5) as f64 / g.ly();
                        a * (kx * x + ky * y).cos() + b * (kx * x - ky * y).sin()
                    })
                    .sum()
            })
        }

        proptest! {
            #[test]
            fn parseval_and_realness(
                amps in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..20),
                lx in 0.5f64..4.0,
                ly in 0.5f64..4.0,
            ) {
                let g = Arc::new(TorusGrid::two_d(32, 16, lx, ly).unwrap());
                let f = band_limited(&g, &amps);
                let s = SpectralField::from_physical(g.clone(), &f).unwrap();
                let quad = norm_functionals(&g, &f, &[NormKind::L2]).unwrap()[0];
                let pars = l2_parseval(&g, s.coeffs());
                prop_assert!((quad - pars).abs() <= 1e-12 * quad.max(1e-300));
                let scale = max_abs(&f).max(1e-300);
                prop_assert!(s.hermitian_defect() <= 1e-14 * scale);
                let mut s2 = s.clone();
                s2.coeffs_mut();
                let back = s2.physical();
                for (a, b) in back.iter().zip(&f) {
                    prop_assert!((a - b).abs() <= 10.0 * f64::EPSILON * scale * 8.0);
                }
            }
        }
    }
}
