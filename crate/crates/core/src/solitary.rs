//! Solitary waves of the 1D system and the initial data built from them.
//!
//! A travelling wave `η = Q(x - ct)`, `v = V(x - ct)` decaying at infinity
//! satisfies, after integrating both equations once,
//!
//! ```text
//! Q = V / (c - εV)
//! R(V) = εc V'' - cV + εV²/2 + V/(c - εV) = 0
//! ```
//!
//! The scalar equation `R(V) = 0` is solved by Newton's method with a
//! matrix-free Jacobian, inverted by GMRES preconditioned with the constant
//! coefficient operator `(εc ∂xx - c + 1/c)^{-1}`. The iteration is kept in
//! the even subspace, which removes the translation mode `V'` from the
//! Jacobian's kernel.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fourier;
use crate::grid::{translate_x, TorusGrid};
use crate::model::WaveState;

/// Relative residual target of the Newton iteration.
pub const NEWTON_TOL: f64 = 1e-11;
/// Accepted relative residual when Newton stagnates at the rounding floor.
pub const ACCEPT_TOL: f64 = 1e-10;
const MAX_NEWTON: usize = 60;
const GMRES_RESTART: usize = 60;
const GMRES_MAX_ITERS: usize = 600;

const PROFILE_MAGIC: &[u8; 4] = b"ASPW";
const PROFILE_VERSION: u8 = 1;

/// Decay rate `λ = sqrt((c² - 1)/(εc²))` of the linearised tail.
pub fn tail_rate(c: f64, eps: f64) -> f64 {
    ((c * c - 1.0) / (eps * c * c)).sqrt()
}

/// Solitary wave `(Q, V)` on a 1D grid, crest at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitaryProfile {
    pub c: f64,
    pub eps: f64,
    pub grid: Arc<TorusGrid>,
    pub q: Vec<f64>,
    pub v: Vec<f64>,
    /// `‖R(V)‖_∞` of the stored `V`.
    pub residual_norm: f64,
}

impl SolitaryProfile {
    pub fn max_v(&self) -> f64 {
        self.v.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
    }

    pub fn max_q(&self) -> f64 {
        self.q.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
    }

    /// Largest violation of `Q (c - εV) = V`.
    pub fn algebraic_defect(&self) -> f64 {
        self.q
            .iter()
            .zip(&self.v)
            .map(|(q, v)| (q * (self.c - self.eps * v) - v).abs())
            .fold(0.0, f64::max)
    }

    /// Largest violation of `V(x) = V(-x)` on the grid.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.v.len();
        (0..n)
            .map(|i| (self.v[i] - self.v[mirror(i, n)]).abs())
            .fold(0.0, f64::max)
    }

    /// The profile as a 1D state at `t = 0`.
    pub fn to_state(&self) -> WaveState {
        WaveState {
            t: 0.0,
            grid: self.grid.clone(),
            eta: self.q.clone(),
            vx: self.v.clone(),
            vy: Vec::new(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.grid.nx();
        let mut out = Vec::with_capacity(4 + 1 + 8 * (4 + 2 * n));
        out.extend_from_slice(PROFILE_MAGIC);
        out.push(PROFILE_VERSION);
        out.extend_from_slice(&self.c.to_le_bytes());
        out.extend_from_slice(&self.eps.to_le_bytes());
        out.extend_from_slice(&(n as u64).to_le_bytes());
        out.extend_from_slice(&self.grid.lx().to_le_bytes());
        for x in self.q.iter().chain(&self.v) {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out
    }

    /// Parses the `ASPW` format; the residual is recomputed.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = bytes;
        let mut magic = [0u8; 4];
        read_exact(&mut r, &mut magic)?;
        if &magic != PROFILE_MAGIC {
            return Err(Error::Format(format!("bad profile magic {magic:?}")));
        }
        let mut version = [0u8; 1];
        read_exact(&mut r, &mut version)?;
        if version[0] != PROFILE_VERSION {
            return Err(Error::Format(format!(
                "unsupported profile version {}",
                version[0]
            )));
        }
        let c = read_f64(&mut r)?;
        let eps = read_f64(&mut r)?;
        let n = read_u64(&mut r)? as usize;
        let lx = read_f64(&mut r)?;
        if r.len() != 16 * n {
            return Err(Error::Format(format!(
                "profile payload has {} bytes, expected {}",
                r.len(),
                16 * n
            )));
        }
        let grid = Arc::new(TorusGrid::one_d(n, lx)?);
        let mut q = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            q.push(read_f64(&mut r)?);
        }
        for _ in 0..n {
            v.push(read_f64(&mut r)?);
        }
        let residual_norm = max_abs(&profile_residual(&v, c, eps, &grid)?);
        Ok(Self {
            c,
            eps,
            grid,
            q,
            v,
            residual_norm,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(&self.to_bytes())
            .map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut bytes = Vec::new();
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

fn read_exact(r: &mut &[u8], buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf)
        .map_err(|_| Error::Format("file truncated".into()))
}

fn read_f64(r: &mut &[u8]) -> Result<f64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn read_u64(r: &mut &[u8]) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Index of the node at `-x_i`.
fn mirror(i: usize, n: usize) -> usize {
    (2 * n - i - 2) % n
}

fn symmetrize(v: &mut [f64]) {
    let n = v.len();
    for i in 0..n {
        let m = mirror(i, n);
        if m > i {
            let avg = 0.5 * (v[i] + v[m]);
            v[i] = avg;
            v[m] = avg;
        }
    }
}

fn check_pole(v: &[f64], c: f64, eps: f64, grid: &TorusGrid) -> Result<()> {
    let (idx, max) = v
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bm), (i, &x)| {
            if eps * x > bm {
                (i, eps * x)
            } else {
                (bi, bm)
            }
        });
    if max >= c {
        return Err(Error::ProfilePole {
            max_eps_v: max,
            x: grid.x()[idx],
        });
    }
    Ok(())
}

/// Spectral operators of the profile equation on one grid.
struct ProfileOps {
    fourier: Fourier,
    k2: Vec<f64>,
    spec: Vec<Complex64>,
}

impl ProfileOps {
    fn new(grid: &TorusGrid) -> Self {
        Self {
            fourier: grid.fourier(),
            k2: grid.laplacian_symbol(),
            spec: vec![Complex64::default(); grid.spectrum_len()],
        }
    }

    /// `out = f''`
    fn second_derivative(&mut self, f: &[f64], out: &mut [f64]) {
        self.fourier.forward(f, &mut self.spec);
        for (c, k2) in self.spec.iter_mut().zip(&self.k2) {
            *c *= -k2;
        }
        self.fourier.inverse(&self.spec, out);
    }

    /// `out = m(k) f̂` with `m = 1/(-εc k² - c + 1/c)`.
    fn precondition(&mut self, f: &[f64], out: &mut [f64], c: f64, eps: f64) {
        self.fourier.forward(f, &mut self.spec);
        for (s, k2) in self.spec.iter_mut().zip(&self.k2) {
            *s /= -eps * c * k2 - c + 1.0 / c;
        }
        self.fourier.inverse(&self.spec, out);
    }
}

fn residual_into(ops: &mut ProfileOps, v: &[f64], c: f64, eps: f64, out: &mut [f64]) {
    ops.second_derivative(v, out);
    for (r, &x) in out.iter_mut().zip(v) {
        *r = eps * c * *r - c * x + 0.5 * eps * x * x + x / (c - eps * x);
    }
}

/// Residual of the profile equation, with `V''` computed spectrally.
pub fn profile_residual(v: &[f64], c: f64, eps: f64, grid: &TorusGrid) -> Result<Vec<f64>> {
    if v.len() != grid.len() || grid.is_2d() {
        return Err(Error::GridMismatch(
            "profile residual needs a field on a 1D grid".into(),
        ));
    }
    check_pole(v, c, eps, grid)?;
    let mut out = vec![0.0; v.len()];
    residual_into(&mut ProfileOps::new(grid), v, c, eps, &mut out);
    Ok(out)
}

/// KdV-type seed `A sech²(λx/2)` from the quadratic truncation of `R`.
pub fn seed_profile(c: f64, eps: f64, grid: &TorusGrid) -> Vec<f64> {
    let lambda = tail_rate(c, eps);
    let quad = (0.5 + 1.0 / (c * c)) / c;
    let amp = 1.5 * lambda * lambda / quad;
    grid.sample(|x, _| {
        let s = 1.0 / (0.5 * lambda * x).cosh();
        amp * s * s
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Right-preconditioned restarted GMRES for `J x = b`, `J` applied through
/// `apply`, preconditioner through `precond`. Returns the number of inner
/// iterations used.
fn gmres(
    mut apply: impl FnMut(&[f64], &mut [f64]),
    mut precond: impl FnMut(&[f64], &mut [f64]),
    b: &[f64],
    x: &mut [f64],
    rel_tol: f64,
) -> usize {
    let n = b.len();
    let bnorm = norm2(b);
    x.iter_mut().for_each(|v| *v = 0.0);
    if bnorm == 0.0 {
        return 0;
    }
    let m = GMRES_RESTART;
    let mut total = 0;
    let mut tmp = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut r = b.to_vec();
    loop {
        // r = b - J x
        if total > 0 {
            precond(x, &mut z);
            apply(&z, &mut tmp);
            for ((ri, bi), ti) in r.iter_mut().zip(b).zip(&tmp) {
                *ri = bi - ti;
            }
        }
        let beta = norm2(&r);
        if beta <= rel_tol * bnorm || total >= GMRES_MAX_ITERS {
            break;
        }
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        let mut h = vec![vec![0.0; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut used = 0;
        for j in 0..m {
            precond(&basis[j], &mut z);
            apply(&z, &mut tmp);
            let mut w = tmp.clone();
            for (i, q) in basis.iter().enumerate() {
                let hij = dot(&w, q);
                h[i][j] = hij;
                w.iter_mut().zip(q).for_each(|(wv, qv)| *wv -= hij * qv);
            }
            let wn = norm2(&w);
            h[j + 1][j] = wn;
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            let denom = (h[j][j] * h[j][j] + h[j + 1][j] * h[j + 1][j]).sqrt();
            cs[j] = h[j][j] / denom;
            sn[j] = h[j + 1][j] / denom;
            h[j][j] = denom;
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            used = j + 1;
            total += 1;
            if g[j + 1].abs() <= rel_tol * bnorm || wn == 0.0 || total >= GMRES_MAX_ITERS {
                break;
            }
            basis.push(w.iter().map(|v| v / wn).collect());
        }
        // Back substitution for the Krylov coefficients.
        let mut y = vec![0.0; used];
        for i in (0..used).rev() {
            let s: f64 = (i + 1..used).map(|k| h[i][k] * y[k]).sum();
            y[i] = (g[i] - s) / h[i][i];
        }
        // x accumulates in the preconditioned variable; map back at the end.
        for (k, yk) in y.iter().enumerate() {
            x.iter_mut()
                .zip(&basis[k])
                .for_each(|(xv, qv)| *xv += yk * qv);
        }
        if g[used].abs() <= rel_tol * bnorm || total >= GMRES_MAX_ITERS {
            break;
        }
    }
    precond(x, &mut z);
    x.copy_from_slice(&z);
    total
}

#[derive(Debug)]
struct NewtonOutcome {
    v: Vec<f64>,
    residual: f64,
    iterations: usize,
}

fn newton(c: f64, eps: f64, grid: &TorusGrid, mut v: Vec<f64>) -> Result<NewtonOutcome> {
    let n = v.len();
    let mut ops = ProfileOps::new(grid);
    let mut pre = ProfileOps::new(grid);
    let mut r = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut r_trial = vec![0.0; n];
    symmetrize(&mut v);
    check_pole(&v, c, eps, grid)?;
    residual_into(&mut ops, &v, c, eps, &mut r);
    let mut res = max_abs(&r);
    let mut best = res;
    let mut stalled = 0;

    for it in 1..=MAX_NEWTON {
        let scale = max_abs(&v).max(f64::MIN_POSITIVE);
        if res <= NEWTON_TOL * scale {
            return Ok(NewtonOutcome {
                v,
                residual: res,
                iterations: it - 1,
            });
        }
        // Jacobian: εc δ'' + d(x) δ
        let diag: Vec<f64> = v
            .iter()
            .map(|&x| -c + eps * x + c / ((c - eps * x) * (c - eps * x)))
            .collect();
        let rhs: Vec<f64> = r.iter().map(|x| -x).collect();
        let mut delta = vec![0.0; n];
        {
            let mut d2 = vec![0.0; n];
            let ops_j = &mut ops;
            let apply = |x: &[f64], out: &mut [f64]| {
                ops_j.second_derivative(x, &mut d2);
                for i in 0..x.len() {
                    out[i] = eps * c * d2[i] + diag[i] * x[i];
                }
            };
            let precond = |x: &[f64], out: &mut [f64]| pre.precondition(x, out, c, eps);
            gmres(apply, precond, &rhs, &mut delta, 1e-12);
        }
        symmetrize(&mut delta);

        // Backtracking on the residual norm.
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            for i in 0..n {
                trial[i] = v[i] + step * delta[i];
            }
            if trial.iter().all(|&x| eps * x < c) {
                residual_into(&mut ops, &trial, c, eps, &mut r_trial);
                let rt = max_abs(&r_trial);
                if rt.is_finite() && (rt < res || rt <= NEWTON_TOL * scale) {
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        std::mem::swap(&mut v, &mut trial);
        std::mem::swap(&mut r, &mut r_trial);
        res = max_abs(&r);
        if res < 0.5 * best {
            best = res;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled >= 3 {
                break;
            }
        }
        log::debug!("newton c={c} it={it} residual={res:e} step={step}");
    }
    Ok(NewtonOutcome {
        v,
        residual: res,
        iterations: MAX_NEWTON,
    })
}

fn acceptable(out: &NewtonOutcome, seed_amp: f64) -> bool {
    let amp = max_abs(&out.v);
    amp > 1e-3 * seed_amp && out.residual <= ACCEPT_TOL * amp
}

/// Constructs the solitary wave of speed `c > 1`.
///
/// Without a seed the iteration starts from the KdV-type approximation; if
/// that fails (or collapses onto the trivial branch) the speed is reached by
/// continuation from `c = 1.05`.
pub fn solve_profile(
    c: f64,
    eps: f64,
    grid: Arc<TorusGrid>,
    seed: Option<&[f64]>,
) -> Result<SolitaryProfile> {
    if !(c > 1.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "solitary waves need c > 1, got {c}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidArgument(format!("eps = {eps} must be > 0")));
    }
    if grid.is_2d() {
        return Err(Error::GridMismatch("profiles live on 1D grids".into()));
    }
    let lambda = tail_rate(c, eps);
    let edge = (-lambda * std::f64::consts::PI * grid.lx()).exp();
    if edge > 1e-12 {
        log::warn!(
            "domain too short for c = {c}: tail reaches {edge:e} of the crest at the boundary"
        );
    }

    let start = match seed {
        Some(s) => {
            if s.len() != grid.len() {
                return Err(Error::GridMismatch("seed length differs from grid".into()));
            }
            center(&grid, s)
        }
        None => seed_profile(c, eps, &grid),
    };
    let seed_amp = max_abs(&start);
    let direct = newton(c, eps, &grid, start);
    let outcome = match direct {
        Ok(out) if acceptable(&out, seed_amp) => out,
        _ => continuation(c, eps, &grid)?,
    };
    let amp = max_abs(&outcome.v);
    if !acceptable(&outcome, 0.0) {
        return Err(Error::Construction {
            c,
            residual: outcome.residual / amp.max(f64::MIN_POSITIVE),
            iterations: outcome.iterations,
        });
    }
    let v = outcome.v;
    let q = v.iter().map(|&x| x / (c - eps * x)).collect();
    Ok(SolitaryProfile {
        c,
        eps,
        residual_norm: outcome.residual,
        grid,
        q,
        v,
    })
}

fn continuation(c: f64, eps: f64, grid: &TorusGrid) -> Result<NewtonOutcome> {
    let c0 = 1.05f64.min(0.5 * (1.0 + c));
    let mut current = c0;
    let seed = seed_profile(current, eps, grid);
    let seed_amp = max_abs(&seed);
    let mut out = newton(current, eps, grid, seed)?;
    if !acceptable(&out, seed_amp) {
        return Err(Error::Construction {
            c: current,
            residual: out.residual,
            iterations: out.iterations,
        });
    }
    let mut dc = 0.05;
    while current < c {
        let next = (current + dc).min(c);
        let prev_amp = max_abs(&out.v);
        match newton(next, eps, grid, out.v.clone()) {
            Ok(o) if acceptable(&o, prev_amp) => {
                out = o;
                current = next;
                dc = (dc * 1.5).min(0.25);
            }
            _ => {
                dc *= 0.5;
                if dc < 1e-4 {
                    return Err(Error::Construction {
                        c: next,
                        residual: out.residual,
                        iterations: out.iterations,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Moves the grid maximum of `v` onto `x = 0` and symmetrises.
fn center(grid: &TorusGrid, v: &[f64]) -> Vec<f64> {
    let (idx, _) = v
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |(bi, bm), (i, &x)| {
            if x > bm {
                (i, x)
            } else {
                (bi, bm)
            }
        });
    let shift = -grid.x()[idx];
    let mut out = if shift == 0.0 {
        v.to_vec()
    } else {
        translate_x(grid, v, shift)
    };
    symmetrize(&mut out);
    out
}

fn check_extension(p: &SolitaryProfile, grid2d: &TorusGrid) -> Result<()> {
    if !grid2d.is_2d() || grid2d.nx() != p.grid.nx() || grid2d.lx() != p.grid.lx() {
        return Err(Error::GridMismatch(format!(
            "profile grid (N_x = {}, L_x = {}) does not match the 2D grid (N_x = {}, L_x = {})",
            p.grid.nx(),
            p.grid.lx(),
            grid2d.nx(),
            grid2d.lx()
        )));
    }
    Ok(())
}

fn repeat_rows(row: &[f64], ny: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(row.len() * ny);
    for _ in 0..ny {
        out.extend_from_slice(row);
    }
    out
}

/// Line solitary wave: `η = Q(x)`, `v_x = V(x)`, `v_y = 0`.
pub fn line_extend(p: &SolitaryProfile, grid2d: Arc<TorusGrid>) -> Result<WaveState> {
    check_extension(p, &grid2d)?;
    let ny = grid2d.ny();
    WaveState::new(
        grid2d.clone(),
        0.0,
        repeat_rows(&p.q, ny),
        repeat_rows(&p.v, ny),
        vec![0.0; grid2d.len()],
    )
}

/// Initial data families.
#[derive(Debug, Clone, Copy)]
pub enum InitialData<'a> {
    /// `η = Q(x) + amp·exp(-x² - αy²)`
    GaussianOnEta {
        profile: &'a SolitaryProfile,
        amp: f64,
        alpha: f64,
    },
    /// `v_x = V(x) + amp·exp(-x² - αy²)`
    GaussianOnVx {
        profile: &'a SolitaryProfile,
        amp: f64,
        alpha: f64,
    },
    /// `v_y = amp·exp(-x² - αy²)`
    GaussianOnVy {
        profile: &'a SolitaryProfile,
        amp: f64,
        alpha: f64,
    },
    /// `η = Q(x + a cos y)`
    CosDeform {
        profile: &'a SolitaryProfile,
        a: f64,
    },
    /// `η = κ exp(-(x² + αy²))` with `κ < 0`, `v = 0`.
    Cavitation { kappa: f64, alpha: f64 },
    /// `η = κ exp(-(x² + αy²))` with `κ > 0`, `v = 0`.
    Localized { kappa: f64, alpha: f64 },
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} must be > 0"
        )));
    }
    Ok(())
}

fn bump(grid: &TorusGrid, amp: f64, alpha: f64) -> Vec<f64> {
    grid.sample(|x, y| amp * (-(x * x + alpha * y * y)).exp())
}

/// Builds one of the initial data families on `grid`. Profile-based
/// families need a 2D grid matching the profile in `x`; the Gaussian
/// families work in 1D too (the `y` term drops out).
pub fn build_initial_data(grid: Arc<TorusGrid>, spec: &InitialData<'_>) -> Result<WaveState> {
    match *spec {
        InitialData::GaussianOnEta {
            profile,
            amp,
            alpha,
        } => {
            check_alpha(alpha)?;
            let mut s = line_extend(profile, grid.clone())?;
            for (e, b) in s.eta.iter_mut().zip(bump(&grid, amp, alpha)) {
                *e += b;
            }
            Ok(s)
        }
        InitialData::GaussianOnVx {
            profile,
            amp,
            alpha,
        } => {
            check_alpha(alpha)?;
            let mut s = line_extend(profile, grid.clone())?;
            for (v, b) in s.vx.iter_mut().zip(bump(&grid, amp, alpha)) {
                *v += b;
            }
            Ok(s)
        }
        InitialData::GaussianOnVy {
            profile,
            amp,
            alpha,
        } => {
            check_alpha(alpha)?;
            let mut s = line_extend(profile, grid.clone())?;
            s.vy = bump(&grid, amp, alpha);
            Ok(s)
        }
        InitialData::CosDeform { profile, a } => {
            check_extension(profile, &grid)?;
            let half_period = std::f64::consts::PI * grid.lx();
            if !(a.abs() < half_period) {
                return Err(Error::InvalidArgument(format!(
                    "deformation amplitude {a} exceeds the profile half-period {half_period}"
                )));
            }
            let mut s = line_extend(profile, grid.clone())?;
            if a != 0.0 {
                let nx = grid.nx();
                for (j, &y) in grid.y().iter().enumerate() {
                    // Q(x + s) is Q translated by -s.
                    let row = translate_x(&profile.grid, &profile.q, -a * y.cos());
                    s.eta[j * nx..(j + 1) * nx].copy_from_slice(&row);
                }
            }
            Ok(s)
        }
        InitialData::Cavitation { kappa, alpha } => {
            check_alpha(alpha)?;
            if !(kappa < 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "cavitation data need kappa < 0, got {kappa}"
                )));
            }
            let mut s = WaveState::rest(grid.clone());
            s.eta = bump(&grid, kappa, alpha);
            Ok(s)
        }
        InitialData::Localized { kappa, alpha } => {
            check_alpha(alpha)?;
            if !(kappa > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "localized data need kappa > 0, got {kappa}"
                )));
            }
            let mut s = WaveState::rest(grid.clone());
            s.eta = bump(&grid, kappa, alpha);
            Ok(s)
        }
    }
}
