//! Real-to-complex transforms on the periodic grid.
//!
//! Layout conventions used throughout the crate:
//!
//! * a physical field on an `nx × ny` grid is a row-major `[f64]` slice with
//!   `x` fastest (`index = j * nx + i`); 1D grids use `ny = 1`;
//! * its spectrum is the half-spectrum along `x` (`nxh = nx / 2 + 1` modes,
//!   `kx >= 0`) and the full signed spectrum along `y`, again row-major
//!   (`index = j * nxh + i`).
//!
//! The forward transform is normalised by `1 / (nx * ny)` so the stored
//! numbers are Fourier-series coefficients, independent of resolution.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Rows below this size are transformed sequentially even when a thread
/// pool is available.
const PAR_MIN_POINTS: usize = 1 << 15;

/// Columns transposed per batched column transform.
const COLUMN_BLOCK: usize = 16;

struct Plans {
    r2c: Arc<dyn RealToComplex<f64>>,
    c2r: Arc<dyn ComplexToReal<f64>>,
    col_fwd: Option<Arc<dyn Fft<f64>>>,
    col_inv: Option<Arc<dyn Fft<f64>>>,
}

fn plans(nx: usize, ny: usize) -> Arc<Plans> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<Plans>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry((nx, ny))
        .or_insert_with(|| {
            let mut real = RealFftPlanner::<f64>::new();
            let mut cplx = FftPlanner::<f64>::new();
            Arc::new(Plans {
                r2c: real.plan_fft_forward(nx),
                c2r: real.plan_fft_inverse(nx),
                col_fwd: (ny > 1).then(|| cplx.plan_fft_forward(ny)),
                col_inv: (ny > 1).then(|| cplx.plan_fft_inverse(ny)),
            })
        })
        .clone()
}

/// Owned transform workspace for one grid size.
///
/// Plans are shared through a process-wide cache; only the scratch buffers
/// are per instance, so creating one is cheap after the first.
pub struct Fourier {
    nx: usize,
    ny: usize,
    nxh: usize,
    plans: Arc<Plans>,
    row_in: Vec<f64>,
    row_scratch: Vec<Complex64>,
    block: Vec<Complex64>,
    col_scratch: Vec<Complex64>,
    spec_work: Vec<Complex64>,
}

impl std::fmt::Debug for Fourier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier")
            .field("nx", &self.nx)
            .field("ny", &self.ny)
            .finish()
    }
}

impl Clone for Fourier {
    fn clone(&self) -> Self {
        Self::new(self.nx, self.ny)
    }
}

impl Fourier {
    pub fn new(nx: usize, ny: usize) -> Self {
        assert!(nx >= 2 && ny >= 1, "degenerate transform size {nx}x{ny}");
        let plans = plans(nx, ny);
        let nxh = nx / 2 + 1;
        let row_scratch_len = plans.r2c.get_scratch_len().max(plans.c2r.get_scratch_len());
        let col_scratch_len = match (&plans.col_fwd, &plans.col_inv) {
            (Some(f), Some(i)) => f.get_inplace_scratch_len().max(i.get_inplace_scratch_len()),
            _ => 0,
        };
        Self {
            nx,
            ny,
            nxh,
            row_in: vec![0.0; nx],
            row_scratch: vec![Complex64::default(); row_scratch_len],
            block: vec![Complex64::default(); if ny > 1 { COLUMN_BLOCK * ny } else { 0 }],
            col_scratch: vec![Complex64::default(); col_scratch_len],
            spec_work: vec![Complex64::default(); nxh * ny],
            plans,
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    /// Number of stored `kx` modes (`nx / 2 + 1`).
    pub fn nxh(&self) -> usize {
        self.nxh
    }

    pub fn spectrum_len(&self) -> usize {
        self.nxh * self.ny
    }

    /// Physical field to normalised half-spectrum.
    pub fn forward(&mut self, input: &[f64], out: &mut [Complex64]) {
        let (nx, ny, nxh) = (self.nx, self.ny, self.nxh);
        assert_eq!(input.len(), nx * ny, "forward: input length");
        assert_eq!(out.len(), nxh * ny, "forward: output length");

        let scale = 1.0 / (nx * ny) as f64;
        if nx * ny >= PAR_MIN_POINTS && rayon::current_num_threads() > 1 {
            let r2c = self.plans.r2c.clone();
            out.par_chunks_mut(nxh)
                .zip(input.par_chunks(nx))
                .for_each_init(
                    || (vec![0.0; nx], r2c.make_scratch_vec()),
                    |(row, scratch), (dst, src)| {
                        row.copy_from_slice(src);
                        r2c.process_with_scratch(row, dst, scratch)
                            .expect("r2c length mismatch");
                    },
                );
        } else {
            for (dst, src) in out.chunks_exact_mut(nxh).zip(input.chunks_exact(nx)) {
                self.row_in.copy_from_slice(src);
                self.plans
                    .r2c
                    .process_with_scratch(&mut self.row_in, dst, &mut self.row_scratch)
                    .expect("r2c length mismatch");
            }
        }

        if let Some(fft) = self.plans.col_fwd.clone() {
            self.columns(out, &*fft);
        }
        for c in out.iter_mut() {
            *c *= scale;
        }
    }

    /// Normalised half-spectrum to physical field. The imaginary parts of the
    /// `kx = 0` and Nyquist columns are discarded, which is exact for the
    /// spectrum of any real field.
    pub fn inverse(&mut self, spec: &[Complex64], out: &mut [f64]) {
        let (nx, ny, nxh) = (self.nx, self.ny, self.nxh);
        assert_eq!(spec.len(), nxh * ny, "inverse: input length");
        assert_eq!(out.len(), nx * ny, "inverse: output length");

        let mut work = std::mem::take(&mut self.spec_work);
        work.copy_from_slice(spec);
        if let Some(fft) = self.plans.col_inv.clone() {
            self.columns(&mut work, &*fft);
        }

        if nx * ny >= PAR_MIN_POINTS && rayon::current_num_threads() > 1 {
            let c2r = self.plans.c2r.clone();
            work.par_chunks_mut(nxh)
                .zip(out.par_chunks_mut(nx))
                .for_each_init(
                    || c2r.make_scratch_vec(),
                    |scratch, (src, dst)| {
                        src[0].im = 0.0;
                        src[nxh - 1].im = 0.0;
                        c2r.process_with_scratch(src, dst, scratch)
                            .expect("c2r length mismatch");
                    },
                );
        } else {
            for (src, dst) in work.chunks_exact_mut(nxh).zip(out.chunks_exact_mut(nx)) {
                src[0].im = 0.0;
                src[nxh - 1].im = 0.0;
                self.plans
                    .c2r
                    .process_with_scratch(src, dst, &mut self.row_scratch)
                    .expect("c2r length mismatch");
            }
        }
        self.spec_work = work;
    }

    /// Complex transforms along `y` for every stored `kx` column, done in
    /// transposed blocks so each batch is contiguous.
    fn columns(&mut self, data: &mut [Complex64], fft: &dyn Fft<f64>) {
        let (ny, nxh) = (self.ny, self.nxh);
        let mut start = 0;
        while start < nxh {
            let width = COLUMN_BLOCK.min(nxh - start);
            let block = &mut self.block[..width * ny];
            for j in 0..ny {
                let row = &data[j * nxh + start..j * nxh + start + width];
                for (c, v) in row.iter().enumerate() {
                    block[c * ny + j] = *v;
                }
            }
            fft.process_with_scratch(block, &mut self.col_scratch);
            for j in 0..ny {
                let row = &mut data[j * nxh + start..j * nxh + start + width];
                for (c, v) in row.iter_mut().enumerate() {
                    *v = block[c * ny + j];
                }
            }
            start += width;
        }
    }
}
