//! Binary snapshots of a state.
//!
//! Layout (little endian): magic `ASBQ`, `u32` version, `u8` dims,
//! `u64` N_x, N_y, `f64` L_x, L_y, ε_nl, ε_disp, t, then η, v_x, v_y as
//! row-major `f64` arrays. 1D snapshots store N_y = 1, L_y = 0 and omit v_y.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Dims, TorusGrid};
use crate::model::{ModelParams, WaveState};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"ASBQ";
pub const SNAPSHOT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 1 + 2 * 8 + 5 * 8;

pub fn snapshot_bytes(s: &WaveState, params: &ModelParams) -> Result<Vec<u8>> {
    s.check_shape()?;
    let g = &s.grid;
    let nfields = if g.is_2d() { 3 } else { 2 };
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * nfields * g.len());
    out.extend_from_slice(SNAPSHOT_MAGIC);
    out.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    out.push(if g.is_2d() { 2 } else { 1 });
    out.extend_from_slice(&(g.nx() as u64).to_le_bytes());
    out.extend_from_slice(&(g.ny() as u64).to_le_bytes());
    for v in [g.lx(), g.ly(), params.eps_nl, params.eps_disp, s.t] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for field in s.fields().iter().take(nfields) {
        for v in field.iter() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

struct Cursor<'a>(&'a [u8]);

impl Cursor<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N]> {
        let mut b = [0u8; N];
        self.0
            .read_exact(&mut b)
            .map_err(|_| Error::Format("snapshot truncated in header".into()))?;
        Ok(b)
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take()?))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }
}

pub fn snapshot_from_bytes(bytes: &[u8]) -> Result<(WaveState, ModelParams)> {
    let mut c = Cursor(bytes);
    let magic: [u8; 4] = c.take()?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(Error::Format(format!("bad snapshot magic {magic:?}")));
    }
    let version = u32::from_le_bytes(c.take()?);
    if version != SNAPSHOT_VERSION {
        return Err(Error::Format(format!(
            "unsupported snapshot version {version}"
        )));
    }
    let dims = match c.take::<1>()?[0] {
        1 => Dims::One,
        2 => Dims::Two,
        d => return Err(Error::Format(format!("invalid dimension byte {d}"))),
    };
    let nx = c.u64()? as usize;
    let ny = c.u64()? as usize;
    let (lx, ly) = (c.f64()?, c.f64()?);
    let params = ModelParams {
        eps_nl: c.f64()?,
        eps_disp: c.f64()?,
    };
    let t = c.f64()?;
    let grid = Arc::new(TorusGrid::new(dims, nx, ny, lx, ly)?);
    let nfields = if grid.is_2d() { 3 } else { 2 };
    let n = grid.len();
    let rest = c.0;
    if rest.len() != 8 * nfields * n {
        return Err(Error::Format(format!(
            "snapshot payload has {} bytes, expected {}",
            rest.len(),
            8 * nfields * n
        )));
    }
    let mut fields = rest
        .chunks_exact(8 * n)
        .map(|chunk| {
            chunk
                .chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
                .collect::<Vec<f64>>()
        })
        .collect::<Vec<_>>()
        .into_iter();
    let eta = fields.next().unwrap_or_default();
    let vx = fields.next().unwrap_or_default();
    let vy = fields.next().unwrap_or_default();
    let state = WaveState {
        t,
        grid,
        eta,
        vx,
        vy,
    };
    state.check_shape()?;
    Ok((state, params))
}

pub fn write_snapshot(path: impl AsRef<Path>, s: &WaveState, params: &ModelParams) -> Result<()> {
    let path = path.as_ref();
    let bytes = snapshot_bytes(s, params)?;
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(&bytes))
        .map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(WaveState, ModelParams)> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    snapshot_from_bytes(&bytes)
}
