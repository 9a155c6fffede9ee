//! MPSF1 binary fields. Layout, all little-endian:
//!
//! ```text
//! b"MPSF1" | d: u32 | n: u32 | components: u32 | time: f64 | (re: f64, im: f64)*
//! ```
//!
//! Coefficients are component-major, each component in row-major lattice
//! order. A state stores the velocity components followed by the
//! microrotation components.

use std::fs;
use std::path::Path;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::state::State;

pub const MAGIC: &[u8; 5] = b"MPSF1";
const HEADER: usize = 5 + 4 * 3 + 8;

pub fn encode_field(field: &SpectralField, time: f64) -> Result<Vec<u8>> {
    let grid = field.grid();
    if !grid.is_standard_box() {
        return Err(Error::Format("MPSF1 stores only the standard 2π box".into()));
    }
    let mut out = Vec::with_capacity(HEADER + 16 * field.components() * grid.len());
    out.extend_from_slice(MAGIC);
    for v in [grid.d(), grid.n(), field.components()] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    out.extend_from_slice(&time.to_le_bytes());
    for comp in field.coeffs() {
        for z in comp {
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    Ok(out)
}

fn u32_at(bytes: &[u8], at: usize) -> usize {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("slice of 4")) as usize
}

fn f64_at(bytes: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(bytes[at..at + 8].try_into().expect("slice of 8"))
}

pub fn decode_field(bytes: &[u8]) -> Result<(SpectralField, f64)> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(Error::Format("not an MPSF1 file (bad magic)".into()));
    }
    if bytes.len() < HEADER {
        return Err(Error::Format(format!("truncated header ({} bytes)", bytes.len())));
    }
    let (d, n, comps) = (u32_at(bytes, 5), u32_at(bytes, 9), u32_at(bytes, 13));
    let time = f64_at(bytes, 17);
    let grid = Grid::new(d, n).map_err(|e| Error::Format(format!("bad header: {e}")))?;
    if comps == 0 {
        return Err(Error::Format("bad header: zero components".into()));
    }
    let expected = HEADER + 16 * comps * grid.len();
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "{} payload: expected {expected} bytes, found {}",
            if bytes.len() < expected { "truncated" } else { "oversized" },
            bytes.len()
        )));
    }
    let mut at = HEADER;
    let data = (0..comps)
        .map(|_| {
            (0..grid.len())
                .map(|_| {
                    let z = Complex64::new(f64_at(bytes, at), f64_at(bytes, at + 8));
                    at += 16;
                    z
                })
                .collect()
        })
        .collect();
    Ok((SpectralField::from_coeffs(grid, data)?, time))
}

pub fn write_field(field: &SpectralField, time: f64, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_field(field, time)?)?;
    Ok(())
}

pub fn read_field(path: impl AsRef<Path>) -> Result<(SpectralField, f64)> {
    decode_field(&fs::read(path)?)
}

pub fn write_snapshot(state: &State, path: impl AsRef<Path>) -> Result<()> {
    write_field(&state.u.concat(&state.w)?, state.t, path)
}

pub fn read_snapshot(path: impl AsRef<Path>) -> Result<State> {
    let (field, t) = read_field(path)?;
    let grid = *field.grid();
    let (d, m) = (grid.d(), grid.microrotation_components());
    if field.components() != d + m {
        return Err(Error::Format(format!(
            "a {d}D state has {} components, file holds {}",
            d + m,
            field.components()
        )));
    }
    State::new(field.select(0..d), field.select(d..d + m), t)
}

/// Read a state and require it to live on `grid`.
pub fn read_snapshot_for(path: impl AsRef<Path>, grid: &Grid) -> Result<State> {
    let s = read_snapshot(path)?;
    if s.grid().d() != grid.d() || s.grid().n() != grid.n() {
        return Err(Error::Shape(format!(
            "snapshot is {}D n={}, run expects {}D n={}",
            s.grid().d(),
            s.grid().n(),
            grid.d(),
            grid.n()
        )));
    }
    Ok(s)
}
