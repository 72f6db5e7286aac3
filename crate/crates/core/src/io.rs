//! Binary field format and CSV table export.
//!
//! Field files: little-endian, header `RSC1` (4 bytes), n as u64, L as f64,
//! then 2 n^3 f64 payload values, re/im interleaved. Matrices use the same
//! header with magic `RSM1`, rows/cols as u64, then row-major re/im pairs.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid3};
use crate::scalar::{Cplx, Real};

const FIELD_MAGIC: &[u8; 4] = b"RSC1";
const MATRIX_MAGIC: &[u8; 4] = b"RSM1";

pub fn write_field<T: Real>(path: impl AsRef<Path>, f: &Field<T>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(FIELD_MAGIC)?;
    w.write_all(&(f.grid.n() as u64).to_le_bytes())?;
    w.write_all(&f.grid.half_extent().to_f64_lossy().to_le_bytes())?;
    for v in &f.values {
        w.write_all(&v.re.to_f64_lossy().to_le_bytes())?;
        w.write_all(&v.im.to_f64_lossy().to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field<T: Real>(path: impl AsRef<Path>) -> Result<Field<T>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != FIELD_MAGIC {
        return Err(Error::Format("bad magic; not a field file".into()));
    }
    let n = read_u64(&mut r)? as usize;
    let l = read_f64(&mut r)?;
    let grid = Grid3::new(n, T::of(l))?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let re = read_f64(&mut r)?;
        let im = read_f64(&mut r)?;
        values.push(Cplx::new(T::of(re), T::of(im)));
    }
    Ok(Field { grid, values })
}

pub fn write_matrix<T: Real>(path: impl AsRef<Path>, m: &DMatrix<Cplx<T>>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MATRIX_MAGIC)?;
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            w.write_all(&v.re.to_f64_lossy().to_le_bytes())?;
            w.write_all(&v.im.to_f64_lossy().to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

/// Shell-averaged radial profile of a field: rows (r, re, im).
pub fn radial_profile<T: Real>(f: &Field<T>, bins: usize) -> Vec<(f64, f64, f64)> {
    let l = f.grid.half_extent().to_f64_lossy();
    let dr = l / bins as f64;
    let mut sums = vec![(0.0f64, 0.0f64, 0usize); bins];
    for (idx, v) in f.values.iter().enumerate() {
        let x = f.grid.node(idx);
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
            .to_f64_lossy()
            .sqrt();
        let b = (r / dr) as usize;
        if b < bins {
            sums[b].0 += v.re.to_f64_lossy();
            sums[b].1 += v.im.to_f64_lossy();
            sums[b].2 += 1;
        }
    }
    sums.iter()
        .enumerate()
        .filter(|(_, s)| s.2 > 0)
        .map(|(b, s)| {
            let c = s.2 as f64;
            ((b as f64 + 0.5) * dr, s.0 / c, s.1 / c)
        })
        .collect()
}

/// Minimal CSV writer: header row then numeric rows.
pub fn write_csv(path: impl AsRef<Path>, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let line = row
            .iter()
            .map(|v| format!("{v:.17e}"))
            .collect::<Vec<_>>()
            .join(",");
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    Ok(())
}
