//! Binary scalar-field dumps.
//!
//! Layout (little-endian): magic `GMA3`, version `u32`, `dims_active: u32`,
//! the six axis resolutions as `u32` in axis order `(x₁, x₂, x₃, y₁, y₂, y₃)`
//! with 1 for inactive axes, then the values as `f64` in row-major order.

use std::io::{Read, Write};

use super::{ScalarField, TorusGrid};
use crate::error::{Error, Result};

pub const DUMP_MAGIC: &[u8; 4] = b"GMA3";
pub const DUMP_VERSION: u32 = 1;

pub fn write_field<W: Write>(mut w: W, field: &ScalarField) -> Result<()> {
    let grid = field.grid();
    w.write_all(DUMP_MAGIC)?;
    w.write_all(&DUMP_VERSION.to_le_bytes())?;
    w.write_all(&(grid.dims_active() as u32).to_le_bytes())?;
    for n in grid.resolution() {
        w.write_all(&(n as u32).to_le_bytes())?;
    }
    for v in field.values() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_field<R: Read>(mut r: R) -> Result<ScalarField> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != DUMP_MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = read_u32(&mut r)?;
    if version != DUMP_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let dims_active = read_u32(&mut r)? as usize;
    let mut res = [1usize; 6];
    for n in res.iter_mut() {
        *n = read_u32(&mut r)? as usize;
    }
    let grid = TorusGrid::new(res)?;
    if grid.dims_active() != dims_active {
        return Err(Error::Format(format!(
            "header says {dims_active} active axes, resolutions give {}",
            grid.dims_active()
        )));
    }
    let mut bytes = vec![0u8; grid.len() * 8];
    r.read_exact(&mut bytes)?;
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Format(format!("{} trailing bytes", rest.len())));
    }
    ScalarField::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::Axis;

    #[test]
    fn header_layout() {
        let g = TorusGrid::with_axes(&[(Axis::X1, 8)]).unwrap();
        let f = ScalarField::from_fn(g, |p| p[0]);
        let mut buf = Vec::new();
        write_field(&mut buf, &f).unwrap();
        assert_eq!(&buf[..4], b"GMA3");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(buf[12..16].try_into().unwrap()), 8);
        assert_eq!(buf.len(), 4 + 4 + 4 + 24 + 8 * 8);
        let v1 = f64::from_le_bytes(buf[36 + 8..36 + 16].try_into().unwrap());
        assert_eq!(v1, f.values()[1]);
    }

    #[test]
    fn rejects_corrupt_input() {
        assert!(read_field(&b"GMA4\x01\x00\x00\x00"[..]).is_err());
        let g = TorusGrid::with_axes(&[(Axis::X1, 8)]).unwrap();
        let mut buf = Vec::new();
        write_field(&mut buf, &ScalarField::zeros(g)).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(read_field(&buf[..]).is_err());
    }
}
