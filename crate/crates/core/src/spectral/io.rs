//! Flat binary snapshots of sampled form fields.
//!
//! Layout, all little endian: `u32 n`, `u32 N`, `f64 L`, `u32 grade`, then for
//! each blade in lexicographic order the `Nⁿ` values in row-major order.

use std::io::{Read, Write};

use crate::error::{Error, Result};

use super::field::{blade_count, PhysicalFormField};
use super::grid::TorusGrid;

pub fn write_field<W: Write>(field: &PhysicalFormField, mut out: W) -> Result<()> {
    let grid = field.grid();
    out.write_all(&(grid.dim() as u32).to_le_bytes())?;
    out.write_all(&(grid.size() as u32).to_le_bytes())?;
    out.write_all(&grid.period().to_le_bytes())?;
    out.write_all(&(field.grade() as u32).to_le_bytes())?;
    let mut buf = Vec::with_capacity(8 * grid.len());
    for comp in field.components() {
        buf.clear();
        for v in comp {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        out.write_all(&buf)?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b).map_err(|e| Error::Format(format!("truncated header: {e}")))?;
    Ok(u32::from_le_bytes(b))
}

pub fn read_field<R: Read>(mut input: R) -> Result<PhysicalFormField> {
    let n = read_u32(&mut input)? as usize;
    let size = read_u32(&mut input)? as usize;
    let mut lb = [0u8; 8];
    input.read_exact(&mut lb).map_err(|e| Error::Format(format!("truncated header: {e}")))?;
    let period = f64::from_le_bytes(lb);
    let grade = read_u32(&mut input)? as usize;
    let grid = TorusGrid::new(n, size, period).map_err(|e| Error::Format(e.to_string()))?;
    if grade > n {
        return Err(Error::Format(format!("grade {grade} exceeds dimension {n}")));
    }
    let mut bytes = vec![0u8; 8 * grid.len()];
    let mut data = Vec::with_capacity(blade_count(n, grade));
    for _ in 0..blade_count(n, grade) {
        input.read_exact(&mut bytes).map_err(|e| Error::Format(format!("truncated data: {e}")))?;
        data.push(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect());
    }
    let mut rest = Vec::new();
    input.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Format(format!("{} trailing bytes", rest.len())));
    }
    PhysicalFormField::from_data(&grid, grade, data)
}
