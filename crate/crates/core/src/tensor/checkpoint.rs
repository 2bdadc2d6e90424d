use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{MatrixProductState, Scalar};
use crate::error::{Error, Result};

pub const CHECKPOINT_MAGIC: [u8; 4] = *b"AMPS";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Writes the binary checkpoint layout (all integers u32, floats f64,
/// little-endian): magic, version, N, d, the N+1 bond dimensions, then for
/// each site and each local state the `D_k × D_{k+1}` matrix in row-major
/// order as (re, im) pairs.
pub fn write_checkpoint<T: Scalar, W: Write>(mps: &MatrixProductState<T>, mut w: W) -> Result<()> {
    let u32_of =
        |v: usize| u32::try_from(v).map_err(|_| Error::Size(format!("{v} does not fit the checkpoint format")));
    w.write_all(&CHECKPOINT_MAGIC)?;
    w.write_u32::<LittleEndian>(CHECKPOINT_VERSION)?;
    w.write_u32::<LittleEndian>(u32_of(mps.site_count())?)?;
    w.write_u32::<LittleEndian>(u32_of(mps.local_dim())?)?;
    for d in mps.bond_dims() {
        w.write_u32::<LittleEndian>(u32_of(d)?)?;
    }
    for site in mps.tensors() {
        for a in site {
            for r in 0..a.nrows() {
                for c in 0..a.ncols() {
                    let z = a[(r, c)].to_c64();
                    w.write_f64::<LittleEndian>(z.re)?;
                    w.write_f64::<LittleEndian>(z.im)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<MatrixProductState<Complex64>> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if magic != CHECKPOINT_MAGIC {
        return Err(Error::Shape("not an MPS checkpoint (bad magic)".into()));
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != CHECKPOINT_VERSION {
        return Err(Error::Unsupported(format!("checkpoint version {version}")));
    }
    let n = r.read_u32::<LittleEndian>()? as usize;
    let d = r.read_u32::<LittleEndian>()? as usize;
    if n == 0 || d == 0 || n > 1 << 20 || d > 1 << 10 {
        return Err(Error::Shape(format!("implausible checkpoint header N={n}, d={d}")));
    }
    let dims =
        (0..=n).map(|_| r.read_u32::<LittleEndian>().map(|v| v as usize)).collect::<std::io::Result<Vec<_>>>()?;
    if dims.iter().any(|&x| x == 0 || x > 1 << 16) {
        return Err(Error::Shape("implausible bond dimension in checkpoint".into()));
    }
    let mut tensors = Vec::with_capacity(n);
    for k in 0..n {
        let mut site = Vec::with_capacity(d);
        for _ in 0..d {
            let mut m = DMatrix::zeros(dims[k], dims[k + 1]);
            for row in 0..dims[k] {
                for col in 0..dims[k + 1] {
                    let re = r.read_f64::<LittleEndian>()?;
                    let im = r.read_f64::<LittleEndian>()?;
                    m[(row, col)] = Complex64::new(re, im);
                }
            }
            site.push(m);
        }
        tensors.push(site);
    }
    MatrixProductState::new(tensors)
}

pub fn save_checkpoint<T: Scalar>(mps: &MatrixProductState<T>, path: &Path) -> Result<()> {
    write_checkpoint(mps, BufWriter::new(File::create(path)?))
}

pub fn load_checkpoint(path: &Path) -> Result<MatrixProductState<Complex64>> {
    read_checkpoint(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_tensors() {
        let m = MatrixProductState::<Complex64>::random(7, 3, 5, 9).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.amps");
        save_checkpoint(&m, &path).unwrap();
        let back = load_checkpoint(&path).unwrap();
        assert_eq!(back.tensors(), m.tensors());
        let bytes = std::fs::read(&path).unwrap();
        let entries: usize = m.tensors().iter().map(|s| s.len() * s[0].len()).sum();
        assert_eq!(bytes.len(), 4 + 4 + 8 + 4 * 8 + 16 * entries);
        assert_eq!(&bytes[..4], b"AMPS");
    }

    #[test]
    fn real_states_are_written_with_zero_imaginary_part() {
        let m = MatrixProductState::<f64>::ghz(4).unwrap();
        let mut buf = Vec::new();
        write_checkpoint(&m, &mut buf).unwrap();
        let back = read_checkpoint(buf.as_slice()).unwrap();
        assert!((back.to_dense().unwrap()[15].re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn corrupt_input_is_rejected() {
        assert!(read_checkpoint(&b"XXXX\x01\0\0\0"[..]).is_err());
        let m = MatrixProductState::<f64>::ghz(3).unwrap();
        let mut buf = Vec::new();
        write_checkpoint(&m, &mut buf).unwrap();
        buf.truncate(buf.len() - 3);
        assert!(read_checkpoint(buf.as_slice()).is_err());
        buf[4] = 9;
        assert!(read_checkpoint(buf.as_slice()).is_err());
    }
}
