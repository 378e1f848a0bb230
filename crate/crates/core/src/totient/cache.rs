//! Binary sieve cache: little-endian `u64` n_max, then `φ(1..=n_max)` as
//! little-endian `u32`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{TotientTable, MAX_SIEVE};
use crate::error::{Error, Result};

pub fn write_sieve_cache(table: &TotientTable, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(&table.n_max().to_le_bytes())?;
    for &p in table.values() {
        out.write_all(&p.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_sieve_cache(path: impl AsRef<Path>) -> Result<TotientTable> {
    let path = path.as_ref();
    let file = File::open(path)?;
    let len = file.metadata()?.len();
    let mut input = BufReader::new(file);
    let mut header = [0u8; 8];
    input.read_exact(&mut header).map_err(|_| Error::Parse {
        line: 0,
        message: format!("{}: truncated sieve cache header", path.display()),
    })?;
    let n_max = u64::from_le_bytes(header);
    if n_max == 0 || n_max > MAX_SIEVE || len != 8 + 4 * n_max {
        return Err(Error::Parse {
            line: 0,
            message: format!(
                "{}: header n_max = {n_max} does not match file length {len}",
                path.display()
            ),
        });
    }
    let mut phi = Vec::with_capacity(n_max as usize + 1);
    phi.push(0u32);
    let mut buf = [0u8; 4];
    for _ in 0..n_max {
        input.read_exact(&mut buf)?;
        phi.push(u32::from_le_bytes(buf));
    }
    if phi[1] != 1 {
        return Err(Error::Parse {
            line: 0,
            message: format!("{}: phi(1) = {} in sieve cache", path.display(), phi[1]),
        });
    }
    Ok(TotientTable::from_phi(phi))
}
