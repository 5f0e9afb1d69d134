//! On-disk sieve tables.
//!
//! Layout, little-endian: `P01SIEVE`, version `u32`, `N` as `u64`, the `N + 1`
//! exponent bytes for `0..=N`, then the FNV-1a 64 hash of everything before it.

use std::fs;
use std::hash::Hasher;
use std::io::Write;
use std::path::Path;

use fnv::FnvHasher;
use pi01_core::ChebyshevTable;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"P01SIEVE";
pub const VERSION: u32 = 1;
const HEADER: usize = 8 + 4 + 8;

fn fnv(bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::default();
    h.write(bytes);
    h.finish()
}

pub fn encode(table: &ChebyshevTable) -> Vec<u8> {
    let exps = table.exponents();
    let mut out = Vec::with_capacity(HEADER + exps.len() + 8);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&table.limit().to_le_bytes());
    out.extend_from_slice(exps);
    let sum = fnv(&out);
    out.extend_from_slice(&sum.to_le_bytes());
    out
}

pub fn decode(bytes: &[u8], path: &Path) -> Result<ChebyshevTable> {
    let bad = |msg: &str| Error::format(path, msg);
    if bytes.len() < HEADER + 8 || &bytes[..8] != MAGIC {
        return Err(bad("not a sieve cache file"));
    }
    let (body, sum) = bytes.split_at(bytes.len() - 8);
    if fnv(body) != u64::from_le_bytes(sum.try_into().expect("8 bytes")) {
        return Err(bad("checksum mismatch"));
    }
    let version = u32::from_le_bytes(body[8..12].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(bad(&format!("unsupported cache version {version}")));
    }
    let n = u64::from_le_bytes(body[12..20].try_into().expect("8 bytes"));
    let exps = &body[HEADER..];
    if exps.len() as u64 != n + 1 {
        return Err(bad("length does not match the stored limit"));
    }
    Ok(ChebyshevTable::from_exponents(exps.to_vec())?)
}

pub fn save(table: &ChebyshevTable, path: &Path) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode(table))?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<ChebyshevTable> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes, path)
}

/// A table covering `n`: read from `cache` when it is valid and large
/// enough, otherwise sieved and (re)written there.
pub fn table_for(n: u64, cache: Option<&Path>) -> Result<ChebyshevTable> {
    if let Some(path) = cache {
        if path.exists() {
            match load(path) {
                Ok(t) if t.limit() >= n => return Ok(t),
                Ok(_) => {}
                Err(e) => eprintln!("warning: ignoring sieve cache: {e}"),
            }
        }
    }
    let t = ChebyshevTable::build(n.max(2))?;
    if let Some(path) = cache {
        save(&t, path)?;
    }
    Ok(t)
}
