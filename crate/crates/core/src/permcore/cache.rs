//! Binary cache for permutation lists.
//!
//! Layout: a 16-byte header (`b"U35P"`, format version as `u32` LE, row count
//! as `u64` LE), then one 50-byte image row per permutation, then a 32-byte
//! SHA-256 digest of everything before it.

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{CacheError, Permutation, DEGREE};

pub const MAGIC: [u8; 4] = *b"U35P";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 16;
const DIGEST_LEN: usize = 32;

pub fn encode(perms: &[Permutation]) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + perms.len() * DEGREE + DIGEST_LEN);
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(perms.len() as u64).to_le_bytes());
    for p in perms {
        buf.extend_from_slice(p.as_bytes());
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

pub fn decode(bytes: &[u8]) -> Result<Vec<Permutation>, CacheError> {
    if bytes.len() < HEADER_LEN + DIGEST_LEN {
        return Err(CacheError::Truncated);
    }
    if bytes[..4] != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != VERSION {
        return Err(CacheError::UnsupportedVersion(version));
    }
    let count = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let body_end = HEADER_LEN + count * DEGREE;
    if bytes.len() != body_end + DIGEST_LEN {
        return Err(CacheError::Truncated);
    }
    let digest = Sha256::digest(&bytes[..body_end]);
    if digest.as_slice() != &bytes[body_end..] {
        return Err(CacheError::Checksum);
    }
    bytes[HEADER_LEN..body_end]
        .chunks_exact(DEGREE)
        .map(|row| Permutation::from_bytes(row).map_err(|_| CacheError::BadRow))
        .collect()
}

pub fn write_perms(path: &Path, perms: &[Permutation]) -> Result<(), CacheError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode(perms))?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_perms(path: &Path) -> Result<Vec<Permutation>, CacheError> {
    decode(&fs::read(path)?)
}
