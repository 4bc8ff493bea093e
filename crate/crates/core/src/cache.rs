//! Binary cache for [`OrthSubsetIndex`].
//!
//! Layout (little endian): magic `KCORTH\0\x01`, version string, system label,
//! 32-byte root-datum hash, size-class count and per-size counts, signature
//! width and presence flag, subset entries as `u16`, signatures as `u8`, and a
//! trailing SHA-256 of everything before it.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::orthenum::{check_index, OrthSubsetIndex, CACHE_VERSION};
use crate::rootsys::RootSystem;

const MAGIC: &[u8; 8] = b"KCORTH\0\x01";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache file {0} does not exist")]
    Missing(PathBuf),
    #[error("cache version {found:?}, expected {expected:?}")]
    VersionMismatch { found: String, expected: String },
    #[error("cache is for {found}, requested {expected}")]
    SystemMismatch { found: String, expected: String },
    #[error("root-datum hash in cache does not match {0}")]
    HashMismatch(String),
    #[error("cache checksum does not match its contents")]
    ChecksumMismatch,
    #[error("cache payload truncated: {0}")]
    Truncated(String),
    #[error("cache is corrupt: {0}")]
    Corrupt(String),
    #[error("cache I/O on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// Default file name for a system's cache inside a cache directory.
pub fn cache_file_name(sys: &RootSystem) -> String {
    format!("orth-{}.bin", sys.ty())
}

fn put_str(buf: &mut Vec<u8>, s: &str) {
    buf.extend_from_slice(&(s.len() as u16).to_le_bytes());
    buf.extend_from_slice(s.as_bytes());
}

pub fn encode(index: &OrthSubsetIndex) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    put_str(&mut buf, &index.cache_version);
    put_str(&mut buf, &index.system.to_string());
    buf.extend_from_slice(&index.datum_hash);
    buf.extend_from_slice(&(index.by_size.len() as u32).to_le_bytes());
    for r in &index.by_size {
        buf.extend_from_slice(&(r.len() as u64).to_le_bytes());
    }
    buf.extend_from_slice(&(index.signature_width as u32).to_le_bytes());
    buf.push(index.signatures.is_some() as u8);
    for s in &index.subsets {
        for &x in s {
            buf.extend_from_slice(&x.to_le_bytes());
        }
    }
    if let Some(sig) = &index.signatures {
        buf.extend_from_slice(sig);
    }
    let digest = Sha256::digest(&buf);
    buf.extend_from_slice(&digest);
    buf
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn save_cache(index: &OrthSubsetIndex, path: &Path) -> Result<(), CacheError> {
    let io_err = |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&encode(index))?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], CacheError> {
        if self.buf.len() - self.pos < n {
            return Err(CacheError::Truncated(format!("ends inside {what}")));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u16(&mut self, what: &str) -> Result<u16, CacheError> {
        Ok(u16::from_le_bytes(self.take(2, what)?.try_into().unwrap()))
    }

    fn u32(&mut self, what: &str) -> Result<u32, CacheError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, CacheError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn string(&mut self, what: &str) -> Result<String, CacheError> {
        let n = self.u16(what)? as usize;
        let b = self.take(n, what)?;
        String::from_utf8(b.to_vec()).map_err(|_| CacheError::Corrupt(format!("{what} is not UTF-8")))
    }
}

pub fn decode(sys: &RootSystem, buf: &[u8]) -> Result<OrthSubsetIndex, CacheError> {
    let mut r = Reader { buf, pos: 0 };
    if r.take(MAGIC.len(), "magic")? != MAGIC {
        return Err(CacheError::Corrupt("bad magic".into()));
    }
    let version = r.string("version")?;
    if version != CACHE_VERSION {
        return Err(CacheError::VersionMismatch {
            found: version,
            expected: CACHE_VERSION.into(),
        });
    }
    let label = r.string("system label")?;
    if label != sys.ty().to_string() {
        return Err(CacheError::SystemMismatch {
            found: label,
            expected: sys.ty().to_string(),
        });
    }
    let hash: [u8; 32] = r.take(32, "root-datum hash")?.try_into().unwrap();
    if hash != sys.datum_hash() {
        return Err(CacheError::HashMismatch(label));
    }
    let classes = r.u32("size classes")? as usize;
    if classes > sys.num_positive() {
        return Err(CacheError::Corrupt(format!("{classes} size classes")));
    }
    let mut counts = Vec::with_capacity(classes);
    for _ in 0..classes {
        counts.push(r.u64("size counts")? as usize);
    }
    let width = r.u32("signature width")? as usize;
    let has_sig = match r.take(1, "signature flag")?[0] {
        0 => false,
        1 => true,
        x => return Err(CacheError::Corrupt(format!("signature flag {x}"))),
    };
    let entries: usize = counts.iter().enumerate().map(|(k, c)| (k + 1).saturating_mul(*c)).sum();
    let total: usize = counts.iter().sum();
    let need = entries * 2 + if has_sig { total * width } else { 0 } + 32;
    if buf.len() - r.pos < need {
        return Err(CacheError::Truncated(format!(
            "{} payload bytes, header promises {need}",
            buf.len() - r.pos
        )));
    }
    if buf.len() - r.pos > need {
        return Err(CacheError::Corrupt("trailing bytes".into()));
    }
    let body = buf.len() - 32;
    if Sha256::digest(&buf[..body]).as_slice() != &buf[body..] {
        return Err(CacheError::ChecksumMismatch);
    }
    let mut subsets = Vec::with_capacity(total);
    let mut by_size = Vec::with_capacity(classes);
    for (k, &c) in counts.iter().enumerate() {
        let start = subsets.len();
        for _ in 0..c {
            let mut s = Vec::with_capacity(k + 1);
            for _ in 0..=k {
                s.push(r.u16("subsets")?);
            }
            subsets.push(s);
        }
        by_size.push(start..subsets.len());
    }
    let signatures = if has_sig {
        Some(r.take(total * width, "signatures")?.to_vec())
    } else {
        None
    };
    let index = OrthSubsetIndex {
        system: sys.ty(),
        datum_hash: hash,
        subsets,
        by_size,
        signatures,
        signature_width: width,
        cache_version: version,
    };
    check_index(sys, &index).map_err(CacheError::Corrupt)?;
    Ok(index)
}

pub fn load_cache(sys: &RootSystem, path: &Path) -> Result<OrthSubsetIndex, CacheError> {
    let buf = fs::read(path).map_err(|source| {
        if source.kind() == io::ErrorKind::NotFound {
            CacheError::Missing(path.to_path_buf())
        } else {
            CacheError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })?;
    decode(sys, &buf)
}
