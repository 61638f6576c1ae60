//! On-disk cache for potential-independent matrices.
//!
//! File layout (all little-endian): 8-byte magic `QDENTMAT`, `u32` format
//! version, `u32` matrix count, then per matrix `u64` rows, `u64` cols and
//! `rows·cols` `f64` values in column-major order. Entries live at
//! `<dir>/<key>.bin`, where the key is a SHA-256 over everything that
//! determines the contents.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use faer::Mat;
use sha2::{Digest, Sha256};

use crate::basis::BasisSpec;
use crate::error::{Error, Result};
use crate::interactions::InteractionKind;

const MAGIC: &[u8; 8] = b"QDENTMAT";
pub const FORMAT_VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "QDENT_CACHE_DIR";

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

pub fn interaction_key(basis: &BasisSpec, kind: InteractionKind) -> String {
    let q = &basis.quadrature;
    let mut desc = format!(
        "interaction-blocks|v{FORMAT_VERSION}|n={}|omega={:016x}|hw={:016x}|nodes={}|maxw={:016x}|kind={}",
        basis.n_basis,
        basis.omega.to_bits(),
        q.half_width.to_bits(),
        q.nodes_per_panel,
        q.max_panel_width.to_bits(),
        kind.label(),
    );
    for b in &q.panel_breakpoints {
        desc.push_str(&format!("|bp={:016x}", b.to_bits()));
    }
    let digest = Sha256::digest(desc.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.bin"))
}

fn io_err(e: std::io::Error) -> Error {
    Error::Cache(e.to_string())
}

pub fn store_matrices(dir: &Path, key: &str, mats: &[&Mat<f64>]) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err)?;
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&(mats.len() as u32).to_le_bytes());
    for m in mats {
        buf.extend_from_slice(&(m.nrows() as u64).to_le_bytes());
        buf.extend_from_slice(&(m.ncols() as u64).to_le_bytes());
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                buf.extend_from_slice(&m[(r, c)].to_le_bytes());
            }
        }
    }
    // Write-then-rename so concurrent readers never see a partial file.
    let path = entry_path(dir, key);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, &buf).map_err(io_err)?;
    fs::rename(&tmp, &path).map_err(io_err)
}

/// `Ok(None)` when the entry does not exist.
pub fn load_matrices(dir: &Path, key: &str) -> Result<Option<Vec<Mat<f64>>>> {
    let path = entry_path(dir, key);
    let mut f = match fs::File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(io_err(e)),
    };
    let mut buf = Vec::new();
    f.read_to_end(&mut buf).map_err(io_err)?;
    let mut cur = Cursor { buf: &buf, pos: 0 };
    if cur.take(8)? != MAGIC {
        return Err(Error::Cache(format!("{}: bad magic", path.display())));
    }
    let version = cur.u32()?;
    if version != FORMAT_VERSION {
        return Err(Error::Cache(format!("{}: format version {version}", path.display())));
    }
    let count = cur.u32()? as usize;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let rows = cur.u64()? as usize;
        let cols = cur.u64()? as usize;
        let mut m = Mat::zeros(rows, cols);
        for c in 0..cols {
            for r in 0..rows {
                m[(r, c)] = f64::from_le_bytes(cur.take(8)?.try_into().unwrap());
            }
        }
        out.push(m);
    }
    if cur.pos != buf.len() {
        return Err(Error::Cache(format!("{}: trailing bytes", path.display())));
    }
    Ok(Some(out))
}

pub(crate) fn store_blocks(dir: &Path, key: &str, even: &Mat<f64>, odd: &Mat<f64>) -> Result<()> {
    store_matrices(dir, key, &[even, odd])
}

pub(crate) fn load_blocks(dir: &Path, key: &str, even_dim: usize, odd_dim: usize) -> Result<Option<(Mat<f64>, Mat<f64>)>> {
    let Some(mut mats) = load_matrices(dir, key)? else {
        return Ok(None);
    };
    let shape_ok = mats.len() == 2
        && mats[0].nrows() == even_dim
        && mats[0].ncols() == even_dim
        && mats[1].nrows() == odd_dim
        && mats[1].ncols() == odd_dim;
    if !shape_ok {
        return Err(Error::Cache(format!("entry {key} has unexpected shape")));
    }
    let odd = mats.pop().unwrap();
    let even = mats.pop().unwrap();
    Ok(Some((even, odd)))
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        if end > self.buf.len() {
            return Err(Error::Cache("truncated entry".into()));
        }
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_missing() {
        let dir = tempfile::tempdir().unwrap();
        let a = Mat::<f64>::from_fn(3, 2, |r, c| r as f64 - 0.5 * c as f64);
        let b = Mat::<f64>::from_fn(1, 1, |_, _| f64::MIN_POSITIVE);
        store_matrices(dir.path(), "k", &[&a, &b]).unwrap();
        let got = load_matrices(dir.path(), "k").unwrap().unwrap();
        assert_eq!(got[0], a);
        assert_eq!(got[1], b);
        assert!(load_matrices(dir.path(), "missing").unwrap().is_none());
    }

    #[test]
    fn header_layout() {
        let dir = tempfile::tempdir().unwrap();
        let a = Mat::<f64>::from_fn(2, 1, |r, _| r as f64 + 1.0);
        store_matrices(dir.path(), "h", &[&a]).unwrap();
        let bytes = fs::read(dir.path().join("h.bin")).unwrap();
        assert_eq!(&bytes[..8], b"QDENTMAT");
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 1);
        assert_eq!(bytes.len(), 16 + 16 + 16);
        assert_eq!(f64::from_le_bytes(bytes[40..48].try_into().unwrap()), 2.0);
    }

    #[test]
    fn rejects_corrupt_entries() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("bad.bin"), b"NOTMAGIC").unwrap();
        assert!(load_matrices(dir.path(), "bad").is_err());
        let a = Mat::<f64>::zeros(2, 2);
        store_matrices(dir.path(), "t", &[&a]).unwrap();
        let p = dir.path().join("t.bin");
        let mut bytes = fs::read(&p).unwrap();
        bytes.truncate(bytes.len() - 3);
        fs::write(&p, bytes).unwrap();
        assert!(load_matrices(dir.path(), "t").is_err());
    }

    #[test]
    fn keys_distinguish_inputs() {
        let a = BasisSpec::new(20, 0.25, 8.0).unwrap();
        let b = BasisSpec::new(20, 0.3, 8.0).unwrap();
        assert_ne!(interaction_key(&a, InteractionKind::Contact), interaction_key(&b, InteractionKind::Contact));
        assert_ne!(
            interaction_key(&a, InteractionKind::Contact),
            interaction_key(&a, InteractionKind::SoftCoulomb)
        );
        assert_eq!(interaction_key(&a, InteractionKind::Contact).len(), 64);
    }
}
