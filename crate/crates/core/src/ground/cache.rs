//! Binary table cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "SGT1"  version:u8  id_len:u8  id[id_len]  limit:u64  count:u64  elements[count]:u64  xor:u64
//! ```

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{is_member, GroundTable, SIGMA_ID};
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 4] = b"SGT1";
pub const CACHE_VERSION: u8 = 0x01;

fn checksum(elements: &[u64]) -> u64 {
    elements.iter().fold(0, |acc, &e| acc ^ e)
}

impl GroundTable {
    fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        let id = self.predicate_id.as_bytes();
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&[CACHE_VERSION, id.len() as u8])?;
        w.write_all(id)?;
        w.write_all(&self.limit.to_le_bytes())?;
        w.write_all(&(self.elements.len() as u64).to_le_bytes())?;
        for e in &self.elements {
            w.write_all(&e.to_le_bytes())?;
        }
        w.write_all(&checksum(&self.elements).to_le_bytes())
    }

    pub fn to_cache_bytes(&self) -> Result<Vec<u8>> {
        self.check_id_len()?;
        let mut out = Vec::with_capacity(8 * self.elements.len() + 64);
        self.write_to(&mut out)
            .expect("writing to a Vec cannot fail");
        Ok(out)
    }

    fn check_id_len(&self) -> Result<()> {
        if self.predicate_id.len() > u8::MAX as usize {
            return Err(Error::InvalidParameter(
                "predicate id longer than 255 bytes".into(),
            ));
        }
        Ok(())
    }

    pub fn save_cache(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        self.check_id_len()?;
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::with_capacity(1 << 20, file);
        self.write_to(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn from_cache_bytes(bytes: &[u8]) -> Result<Self> {
        let corrupt = |why: &str| Error::CorruptCache(why.to_string());
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4).ok_or_else(|| corrupt("truncated header"))? != CACHE_MAGIC {
            return Err(corrupt("bad magic"));
        }
        let version = r.take(1).ok_or_else(|| corrupt("truncated header"))?[0];
        if version != CACHE_VERSION {
            return Err(Error::CorruptCache(format!(
                "unsupported version {version}"
            )));
        }
        let id_len = r.take(1).ok_or_else(|| corrupt("truncated header"))?[0] as usize;
        let id = r
            .take(id_len)
            .ok_or_else(|| corrupt("truncated predicate id"))?;
        let predicate_id =
            String::from_utf8(id.to_vec()).map_err(|_| corrupt("predicate id is not UTF-8"))?;
        let limit = r.u64().ok_or_else(|| corrupt("truncated header"))?;
        let count = r.u64().ok_or_else(|| corrupt("truncated header"))?;
        let expected = count
            .checked_add(1)
            .and_then(|w| w.checked_mul(8))
            .and_then(|n| n.checked_add(r.pos as u64));
        if expected != Some(bytes.len() as u64) {
            return Err(Error::CorruptCache(format!(
                "length mismatch: header promises {count} elements, file has {} bytes",
                bytes.len()
            )));
        }
        let elements: Vec<u64> = (0..count).map(|_| r.u64().unwrap()).collect();
        let stored = r.u64().unwrap();
        if stored != checksum(&elements) {
            return Err(corrupt("checksum mismatch"));
        }
        let table = GroundTable::from_parts(limit, predicate_id, elements)
            .map_err(|e| Error::CorruptCache(e.to_string()))?;
        // The checksum does not cover `limit`; for Σ the gap after the last
        // element is short, so a damaged limit shows up as a missing member.
        if table.predicate_id == SIGMA_ID {
            let last = table.elements.last().map_or(0, |&e| e + 1);
            if let Some(n) = (last..table.limit).find(|&n| is_member(n)) {
                return Err(Error::CorruptCache(format!(
                    "member {n} missing below limit {}",
                    table.limit
                )));
            }
        }
        Ok(table)
    }

    pub fn load_cache(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_cache_bytes(&bytes)
    }

    /// Load a cache and insist it was built with `predicate_id`.
    pub fn load_cache_for(path: impl AsRef<Path>, predicate_id: &str) -> Result<Self> {
        let table = Self::load_cache(path)?;
        if table.predicate_id != predicate_id {
            return Err(Error::PredicateMismatch {
                expected: predicate_id.to_string(),
                found: table.predicate_id,
            });
        }
        Ok(table)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        let out = self.bytes.get(self.pos..end)?;
        self.pos = end;
        Some(out)
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8)
            .map(|b| u64::from_le_bytes(b.try_into().unwrap()))
    }
}
