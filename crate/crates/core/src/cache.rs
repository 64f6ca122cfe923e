//! On-disk cache of halting enumerations.
//!
//! One file per key, named by the SHA-256 of the key. A file holds the key
//! verbatim, the payload and a SHA-256 checksum of the payload. Writes go to
//! a temporary file that is renamed into place, so concurrent readers see
//! either the old or the new complete entry. An entry that fails to parse,
//! carries another key or has a bad checksum is recomputed and overwritten.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bitcore::{BitString, Dyadic};
use crate::complexity::{Budgets, ComplexityEstimate};
use crate::toyvm::{enumerate_halting, HaltingEntry, MachineMode, RunBudget, MACHINE_VERSION};

pub const CACHE_DIR_ENV: &str = "AIT_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub machine_version: String,
    pub mode: MachineMode,
    pub condition: BitString,
    pub max_len: usize,
    pub max_steps: u64,
}

impl CacheKey {
    pub fn new(mode: MachineMode, condition: &BitString, b: Budgets) -> Self {
        CacheKey {
            machine_version: MACHINE_VERSION.to_string(),
            mode,
            condition: condition.clone(),
            max_len: b.max_len,
            max_steps: b.max_steps,
        }
    }

    pub fn file_name(&self) -> String {
        let key = serde_json::to_string(self).expect("key serializes");
        format!("{}.json", hex::encode(Sha256::digest(key.as_bytes())))
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    key: CacheKey,
    payload: Vec<HaltingEntry>,
    checksum: String,
}

fn checksum(payload: &[HaltingEntry]) -> String {
    let body = serde_json::to_string(payload).expect("payload serializes");
    hex::encode(Sha256::digest(body.as_bytes()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// The stored entry was unusable and has been replaced.
    Recomputed,
}

#[derive(Clone, Debug)]
pub struct EnumCache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl EnumCache {
    pub fn new(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(EnumCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    fn load(&self, key: &CacheKey) -> Result<Option<Vec<HaltingEntry>>, String> {
        let text = match fs::read_to_string(self.path(key)) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.to_string()),
        };
        let entry: CacheEntry = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        if entry.key != *key {
            return Err("key mismatch".into());
        }
        if checksum(&entry.payload) != entry.checksum {
            return Err("checksum mismatch".into());
        }
        Ok(Some(entry.payload))
    }

    fn store(&self, key: &CacheKey, payload: &[HaltingEntry]) -> io::Result<()> {
        let entry = CacheEntry {
            key: key.clone(),
            checksum: checksum(payload),
            payload: payload.to_vec(),
        };
        let target = self.path(key);
        let tmp = self.dir.join(format!(
            ".{}.{}.{}.tmp",
            key.file_name(),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        let mut f = fs::File::create(&tmp)?;
        serde_json::to_writer(&mut f, &entry)?;
        f.write_all(b"\n")?;
        f.sync_all()?;
        fs::rename(&tmp, &target)
    }

    pub fn get_or_compute(&self, key: &CacheKey) -> (Vec<HaltingEntry>, CacheStatus) {
        let status = match self.load(key) {
            Ok(Some(payload)) => return (payload, CacheStatus::Hit),
            Ok(None) => CacheStatus::Miss,
            Err(why) => {
                eprintln!("warning: cache entry {} unusable ({why}); recomputing", self.path(key).display());
                CacheStatus::Recomputed
            }
        };
        let payload = compute(key);
        if let Err(e) = self.store(key, &payload) {
            eprintln!("warning: could not write cache entry: {e}");
        }
        (payload, status)
    }
}

pub fn compute(key: &CacheKey) -> Vec<HaltingEntry> {
    assert_eq!(key.machine_version, MACHINE_VERSION, "no other machine is available");
    enumerate_halting(key.mode, &key.condition, key.max_len, RunBudget::new(key.max_steps)).collect()
}

/// The enumeration for `key`, through the cache when one is given.
pub fn enumeration(cache: Option<&EnumCache>, key: &CacheKey) -> Vec<HaltingEntry> {
    match cache {
        Some(c) => c.get_or_compute(key).0,
        None => compute(key),
    }
}

/// Shortest (then lexicographically first) description of `x` among the
/// entries, which must be in enumeration order.
pub fn estimate_from_entries(x: &BitString, entries: &[HaltingEntry], b: Budgets) -> ComplexityEstimate {
    ComplexityEstimate::from_witness(entries.iter().find(|e| e.output == *x).map(|e| (e.description.clone(), e.steps)), b)
}

/// `sum 2^-|d|` over the entries printing `x`.
pub fn mass_from_entries(x: &BitString, entries: &[HaltingEntry]) -> Dyadic {
    entries
        .iter()
        .filter(|e| e.output == *x)
        .map(|e| Dyadic::pow2_neg(e.description.len() as u32))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitcore::bits;
    use crate::complexity::{c_plain, k_prefix};
    use crate::semimeasure::apriori_lower;

    fn key(mode: MachineMode, l: usize, t: u64) -> CacheKey {
        CacheKey::new(mode, &BitString::new(), Budgets::new(l, t))
    }

    #[test]
    fn second_call_hits_and_matches() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EnumCache::new(dir.path()).unwrap();
        let k = key(MachineMode::Plain, 10, 64);
        let (a, s1) = cache.get_or_compute(&k);
        let bytes = fs::read(cache.path(&k)).unwrap();
        let (b, s2) = cache.get_or_compute(&k);
        assert_eq!((s1, s2), (CacheStatus::Miss, CacheStatus::Hit));
        assert_eq!(a, b);
        assert_eq!(fs::read(cache.path(&k)).unwrap(), bytes);
        assert_eq!(a, compute(&k));
    }

    #[test]
    fn corrupt_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EnumCache::new(dir.path()).unwrap();
        let k = key(MachineMode::Prefix, 8, 32);
        let (good, _) = cache.get_or_compute(&k);
        let path = cache.path(&k);
        let text = fs::read_to_string(&path).unwrap();
        let tampered = text.replacen("\"output\":\"\"", "\"output\":\"1\"", 1);
        assert_ne!(tampered, text);
        fs::write(&path, tampered).unwrap();
        let (again, status) = cache.get_or_compute(&k);
        assert_eq!(status, CacheStatus::Recomputed);
        assert_eq!(again, good);
        fs::write(&path, "not json").unwrap();
        assert_eq!(cache.get_or_compute(&k).1, CacheStatus::Recomputed);
        assert_eq!(cache.get_or_compute(&k).1, CacheStatus::Hit);
    }

    #[test]
    fn keys_never_alias() {
        let a = key(MachineMode::Plain, 10, 64);
        let b = key(MachineMode::Plain, 10, 65);
        let c = key(MachineMode::Prefix, 10, 64);
        let mut d = a.clone();
        d.machine_version = "TBF-2".into();
        let mut e = a.clone();
        e.condition = bits("0");
        let names: std::collections::HashSet<String> = [&a, &b, &c, &d, &e].iter().map(|k| k.file_name()).collect();
        assert_eq!(names.len(), 5);
        let dir = tempfile::tempdir().unwrap();
        let cache = EnumCache::new(dir.path()).unwrap();
        cache.get_or_compute(&a);
        // An entry stored under one key is rejected when read for another.
        fs::copy(cache.path(&a), cache.path(&b)).unwrap();
        assert_eq!(cache.get_or_compute(&b).1, CacheStatus::Recomputed);
    }

    #[test]
    fn derived_values_match_direct_search() {
        let b = Budgets::new(12, 64);
        let plain = compute(&key(MachineMode::Plain, 12, 64));
        let prefix = compute(&key(MachineMode::Prefix, 12, 64));
        for x in ["", "0", "1", "00", "01", "10", "11", "000", "0000"] {
            let x = bits(x);
            assert_eq!(estimate_from_entries(&x, &plain, b), c_plain(&x, b, &BitString::new()));
            assert_eq!(estimate_from_entries(&x, &prefix, b), k_prefix(&x, b));
            assert_eq!(mass_from_entries(&x, &prefix), apriori_lower(&x, b));
        }
    }
}
