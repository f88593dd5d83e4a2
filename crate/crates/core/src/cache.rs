//! On-disk cache of stabilizer chains.
//!
//! A cache entry stores the base, the strong generators and the order. A
//! reloaded entry is never trusted as is: the chain is rebuilt from the
//! stored data, re-verified, and must contain every generator of the group
//! it is requested for.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::chain::StabilizerChain;
use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::group::GroupHandle;

pub const CACHE_VERSION: u32 = 1;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "SDP_CACHE_DIR";

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Entry<E> {
    version: u32,
    label: String,
    fingerprint: String,
    degree: usize,
    base: Vec<usize>,
    strong_generators: Vec<E>,
    order: String,
}

#[derive(Clone, Debug)]
pub struct ChainCache {
    dir: PathBuf,
}

/// FNV-1a over the serialized generators; names the cache file.
fn fingerprint<E: Serialize>(gens: &[E]) -> Result<String> {
    let bytes = serde_json::to_vec(gens).map_err(|e| Error::Cache(e.to_string()))?;
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    Ok(format!("{h:016x}"))
}

impl ChainCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<ChainCache> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        Ok(ChainCache { dir })
    }

    /// The cache named by `SDP_CACHE_DIR`, if set.
    pub fn from_env() -> Result<Option<ChainCache>> {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(dir) if !dir.is_empty() => ChainCache::new(PathBuf::from(dir)).map(Some),
            _ => Ok(None),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, fp: &str) -> PathBuf {
        self.dir.join(format!("chain-{fp}.json"))
    }

    /// The re-verified cached chain for `group`, or `None` when absent.
    /// Stale or corrupt entries are errors.
    pub fn load<E>(&self, group: &GroupHandle<E>) -> Result<Option<StabilizerChain<E>>>
    where
        E: GroupElement + Serialize + DeserializeOwned,
    {
        let fp = fingerprint(group.generators())?;
        let path = self.path_for(&fp);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        };
        let entry: Entry<E> = serde_json::from_str(&text)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        if entry.version != CACHE_VERSION {
            return Err(Error::Cache(format!(
                "{}: version {} (expected {CACHE_VERSION})",
                path.display(),
                entry.version
            )));
        }
        if entry.fingerprint != fp || entry.degree != group.degree() {
            return Err(Error::Cache(format!(
                "{}: entry does not match group",
                path.display()
            )));
        }
        let chain = StabilizerChain::from_base_and_strong_generators(
            group.identity().clone(),
            &entry.base,
            &entry.strong_generators,
        );
        if chain.order().to_string() != entry.order
            || !group.generators().iter().all(|g| chain.contains(g))
        {
            return Err(Error::Cache(format!(
                "{}: failed re-verification",
                path.display()
            )));
        }
        Ok(Some(chain))
    }

    /// Writes the chain of `group` atomically (temporary file + rename).
    pub fn store<E>(&self, group: &GroupHandle<E>) -> Result<PathBuf>
    where
        E: GroupElement + Serialize,
    {
        let fp = fingerprint(group.generators())?;
        let chain = group.chain();
        let entry = Entry {
            version: CACHE_VERSION,
            label: group.label().unwrap_or("").to_string(),
            fingerprint: fp.clone(),
            degree: group.degree(),
            base: chain.base(),
            strong_generators: chain.strong_generators(),
            order: chain.order().to_string(),
        };
        let json = serde_json::to_string(&entry).map_err(|e| Error::Cache(e.to_string()))?;
        let path = self.path_for(&fp);
        let tmp = self.dir.join(format!(".chain-{fp}.json.tmp"));
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", tmp.display()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(json.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)?;
        Ok(path)
    }

    /// `group` with its chain taken from the cache, or built and stored.
    pub fn resolve<E>(&self, group: GroupHandle<E>) -> Result<GroupHandle<E>>
    where
        E: GroupElement + Serialize + DeserializeOwned,
    {
        match self.load(&group)? {
            Some(chain) => Ok(group.with_chain(chain)),
            None => {
                self.store(&group)?;
                Ok(group)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::Permutation;

    fn a5() -> GroupHandle<Permutation> {
        GroupHandle::new(
            Permutation::identity(5),
            vec![
                Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
                Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
            ],
        )
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ChainCache::new(dir.path()).unwrap();
        assert!(cache.load(&a5()).unwrap().is_none());
        let g = cache.resolve(a5()).unwrap();
        assert_eq!(g.order(), 60u32.into());
        let chain = cache.load(&a5()).unwrap().unwrap();
        assert_eq!(chain.order(), 60u32.into());
    }

    #[test]
    fn tampered_entry_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ChainCache::new(dir.path()).unwrap();
        let path = cache.store(&a5()).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace("\"order\":\"60\"", "\"order\":\"120\"")).unwrap();
        assert!(matches!(cache.load(&a5()), Err(Error::Cache(_))));
        fs::write(&path, "not json").unwrap();
        assert!(matches!(cache.load(&a5()), Err(Error::Cache(_))));
    }
}
