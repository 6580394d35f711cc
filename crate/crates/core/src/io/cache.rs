use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use super::{decomposition_to_json, parse_decomposition_value, SCHEMA_VERSION};
use crate::decomposition::{jacobian_factors, Decomposition, DecompositionSource};
use crate::modsym::genus_formula;
use crate::Result;

/// On-disk store of computed decompositions, one JSON file per level.
///
/// Files are named `level-N.vS.json` with `S` the schema version, so a version
/// bump leaves old entries unread. Writes go to a temporary file in the same
/// directory and are renamed into place.
#[derive(Clone, Debug)]
pub struct DecompositionCache {
    dir: PathBuf,
}

impl DecompositionCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DecompositionCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, level: u64) -> PathBuf {
        self.dir.join(format!("level-{level}.v{SCHEMA_VERSION}.json"))
    }

    /// The cached decomposition, or `None` if absent or unusable (with a warning).
    pub fn load(&self, level: u64) -> Option<Decomposition> {
        let path = self.path_for(level);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                log::warn!("cannot read cache entry {}: {e}; recomputing", path.display());
                return None;
            }
        };
        let parsed = serde_json::from_slice(&bytes)
            .map_err(|e| e.to_string())
            .and_then(|v| parse_decomposition_value(&v).map_err(|e| e.to_string()));
        match parsed {
            Ok((d, _)) if *d.source() != (DecompositionSource::Computed { level }) => {
                log::warn!("cache entry {} is for another level; recomputing", path.display());
                None
            }
            Ok((d, _)) if d.genus() != genus_formula(level) => {
                log::warn!(
                    "cache entry {} has genus {} but X0({level}) has genus {}; recomputing",
                    path.display(),
                    d.genus(),
                    genus_formula(level)
                );
                None
            }
            Ok((d, _)) => Some(d),
            Err(e) => {
                log::warn!("corrupt cache entry {}: {e}; recomputing", path.display());
                None
            }
        }
    }

    pub fn store(&self, d: &Decomposition) -> Result<()> {
        let DecompositionSource::Computed { level } = d.source() else {
            return Ok(());
        };
        let mut body = serde_json::to_string_pretty(&decomposition_to_json(d)).expect("serializable");
        body.push('\n');
        let nanos = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |t| t.subsec_nanos());
        let tmp = self.dir.join(format!(
            ".level-{level}.{}.{nanos}.tmp",
            std::process::id()
        ));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(body.as_bytes())?;
        f.sync_all()?;
        drop(f);
        if let Err(e) = fs::rename(&tmp, self.path_for(*level)) {
            let _ = fs::remove_file(&tmp);
            return Err(e.into());
        }
        Ok(())
    }

    /// Loads the decomposition for `level`, computing and storing it if needed.
    pub fn get_or_compute(&self, level: u64) -> Result<Decomposition> {
        if let Some(d) = self.load(level) {
            return Ok(d);
        }
        let d = jacobian_factors(level)?;
        self.store(&d)?;
        Ok(d)
    }
}

/// Decomposition of J₀(N), through the cache when one is given.
pub fn decomposition_for(level: u64, cache: Option<&DecompositionCache>) -> Result<Decomposition> {
    match cache {
        Some(c) => c.get_or_compute(level),
        None => jacobian_factors(level),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption_recovery() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DecompositionCache::new(dir.path()).unwrap();
        assert!(cache.load(23).is_none());
        let d = cache.get_or_compute(23).unwrap();
        assert_eq!(cache.load(23), Some(d.clone()));

        fs::write(cache.path_for(23), b"{ not json").unwrap();
        assert!(cache.load(23).is_none());
        assert_eq!(cache.get_or_compute(23).unwrap(), d);
        assert_eq!(cache.load(23), Some(d));

        // An entry for another level under this name is ignored.
        let other = jacobian_factors(22).unwrap();
        let body = serde_json::to_string(&decomposition_to_json(&other)).unwrap();
        fs::write(cache.path_for(23), body).unwrap();
        assert!(cache.load(23).is_none());

        // Well-formed but inconsistent with the genus formula.
        let fake = br#"{"source": {"kind": "computed", "level": 23}, "factors": [{"degree": 1, "class": "real"}]}"#;
        fs::write(cache.path_for(23), fake).unwrap();
        assert!(cache.load(23).is_none());
    }
}
