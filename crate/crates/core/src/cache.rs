//! Exact-value cache: one JSON document per minimal number, holding both
//! certificates. Entries are written only after independent verification.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::ExactTable;
use crate::cert::{Certificate, Payload};
use crate::error::{Error, Result};
use crate::search::MinResult;
use crate::verify::{verify_certificate, Verdict, VerifyConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    /// Canonical parameter string, e.g. `ramsey:k=2,l=3,r=2`.
    pub key: String,
    pub value: usize,
    pub below: Certificate,
    pub at: Certificate,
}

impl CacheEntry {
    /// Short digest of the exhaustive certificate.
    pub fn certificate_id(&self) -> String {
        certificate_id(&self.at)
    }
}

pub fn certificate_id(cert: &Certificate) -> String {
    let digest = Sha256::digest(cert.to_json().as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// Canonical key from a theorem name and ordered parameters.
pub fn cache_key(theorem: &str, params: &[(&str, String)]) -> String {
    let body: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{theorem}:{}", body.join(","))
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        let name: String = key
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '=' || c == ',' { c } else { '_' })
            .collect();
        self.dir.join(format!("{name}.json"))
    }

    pub fn get(&self, key: &str) -> Result<Option<CacheEntry>> {
        let path = self.path(key);
        if !path.exists() {
            return Ok(None);
        }
        let entry: CacheEntry = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        if entry.key != key {
            return Err(Error::Parse(format!("cache file for {key} holds {}", entry.key)));
        }
        Ok(Some(entry))
    }

    /// Verifies both certificates, then writes. Returns false when the
    /// exhaustive re-check ran out of budget and nothing was written.
    pub fn put(&self, key: &str, result: &MinResult, cfg: &VerifyConfig) -> Result<bool> {
        let sizes = match (&result.below.payload, &result.at.payload) {
            (Payload::Counterexample { n: lo, .. }, Payload::Exhaustive { n: hi, .. }) => Some((*lo, *hi)),
            _ => None,
        };
        if sizes != Some((result.value.wrapping_sub(1), result.value)) {
            return Err(Error::InvalidParameter(format!("certificates for {key} do not bracket {}", result.value)));
        }
        for cert in [&result.below, &result.at] {
            match verify_certificate(cert, cfg)?.verdict {
                Verdict::Pass => {}
                Verdict::Unchecked { .. } => return Ok(false),
                Verdict::Fail(why) => {
                    return Err(Error::InvalidParameter(format!("refusing to cache {key}: {why}")));
                }
            }
        }
        let entry = CacheEntry { key: key.to_string(), value: result.value, below: result.below.clone(), at: result.at.clone() };
        std::fs::write(self.path(key), serde_json::to_string_pretty(&entry)?)?;
        Ok(true)
    }

    pub fn entries(&self) -> Result<Vec<CacheEntry>> {
        let mut out = Vec::new();
        let mut paths: Vec<PathBuf> = std::fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for p in paths {
            if let Ok(entry) = serde_json::from_str::<CacheEntry>(&std::fs::read_to_string(&p)?) {
                out.push(entry);
            }
        }
        Ok(out)
    }

    /// Classical Ramsey and Milliken-Taylor entries as a bounds table.
    pub fn exact_table(&self) -> Result<ExactTable> {
        let mut table = ExactTable::default();
        for e in self.entries()? {
            let (theorem, rest) = e.key.split_once(':').unwrap_or(("", ""));
            let get = |name: &str| -> Option<String> {
                rest.split(',').find_map(|kv| kv.strip_prefix(&format!("{name}=")).map(str::to_string))
            };
            let key = match theorem {
                "ramsey" => format!("R({},{},{})", get("k").unwrap_or_default(), get("l").unwrap_or_default(), get("r").unwrap_or_default()),
                "mt" => format!("MT({},{},{})", get("d").unwrap_or_default(), get("m").unwrap_or_default(), get("r").unwrap_or_default()),
                _ => continue,
            };
            table.insert(key, e.value as u64, e.certificate_id());
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::ramsey::min_classical_ramsey;
    use crate::search::SearchConfig;

    #[test]
    fn verified_round_trip_and_table() {
        let dir = std::env::temp_dir().join(format!("finram-cache-{}", std::process::id()));
        let cache = Cache::open(&dir).unwrap();
        let res = min_classical_ramsey(1, 3, 2, &SearchConfig::default()).unwrap().exact().unwrap();
        let key = cache_key("ramsey", &[("k", "1".into()), ("l", "3".into()), ("r", "2".into())]);
        assert!(cache.put(&key, &res, &VerifyConfig::default()).unwrap());
        let back = cache.get(&key).unwrap().unwrap();
        assert_eq!(back.value, 5);
        let table = cache.exact_table().unwrap();
        assert_eq!(table.get("R(1,3,2)"), Some(5));
        let mut forged = res.clone();
        forged.value = 4;
        std::mem::swap(&mut forged.below, &mut forged.at);
        assert!(cache.put("ramsey:forged", &forged, &VerifyConfig::default()).is_err());
        std::fs::remove_dir_all(dir).ok();
    }
}
