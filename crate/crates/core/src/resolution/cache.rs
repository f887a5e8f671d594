//! On-disk cache of minimal resolutions. Entries are keyed by group name,
//! prime, degree bound and engine version, and are revalidated on load.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FreeComplex, MinimalResolution};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::linalg::BitVec;

/// Bumped whenever the resolution algorithm changes its output.
pub const ENGINE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    engine: u32,
    name: String,
    p: u32,
    maxdeg: usize,
    table: Vec<Vec<usize>>,
    ranks: Vec<usize>,
    /// Per degree, per generator: (bit length, packed words).
    boundary: Vec<Vec<(usize, Vec<u64>)>>,
}

pub fn cache_path(dir: &Path, group: &GroupTable, maxdeg: usize) -> PathBuf {
    let safe: String = group
        .name()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    dir.join(format!("{safe}-p{}-d{maxdeg}-v{ENGINE_VERSION}.json", group.p()))
}

pub fn store(dir: &Path, res: &MinimalResolution) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let group = res.group();
    let c = res.complex();
    let entry = Entry {
        engine: ENGINE_VERSION,
        name: group.name().to_string(),
        p: group.p(),
        maxdeg: res.maxdeg(),
        table: group.table_rows(),
        ranks: c.ranks().to_vec(),
        boundary: (0..=c.maxdeg())
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                c.boundary(n).iter().map(|v| (v.len(), v.words().to_vec())).collect()
            })
            .collect(),
    };
    let path = cache_path(dir, group, res.maxdeg());
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, serde_json::to_vec(&entry)?)?;
    std::fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Loads a cached resolution. `Ok(None)` when there is no entry; an
/// `Integrity` error when an entry exists but fails revalidation.
pub fn load(dir: &Path, group: &Arc<GroupTable>, maxdeg: usize) -> Result<Option<MinimalResolution>> {
    let path = cache_path(dir, group, maxdeg);
    if !path.exists() {
        return Ok(None);
    }
    let bad = |why: &str| Error::Integrity(format!("cache entry {}: {why}", path.display()));
    let text = std::fs::read_to_string(&path)?;
    let entry: Entry = serde_json::from_str(&text).map_err(|e| bad(&e.to_string()))?;
    if entry.engine != ENGINE_VERSION || entry.name != group.name() || entry.p != group.p() || entry.maxdeg != maxdeg {
        return Err(bad("key does not match"));
    }
    if entry.table != group.table_rows() {
        return Err(bad("stored multiplication table differs from the group"));
    }
    let boundary = entry
        .boundary
        .into_iter()
        .map(|deg| {
            deg.into_iter()
                .map(|(len, words)| bitvec_from_words(len, words))
                .collect()
        })
        .collect::<Option<Vec<Vec<BitVec>>>>()
        .ok_or_else(|| bad("malformed boundary vector"))?;
    let complex = FreeComplex::new(group.order(), entry.ranks, boundary).map_err(|e| bad(&e.to_string()))?;
    let res = MinimalResolution::from_parts(group.clone(), complex)?;
    res.validate().map_err(|e| bad(&e.to_string()))?;
    Ok(Some(res))
}

fn bitvec_from_words(len: usize, words: Vec<u64>) -> Option<BitVec> {
    if words.len() != len.div_ceil(64) {
        return None;
    }
    if !len.is_multiple_of(64) && words.last().is_some_and(|w| w >> (len % 64) != 0) {
        return None;
    }
    Some(BitVec::from_words(len, words))
}

/// Computes a resolution, consulting and filling the cache when `dir` is set.
pub fn resolve(group: Arc<GroupTable>, maxdeg: usize, dir: Option<&Path>) -> Result<MinimalResolution> {
    if let Some(dir) = dir {
        if let Some(res) = load(dir, &group, maxdeg)? {
            return Ok(res);
        }
    }
    let res = MinimalResolution::compute(group, maxdeg)?;
    if let Some(dir) = dir {
        if res.degree_reduced().is_none() {
            store(dir, &res)?;
        }
    }
    Ok(res)
}
