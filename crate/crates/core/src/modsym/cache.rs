//! In-memory and on-disk caching of eigen data.
//!
//! Files are JSON, one per curve, named
//! `eigen-v{version}-{level}-{a1}_{a2}_{a3}_{a4}_{a6}.json`. A file that fails
//! to parse or validate is ignored and rewritten.

use super::eigen::{hecke_eigen_auto, EigenData};
use super::space::ModSymSpace;
use crate::curves::CurveModel;
use crate::error::{Error, Result};
use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

pub const CACHE_FORMAT_VERSION: u32 = 1;

fn key(curve: &CurveModel) -> String {
    let a: Vec<String> = curve.coefficients().iter().map(|c| c.to_string()).collect();
    format!("{}-{}", curve.conductor(), a.join("_"))
}

fn file_for(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("eigen-v{CACHE_FORMAT_VERSION}-{key}.json"))
}

fn memory() -> &'static Mutex<HashMap<String, Arc<EigenData>>> {
    static MEM: OnceLock<Mutex<HashMap<String, Arc<EigenData>>>> = OnceLock::new();
    MEM.get_or_init(Default::default)
}

fn read_disk(path: &Path, level: u64) -> Option<EigenData> {
    let text = std::fs::read_to_string(path).ok()?;
    EigenData::from_json(&text).ok().filter(|e| e.level == level)
}

fn write_disk(dir: &Path, path: &Path, eig: &EigenData) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut f = std::fs::File::create(&tmp).map_err(|e| Error::Cache(e.to_string()))?;
    f.write_all(eig.to_json().as_bytes())
        .and_then(|_| f.sync_all())
        .map_err(|e| Error::Cache(e.to_string()))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::Cache(e.to_string()))
}

/// Eigen data for an optimal curve, from memory, then `cache_dir`, then by
/// building the space.
pub fn eigendata(curve: &CurveModel, cache_dir: Option<&Path>) -> Result<Arc<EigenData>> {
    let k = key(curve);
    if let Some(e) = memory().lock().unwrap().get(&k) {
        return Ok(e.clone());
    }
    let from_disk = cache_dir.and_then(|d| read_disk(&file_for(d, &k), curve.conductor()));
    let eig = match from_disk {
        Some(e) => e,
        None => {
            let space = ModSymSpace::build(curve.conductor())?;
            let e = hecke_eigen_auto(&space, curve)?;
            if let Some(d) = cache_dir {
                write_disk(d, &file_for(d, &k), &e)?;
            }
            e
        }
    };
    let eig = Arc::new(eig);
    memory().lock().unwrap().insert(k, eig.clone());
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupt_file_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let curve = CurveModel::from_i64([0, -1, 1, -10, -20]).unwrap();
        let path = file_for(dir.path(), &key(&curve));
        std::fs::write(&path, "{not json").unwrap();
        assert!(read_disk(&path, 11).is_none());
        let space = ModSymSpace::build(11).unwrap();
        let e = hecke_eigen_auto(&space, &curve).unwrap();
        write_disk(dir.path(), &path, &e).unwrap();
        let back = read_disk(&path, 11).unwrap();
        assert_eq!(back, e);
        assert!(read_disk(&path, 13).is_none());
    }
}
