//! Content-addressed store of resolutions.
//!
//! Entries are JSON files named by the SHA-256 of everything the resolution
//! depends on. A loaded entry is rebuilt and re-verified (equivariance,
//! guard band, exactness of the augmented complex) before use; anything
//! that fails is deleted and recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tormod::resolution::{check_guard_band, ResolutionData};
use tormod::{Convention, DegreeWindow, GradedModulePresentation, Resolution};

pub const FORMAT: &str = "tormod-resolution-v1";
pub const ENV_DIR: &str = "TORMOD_CACHE_DIR";

/// Conventions baked into a stored resolution. Changing any of them changes
/// the key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conventions {
    pub monomial_order: String,
    pub koszul_sign: String,
    pub hom_degree: String,
    pub differential: Convention,
}

impl Conventions {
    pub fn current(differential: Convention) -> Self {
        Conventions {
            monomial_order: "lex-descending".into(),
            koszul_sign: "d(x_i1^...^x_ik) = sum_j (-1)^(j+1) x_ij (omit j)".into(),
            hom_degree: "degree-t map raises degree by t".into(),
            differential,
        }
    }

    fn describe(&self) -> String {
        format!(
            "order={};koszul={};hom={};d_k=({},{})",
            self.monomial_order, self.koszul_sign, self.hom_degree, self.differential.a, self.differential.b
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    Discarded(String),
    Disabled,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    format: String,
    resolution: ResolutionData,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// `$TORMOD_CACHE_DIR`, else `tormod-cache` in the system temp directory.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(ENV_DIR)
            .map(PathBuf::from)
            .unwrap_or_else(|| std::env::temp_dir().join("tormod-cache"));
        Cache::at(dir)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn load(&self, key: &str, module: &GradedModulePresentation) -> (Option<Resolution>, Lookup) {
        let Some(path) = self.path(key) else {
            return (None, Lookup::Disabled);
        };
        let Ok(text) = fs::read_to_string(&path) else {
            return (None, Lookup::Miss);
        };
        match verify(&text, key, module) {
            Ok(res) => (Some(res), Lookup::Hit),
            Err(reason) => {
                let _ = fs::remove_file(&path);
                (None, Lookup::Discarded(reason))
            }
        }
    }

    /// Best effort: a cache that cannot be written is not an error.
    pub fn store(&self, key: &str, res: &Resolution) -> bool {
        let Some(path) = self.path(key) else {
            return false;
        };
        let entry = Entry {
            key: key.to_string(),
            format: FORMAT.into(),
            resolution: res.data().clone(),
        };
        let Ok(text) = serde_json::to_string(&entry) else {
            return false;
        };
        let Some(dir) = path.parent() else {
            return false;
        };
        if fs::create_dir_all(dir).is_err() {
            return false;
        }
        let tmp = dir.join(format!("{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, text).is_ok() && fs::rename(&tmp, &path).is_ok()
    }

    /// Loads or computes, storing fresh results.
    pub fn resolution(
        &self,
        key: &str,
        module: &GradedModulePresentation,
        compute: impl FnOnce() -> tormod::Result<Resolution>,
    ) -> tormod::Result<(Resolution, Lookup)> {
        let (cached, lookup) = self.load(key, module);
        if let Some(res) = cached {
            return Ok((res, lookup));
        }
        let res = compute()?;
        self.store(key, &res);
        Ok((res, lookup))
    }
}

fn verify(text: &str, key: &str, module: &GradedModulePresentation) -> Result<Resolution, String> {
    let entry: Entry = serde_json::from_str(text).map_err(|e| format!("unreadable entry: {e}"))?;
    if entry.key != key || entry.format != FORMAT {
        return Err("key or format mismatch".into());
    }
    let res = Resolution::from_data(module.ring().clone(), entry.resolution).map_err(|e| e.to_string())?;
    res.check_equivariance().map_err(|e| e.to_string())?;
    check_guard_band(&res).map_err(|e| e.to_string())?;
    let (lo, hi) = (res.data().lo, res.data().hi);
    let realized = module.realize(lo, hi).map_err(|e| e.to_string())?;
    let complex = res.realize_augmented(&realized, lo, hi).map_err(|e| e.to_string())?;
    let report = complex.verify_exactness(lo, hi).map_err(|e| e.to_string())?;
    if !report.exact {
        return Err("stored complex is not exact".into());
    }
    Ok(res)
}

/// SHA-256 over the format tag, a command tag, the conventions, the window
/// and the canonical text of each module involved.
pub fn key(
    command: &str,
    conventions: &Conventions,
    window: &DegreeWindow,
    modules: &[&GradedModulePresentation],
) -> String {
    let mut h = Sha256::new();
    let mut part = |s: &str| {
        h.update((s.len() as u64).to_le_bytes());
        h.update(s.as_bytes());
    };
    part(FORMAT);
    part(command);
    part(&conventions.describe());
    part(&format!("{}:{}:{}", window.t_min, window.t_max, window.margin));
    for m in modules {
        part(&m.canonical_string());
    }
    hex::encode(h.finalize())
}
