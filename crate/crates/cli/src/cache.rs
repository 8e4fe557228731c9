//! Flat-file cache of zero scans keyed by `(t_max, precision)`.

use std::path::{Path, PathBuf};

use hardyz::{PrecisionConfig, ZeroSet};
use sha2::{Digest, Sha256};

use crate::output::version;

pub fn key(t_max: f64, cfg: &PrecisionConfig) -> String {
    let text = format!(
        "{}|{:016x}|{:016x}|{:016x}|{}",
        version(),
        t_max.to_bits(),
        cfg.target_abs_tol.to_bits(),
        cfg.target_rel_tol.to_bits(),
        cfg.max_series_terms
    );
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(16).map(|b| format!("{b:02x}")).collect()
}

fn path(dir: &Path, t_max: f64, cfg: &PrecisionConfig) -> PathBuf {
    dir.join(format!("zeros-{}.json", key(t_max, cfg)))
}

/// A cached scan, if one exists and parses.
pub fn load(dir: &Path, t_max: f64, cfg: &PrecisionConfig) -> Option<ZeroSet> {
    let bytes = std::fs::read(path(dir, t_max, cfg)).ok()?;
    let set: ZeroSet = serde_json::from_slice(&bytes).ok()?;
    (set.t_max == t_max).then_some(set)
}

pub fn store(dir: &Path, t_max: f64, cfg: &PrecisionConfig, set: &ZeroSet) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let bytes = serde_json::to_vec(set).map_err(std::io::Error::other)?;
    let target = path(dir, t_max, cfg);
    let tmp = target.with_extension("tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(tmp, target)
}
