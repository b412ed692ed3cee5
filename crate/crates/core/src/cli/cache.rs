//! JSONL cache of enumerated transfer systems: one record per system, in
//! lectic order. A cache file is only written once an enumeration finishes,
//! so every file on disk is complete.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::groups::GroupSpec;
use crate::transfer::{for_each_with_certificate, ArrowQuotient, TransferSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemRecord {
    /// Hex class vector.
    pub class_vector: String,
    /// Size of a minimal generating set.
    pub m: usize,
    /// Representative arrows of the canonical minimal generating set.
    pub certificate: Vec<(usize, usize)>,
}

impl SystemRecord {
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records always serialize")
    }
}

/// Cache file name for a group under a given arrow-universe digest.
pub fn cache_path(dir: &Path, spec: &GroupSpec, digest: &str) -> PathBuf {
    let spec = spec.to_string().replace(':', "_");
    dir.join(format!(
        "tsk-{}-{spec}-{}.jsonl",
        env!("CARGO_PKG_VERSION"),
        &digest[..16.min(digest.len())]
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Visit {
    pub visited: u64,
    /// False if the budget stopped the walk.
    pub complete: bool,
    pub from_cache: bool,
}

/// Whether `path` holds a well-formed cache for `quotient`; returns the
/// record count.
fn valid_cache(path: &Path, quotient: &ArrowQuotient) -> Option<u64> {
    let reader = BufReader::new(File::open(path).ok()?);
    let mut count = 0;
    for line in reader.lines() {
        let record: SystemRecord = serde_json::from_str(&line.ok()?).ok()?;
        TransferSystem::from_hex(&record.class_vector, quotient.len()).ok()?;
        if record.certificate.len() != record.m {
            return None;
        }
        count += 1;
    }
    (count > 0).then_some(count)
}

/// Feeds every transfer system to `sink` in lectic order, reading the cache
/// when a valid one exists and otherwise enumerating (and filling the cache
/// if the walk completes).
pub fn visit_systems(
    quotient: &ArrowQuotient,
    cache: Option<PathBuf>,
    budget: u64,
    mut sink: impl FnMut(&SystemRecord),
) -> Result<Visit> {
    if let Some(path) = cache.as_deref() {
        if let Some(total) = valid_cache(path, quotient) {
            let reader = BufReader::new(File::open(path)?);
            let mut visited = 0;
            for line in reader.lines() {
                if visited == budget {
                    break;
                }
                let record: SystemRecord = serde_json::from_str(&line?).map_err(|e| crate::Error::Io(e.to_string()))?;
                sink(&record);
                visited += 1;
            }
            return Ok(Visit {
                visited,
                complete: total <= budget,
                from_cache: true,
            });
        }
    }

    let tmp = cache
        .as_deref()
        .map(|p| p.with_extension(format!("jsonl.tmp{}", std::process::id())));
    let mut writer = match (&tmp, cache.as_deref().and_then(Path::parent)) {
        (Some(tmp), Some(dir)) => {
            std::fs::create_dir_all(dir)?;
            Some(BufWriter::new(File::create(tmp)?))
        }
        _ => None,
    };
    let mut write_error = None;
    let (visited, complete) = for_each_with_certificate(quotient, budget, |t, cert| {
        let record = SystemRecord {
            class_vector: t.to_hex(),
            m: cert.size,
            certificate: cert.arrows.clone(),
        };
        if let Some(w) = writer.as_mut() {
            if let Err(e) = writeln!(w, "{}", record.to_line()) {
                write_error.get_or_insert(e);
            }
        }
        sink(&record);
    });
    if let (Some(mut w), Some(tmp), Some(path)) = (writer, tmp, cache) {
        let flushed = w.flush();
        drop(w);
        if complete && write_error.is_none() && flushed.is_ok() {
            std::fs::rename(&tmp, &path)?;
        } else {
            let _ = std::fs::remove_file(&tmp);
        }
    }
    Ok(Visit {
        visited,
        complete,
        from_cache: false,
    })
}
