use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use ivmap_core::branch::DEFAULT_BRANCH_CAP;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_REFUTED: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;

/// Environment variable overriding the default branch budget.
pub const CAP_ENV: &str = "IVMAP_BRANCH_CAP";

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<ivmap_core::Error> for Failure {
    fn from(e: ivmap_core::Error) -> Self {
        let code = match e {
            ivmap_core::Error::BranchCapExceeded { .. } => EXIT_INCONCLUSIVE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

pub fn branch_cap(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{CAP_ENV}={v:?} is not a branch count"))),
        Err(_) => Ok(DEFAULT_BRANCH_CAP),
    }
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set (reproducible
/// documents).
pub fn now_unix() -> u64 {
    if let Some(t) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|v| v.parse().ok()) {
        return t;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Write the whole file or nothing: a temporary file in the target's
/// directory, renamed into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::usage(format!("writing {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(contents).map_err(fail)?;
    #[cfg(unix)]
    {
        // tempfile creates 0600; documents are meant to be shared
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(fail)?;
    }
    tmp.as_file().sync_all().map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}

pub fn read_to_string(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("reading {}: {e}", path.display())))
}

pub fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}
