//! Run-directory layout and atomic file writes: everything lands in
//! `<outdir>/<experiment>-<timestamp>[-pNNN]/`, files are written to a
//! temporary name and renamed, and a failed run removes its directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use crate::CliError;

/// Civil UTC date-time from the unix epoch (days algorithm, no local zones).
fn timestamp() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let days = (secs / 86_400) as i64;
    let tod = secs % 86_400;
    // civil-from-days
    let z = days + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097);
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = doy - (153 * mp + 2) / 5 + 1;
    let m = if mp < 10 { mp + 3 } else { mp - 9 };
    let y = if m <= 2 { y + 1 } else { y };
    format!(
        "{:04}{:02}{:02}-{:02}{:02}{:02}",
        y,
        m,
        d,
        tod / 3600,
        (tod % 3600) / 60,
        tod % 60
    )
}

/// Create a fresh run directory, deduplicating with numeric suffixes so
/// sweeps never clobber one another.
pub fn create_run_dir(
    outdir: &Path,
    experiment: &str,
    point: Option<usize>,
) -> Result<PathBuf, CliError> {
    fs::create_dir_all(outdir).map_err(|e| CliError::Io(format!("{}: {e}", outdir.display())))?;
    let stamp = timestamp();
    let base = match point {
        Some(i) => format!("{experiment}-{stamp}-p{i:03}"),
        None => format!("{experiment}-{stamp}"),
    };
    for attempt in 0..1000 {
        let name = if attempt == 0 { base.clone() } else { format!("{base}-{attempt}") };
        let dir = outdir.join(&name);
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(CliError::Io(format!("{}: {e}", dir.display()))),
        }
    }
    Err(CliError::Io(format!("could not find a free run directory under {base}")))
}

/// Write via temp-name + rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let tmp = dir.join(format!(".tmp-{name}"));
    let final_path = dir.join(name);
    fs::write(&tmp, contents).map_err(|e| CliError::Io(format!("{}: {e}", tmp.display())))?;
    fs::rename(&tmp, &final_path)
        .map_err(|e| CliError::Io(format!("{}: {e}", final_path.display())))?;
    Ok(())
}

/// Remove a run directory after a failure so no partial outputs survive.
pub fn cleanup_dir(dir: &Path) {
    let _ = fs::remove_dir_all(dir);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_dirs_never_clobber() {
        let tmp = tempfile::tempdir().unwrap();
        let a = create_run_dir(tmp.path(), "spectrum", None).unwrap();
        let b = create_run_dir(tmp.path(), "spectrum", None).unwrap();
        assert_ne!(a, b);
        assert!(a.exists() && b.exists());
    }

    #[test]
    fn atomic_write_and_cleanup() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = create_run_dir(tmp.path(), "star", Some(3)).unwrap();
        assert!(dir.file_name().unwrap().to_str().unwrap().contains("-p003"));
        write_atomic(&dir, "summary.json", "{}").unwrap();
        assert_eq!(fs::read_to_string(dir.join("summary.json")).unwrap(), "{}");
        cleanup_dir(&dir);
        assert!(!dir.exists());
    }
}
