use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::error::{CliError, CliResult};

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file. `None` means stdout.
pub fn write_atomic(path: Option<&Path>, contents: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        out.write_all(contents.as_bytes()).map_err(io)?;
        return out.flush().map_err(io);
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error.to_string()))?;
    Ok(())
}
