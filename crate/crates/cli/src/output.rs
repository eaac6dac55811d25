use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::Failure;

/// Writes `bytes` to a temporary file beside `path`, then renames it over
/// `path`, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.flush().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    bytes
}

/// Sends JSON to `out` with a one-line summary on stdout, or the JSON
/// itself to stdout when no path is given.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>, summary: &str) -> Result<(), Failure> {
    let bytes = to_json(value);
    match out {
        Some(path) => {
            write_atomic(path, &bytes)?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            std::io::stdout().write_all(&bytes).map_err(|e| Failure::Usage(e.to_string()))?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}
