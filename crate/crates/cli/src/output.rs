use std::io::Write;
use std::path::Path;

use crate::error::CliError;
use crate::{Format, OutputArgs};

/// The format to write: explicit, else from the file extension, else the
/// command default. Anything outside `allowed` is an input error.
pub fn resolve(out: &OutputArgs, allowed: &[Format], command: &str) -> Result<Format, CliError> {
    let inferred = out.out.as_deref().and_then(|p| {
        match p.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            "svg" => Some(Format::Svg),
            "pgm" => Some(Format::Pgm),
            "txt" => Some(Format::Text),
            _ => None,
        }
    });
    let f = out.format.or(inferred).unwrap_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::input(format!(
            "{command} cannot write {f:?} output (supported: {allowed:?})"
        )))
    }
}

/// Writes to the file through a temporary sibling and a rename, or to
/// standard output.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
            tmp.write_all(bytes)?;
            tmp.flush()?;
            tmp.persist(p)
                .map_err(|e| CliError::input(format!("{}: {}", p.display(), e.error)))?;
            Ok(())
        }
    }
}

pub fn json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s.into_bytes()
}
