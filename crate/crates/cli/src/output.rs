use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Exit code 1 for failed mathematical checks, 2 for bad input or I/O.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Check(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Check(m) => f.write_str(m),
        }
    }
}

impl From<polarnorm::Error> for Failure {
    fn from(e: polarnorm::Error) -> Self {
        use polarnorm::Error::*;
        match e {
            InternalConsistency(_) | NumericalInconsistency(_) | Convergence { .. } => {
                Failure::Check(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("cannot parse {}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> Outcome<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::Input(format!("cannot serialize output: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path` via a temporary file in the same directory, or to stdout.
pub fn emit<T: Serialize>(value: &T, path: Option<&Path>) -> Outcome {
    let text = to_json(value)?;
    match path {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn write_atomic(path: &Path, text: &str) -> Outcome {
    let io = |e: std::io::Error| Failure::Input(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn note(quiet: bool, msg: impl fmt::Display) {
    if !quiet {
        eprintln!("{msg}");
    }
}
