//! JSON serialization of instances and solutions.
//!
//! The canonical on-disk form is `serde_json` pretty-printing plus a trailing
//! newline; writing an instance that was read from a canonical file
//! reproduces it byte for byte.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::model::{Instance, Solution};

#[derive(Debug)]
pub enum IoError {
    Read { path: PathBuf, source: std::io::Error },
    Write { path: PathBuf, source: std::io::Error },
    Parse { path: PathBuf, source: serde_json::Error },
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Read { path, source } => {
                write!(f, "cannot read {}: {source}", path.display())
            }
            IoError::Write { path, source } => {
                write!(f, "cannot write {}: {source}", path.display())
            }
            IoError::Parse { path, source } => {
                write!(f, "invalid JSON in {}: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for IoError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            IoError::Read { source, .. } | IoError::Write { source, .. } => Some(source),
            IoError::Parse { source, .. } => Some(source),
        }
    }
}

/// Canonical textual form of an instance.
pub fn instance_to_string(instance: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(instance).expect("instance serialization is total");
    s.push('\n');
    s
}

pub fn instance_from_str(text: &str) -> Result<Instance, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn read_instance(path: &Path) -> Result<Instance, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_owned(),
        source,
    })?;
    instance_from_str(&text).map_err(|source| IoError::Parse {
        path: path.to_owned(),
        source,
    })
}

pub fn write_instance(path: &Path, instance: &Instance) -> Result<(), IoError> {
    fs::write(path, instance_to_string(instance)).map_err(|source| IoError::Write {
        path: path.to_owned(),
        source,
    })
}

/// Canonical textual form of a solution.
pub fn solution_to_string(solution: &Solution) -> String {
    let mut s = serde_json::to_string_pretty(solution).expect("solution serialization is total");
    s.push('\n');
    s
}

pub fn write_solution(path: &Path, solution: &Solution) -> Result<(), IoError> {
    fs::write(path, solution_to_string(solution)).map_err(|source| IoError::Write {
        path: path.to_owned(),
        source,
    })
}

pub fn read_solution(path: &Path) -> Result<Solution, IoError> {
    let text = fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| IoError::Parse {
        path: path.to_owned(),
        source,
    })
}
