//! Reading inputs and writing outputs. Outputs go through a temporary file in
//! the destination directory and are renamed into place, so a failed run never
//! leaves a half-written artifact.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;

use crate::error::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_toml<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse_toml(path, &read_text(path)?)
}

pub fn parse_toml<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::config(path, e.to_string().trim_end()))
}

fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(contents.as_bytes())
        .and_then(|_| tmp.as_file().sync_all())
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Files queued for writing once every computation has succeeded.
#[derive(Default)]
pub struct Outputs {
    dirs: Vec<PathBuf>,
    files: Vec<(PathBuf, String)>,
}

impl Outputs {
    pub fn dir(&mut self, path: &Path) {
        self.dirs.push(path.to_path_buf());
    }

    pub fn file(&mut self, path: impl Into<PathBuf>, contents: String) {
        self.files.push((path.into(), contents));
    }

    pub fn commit(self) -> Result<(), CliError> {
        for d in &self.dirs {
            fs::create_dir_all(d).map_err(|e| CliError::io(d, e))?;
        }
        for (path, contents) in &self.files {
            write_atomic(path, contents)?;
        }
        Ok(())
    }
}
