use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Exit code 2 for bad input, 1 for everything else.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(s) => write!(f, "invalid input: {s}"),
            CliError::Internal(s) => write!(f, "{s}"),
        }
    }
}

pub fn input<E: fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

pub fn internal<E: fmt::Display>(e: E) -> CliError {
    CliError::Internal(e.to_string())
}

pub struct OutDir {
    dir: PathBuf,
}

impl OutDir {
    pub fn new(dir: PathBuf) -> Result<Self, CliError> {
        std::fs::create_dir_all(&dir)
            .map_err(|e| CliError::Input(format!("output directory {}: {e}", dir.display())))?;
        Ok(Self { dir })
    }

    /// Writes through a temporary file in the same directory, then renames.
    pub fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(internal)?;
        tmp.write_all(contents.as_bytes()).map_err(internal)?;
        tmp.persist(&path).map_err(|e| internal(e.error))?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn write_json<T: serde::Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut s = serde_json::to_string_pretty(value).map_err(internal)?;
        s.push('\n');
        self.write(name, &s)
    }
}

pub fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
