use std::fmt;
use std::path::{Path, PathBuf};

use syncong::algebra::AlgFile;
use syncong::languages::Dfa;
use syncong::profinite::InverseSystem;
use syncong::{Error, SubsetL};

/// Errors at the command-line boundary: I/O with the offending path, core
/// errors tied to a file, and everything else from the library.
#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, std::io::Error),
    InFile(PathBuf, Error),
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::InFile(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    /// Internal invariant violations get their own exit code so CI can
    /// tell bugs from bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InFile(_, Error::Internal(_)) | CliError::Core(Error::Internal(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

pub fn load_algebra(path: &Path) -> CliResult<AlgFile> {
    syncong::parse_algebra(&read(path)?).map_err(|e| CliError::InFile(path.to_path_buf(), e))
}

pub fn load_system(path: &Path) -> CliResult<InverseSystem> {
    syncong::parse_system(&read(path)?).map_err(|e| CliError::InFile(path.to_path_buf(), e))
}

pub fn load_dfa(path: &Path) -> CliResult<Dfa> {
    syncong::parse_dfa(&read(path)?).map_err(|e| CliError::InFile(path.to_path_buf(), e))
}

/// A subset selector: comma-separated element indices (`0,2`) or the name
/// of a subset declared in the algebra file.
pub fn subset_selector(spec: &str, file: &AlgFile) -> CliResult<SubsetL> {
    let carrier = file.algebra.carrier_size();
    if spec.chars().all(|c| c.is_ascii_digit() || c == ',') && !spec.is_empty() {
        let indices = parse_indices(spec)?;
        return SubsetL::from_indices(carrier, &indices).map_err(CliError::Core);
    }
    file.subset(spec)
        .cloned()
        .ok_or_else(|| CliError::Core(Error::UnknownSymbol(spec.to_string())))
}

pub fn parse_indices(spec: &str) -> CliResult<Vec<usize>> {
    spec.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::Core(Error::BadParameter(format!("`{t}` is not an index"))))
        })
        .collect()
}

/// A cylinder selector `level:indices`, e.g. `2:0,2`.
pub fn cylinder_selector(spec: &str) -> CliResult<(usize, Vec<usize>)> {
    let (level, rest) = spec.split_once(':').ok_or_else(|| {
        CliError::Core(Error::BadParameter(format!(
            "cylinder selector `{spec}` must look like level:indices"
        )))
    })?;
    let level = level.parse::<usize>().map_err(|_| {
        CliError::Core(Error::BadParameter(format!("`{level}` is not a level")))
    })?;
    Ok((level, parse_indices(rest)?))
}

/// A per-level partition selector `level:blocks`, e.g. `2:0,2/1,3`. The
/// block text is returned raw; it can only be parsed once the carrier of
/// that level is known.
pub fn level_partition_selector(spec: &str) -> CliResult<(usize, String)> {
    let (level, rest) = spec.split_once(':').ok_or_else(|| {
        CliError::Core(Error::BadParameter(format!(
            "selector `{spec}` must look like level:blocks"
        )))
    })?;
    let level = level.parse::<usize>().map_err(|_| {
        CliError::Core(Error::BadParameter(format!("`{level}` is not a level")))
    })?;
    Ok((level, rest.to_string()))
}

/// A variable assignment `x=1,y=2`.
pub fn assignment_selector(spec: &str) -> CliResult<syncong::Assignment> {
    let mut out = syncong::Assignment::new();
    for entry in spec.split(',').filter(|t| !t.is_empty()) {
        let (var, value) = entry.split_once('=').ok_or_else(|| {
            CliError::Core(Error::BadParameter(format!(
                "assignment entry `{entry}` must look like var=value"
            )))
        })?;
        let value = value.parse::<usize>().map_err(|_| {
            CliError::Core(Error::BadParameter(format!("`{value}` is not a value")))
        })?;
        out.set(var, value);
    }
    Ok(out)
}
