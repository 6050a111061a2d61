//! Error type of the command line, carrying the exit code class.

use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or data; exit code 1.
    Invalid(String),
    /// Filesystem or network trouble; exit code 2.
    Io(String),
}

impl Failure {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Failure::Invalid(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<cohort_core::Error> for Failure {
    fn from(e: cohort_core::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        cohort_core::Error::from(e).into()
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        cohort_core::Error::from(e).into()
    }
}

pub type CliResult<T> = Result<T, Failure>;

/// Attaches the path to a failure message.
pub trait WithPath<T> {
    fn at(self, path: &Path) -> CliResult<T>;
}

impl<T, E: Into<Failure>> WithPath<T> for Result<T, E> {
    fn at(self, path: &Path) -> CliResult<T> {
        self.map_err(|e| match e.into() {
            Failure::Invalid(m) => Failure::Invalid(format!("{}: {m}", path.display())),
            Failure::Io(m) => Failure::Io(format!("{}: {m}", path.display())),
        })
    }
}
