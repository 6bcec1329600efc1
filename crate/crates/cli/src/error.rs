use std::fmt;
use std::process::ExitCode;

use pertinv::formats::{ComplexInputError, InputError};
use pertinv::geom2d::PlanarError;
use pertinv::geom3d::LinkError;
use pertinv::hodge::HodgeError;
use pertinv::solver::SolveError;

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable, malformed or inconsistent input (exit 2).
    Input(String),
    /// Geometric or genericity violation (exit 3).
    Geometry(String),
    /// A solvability or consistency condition fails (exit 4).
    Solvability(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Input(_) => 2,
            CliError::Geometry(_) => 3,
            CliError::Solvability(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Geometry(m) => write!(f, "geometry error: {m}"),
            CliError::Solvability(m) => write!(f, "not solvable: {m}"),
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ComplexInputError> for CliError {
    fn from(e: ComplexInputError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::InvalidInput(m) => CliError::Input(m),
            other => CliError::Solvability(other.to_string()),
        }
    }
}

impl From<HodgeError> for CliError {
    fn from(e: HodgeError) -> Self {
        match e {
            HodgeError::Shape(_)
            | HodgeError::NotAComplex { .. }
            | HodgeError::NotPositiveDefinite { .. }
            | HodgeError::RhsDimension { .. }
            | HodgeError::OperatorDegree { .. } => CliError::Input(e.to_string()),
            HodgeError::Solve(s) => s.into(),
            other => CliError::Solvability(other.to_string()),
        }
    }
}

impl From<LinkError> for CliError {
    fn from(e: LinkError) -> Self {
        CliError::Geometry(e.to_string())
    }
}

impl From<PlanarError> for CliError {
    fn from(e: PlanarError) -> Self {
        CliError::Geometry(e.to_string())
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}
