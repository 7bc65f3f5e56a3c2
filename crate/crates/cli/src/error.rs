use std::fmt;
use std::process::ExitCode;

use phaseprint::flow::FlowError;
use phaseprint::index::IndexError;
use phaseprint::normalform::NormalFormError;
use phaseprint::polyfield::PolyError;
use phaseprint::report::ReportError;

/// Exit status of a failed command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    /// Bad flags, unreadable files, unparsable input.
    Input = 1,
    /// The request is well formed but has no solution.
    Infeasible = 2,
    /// A numerical procedure did not converge.
    Numerical = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug)]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            status: Status::Input,
            message: message.into(),
        }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        CliError {
            status: Status::Infeasible,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::input(format!("field: {e}"))
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        let status = match e {
            FlowError::NonIsolatedZeroSet { .. } => Status::Infeasible,
            FlowError::NoConvergence(_) => Status::Numerical,
            FlowError::InvalidDomain(_) | FlowError::SeedOutsideDomain { .. } | FlowError::NoIncludedSeed => {
                Status::Input
            }
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Flow(e) => e.into(),
        }
    }
}

impl From<IndexError> for CliError {
    fn from(e: IndexError) -> Self {
        let status = match e {
            IndexError::NoConvergence { .. } => Status::Numerical,
            _ => Status::Input,
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}

impl From<NormalFormError> for CliError {
    fn from(e: NormalFormError) -> Self {
        let status = match &e {
            NormalFormError::Flow(f) => return f.clone().into(),
            NormalFormError::Inconsistent(_)
            | NormalFormError::NotPoised
            | NormalFormError::InfeasibleInequalities { .. } => Status::Infeasible,
            _ => Status::Input,
        };
        CliError {
            status,
            message: e.to_string(),
        }
    }
}
