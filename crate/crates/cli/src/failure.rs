use std::fmt;

use pendulum_core::Error;

/// Exit status of the binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Validation = 1,
    Usage = 2,
    Degenerate = 3,
    NonCommuting = 4,
}

/// A message on stderr plus the exit code that goes with it.
#[derive(Debug)]
pub struct Failure {
    pub kind: ExitKind,
    pub message: String,
    /// Output still worth printing, e.g. the report of a failed validation.
    pub stdout: Option<String>,
}

impl Failure {
    pub fn new(kind: ExitKind, message: impl Into<String>) -> Self {
        Self { kind, message: message.into(), stdout: None }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(ExitKind::Usage, message)
    }

    pub fn code(&self) -> u8 {
        self.kind as u8
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::SeparatrixUnsupported
            | Error::DegenerateCurve { .. }
            | Error::DegenerateEigenpair { .. } => ExitKind::Degenerate,
            Error::NonCommutingInput { .. } => ExitKind::NonCommuting,
            Error::InvalidArgument(_)
            | Error::ZeroCoupling
            | Error::UnsupportedInitialAngle(_)
            | Error::DimensionMismatch(..) => ExitKind::Usage,
            // numerical breakdown: no dedicated code, report as a failed run
            _ => ExitKind::Validation,
        };
        Self::new(kind, e.to_string())
    }
}
