//! Error type carrying the process exit code.
//!
//! The taxonomy is part of the interface: 0 success, 2 configuration or
//! validation error, 3 I/O error, 4 infeasible request, 5 verification
//! failure. Scripts branch on these.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unparseable or self-contradictory config. Exit 2.
    Config(String),
    /// A filesystem failure while reading or writing. Exit 3.
    Io(String),
    /// A well-formed request with no answer: unreachable target, moments no
    /// prior can match, a layout with an empty arm. Exit 4.
    Infeasible(String),
    /// The closed form and the Monte Carlo estimate disagree beyond
    /// tolerance. Exit 5.
    Verification(String),
    /// Errors surfaced by the core library keep their own classification.
    Core(pst_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Io(_) => 3,
            Self::Infeasible(_) => 4,
            Self::Verification(_) => 5,
            Self::Core(e) => match e {
                pst_core::Error::InvalidParameter { .. }
                | pst_core::Error::TooFewReps { .. }
                | pst_core::Error::NumericDegeneracy(_) => 2,
                pst_core::Error::InfeasibleLayout { .. }
                | pst_core::Error::InfeasibleMoments { .. }
                | pst_core::Error::InfeasibleTarget { .. } => 4,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(msg) => write!(f, "configuration error: {msg}"),
            Self::Io(msg) => write!(f, "i/o error: {msg}"),
            Self::Infeasible(msg) => write!(f, "infeasible request: {msg}"),
            Self::Verification(msg) => write!(f, "verification failed: {msg}"),
            Self::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pst_core::Error> for CliError {
    fn from(e: pst_core::Error) -> Self {
        Self::Core(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_taxonomy() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
        assert_eq!(CliError::Io("x".into()).exit_code(), 3);
        assert_eq!(CliError::Infeasible("x".into()).exit_code(), 4);
        assert_eq!(CliError::Verification("x".into()).exit_code(), 5);
        assert_eq!(
            CliError::Core(pst_core::Error::InvalidParameter {
                name: "eta",
                reason: "bad".into()
            })
            .exit_code(),
            2
        );
        assert_eq!(
            CliError::Core(pst_core::Error::InfeasibleTarget {
                target: 0.7,
                limit: 0.69
            })
            .exit_code(),
            4
        );
        assert_eq!(
            CliError::Core(pst_core::Error::TooFewReps { reps: 5, min: 1000 }).exit_code(),
            2
        );
    }
}
