//! Error taxonomy shared by all modules.
//!
//! Three failure classes cover everything this crate can do wrong, and they
//! map one-to-one onto the process exit codes used by the command-line
//! frontend: invalid input (1), numerical non-convergence (2), and violation
//! of a physical consistency check (3).

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum DuetError {
    /// A parameter or configuration value violates a documented invariant
    /// (negative mass, coupling beyond the stability bound, malformed config
    /// file, precondition of an operation not met, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An iterative numerical procedure failed to converge to the requested
    /// tolerance (adaptive quadrature exhausted its subdivisions, eigensolver
    /// sweep limit, Newton iteration stalled, relaxation plateau not reached).
    #[error("numerical non-convergence: {0}")]
    Numerics(String),

    /// A result violates a physical consistency requirement (uncertainty
    /// relation, positive definiteness, stationarity) beyond tolerance —
    /// usually a sign of a misconfigured computation rather than bad input.
    #[error("physicality check failed: {0}")]
    Physicality(String),
}

impl DuetError {
    /// Exit code used by the command-line frontend for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            DuetError::InvalidParameter(_) => 1,
            DuetError::Numerics(_) => 2,
            DuetError::Physicality(_) => 3,
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, DuetError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_distinguish_error_classes() {
        assert_eq!(DuetError::InvalidParameter("x".into()).exit_code(), 1);
        assert_eq!(DuetError::Numerics("x".into()).exit_code(), 2);
        assert_eq!(DuetError::Physicality("x".into()).exit_code(), 3);
    }

    #[test]
    fn messages_carry_the_failing_invariant() {
        let e = DuetError::InvalidParameter("gamma must be >= 0".into());
        assert!(e.to_string().contains("gamma must be >= 0"));
    }
}
