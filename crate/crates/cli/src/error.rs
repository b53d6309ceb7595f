//! Process-facing errors, classified by exit code.

use formopt_core::Error as CoreError;

/// Harness error. The variant decides the process exit code: configuration
/// problems exit 2, dataset problems exit 3, everything that fails at run
/// time (training, evaluation, I/O) exits 4.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        CliError::Data(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        CliError::Runtime(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Config(_) => CliError::Config(msg),
            CoreError::Data(_) => CliError::Data(msg),
            CoreError::Evaluation(_) | CoreError::Training(_) => CliError::Runtime(msg),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::config("x").exit_code(), 2);
        assert_eq!(CliError::data("x").exit_code(), 3);
        assert_eq!(CliError::runtime("x").exit_code(), 4);
    }

    #[test]
    fn core_errors_map_onto_the_three_classes() {
        assert_eq!(CliError::from(CoreError::config("c")).exit_code(), 2);
        assert_eq!(CliError::from(CoreError::data("d")).exit_code(), 3);
        assert_eq!(CliError::from(CoreError::evaluation("e")).exit_code(), 4);
        assert_eq!(CliError::from(CoreError::training("t")).exit_code(), 4);
    }
}
