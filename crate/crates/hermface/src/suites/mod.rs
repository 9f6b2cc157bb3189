//! Randomized and exhaustive checks, one module per subcommand.

pub mod albert;
pub mod cone;
pub mod lattice;
pub mod r5;
pub mod sections;

use hermface_core::Field;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UsageError {
    #[error("{0}")]
    Combination(String),
    #[error("unknown shape {0:?}; known shapes: {1}")]
    UnknownShape(String, String),
}

/// Options shared by every suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub field: Option<Field>,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub tol: Option<f64>,
    pub timed: bool,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        SuiteConfig { field: None, n: None, trials: None, seed, tol: None, timed: false }
    }

    pub fn trials(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    pub fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    /// The associative fields selected, all three by default.
    pub(crate) fn associative_fields(&self, suite: &str) -> Result<Vec<Field>, UsageError> {
        match self.field {
            Some(Field::O) => Err(UsageError::Combination(format!(
                "{suite} needs an associative field (R, C or H); octonions are covered by verify-albert"
            ))),
            Some(f) => Ok(vec![f]),
            None => Ok(Field::ASSOCIATIVE.to_vec()),
        }
    }

    pub(crate) fn check_n(&self, lo: usize, hi: usize) -> Result<(), UsageError> {
        match self.n {
            Some(n) if n < lo || n > hi => Err(UsageError::Combination(format!("n must lie in {lo}..={hi}, got {n}"))),
            _ => Ok(()),
        }
    }
}
