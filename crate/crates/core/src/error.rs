use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A theorem hypothesis (e.g. non-exceptional target) is violated.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// An orbit grew past the configured digit budget.
    #[error("orbit digit budget exceeded after step {last_step}: {digits} digits (budget {budget})")]
    OrbitBudget {
        last_step: usize,
        digits: u64,
        budget: u64,
    },

    /// A symbolic composition would exceed the configured degree budget.
    #[error("symbolic degree budget exceeded: degree {degree} > {budget}")]
    DegreeBudget { degree: u64, budget: u64 },

    /// Factoring ran out of its operation budget with a composite cofactor left.
    #[error("partial factorization: cofactor {cofactor} not split within budget")]
    PartialFactorization { cofactor: String },

    /// A search ran out of budget without a verdict.
    #[error("indeterminate: {0}")]
    Indeterminate(String),

    /// The canonical-height tolerance was not reached; carries the best estimate.
    #[error("canonical height tolerance not reached: estimate {value} +/- {error_bound}")]
    HeightTolerance { value: f64, error_bound: f64 },

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit status: 2 for bad input, 3 for a violated hypothesis,
    /// 4 for an exhausted budget, 1 for i/o failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Hypothesis(_) => 3,
            e if e.is_budget() => 4,
            Error::Io(_) => 1,
            _ => 2,
        }
    }

    /// Stable snake-case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Hypothesis(_) => "hypothesis",
            Error::OrbitBudget { .. } => "orbit_budget",
            Error::DegreeBudget { .. } => "degree_budget",
            Error::PartialFactorization { .. } => "partial_factorization",
            Error::Indeterminate(_) => "indeterminate",
            Error::HeightTolerance { .. } => "height_tolerance",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    /// True for every budget-exhaustion variant.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::OrbitBudget { .. }
                | Error::DegreeBudget { .. }
                | Error::PartialFactorization { .. }
                | Error::Indeterminate(_)
                | Error::HeightTolerance { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
