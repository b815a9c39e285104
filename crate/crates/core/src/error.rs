use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The polynomial is not a perfect k-th power.
    #[error("no exact root")]
    NoRoot,

    /// Some root of the polynomial is not a root of unity.
    #[error("not a product of cyclotomic polynomials")]
    NotCyclotomicProduct,

    /// A computation exceeded a size cap and was not attempted.
    #[error("refused: {0}")]
    Refused(String),

    #[error("syntax error at offset {offset}: expected one of {expected:?}")]
    Syntax {
        offset: usize,
        expected: Vec<String>,
    },

    /// Point counts that cannot come from the zeta function of a curve.
    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("template definition error: {0}")]
    Template(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
