use thiserror::Error;

/// Errors raised by the symbolic engine and its front end.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("undeclared identifier `{name}` at {pos}")]
    Undeclared { name: String, pos: usize },
    #[error("invalid declaration: {0}")]
    Declaration(String),
    #[error("division by an identically zero expression")]
    DivisionByZero,
    #[error("cyclic substitution involving `{0}`")]
    CyclicBinding(String),
    #[error("expression is not polynomial in `{0}`")]
    NotPolynomial(String),
    #[error("total derivative of `{0}` would need a third-order jet")]
    ThirdOrderJet(String),
    #[error("metric is singular")]
    SingularMetric,
    #[error("metric is not symmetric")]
    AsymmetricMetric,
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("seed is not an exact symmetry: {0}")]
    NotExactSymmetry(String),
    #[error("constraint is nonlinear in the unknown constants: {0}")]
    Nonlinear(String),
    #[error("unsupported function class: {0}")]
    UnsupportedFunctionClass(String),
    #[error("{file}:{line}: {msg}")]
    Dsl {
        file: String,
        line: usize,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
