//! Error type shared by every layer of the engine.

use thiserror::Error;

/// Everything that can go wrong, from coefficient parsing up to numeric
/// quadrature. One flat enum so callers can match on the variant they care
/// about without unwrapping nested error types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed coefficient expression; `pos` is a byte offset into the input.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// An identifier in a coefficient expression is not a declared parameter.
    #[error("unknown symbol `{name}` at byte {pos}")]
    UnknownSymbol { name: String, pos: usize },

    /// A parameter name that the engine cannot accept (e.g. the independent
    /// variable `x`, a duplicate, or a non-identifier).
    #[error("invalid symbol name `{name}`: {msg}")]
    InvalidSymbol { name: String, msg: String },

    /// Division by an exactly-zero quantity. Carries a byte position when it
    /// was written literally in an input expression.
    #[error("division by zero{}", match pos { Some(p) => format!(" at byte {p}"), None => String::new() })]
    DivisionByZero { pos: Option<usize> },

    /// Two values built over different parameter alphabets were combined.
    #[error("symbol table mismatch: [{left}] vs [{right}]")]
    SymbolTableMismatch { left: String, right: String },

    /// The linear system for a splitting has an exactly-zero determinant.
    /// Reachable only when two singular points coincide symbolically.
    #[error("splitting system is singular (coincident singular points)")]
    SingularSystem,

    /// Two singular points were given the same constant value.
    #[error("singular points #{first} and #{second} coincide")]
    CoincidentSingularities { first: usize, second: usize },

    /// An operation needed the lowest operator coefficient but the operator
    /// was built as a family (accessory part left free).
    #[error("operator has no accessory part; build it with one or factor the family first")]
    MissingAccessory,

    /// A polynomial exceeded the degree bound its slot allows.
    #[error("degree overflow: got degree {degree}, slot allows at most {max}")]
    DegreeOverflow { degree: usize, max: usize },

    /// A splitting mask does not fit the operator it was paired with.
    #[error("mask mismatch: expected {expected}, got {got}")]
    MaskMismatch { expected: String, got: String },

    /// An identity that only holds in the half-exponent case was requested
    /// for an operator that is not in that case.
    #[error("operator exponents are not all 1/2")]
    NotLame,

    /// An internal cross-check that must hold by construction failed.
    #[error("internal consistency check failed: {what}")]
    ConsistencyFailure { what: String },

    /// A candidate closed-form solution does not annihilate the operator.
    #[error("solution residual is not identically zero: {numerator}")]
    NonZeroResidual { numerator: String },

    /// A numeric-domain precondition failed (point outside interval,
    /// singular point inside the integration range, ...).
    #[error("domain error: {msg}")]
    DomainError { msg: String },

    /// A numeric evaluation was requested but some quantity still contains
    /// free parameters.
    #[error("value still contains free parameters; bind them to rationals first")]
    SymbolicParameters,

    /// A quadrature tolerance that is not a finite positive number.
    #[error("invalid tolerance {tol}; need a finite positive number")]
    InvalidTolerance { tol: f64 },

    /// Adaptive quadrature hit its recursion-depth limit before converging.
    #[error("quadrature did not converge within the depth limit")]
    QuadratureDepthExceeded,
}

pub type Result<T> = std::result::Result<T, Error>;
