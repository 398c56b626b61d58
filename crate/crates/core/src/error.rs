use thiserror::Error;

use crate::poly::{ExponentVector, Poly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquationError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("mixed variable naming: {0}")]
    MixedVariables(String),
    #[error("equation is not monic of the form Z^n + lower Z-terms: {0}")]
    NotMonic(String),
    #[error("support condition i_1+...+i_m+k >= {n} violated by exponent {offending}")]
    SupportViolation {
        offending: ExponentVector,
        n: u32,
        /// The expanded polynomial that failed validation, when one exists.
        result: Option<Box<Poly>>,
    },
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("unrecognised field `{0}` (expected `q` or `fp:<p>`)")]
    BadField(String),
    #[error("denominator of {0} vanishes in the coefficient field")]
    DenominatorVanishes(String),
    #[error("{n} is not invertible in characteristic {p}")]
    NotInvertible { n: u32, p: u64 },
    #[error("substitution polynomial has a nonzero constant term")]
    AlphaHasConstantTerm,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpsError {
    #[error("division by zero in Q(eps)")]
    DivisionByZero,
    #[error("pole at eps = {0}")]
    Pole(String),
    #[error("eps-degree {0} exceeds the cap of 64")]
    DegreeCap(usize),
    #[error("value depends on eps but a classical (eps-free) value was required")]
    NotConstant,
    #[error("invalid context: {0}")]
    BadContext(String),
    #[error("invalid hull input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Eps(#[from] EpsError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
