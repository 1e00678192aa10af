use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown atom '{0}'")]
    UnknownAtom(String),

    #[error("parameter {0} lies outside [0,1]")]
    ParameterRange(Rational),

    #[error("state ceiling of {ceiling} exceeded while building {what}")]
    StateCeiling { what: String, ceiling: usize },

    #[error("mean-payoff precondition violated: rewards differ inside end component {states:?}")]
    NonConstantEndComponent { states: Vec<usize> },

    #[error("the environment assumption has probability zero")]
    AssumptionHasZeroProbability,

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("invalid transducer: {0}")]
    Transducer(String),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
