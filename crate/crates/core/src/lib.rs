//! Stochastic high-quality synthesis for LTL\[F\].
//!
//! The pipeline compiles a quantitative temporal formula into a family of
//! deterministic parity automata (one per attainable satisfaction value),
//! composes them into a Markov decision process whose mean-payoff optimum is
//! the best expected satisfaction value, and extracts a finite-state
//! transducer from an optimal strategy. The [`transducer`] module holds the
//! independent evaluation engine used to certify emitted transducers.

pub mod automata;
pub mod boolean;
pub mod error;
pub mod fltl;
pub mod graph;
pub mod mdp;
pub mod rational;
pub mod synthesis;
pub mod transducer;

pub use error::{Error, Result};
pub use fltl::{Alphabet, Formula, LassoWord};
pub use rational::Rational;
