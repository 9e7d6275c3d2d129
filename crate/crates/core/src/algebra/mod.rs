//! Exact arithmetic on characters of the torus `G = (C*)^3 x (C*)^r`.
//!
//! A character is a Laurent polynomial in `t1, t2, t3, w1, ..., wr` with
//! integer coefficients ([`CharPoly`]), or a quotient of one by a product of
//! factors `(1 - m)` ([`CharRational`]). Infinite-dimensional
//! representations such as the ring of functions on an affine patch are
//! carried in the rational form and only become finite after the Čech
//! assembly cancels every denominator.

mod expand;
mod monomial;
mod poly;
mod rational;
mod weight;

pub use expand::{expand_to_order, ExpansionCone};
pub use monomial::{Monomial, VarContext};
pub use poly::CharPoly;
pub use rational::CharRational;
pub use weight::{Specialization, WeightForm};

use thiserror::Error;

/// Failures of the character algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable context mismatch: rank {left} vs rank {right}")]
    ContextMismatch { left: usize, right: usize },
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("coefficient overflow")]
    CoefficientOverflow,
    #[error("denominator factor (1 - 1) is not allowed")]
    UnitDenominator,
    #[error("numerator is not divisible by the denominator: {0}")]
    NotPolynomial(String),
    #[error("denominator factor {0} cannot be expanded in the chosen cone")]
    NonExpandable(String),
    #[error("expansion cone does not match the variable context")]
    BadCone,
    #[error("specialization violates s1 + s2 + s3 = 0")]
    NotCalabiYau,
    #[error("specialization has {got} v-values, context needs {expected}")]
    SpecializationArity { expected: usize, got: usize },
}
