//! Exact polynomial and rational-function arithmetic.

pub mod factored;
pub mod gcd;
pub mod int;
pub mod modp;
pub mod poly;
pub mod rational;
pub mod var;

pub use factored::{FactorPool, Factored};
pub use gcd::{gcd, gcd_with, GcdStrategy};
pub use int::Int;
pub use poly::Polynomial;
pub use rational::RationalFunction;
pub use var::{Ring, VarKind, Variable};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable {0} is not in the ring")]
    UnknownVariable(String),
}
