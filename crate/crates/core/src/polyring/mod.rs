//! Exact sparse multivariate polynomials over the rationals.
//!
//! Everything above this module flattens differential polynomials into
//! [`Poly`] values over a shared [`VarTable`] and hands them to the
//! Groebner machinery together with a [`MonomialOrder`].

mod monomial;
mod order;
mod poly;
mod rational;
mod vartable;

pub use monomial::Monomial;
pub use order::{CompiledOrder, InnerOrder, MonomialOrder, OrderBlock, SlotKind};
pub use poly::{poly_arith, ArithOp, Poly};
pub use rational::{int, parse_rational, rat, Rational};
pub use vartable::{VarClass, VarDesc, VarTable};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live over different variable tables")]
    TableMismatch,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("duplicate variable descriptor {0}")]
    DuplicateVariable(String),
    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),
    #[error("variable index {0} out of range")]
    UnknownVariable(usize),
}
