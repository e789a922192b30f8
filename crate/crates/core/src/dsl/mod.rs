//! A small expression language for q-series identities.
//!
//! ```text
//! J(1,2)*phi(q) == f(2,3,2; q^2, q^2; q)
//! q^2*phi(q^9) - (psi(w*q) - psi(w^2*q))/(w - w^2) == -q*J(1,2)/J(3,6)*J(3,15)*Jm(6)/Jm(3)
//! ```
//!
//! Precedence from loosest to tightest: `+ -`, `* /`, unary `-`, postfix
//! `^n`. Function arguments of different kinds are separated by `;`.
//! Literals are integers; rationals are written as quotients.

mod ast;
pub(crate) mod eval;
mod parse;

pub use ast::{Call, Expr, IdentityFile, Statement, Sym};
pub use eval::{eval, EvalError};
pub use parse::{parse_expr, parse_file, parse_identity, ParseError};
