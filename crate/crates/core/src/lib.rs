//! Exact q-series kernel for theta functions, Appell-Lerch sums, Hecke-type
//! double sums and the tenth-order mock theta functions, together with an
//! identity catalog, a small expression language and a verification engine.

pub mod appell;
pub mod catalog;
pub mod cli;
pub mod cyclofield;
pub mod dn;
pub mod dsl;
pub mod error;
pub mod hecke;
pub mod mock;
pub mod qseries;
pub mod theta;

pub use cyclofield::CycNum;
pub use error::KernelError;
pub use qseries::{Base, Monomial, Series, Unit};
