use thiserror::Error;

use crate::cyclofield::FieldError;
use crate::qseries::{Series, SeriesError};

/// Failures of the series generators (theta quotients, Appell-Lerch sums,
/// Hecke sums, splitting formulas).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("non-generic parameters: 1 - base^(r-1) x z vanishes at r = {r}")]
    NonGenericPole { r: i64 },
    #[error("prefactor j({z}; {base}) vanishes identically")]
    PrefactorZero { z: String, base: String },
    #[error("degenerate parameters: denominator {0} vanishes identically")]
    DegenerateParameters(String),
    #[error("unsupported Hecke form f_{{{a},{b},{c}}}: need b^2 > ac and a, c >= 1")]
    UnsupportedForm { a: i64, b: i64, c: i64 },
    #[error("could not reach precision {target} (best {reached})")]
    PrecisionNotReached { target: i64, reached: i64 },
    #[error("unsupported splitting order n = {0}")]
    UnsupportedOrder(i64),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

impl From<FieldError> for KernelError {
    fn from(e: FieldError) -> Self {
        KernelError::Series(SeriesError::Field(e))
    }
}

/// Runs `eval` at increasing working precision until its result is known
/// modulo `q^target`, then truncates to exactly `target`.
///
/// Precision is lost to negative valuations in products and to division,
/// and how much is only known after evaluating; each retry raises the
/// working precision by the observed deficit.
pub fn refine<F>(target: i64, mut eval: F) -> Result<Series, KernelError>
where
    F: FnMut(i64) -> Result<Series, KernelError>,
{
    let mut work = target;
    let mut reached = i64::MIN;
    for _ in 0..12 {
        let s = eval(work)?;
        if s.prec() >= target {
            return Ok(s.truncate(target));
        }
        reached = reached.max(s.prec());
        work += (target - s.prec()).max(1);
    }
    Err(KernelError::PrecisionNotReached { target, reached })
}
