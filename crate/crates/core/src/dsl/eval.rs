use thiserror::Error;

use super::ast::{Call, Expr};
use crate::appell::{m_series, AppellArg};
use crate::dn::{dn_def, DnArg};
use crate::error::KernelError;
use crate::hecke::{f_hecke, HeckeParams};
use crate::mock::mock_at;
use crate::qseries::{Base, Monomial, Series, SeriesError};
use crate::theta::{j_m_base, poch_finite, poch_inf, theta_j};

/// Attempts before giving up on reaching the requested precision.
const MAX_ROUNDS: usize = 12;

/// An evaluation failure together with the path from the root to the node
/// that raised it, e.g. `rhs / 0:* / 1:m(q; q; q)`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at {path}: {source}")]
pub struct EvalError {
    pub path: String,
    pub source: KernelError,
}

fn fail(path: &[String], source: impl Into<KernelError>) -> EvalError {
    EvalError { path: path.join(" / "), source: source.into() }
}

fn pos_base(path: &[String], m: i64) -> Result<Base, EvalError> {
    Base::new(Monomial::q(m)).map_err(|e| fail(path, e))
}

fn eval_call(c: &Call, w: i64, path: &[String]) -> Result<Series, EvalError> {
    let r: Result<Series, KernelError> = match *c {
        Call::Theta { x, base } => Ok(theta_j(x, base, w)),
        Call::J { a, m } => return Ok(theta_j(Monomial::q(a), pos_base(path, m)?, w)),
        Call::Jbar { a, m } => return Ok(theta_j(Monomial::neg_q(a), pos_base(path, m)?, w)),
        Call::Jm { m } => {
            pos_base(path, m)?;
            Ok(j_m_base(Base::q(1), m, w))
        }
        Call::Poch { x, base, n: Some(n) } => Ok(poch_finite(x, base, n, w)),
        Call::Poch { x, base, n: None } => poch_inf(x, base, w).map_err(Into::into),
        Call::Appell { x, base, z } => m_series(AppellArg::new(x, base, z), w),
        Call::Hecke { a, b, c, x, y, base } => f_hecke(HeckeParams::new(a, b, c, x, y, base), w),
        Call::Dn { n, x, base, z, zp } => DnArg::new(n, x, base, z, zp).and_then(|d| dn_def(d, w)),
        Call::Mock { kind, arg } => mock_at(kind, arg, w).map_err(Into::into),
    };
    r.map_err(|e| fail(path, e))
}

fn child(path: &[String], i: usize, label: &str) -> Vec<String> {
    let mut p = path.to_vec();
    p.push(format!("{i}:{label}"));
    p
}

/// Evaluates `e` with every leaf known below `q^w`.
fn eval_at(e: &Expr, w: i64, path: &[String]) -> Result<Series, EvalError> {
    let bin = |a: &Expr, b: &Expr, op: &str| -> Result<(Series, Series), EvalError> {
        let l = eval_at(a, w, &child(path, 0, op))?;
        let r = eval_at(b, w, &child(path, 1, op))?;
        Ok((l, r))
    };
    Ok(match e {
        Expr::Int(n) => Series::constant((*n).into()),
        Expr::Sym(s) => Monomial::unit(s.unit()).to_series(),
        Expr::QPow(k) => Monomial::q(*k).to_series(),
        Expr::Neg(a) => -eval_at(a, w, &child(path, 0, "-"))?,
        Expr::Add(a, b) => {
            let (l, r) = bin(a, b, "+")?;
            &l + &r
        }
        Expr::Sub(a, b) => {
            let (l, r) = bin(a, b, "-")?;
            &l - &r
        }
        Expr::Mul(a, b) => {
            let (l, r) = bin(a, b, "*")?;
            &l * &r
        }
        Expr::Div(a, b) => {
            let (l, r) = bin(a, b, "/")?;
            // An exact multi-term divisor of an exact numerator has an
            // infinite quotient; cut it off at the working precision.
            let l = if l.is_exact() && r.is_exact() && r.as_exact_monomial().is_none() {
                l.truncate(w)
            } else {
                l
            };
            l.div(&r).map_err(|e| fail(path, e))?
        }
        Expr::Pow(a, k) => {
            let base = eval_at(a, w, &child(path, 0, "^"))?;
            let base = if *k < 0 && base.is_exact() && base.as_exact_monomial().is_none() {
                base.truncate(w)
            } else {
                base
            };
            base.pow(*k).map_err(|e| fail(path, e))?
        }
        Expr::Call(c) => {
            let mut p = path.to_vec();
            p.push(c.to_string());
            eval_call(c, w, &p)?
        }
    })
}

/// Evaluates `e` so that every coefficient up to and including `q^order`
/// is known. Working precision starts at `order + 1` and is raised by the
/// observed shortfall until the target is met.
pub fn eval(e: &Expr, order: i64) -> Result<Series, EvalError> {
    eval_labeled(e, order, "root")
}

pub(crate) fn eval_labeled(e: &Expr, order: i64, label: &str) -> Result<Series, EvalError> {
    let target = order + 1;
    let path = vec![label.to_string()];
    let mut work = target;
    let mut reached = i64::MIN;
    for _ in 0..MAX_ROUNDS {
        let s = eval_at(e, work, &path)?;
        if s.prec() >= target {
            return Ok(s.truncate(target));
        }
        reached = reached.max(s.prec());
        work += (target - s.prec()).max(1);
    }
    Err(fail(&path, KernelError::PrecisionNotReached { target, reached }))
}

impl From<SeriesError> for EvalError {
    fn from(e: SeriesError) -> Self {
        EvalError { path: String::new(), source: e.into() }
    }
}
