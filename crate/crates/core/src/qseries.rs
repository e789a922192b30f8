//! Truncated Laurent series in `q` with coefficients in `Q(zeta_12)`.
//!
//! A [`Series`] is known modulo `q^prec`: coefficients at exponents below
//! `prec` are exact and everything at or above `prec` is unknown. Exact
//! (finite) expressions such as monomials and constants carry the sentinel
//! precision [`EXACT`]. Ring operations propagate precision conservatively:
//!
//! * sum: `min(prec_a, prec_b)`
//! * product: `min(prec_a + val_b, prec_b + val_a)`
//! * quotient: product with the inverse, whose precision is `prec_b - 2 val_b`
//!
//! Coefficients are stored densely over `[val, val + len)`; exponents in
//! `[val + len, prec)` are known zeros.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclofield::{CycNum, FieldError};

/// Precision of exactly known series.
pub const EXACT: i64 = i64::MAX / 4;
const EXACT_THRESHOLD: i64 = i64::MAX / 8;

fn clamp_prec(p: i64) -> i64 {
    if p >= EXACT_THRESHOLD {
        EXACT
    } else {
        p
    }
}

pub fn is_exact_prec(p: i64) -> bool {
    p >= EXACT_THRESHOLD
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("divisor is zero to its known precision (O(q^{0})); cannot determine valuation")]
    CannotDetermineValuation(i64),
    #[error("substitution stretch must be positive, got {0}")]
    InvalidSubstitution(i64),
    #[error("comparison to order {order} needs precision {needed}, have {have}")]
    PrecisionTooLow { order: i64, needed: i64, have: i64 },
    #[error("1/(1 - w) has a pole at w = 1")]
    NonGenericPole,
    #[error("quotient of two exact series needs an explicit precision")]
    UnboundedQuotient,
    #[error("{0} is not a root of unity in Q(zeta_12)")]
    NotARootOfUnity(String),
    #[error("unsupported argument {0}")]
    UnsupportedArgument(String),
    #[error("base must have positive q-exponent, got {0}")]
    InvalidBase(i64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A twelfth root of unity `z^k`, stored as `k mod 12`.
///
/// `-1 = z^6`, `w = z^4`, `I = z^3`; `+-z^k` is again of this form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Unit(u8);

impl Unit {
    pub const ONE: Unit = Unit(0);
    pub const MINUS_ONE: Unit = Unit(6);
    pub const OMEGA: Unit = Unit(4);
    pub const OMEGA2: Unit = Unit(8);
    pub const I: Unit = Unit(3);

    pub fn new(k: i64) -> Self {
        Unit(k.rem_euclid(12) as u8)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn mul(self, o: Unit) -> Unit {
        Unit((self.0 + o.0) % 12)
    }

    pub fn inv(self) -> Unit {
        Unit((12 - self.0) % 12)
    }

    pub fn pow(self, e: i64) -> Unit {
        Unit::new(self.0 as i64 * e.rem_euclid(12))
    }

    pub fn to_cyc(self) -> CycNum {
        CycNum::zeta_pow(self.0 as i64)
    }

    pub fn try_from_cyc(c: &CycNum) -> Result<Unit, SeriesError> {
        c.root_index()
            .map(Unit)
            .ok_or_else(|| SeriesError::NotARootOfUnity(c.to_string()))
    }
}

/// `unit * q^exp`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub unit: Unit,
    pub exp: i64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { unit: Unit::ONE, exp: 0 };

    pub fn new(unit: Unit, exp: i64) -> Self {
        Monomial { unit, exp }
    }

    /// `q^e`.
    pub fn q(exp: i64) -> Self {
        Monomial { unit: Unit::ONE, exp }
    }

    /// `-q^e`.
    pub fn neg_q(exp: i64) -> Self {
        Monomial { unit: Unit::MINUS_ONE, exp }
    }

    pub fn unit(unit: Unit) -> Self {
        Monomial { unit, exp: 0 }
    }

    pub fn is_one(self) -> bool {
        self.exp == 0 && self.unit.is_one()
    }

    pub fn mul(self, o: Monomial) -> Monomial {
        Monomial {
            unit: self.unit.mul(o.unit),
            exp: self.exp + o.exp,
        }
    }

    pub fn div(self, o: Monomial) -> Monomial {
        self.mul(o.inv())
    }

    pub fn inv(self) -> Monomial {
        Monomial {
            unit: self.unit.inv(),
            exp: -self.exp,
        }
    }

    pub fn pow(self, e: i64) -> Monomial {
        Monomial {
            unit: self.unit.pow(e),
            exp: self.exp * e,
        }
    }

    pub fn neg(self) -> Monomial {
        self.mul(Monomial::unit(Unit::MINUS_ONE))
    }

    /// The integer `k` with `self = base^k`, if any.
    pub fn log_base(self, base: Base) -> Option<i64> {
        let b = base.mono();
        if self.exp % b.exp != 0 {
            return None;
        }
        let k = self.exp / b.exp;
        (b.unit.pow(k) == self.unit).then_some(k)
    }

    pub fn to_series(self) -> Series {
        Series::monomial(self.unit.to_cyc(), self.exp)
    }

    /// Image under `q -> u * q^k`.
    pub fn subst(self, u: Unit, k: i64) -> Monomial {
        Monomial {
            unit: self.unit.mul(u.pow(self.exp)),
            exp: self.exp * k,
        }
    }
}

/// Renders in the identity-language form, e.g. `-w*q^3`, `q`, `-1`, `I`.
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.unit.0 {
            0 => "",
            1 => "z",
            2 => "-w^2",
            3 => "I",
            4 => "w",
            5 => "z^5",
            6 => "-",
            7 => "z^7",
            8 => "w^2",
            9 => "-I",
            10 => "-w",
            _ => "z^11",
        };
        let q = match self.exp {
            0 => String::new(),
            1 => "q".to_string(),
            e => format!("q^{e}"),
        };
        match (unit, q.is_empty()) {
            ("", true) => write!(f, "1"),
            ("-", true) => write!(f, "-1"),
            (u, true) => write!(f, "{u}"),
            ("", false) | ("-", false) => write!(f, "{unit}{q}"),
            (u, false) => write!(f, "{u}*{q}"),
        }
    }
}

/// A monomial with positive `q`-exponent, usable as the nome of a theta
/// function or Appell-Lerch sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Base(Monomial);

impl Base {
    pub fn new(m: Monomial) -> Result<Self, SeriesError> {
        if m.exp < 1 {
            return Err(SeriesError::InvalidBase(m.exp));
        }
        Ok(Base(m))
    }

    /// `q^e`, `e >= 1`.
    pub fn q(e: i64) -> Self {
        Base::new(Monomial::q(e)).expect("base exponent must be positive")
    }

    pub fn mono(self) -> Monomial {
        self.0
    }

    pub fn exp(self) -> i64 {
        self.0.exp
    }

    pub fn unit(self) -> Unit {
        self.0.unit
    }

    /// `base^k` as a base (`k >= 1`).
    pub fn pow(self, k: i64) -> Base {
        Base::new(self.0.pow(k)).expect("positive power of a base")
    }

    /// `base^k` as a monomial (any `k`).
    pub fn mono_pow(self, k: i64) -> Monomial {
        self.0.pow(k)
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Outcome of [`Series::eq_to`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub order: i64,
    pub mismatch: Option<Mismatch>,
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        self.mismatch.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub exp: i64,
    pub lhs: CycNum,
    pub rhs: CycNum,
}

/// One coefficient in machine-readable form: exponent and the four rational
/// coordinates on the basis `1, z, z^2, z^3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exp: i64,
    pub coeffs: [String; 4],
}

/// Truncated Laurent series; see the module docs for the precision rules.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    val: i64,
    prec: i64,
    coeffs: Vec<CycNum>,
}

impl Series {
    /// Builds a series from dense coefficients starting at `val`.
    pub fn from_coeffs(val: i64, coeffs: Vec<CycNum>, prec: i64) -> Self {
        let mut s = Series {
            val,
            prec: clamp_prec(prec),
            coeffs,
        };
        let keep = (s.prec - s.val).max(0) as usize;
        if !is_exact_prec(s.prec) && s.coeffs.len() > keep {
            s.coeffs.truncate(keep);
        }
        s.normalize();
        s
    }

    /// Builds a series from sparse `(exp, coeff)` pairs; repeated exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i64, CycNum)>>(terms: I, prec: i64) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let prec = clamp_prec(prec);
        let lo = terms.iter().map(|t| t.0).filter(|&e| e < prec).min();
        let Some(lo) = lo else {
            return Series::zero(prec);
        };
        let hi = terms.iter().map(|t| t.0).filter(|&e| e < prec).max().unwrap();
        let mut v = vec![CycNum::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            if e < prec {
                v[(e - lo) as usize] += &c;
            }
        }
        Series::from_coeffs(lo, v, prec)
    }

    /// The series that is zero modulo `q^prec`.
    pub fn zero(prec: i64) -> Self {
        let prec = clamp_prec(prec);
        Series {
            val: prec,
            prec,
            coeffs: Vec::new(),
        }
    }

    pub fn exact_zero() -> Self {
        Series::zero(EXACT)
    }

    pub fn constant(c: CycNum) -> Self {
        Series::monomial(c, 0)
    }

    pub fn one() -> Self {
        Series::constant(CycNum::one())
    }

    /// The exact series `c q^e`.
    pub fn monomial(c: CycNum, e: i64) -> Self {
        Series::from_coeffs(e, vec![c], EXACT)
    }

    pub fn val(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        is_exact_prec(self.prec)
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> CycNum {
        if e < self.val {
            return CycNum::zero();
        }
        self.coeffs
            .get((e - self.val) as usize)
            .cloned()
            .unwrap_or_default()
    }

    /// Stored `(exp, coeff)` pairs with nonzero coefficient.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (i64, &CycNum)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    /// Highest exponent with a stored coefficient, plus one.
    pub fn support_end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Single-term exact series are invertible exactly.
    pub fn as_exact_monomial(&self) -> Option<(&CycNum, i64)> {
        (self.is_exact() && self.coeffs.len() == 1).then(|| (&self.coeffs[0], self.val))
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.val = self.prec;
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        while self.coeffs.last().is_some_and(CycNum::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Forgets every coefficient at exponent `>= prec`.
    pub fn truncate(&self, prec: i64) -> Series {
        if prec >= self.prec {
            return self.clone();
        }
        if prec <= self.val {
            return Series::zero(prec);
        }
        let keep = ((prec - self.val) as usize).min(self.coeffs.len());
        Series::from_coeffs(self.val, self.coeffs[..keep].to_vec(), prec)
    }

    pub fn scale(&self, c: &CycNum) -> Series {
        if c.is_zero() {
            return Series::zero(self.prec);
        }
        Series::from_coeffs(
            self.val,
            self.coeffs.iter().map(|x| x * c).collect(),
            self.prec,
        )
    }

    /// Multiplication by the exact monomial `c q^e`.
    pub fn mul_monomial(&self, c: &CycNum, e: i64) -> Series {
        let prec = if self.is_exact() { EXACT } else { self.prec + e };
        if c.is_zero() {
            return Series::zero(prec);
        }
        let mut s = self.scale(c);
        if self.is_zero() {
            return Series::zero(prec);
        }
        s.val += e;
        s.prec = prec;
        s
    }

    /// `self / (1 - m)` for `m.exp >= 1`, truncated at `prec` (and at the
    /// precision of `self`).
    pub fn div_one_minus(&self, m: Monomial, prec: i64) -> Result<Series, SeriesError> {
        if m.exp < 1 {
            return Err(SeriesError::UnsupportedArgument(m.to_string()));
        }
        let prec = self.prec.min(prec);
        if self.val >= prec {
            return Ok(Series::zero(prec));
        }
        let len = (prec - self.val) as usize;
        let k = m.exp as usize;
        let mut out: Vec<CycNum> = Vec::with_capacity(len);
        for i in 0..len {
            let mut c = self.coeffs.get(i).cloned().unwrap_or_default();
            if i >= k && !out[i - k].is_zero() {
                c += &out[i - k].mul_zeta_pow(m.unit.index() as i64);
            }
            out.push(c);
        }
        Ok(Series::from_coeffs(self.val, out, prec))
    }

    pub fn shift(&self, e: i64) -> Series {
        self.mul_monomial(&CycNum::one(), e)
    }

    fn add_impl(&self, rhs: &Series, negate: bool) -> Series {
        let prec = self.prec.min(rhs.prec);
        let lo = self.val.min(rhs.val);
        let hi = self.support_end().max(rhs.support_end()).min(prec);
        if hi <= lo {
            return Series::zero(prec);
        }
        let mut v = vec![CycNum::zero(); (hi - lo) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.val + i as i64;
            if e < hi {
                v[(e - lo) as usize] += c;
            }
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let e = rhs.val + i as i64;
            if e < hi {
                if negate {
                    v[(e - lo) as usize] -= c;
                } else {
                    v[(e - lo) as usize] += c;
                }
            }
        }
        Series::from_coeffs(lo, v, prec)
    }

    fn mul_impl(&self, rhs: &Series) -> Series {
        let prec = clamp_prec(
            self.prec
                .saturating_add(rhs.val)
                .min(rhs.prec.saturating_add(self.val)),
        );
        if self.is_zero() || rhs.is_zero() {
            return Series::zero(prec);
        }
        if let Some((c, e)) = rhs.as_exact_monomial() {
            return self.mul_monomial(c, e).truncate(prec);
        }
        if let Some((c, e)) = self.as_exact_monomial() {
            return rhs.mul_monomial(c, e).truncate(prec);
        }
        let lo = self.val + rhs.val;
        let hi = (self.support_end() + rhs.support_end() - 1).min(prec);
        if hi <= lo {
            return Series::zero(prec);
        }
        let n = (hi - lo) as usize;
        let mut v = vec![CycNum::zero(); n];
        let b: Vec<(usize, &CycNum)> = rhs
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for &(j, bj) in &b {
                let k = i + j;
                if k >= n {
                    break;
                }
                v[k] += &(a * bj);
            }
        }
        Series::from_coeffs(lo, v, prec)
    }

    /// `self * rhs^-1`.
    ///
    /// Fails when `rhs` has no known nonzero coefficient, or when both
    /// operands are exact and `rhs` has more than one term (the quotient is
    /// then an infinite series with no natural truncation; truncate `self`
    /// first).
    pub fn div(&self, rhs: &Series) -> Result<Series, SeriesError> {
        if rhs.is_zero() {
            return Err(SeriesError::CannotDetermineValuation(rhs.prec));
        }
        if let Some((c, e)) = rhs.as_exact_monomial() {
            return Ok(self.mul_monomial(&c.inv()?, -e));
        }
        let vb = rhs.val;
        let inv_prec = rhs.prec - 2 * vb;
        let prec = if self.is_exact() {
            if rhs.is_exact() {
                return Err(SeriesError::UnboundedQuotient);
            }
            inv_prec + self.val
        } else {
            let p = self.prec - vb;
            if rhs.is_exact() {
                p
            } else {
                p.min(inv_prec + self.val)
            }
        };
        if self.is_zero() {
            return Ok(Series::zero(prec));
        }
        let lo = self.val - vb;
        if prec <= lo {
            return Ok(Series::zero(prec));
        }
        // Long division: out[n] = (a[n] - sum_{k>=1} b[k] out[n-k]) / b[0].
        let n = (prec - lo) as usize;
        let b0_inv = rhs.coeffs[0].inv()?;
        let b: Vec<(usize, &CycNum)> = rhs
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut out: Vec<CycNum> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.coeff(self.val + i as i64);
            for &(k, bk) in &b {
                if k > i {
                    break;
                }
                let o = &out[i - k];
                if !o.is_zero() {
                    acc -= &(bk * o);
                }
            }
            out.push(if acc.is_zero() { acc } else { &acc * &b0_inv });
        }
        Ok(Series::from_coeffs(lo, out, prec))
    }

    pub fn inv(&self) -> Result<Series, SeriesError> {
        Series::one().div(self)
    }

    /// `self^e` for any integer `e`; negative powers go through [`Series::inv`].
    pub fn pow(&self, e: i64) -> Result<Series, SeriesError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Series::one();
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &b;
            }
            n >>= 1;
            if n > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Substitution `q -> u q^k` for a root of unity `u` and `k >= 1`.
    ///
    /// The result is known modulo `q^(k (prec - 1) + 1)`.
    pub fn subst(&self, u: Unit, k: i64) -> Result<Series, SeriesError> {
        if k <= 0 {
            return Err(SeriesError::InvalidSubstitution(k));
        }
        let prec = if self.is_exact() {
            EXACT
        } else {
            k * (self.prec - 1) + 1
        };
        let terms = self
            .nonzero_terms()
            .map(|(e, c)| (k * e, c.mul_zeta_pow(u.index() as i64 * e)));
        Ok(Series::from_terms(terms, prec))
    }

    /// Compares coefficients at every exponent `<= order`.
    pub fn eq_to(&self, rhs: &Series, order: i64) -> Result<Comparison, SeriesError> {
        let have = self.prec.min(rhs.prec);
        if have < order + 1 {
            return Err(SeriesError::PrecisionTooLow {
                order,
                needed: order + 1,
                have,
            });
        }
        let lo = self.val.min(rhs.val);
        let hi = self.support_end().max(rhs.support_end()).min(order + 1);
        for e in lo..hi {
            let (a, b) = (self.coeff(e), rhs.coeff(e));
            if a != b {
                return Ok(Comparison {
                    order,
                    mismatch: Some(Mismatch { exp: e, lhs: a, rhs: b }),
                });
            }
        }
        Ok(Comparison { order, mismatch: None })
    }

    /// Whether every known coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(CycNum::is_rational)
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.nonzero_terms()
            .map(|(exp, c)| {
                let r = c.coeffs();
                Term {
                    exp,
                    coeffs: [
                        r[0].to_string(),
                        r[1].to_string(),
                        r[2].to_string(),
                        r[3].to_string(),
                    ],
                }
            })
            .collect()
    }
}

/// `1 / (1 - w)` expanded in the direction that converges as `q -> 0`.
///
/// For `w.exp > 0` this is `sum w^j`; for `w.exp < 0` it is
/// `-w^-1 sum w^-j`; for `w.exp = 0` it is the constant `1 / (1 - unit)`.
pub fn geom_inv_one_minus(w: Monomial, prec: i64) -> Result<Series, SeriesError> {
    let mut counts = RootAccumulator::new();
    if !geom_inv_one_minus_into(&mut counts, Unit::ONE, 0, w, prec)? {
        return Ok(Series::constant(
            (&CycNum::one() - &w.unit.to_cyc()).inv()?,
        )
        .truncate(prec));
    }
    Ok(counts.into_series(prec))
}

/// Accumulates `unit q^shift / (1 - w)` into `acc` up to `prec`. Returns
/// `false` without touching `acc` when `w` has exponent zero (the caller
/// handles that constant term itself).
pub(crate) fn geom_inv_one_minus_into(
    acc: &mut RootAccumulator,
    unit: Unit,
    shift: i64,
    w: Monomial,
    prec: i64,
) -> Result<bool, SeriesError> {
    match w.exp.signum() {
        0 => {
            if w.unit.is_one() {
                return Err(SeriesError::NonGenericPole);
            }
            Ok(false)
        }
        1 => {
            let mut e = shift;
            let mut u = unit;
            while e < prec {
                acc.add(e, u, 1);
                e += w.exp;
                u = u.mul(w.unit);
            }
            Ok(true)
        }
        _ => {
            let step = -w.exp;
            let winv = w.unit.inv();
            let mut e = shift + step;
            let mut u = unit.mul(winv);
            while e < prec {
                acc.add(e, u, -1);
                e += step;
                u = u.mul(winv);
            }
            Ok(true)
        }
    }
}

/// Dense accumulator of integer multiplicities of `z^k q^e`.
///
/// Theta functions and Appell-Lerch sums are sums of unit monomials, so
/// counting roots of unity per exponent avoids rational arithmetic until the
/// very end.
#[derive(Debug, Default)]
pub(crate) struct RootAccumulator {
    lo: i64,
    rows: Vec<[i64; 12]>,
    extra: Vec<(i64, CycNum)>,
}

impl RootAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, e: i64, u: Unit, n: i64) {
        if self.rows.is_empty() {
            self.lo = e;
            self.rows.push([0; 12]);
        }
        if e < self.lo {
            let grow = (self.lo - e) as usize;
            let mut fresh = vec![[0i64; 12]; grow];
            fresh.append(&mut self.rows);
            self.rows = fresh;
            self.lo = e;
        }
        let idx = (e - self.lo) as usize;
        if idx >= self.rows.len() {
            self.rows.resize(idx + 1, [0; 12]);
        }
        self.rows[idx][u.index() as usize] += n;
    }

    pub fn add_general(&mut self, e: i64, c: CycNum) {
        self.extra.push((e, c));
    }

    pub fn into_series(self, prec: i64) -> Series {
        let lo = self.lo;
        let dense = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.iter().any(|&n| n != 0))
            .map(|(i, r)| (lo + i as i64, CycNum::from_root_counts(r)));
        Series::from_terms(dense.chain(self.extra), prec)
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.add_impl(rhs, false)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.add_impl(rhs, true)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.mul_impl(rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series {
            val: self.val,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_series {
    ($tr:ident, $m:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $m(self, rhs: &Series) -> Series {
                (&self).$m(rhs)
            }
        }
        impl $tr<Series> for &Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                self.$m(&rhs)
            }
        }
    };
}
forward_series!(Add, add);
forward_series!(Sub, sub);
forward_series!(Mul, mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

/// Renders as `c_v*q^v + ... + O(q^prec)`.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.nonzero_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = if c.is_rational() {
                c.to_string()
            } else {
                format!("({c})")
            };
            match e {
                0 => write!(f, "{cs}")?,
                1 => write!(f, "{cs}*q")?,
                _ => write!(f, "{cs}*q^{e}")?,
            }
        }
        if !self.is_exact() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(q^{})", self.prec)?;
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{self}]")
    }
}

impl Zero for Series {
    fn zero() -> Self {
        Series::exact_zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(val: i64, cs: &[i64], prec: i64) -> Series {
        Series::from_coeffs(val, cs.iter().map(|&c| CycNum::from_int(c)).collect(), prec)
    }

    #[test]
    fn add_examples() {
        let a = ints(0, &[1, 1], EXACT);
        let b = ints(0, &[-1, 1], EXACT);
        assert_eq!(&a + &b, ints(1, &[2], EXACT));
        let p = &ints(0, &[1], 10) + &ints(0, &[1], 5);
        assert_eq!(p.prec(), 5);
        let w = CycNum::omega();
        let s = &Series::monomial(w.clone(), 1) + &Series::monomial(&w * &w, 1);
        assert_eq!(s, ints(1, &[-1], EXACT));
    }

    #[test]
    fn mul_examples() {
        let a = ints(0, &[1, -1], EXACT);
        let b = ints(0, &[1, 1], EXACT);
        assert_eq!(&a * &b, ints(0, &[1, 0, -1], EXACT));
        let p = &Series::monomial(CycNum::one(), -1) * &Series::monomial(CycNum::one(), 1);
        assert_eq!(p, Series::one());
        let c = &ints(2, &[1, 1], 10) * &ints(-1, &[3], 4);
        assert_eq!(c.val(), 1);
        assert_eq!(c.prec(), (10 - 1).min(4 + 2));
    }

    #[test]
    fn div_examples() {
        let one = Series::one().truncate(8);
        let g = one.div(&ints(0, &[1, -1], EXACT)).unwrap();
        assert_eq!(g, ints(0, &[1; 8], 8));
        let q2 = Series::monomial(CycNum::one(), 2);
        let q1 = Series::monomial(CycNum::one(), 1);
        assert_eq!(q2.div(&q1).unwrap(), q1);
        let w = CycNum::omega();
        let d = Series::constant(&w - &(&w * &w));
        let s = ints(0, &[3, 6], 5).div(&d).unwrap();
        let k = (&w - &(&w * &w)).inv().unwrap();
        assert_eq!(s, ints(0, &[3, 6], 5).scale(&k));
        assert_eq!(
            Series::one().div(&Series::zero(7)),
            Err(SeriesError::CannotDetermineValuation(7))
        );
        assert_eq!(
            Series::one().div(&ints(0, &[1, -1], EXACT)),
            Err(SeriesError::UnboundedQuotient)
        );
    }

    #[test]
    fn div_precision_with_positive_valuation() {
        // (q + q^2 + O(q^10)) / (q + O(q^6)): inverse known to 6 - 2 = 4,
        // result prec min(10 - 1, 4 + 1) = 5.
        let a = ints(1, &[1, 1], 10);
        let b = ints(1, &[1], 6);
        let c = a.div(&b).unwrap();
        assert_eq!(c.prec(), 5);
        assert_eq!(c, ints(0, &[1, 1], 5));
    }

    #[test]
    fn subst_examples() {
        let a = ints(0, &[1, 1, 1], EXACT);
        assert_eq!(
            a.subst(Unit::ONE, 9).unwrap(),
            Series::from_terms(
                [(0, CycNum::one()), (9, CycNum::one()), (18, CycNum::one())],
                EXACT
            )
        );
        let q = Series::monomial(CycNum::one(), 1);
        assert_eq!(
            q.subst(Unit::OMEGA, 1).unwrap(),
            Series::monomial(CycNum::omega(), 1)
        );
        assert_eq!(ints(0, &[1], 5).subst(Unit::ONE, 3).unwrap().prec(), 13);
        assert_eq!(a.subst(Unit::ONE, 0), Err(SeriesError::InvalidSubstitution(0)));
    }

    #[test]
    fn eq_to_examples() {
        let a = ints(0, &[1, 1], 11);
        assert!(a.eq_to(&a, 10).unwrap().is_equal());
        let b = ints(0, &[1, 2], 11);
        let c = a.eq_to(&b, 1).unwrap();
        assert_eq!(c.mismatch.unwrap().exp, 1);
        assert!(matches!(
            a.eq_to(&a, 11),
            Err(SeriesError::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn geometric_examples() {
        let g = geom_inv_one_minus(Monomial::q(1), 6).unwrap();
        assert_eq!(g, ints(0, &[1; 6], 6));
        let g = geom_inv_one_minus(Monomial::q(-1), 6).unwrap();
        assert_eq!(g, ints(1, &[-1; 5], 6));
        let g = geom_inv_one_minus(Monomial::unit(Unit::OMEGA), 6).unwrap();
        let w = CycNum::omega();
        let expect = (&CycNum::one() - &(&w * &w)).scale(&num_rational::BigRational::new(1.into(), 3.into()));
        assert_eq!(g, Series::constant(expect).truncate(6));
        assert_eq!(
            geom_inv_one_minus(Monomial::ONE, 6),
            Err(SeriesError::NonGenericPole)
        );
    }

    #[test]
    fn geometric_branches_match_division() {
        for k in 0..12 {
            for e in -3..=3 {
                let w = Monomial::new(Unit::new(k), e);
                if w.is_one() {
                    continue;
                }
                let prec = 20;
                let g = geom_inv_one_minus(w, prec).unwrap();
                let one_minus = &Series::one() - &w.to_series();
                let d = Series::one().truncate(prec + 10).div(&one_minus).unwrap();
                assert!(g.eq_to(&d, prec - 1).unwrap().is_equal(), "w = {w}");
            }
        }
    }

    #[test]
    fn zero_normalization() {
        let z = ints(0, &[0, 0, 0], 3);
        assert!(z.is_zero());
        assert_eq!(z.val(), 3);
        let s = ints(-2, &[0, 0, 5, 0], 9);
        assert_eq!(s.val(), 0);
    }

    #[test]
    fn monomial_display() {
        assert_eq!(Monomial::new(Unit::OMEGA, 3).to_string(), "w*q^3");
        assert_eq!(Monomial::neg_q(2).to_string(), "-q^2");
        assert_eq!(Monomial::new(Unit::MINUS_ONE, 0).to_string(), "-1");
        assert_eq!(Monomial::q(1).to_string(), "q");
        assert_eq!(Monomial::new(Unit::I, 0).to_string(), "I");
    }

    #[test]
    fn unit_from_cyc() {
        assert_eq!(Unit::try_from_cyc(&CycNum::omega()).unwrap(), Unit::OMEGA);
        assert_eq!(Unit::try_from_cyc(&CycNum::from_int(-1)).unwrap(), Unit::MINUS_ONE);
        assert!(Unit::try_from_cyc(&CycNum::from_int(2)).is_err());
        for k in 0..12 {
            assert!(Unit::new(k).to_cyc().pow(12).unwrap().is_one());
        }
    }

    fn arb_series() -> impl Strategy<Value = Series> {
        (
            -3i64..3,
            prop::collection::vec((-3i64..4, 0i64..12), 1..8),
            4i64..14,
        )
            .prop_map(|(val, cs, len)| {
                let v = cs
                    .into_iter()
                    .map(|(c, k)| CycNum::zeta_pow(k).scale(&num_rational::BigRational::from_integer(c.into())))
                    .collect();
                Series::from_coeffs(val, v, val + len)
            })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            let l = &(&a * &b) * &c;
            let r = &a * &(&b * &c);
            let p = l.prec().min(r.prec());
            if p > l.val().min(r.val()) {
                prop_assert!(l.eq_to(&r, p - 1).unwrap().is_equal());
            }
            let l = &a * &(&b + &c);
            let r = &(&a * &b) + &(&a * &c);
            let p = l.prec().min(r.prec());
            prop_assert!(l.eq_to(&r, p - 1).unwrap().is_equal());
        }

        #[test]
        fn div_then_mul_roundtrips(a in arb_series(), b in arb_series()) {
            prop_assume!(!b.is_zero());
            let q = a.div(&b).unwrap();
            let back = &q * &b;
            let p = back.prec().min(a.prec());
            prop_assert!(back.eq_to(&a, p - 1).unwrap().is_equal());
        }

        #[test]
        fn subst_composes(a in arb_series(), k in 1i64..4, m in 1i64..4) {
            let two = a.subst(Unit::ONE, k).unwrap().subst(Unit::ONE, m).unwrap();
            let one = a.subst(Unit::ONE, k * m).unwrap();
            let p = two.prec().min(one.prec());
            prop_assert!(two.eq_to(&one, p - 1).unwrap().is_equal());
        }
    }
}
