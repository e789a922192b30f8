//! q-Pochhammer symbols and the Jacobi theta function
//! `j(x; q) = (x)_inf (q/x)_inf (q)_inf = sum_n (-1)^n q^(n(n-1)/2) x^n`.
//!
//! [`theta_j`] evaluates the bilateral sum and is the implementation used
//! everywhere else; the product form [`theta_j_product`] exists so the two
//! can be checked against each other.

use crate::error::{refine, KernelError};
use crate::qseries::{Base, Monomial, RootAccumulator, Series, SeriesError, Unit};

/// A theta argument pair `(x, base)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaArg {
    pub x: Monomial,
    pub base: Base,
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Multiplies `s` by the exact binomial `1 - m`, truncating at `prec`.
pub(crate) fn mul_one_minus(s: &Series, m: Monomial, prec: i64) -> Series {
    let shifted = s.mul_monomial(&m.unit.to_cyc(), m.exp);
    (s - &shifted).truncate(prec)
}

/// `(x; base)_n = prod_{i<n} (1 - base^i x)`.
pub fn poch_finite(x: Monomial, base: Base, n: u64, prec: i64) -> Series {
    let mut acc = Series::one().truncate(prec);
    let mut f = x;
    for _ in 0..n {
        acc = mul_one_minus(&acc, f, prec);
        f = f.mul(base.mono());
    }
    acc
}

/// `(x; base)_inf`, truncated at `prec`. Requires `x.exp >= 0`.
pub fn poch_inf(x: Monomial, base: Base, prec: i64) -> Result<Series, SeriesError> {
    if x.exp < 0 {
        return Err(SeriesError::UnsupportedArgument(x.to_string()));
    }
    let mut acc = Series::one().truncate(prec);
    let mut f = x;
    while f.exp < prec {
        acc = mul_one_minus(&acc, f, prec);
        if acc.is_zero() {
            break;
        }
        f = f.mul(base.mono());
    }
    Ok(acc)
}

/// Range of `n` whose terms `base^binom(n,2) x^n` fall below `prec`.
fn theta_window(x: Monomial, base: Base, prec: i64) -> (i64, i64) {
    let f = |n: i64| base.exp() * binom2(n) + x.exp * n;
    let mut hi = 0;
    while f(hi + 1) < prec || f(hi + 2) < f(hi + 1) {
        hi += 1;
    }
    let mut lo = 0;
    while f(lo - 1) < prec || f(lo - 2) < f(lo - 1) {
        lo -= 1;
    }
    (lo, hi)
}

/// `j(x; base)` from the bilateral sum, exact below `prec`.
pub fn theta_j(x: Monomial, base: Base, prec: i64) -> Series {
    let (lo, hi) = theta_window(x, base, prec);
    let mut acc = RootAccumulator::new();
    for n in lo..=hi {
        let e = base.exp() * binom2(n) + x.exp * n;
        if e >= prec {
            continue;
        }
        let u = Unit::MINUS_ONE
            .pow(n)
            .mul(base.unit().pow(binom2(n)))
            .mul(x.unit.pow(n));
        acc.add(e, u, 1);
    }
    acc.into_series(prec)
}

/// `j(x; base)` from the triple product; requires `x.exp >= 0` and
/// `base / x` to have nonnegative exponent.
pub fn theta_j_product(x: Monomial, base: Base, prec: i64) -> Result<Series, SeriesError> {
    let a = poch_inf(x, base, prec)?;
    let b = poch_inf(base.mono().div(x), base, prec)?;
    let c = poch_inf(base.mono(), base, prec)?;
    Ok(&(&a * &b) * &c)
}

/// True when `j(x; base)` vanishes identically, i.e. `x` is an integral
/// power of `base`.
pub fn theta_vanishes(x: Monomial, base: Base) -> bool {
    x.log_base(base).is_some()
}

/// `J_{a,m} = j(q^a; q^m)`.
pub fn j_ab(a: i64, m: i64, prec: i64) -> Result<Series, SeriesError> {
    Ok(theta_j(Monomial::q(a), Base::new(Monomial::q(m))?, prec))
}

/// `Jbar_{a,m} = j(-q^a; q^m)`.
pub fn jbar_ab(a: i64, m: i64, prec: i64) -> Result<Series, SeriesError> {
    Ok(theta_j(Monomial::neg_q(a), Base::new(Monomial::q(m))?, prec))
}

/// `J_m = J_{m,3m} = (q^m; q^m)_inf`.
pub fn j_m(m: i64, prec: i64) -> Result<Series, SeriesError> {
    j_ab(m, 3 * m, prec)
}

/// `J_m` relative to an arbitrary base `b`: `(b^m; b^m)_inf = j(b^m; b^3m)`.
pub fn j_m_base(base: Base, m: i64, prec: i64) -> Series {
    theta_j(base.mono_pow(m), base.pow(3 * m), prec)
}

/// Product `j(x_1; base) ... j(x_k; base)`.
pub fn theta_product(xs: &[Monomial], base: Base, prec: i64) -> Series {
    xs.iter().fold(Series::one(), |acc, &x| &acc * &theta_j(x, base, prec))
}

impl ThetaArg {
    pub fn new(x: Monomial, base: Base) -> Self {
        ThetaArg { x, base }
    }

    pub fn series(&self, prec: i64) -> Series {
        theta_j(self.x, self.base, prec)
    }

    pub fn vanishes(&self) -> bool {
        theta_vanishes(self.x, self.base)
    }
}

/// `prefactor * prod(num) / prod(den)` for an exact prefactor, exact below
/// `prec`. A vanishing denominator is reported, never divided by.
pub fn theta_quotient(
    prefactor: &Series,
    num: &[ThetaArg],
    den: &[ThetaArg],
    prec: i64,
) -> Result<Series, KernelError> {
    if let Some(d) = den.iter().find(|d| d.vanishes()) {
        return Err(KernelError::DegenerateParameters(format!("j({}; {})", d.x, d.base)));
    }
    if num.iter().any(ThetaArg::vanishes) {
        return Ok(Series::zero(prec));
    }
    refine(prec, |w| {
        let top = num.iter().fold(prefactor.clone(), |acc, t| &acc * &t.series(w));
        let bottom = den.iter().fold(Series::one(), |acc, t| &acc * &t.series(w));
        Ok(top.div(&bottom)?)
    })
}
