//! The splitting defect of an Appell-Lerch sum under `q -> q^(n^2)`
//!
//! ```text
//! D_n(x, q, z, z') = m(x, q, z)
//!     - sum_{r<n} q^-C(r+1,2) (-x)^r m(-q^(C(n,2) - n r) (-x)^n, q^(n^2), z')
//! ```
//!
//! together with its closed form as a sum of `n` theta quotients. All powers
//! of `q` above are powers of the base, which may carry a root of unity.

use crate::appell::{m_series, AppellArg};
use crate::error::{refine, KernelError};
use crate::qseries::{Base, Monomial, Series};
use crate::theta::{theta_quotient, ThetaArg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DnArg {
    pub n: i64,
    pub x: Monomial,
    pub base: Base,
    pub z: Monomial,
    pub zp: Monomial,
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

impl DnArg {
    pub fn new(n: i64, x: Monomial, base: Base, z: Monomial, zp: Monomial) -> Result<Self, KernelError> {
        if n < 1 {
            return Err(KernelError::UnsupportedOrder(n));
        }
        Ok(DnArg { n, x, base, z, zp })
    }

    fn q(&self, k: i64) -> Monomial {
        self.base.mono_pow(k)
    }

    /// `(coefficient, argument)` of the inner Appell-Lerch sums.
    fn inner_terms(&self) -> Vec<(Monomial, Monomial)> {
        let n = self.n;
        let mx = self.x.neg();
        (0..n)
            .map(|r| {
                let coef = self.q(-binom2(r + 1)).mul(mx.pow(r));
                let arg = self.q(binom2(n) - n * r).mul(mx.pow(n)).neg();
                (coef, arg)
            })
            .collect()
    }

    fn inner_base(&self) -> Base {
        self.base.pow(self.n * self.n)
    }

    /// `J_n^3` relative to the base, as theta arguments.
    fn jn_cubed(&self, n: i64) -> [ThetaArg; 3] {
        let t = ThetaArg::new(self.q(n), self.base.pow(3 * n));
        [t, t, t]
    }
}

/// `D_n` from its definition as `n + 1` Appell-Lerch sums.
pub fn dn_def(arg: DnArg, prec: i64) -> Result<Series, KernelError> {
    let outer = AppellArg::new(arg.x, arg.base, arg.z);
    let inner: Vec<_> = arg
        .inner_terms()
        .into_iter()
        .map(|(c, x)| (c, AppellArg::new(x, arg.inner_base(), arg.zp)))
        .collect();
    for (_, a) in &inner {
        a.check_poles()?;
    }
    outer.check_poles()?;
    refine(prec, |w| {
        let mut acc = m_series(outer, w)?;
        for (c, a) in &inner {
            // The coefficient may carry a negative power; ask for enough
            // room that the product is still good to `w`.
            let m = m_series(*a, w - c.exp)?;
            acc = &acc - &(&c.to_series() * &m);
        }
        Ok(acc)
    })
}

/// `D_n` from the general closed form
///
/// ```text
/// z' J_n^3 sum_{r<n} q^C(r,2) (-x z)^r j(-q^(C(n,2)+r) (-x)^n z z'; q^n) j(q^(n r) z^n / z'; q^(n^2))
///     / ( j(x z; q) j(z'; q^(n^2)) j(-q^C(n,2) (-x)^n z'; q^n) j(q^r z; q^n) )
/// ```
pub fn dn_closed(arg: DnArg, prec: i64) -> Result<Series, KernelError> {
    let DnArg { n, x, base, z, zp } = arg;
    let q = |k: i64| base.mono_pow(k);
    let bn = base.pow(n);
    let bnn = base.pow(n * n);
    let mxn = x.neg().pow(n);
    let mut terms = Vec::new();
    for r in 0..n {
        let pre = zp.mul(q(binom2(r))).mul(x.mul(z).neg().pow(r));
        let mut num = arg.jn_cubed(n).to_vec();
        num.push(ThetaArg::new(q(binom2(n) + r).mul(mxn).mul(z).mul(zp).neg(), bn));
        num.push(ThetaArg::new(q(n * r).mul(z.pow(n)).div(zp), bnn));
        let den = vec![
            ThetaArg::new(x.mul(z), base),
            ThetaArg::new(zp, bnn),
            ThetaArg::new(q(binom2(n)).mul(mxn).mul(zp).neg(), bn),
            ThetaArg::new(q(r).mul(z), bn),
        ];
        terms.push((pre, num, den));
    }
    sum_quotients(&terms, prec)
}

type Quotient = (Monomial, Vec<ThetaArg>, Vec<ThetaArg>);

fn sum_quotients(terms: &[Quotient], prec: i64) -> Result<Series, KernelError> {
    let mut acc = Series::zero(prec);
    for (pre, num, den) in terms {
        let t = theta_quotient(&pre.to_series(), num, den, prec)?;
        acc = &acc + &t;
    }
    Ok(acc)
}

/// Hand-specialized closed form for `n = 2`.
pub fn d2_closed(x: Monomial, base: Base, z: Monomial, zp: Monomial, prec: i64) -> Result<Series, KernelError> {
    let arg = DnArg::new(2, x, base, z, zp)?;
    let q = |k: i64| base.mono_pow(k);
    let (b1, b2, b4) = (base, base.pow(2), base.pow(4));
    let x2 = x.pow(2);
    let common_den = [
        ThetaArg::new(x.mul(z), b1),
        ThetaArg::new(zp, b4),
        ThetaArg::new(q(1).mul(x2).mul(zp).neg(), b2),
    ];
    let with = |extra: &[ThetaArg], den: ThetaArg| {
        let mut num = arg.jn_cubed(2).to_vec();
        num.extend_from_slice(extra);
        let mut d = common_den.to_vec();
        d.push(den);
        (num, d)
    };
    let (n0, d0) = with(
        &[
            ThetaArg::new(q(1).mul(x2).mul(z).mul(zp).neg(), b2),
            ThetaArg::new(z.pow(2).div(zp), b4),
        ],
        ThetaArg::new(z, b2),
    );
    let (n1, d1) = with(
        &[
            ThetaArg::new(q(2).mul(x2).mul(z).mul(zp).neg(), b2),
            ThetaArg::new(q(2).mul(z.pow(2)).div(zp), b4),
        ],
        ThetaArg::new(q(1).mul(z), b2),
    );
    let terms = [(zp, n0, d0), (zp.mul(x).mul(z).neg(), n1, d1)];
    sum_quotients(&terms, prec)
}

/// Hand-specialized closed form for `n = 3`.
pub fn d3_closed(x: Monomial, base: Base, z: Monomial, zp: Monomial, prec: i64) -> Result<Series, KernelError> {
    let arg = DnArg::new(3, x, base, z, zp)?;
    let q = |k: i64| base.mono_pow(k);
    let (b1, b3, b9) = (base, base.pow(3), base.pow(9));
    let x3 = x.pow(3);
    let z3 = z.pow(3);
    let common_den = [
        ThetaArg::new(x.mul(z), b1),
        ThetaArg::new(zp, b9),
        ThetaArg::new(x3.mul(zp), b3),
    ];
    let coefs = [
        z.inv(),
        x.div(q(1)).neg(),
        x.pow(2).mul(z).div(q(1)),
    ];
    let terms: Vec<Quotient> = (0..3)
        .map(|k| {
            let mut num = arg.jn_cubed(3).to_vec();
            num.push(ThetaArg::new(q(k).mul(x3).mul(z).mul(zp), b3));
            num.push(ThetaArg::new(q(3 * k).mul(z3).div(zp), b9));
            let mut den = common_den.to_vec();
            den.push(ThetaArg::new(q(k).mul(z), b3));
            (zp.mul(coefs[k as usize]), num, den)
        })
        .collect();
    sum_quotients(&terms, prec)
}
