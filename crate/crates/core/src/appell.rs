//! The Appell-Lerch sum
//!
//! ```text
//! m(x, q, z) = 1/j(z; q) * sum_r (-1)^r q^binom(r,2) z^r / (1 - q^(r-1) x z)
//! ```
//!
//! as a truncated Laurent series, for monomial `x`, `z` and a monomial base.
//! Each summand is expanded around `q = 0`: geometrically in `q^(r-1) x z`
//! when its exponent is positive, in its inverse when negative, and as the
//! constant `1/(1 - u)` when the exponent vanishes.

use crate::cyclofield::CycNum;
use crate::error::{refine, KernelError};
use crate::qseries::{geom_inv_one_minus_into, Base, Monomial, RootAccumulator, Series, Unit};
use crate::theta::{j_m_base, theta_j, theta_quotient, theta_vanishes, ThetaArg};

/// Consecutive empty summands required before the `r` scan stops.
const QUIET_RUN: i64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AppellArg {
    pub x: Monomial,
    pub base: Base,
    pub z: Monomial,
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

impl AppellArg {
    pub fn new(x: Monomial, base: Base, z: Monomial) -> Self {
        AppellArg { x, base, z }
    }

    /// Lowest exponent contributed by the `r`-th summand.
    fn term_floor(&self, r: i64) -> i64 {
        let b = self.base.exp();
        let t = b * binom2(r) + self.z.exp * r;
        let s = b * (r - 1) + self.x.exp + self.z.exp;
        t + (-s).max(0)
    }

    /// Inclusive range of `r` with summands below `q^prec`.
    ///
    /// The floor is convex in `r`, so once it is increasing and above
    /// `prec` no later summand can contribute.
    pub fn r_window(&self, prec: i64) -> (i64, i64) {
        let scan = |step: i64| {
            let mut r = 0;
            let mut last = 0;
            let mut quiet = 0;
            loop {
                r += step;
                let f = self.term_floor(r);
                let rising = self.term_floor(r + step) >= f;
                if f < prec {
                    last = r;
                    quiet = 0;
                } else if rising {
                    quiet += 1;
                    if quiet >= QUIET_RUN {
                        return last;
                    }
                }
            }
        };
        (scan(-1), scan(1))
    }

    fn check_prefactor(&self) -> Result<(), KernelError> {
        if theta_vanishes(self.z, self.base) {
            return Err(KernelError::PrefactorZero {
                z: self.z.to_string(),
                base: self.base.to_string(),
            });
        }
        Ok(())
    }

    /// The bilateral sum without the `1/j(z)` prefactor over an explicit
    /// `r` window, exact below `prec` when the window is wide enough.
    pub fn sum_in_window(&self, prec: i64, window: (i64, i64)) -> Result<Series, KernelError> {
        let mut acc = RootAccumulator::new();
        for r in window.0..=window.1 {
            let coeff = Unit::MINUS_ONE
                .pow(r)
                .mul(self.base.unit().pow(binom2(r)))
                .mul(self.z.unit.pow(r));
            let shift = self.base.exp() * binom2(r) + self.z.exp * r;
            let w = self.base.mono_pow(r - 1).mul(self.x).mul(self.z);
            let expanded = geom_inv_one_minus_into(&mut acc, coeff, shift, w, prec)
                .map_err(|_| KernelError::NonGenericPole { r })?;
            if !expanded && shift < prec {
                let c = (&CycNum::one() - &w.unit.to_cyc()).inv()?;
                acc.add_general(shift, c.mul_zeta_pow(coeff.index() as i64));
            }
        }
        Ok(acc.into_series(prec))
    }

    /// `m(x, base, z)` at working precision `work` using the given window.
    pub fn series_in_window(&self, work: i64, window: (i64, i64)) -> Result<Series, KernelError> {
        self.check_prefactor()?;
        let s = self.sum_in_window(work, window)?;
        let t = theta_j(self.z, self.base, work);
        Ok(s.div(&t)?)
    }

    /// Fails if some summand has a pole.
    pub fn check_poles(&self) -> Result<(), KernelError> {
        // base^(r-1) x z = 1 can only happen at the one r where the exponent
        // vanishes.
        let b = self.base.exp();
        let num = -(self.x.exp + self.z.exp);
        if num % b == 0 {
            let r = num / b + 1;
            let w = self.base.mono_pow(r - 1).mul(self.x).mul(self.z);
            if w.is_one() {
                return Err(KernelError::NonGenericPole { r });
            }
        }
        Ok(())
    }
}

/// `m(x, q, z)` exact below `prec`.
pub fn m_series(arg: AppellArg, prec: i64) -> Result<Series, KernelError> {
    arg.check_prefactor()?;
    arg.check_poles()?;
    refine(prec, |w| arg.series_in_window(w, arg.r_window(w)))
}

/// `m(x, q, z1) - m(x, q, z0)` from the closed form
///
/// ```text
/// z0 J_1^3 j(z1/z0) j(x z0 z1) / (j(z0) j(z1) j(x z0) j(x z1))
/// ```
pub fn m_changing_z(
    x: Monomial,
    base: Base,
    z1: Monomial,
    z0: Monomial,
    prec: i64,
) -> Result<Series, KernelError> {
    let t = |m: Monomial| ThetaArg::new(m, base);
    let num = [t(z1.div(z0)), t(x.mul(z0).mul(z1))];
    let den = [t(z0), t(z1), t(x.mul(z0)), t(x.mul(z1))];
    if let Some(d) = den.iter().find(|d| d.vanishes()) {
        return Err(KernelError::DegenerateParameters(format!("j({}; {})", d.x, d.base)));
    }
    refine(prec, |w| {
        let pre = &z0.to_series() * &j_m_base(base, 1, w).pow(3)?;
        theta_quotient(&pre, &num, &den, w)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{j_ab, jbar_ab, j_m};

    fn m(x: Monomial, b: i64, z: Monomial, prec: i64) -> Series {
        m_series(AppellArg::new(x, Base::q(b), z), prec).unwrap()
    }

    #[test]
    fn window_doubling_is_stable() {
        let arg = AppellArg::new(Monomial::q(1), Base::q(10), Monomial::q(1));
        let prec = 30;
        let (lo, hi) = arg.r_window(prec + 10);
        let a = arg.series_in_window(prec + 10, (lo, hi)).unwrap().truncate(prec);
        let b = arg.series_in_window(prec + 10, (2 * lo - 40, 2 * hi + 40)).unwrap().truncate(prec);
        let c = arg.series_in_window(prec + 10, (-80, 80)).unwrap().truncate(prec);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a, m(Monomial::q(1), 10, Monomial::q(1), prec));
    }

    #[test]
    fn shift_in_z_is_invisible() {
        let a = m(Monomial::q(1), 10, Monomial::q(1), 40);
        let b = m(Monomial::q(1), 10, Monomial::q(11), 40);
        assert_eq!(a, b);
    }

    #[test]
    fn vanishing_prefactor_is_reported() {
        let r = m_series(AppellArg::new(Monomial::q(1), Base::q(1), Monomial::ONE), 10);
        assert!(matches!(r, Err(KernelError::PrefactorZero { .. })));
        let r = m_series(AppellArg::new(Monomial::q(1), Base::q(1), Monomial::q(3)), 10);
        assert!(matches!(r, Err(KernelError::PrefactorZero { .. })));
    }

    #[test]
    fn pole_is_reported() {
        // base^(r-1) x z = 1 at r = 1 for x = q^-2, z = q^2.
        let r = m_series(AppellArg::new(Monomial::q(-2), Base::q(3), Monomial::new(Unit::OMEGA, 2)), 10);
        assert!(r.is_ok());
        let r = m_series(AppellArg::new(Monomial::q(-2), Base::q(3), Monomial::neg_q(2).neg()), 10);
        assert!(matches!(r, Err(KernelError::NonGenericPole { r: 1 })));
    }

    #[test]
    fn changing_z_examples() {
        let base = Base::q(10);
        let x = Monomial::q(1);
        let d = m_changing_z(x, base, Monomial::q(1), Monomial::q(1), 30).unwrap();
        assert!(d.is_zero());
        let closed = m_changing_z(x, base, Monomial::q(2), Monomial::q(1), 40).unwrap();
        let direct = &m(x, 10, Monomial::q(2), 40) - &m(x, 10, Monomial::q(1), 40);
        assert_eq!(closed, direct);
    }

    #[test]
    fn minus_one_to_q_correction() {
        // m(q,q^10,-1) - m(q,q^10,q) = J_10^3 Jbar_{2,10} / (Jbar_{0,10} J_{2,10} J_{1,10})
        let p = 40;
        let lhs = m_changing_z(Monomial::q(1), Base::q(10), Monomial::neg_q(0), Monomial::q(1), p).unwrap();
        let direct = &m(Monomial::q(1), 10, Monomial::neg_q(0), p) - &m(Monomial::q(1), 10, Monomial::q(1), p);
        assert_eq!(lhs, direct);
        let num = &j_m(10, p).unwrap().pow(3).unwrap() * &jbar_ab(2, 10, p).unwrap();
        let den = &(&jbar_ab(0, 10, p).unwrap() * &j_ab(2, 10, p).unwrap()) * &j_ab(1, 10, p).unwrap();
        let rhs = num.div(&den).unwrap();
        assert!(lhs.eq_to(&rhs, p - 1).unwrap().is_equal());
    }
}
