//! Hecke-type double sums
//!
//! ```text
//! f_{a,b,c}(x, y, q) = (sum_{r,s>=0} - sum_{r,s<0}) (-1)^(r+s) x^r y^s q^(a C(r,2) + b r s + c C(s,2))
//! ```
//!
//! enumerated over square rings `max(|r|, |s|) = R` of the two quadrants.

use crate::appell::{m_series, AppellArg};
use crate::error::{refine, KernelError};
use crate::qseries::{Base, Monomial, RootAccumulator, Series, Unit};
use crate::theta::{j_m_base, theta_j, theta_quotient, ThetaArg};

/// Consecutive rings that must lie entirely above the precision before the
/// enumeration stops.
const QUIET_RINGS: i64 = 2;
const MAX_RINGS: i64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeckeParams {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub x: Monomial,
    pub y: Monomial,
    pub base: Base,
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

impl HeckeParams {
    pub fn new(a: i64, b: i64, c: i64, x: Monomial, y: Monomial, base: Base) -> Self {
        HeckeParams { a, b, c, x, y, base }
    }

    fn check(&self) -> Result<(), KernelError> {
        let HeckeParams { a, b, c, .. } = *self;
        if a < 1 || c < 1 || b < 0 || b * b <= a * c {
            return Err(KernelError::UnsupportedForm { a, b, c });
        }
        Ok(())
    }

    fn exponent(&self, r: i64, s: i64) -> i64 {
        let quad = self.a * binom2(r) + self.b * r * s + self.c * binom2(s);
        self.base.exp() * quad + self.x.exp * r + self.y.exp * s
    }

    fn unit(&self, r: i64, s: i64) -> Unit {
        let quad = self.a * binom2(r) + self.b * r * s + self.c * binom2(s);
        Unit::MINUS_ONE
            .pow(r + s)
            .mul(self.x.unit.pow(r))
            .mul(self.y.unit.pow(s))
            .mul(self.base.unit().pow(quad))
    }

    /// Points of ring `ring` in both quadrants, with sign `+1` for `r,s >= 0`
    /// and `-1` for `r,s < 0`.
    fn ring(ring: i64) -> Vec<(i64, i64, i64)> {
        let mut pts = Vec::new();
        if ring == 0 {
            pts.push((0, 0, 1));
            return pts;
        }
        for s in 0..=ring {
            pts.push((ring, s, 1));
        }
        for r in 0..ring {
            pts.push((r, ring, 1));
        }
        for s in -ring..0 {
            pts.push((-ring, s, -1));
        }
        for r in (-ring + 1)..0 {
            pts.push((r, -ring, -1));
        }
        pts
    }

    fn ring_floor(&self, ring: i64) -> i64 {
        Self::ring(ring)
            .into_iter()
            .map(|(r, s, _)| self.exponent(r, s))
            .min()
            .unwrap_or(i64::MAX)
    }

    /// Number of rings needed for exactness below `prec`.
    pub fn ring_count(&self, prec: i64) -> Result<i64, KernelError> {
        self.check()?;
        let mut quiet = 0;
        let mut last = 0;
        let mut prev = self.ring_floor(0);
        for ring in 1..MAX_RINGS {
            let f = self.ring_floor(ring);
            if f < prec {
                last = ring;
                quiet = 0;
            } else if f >= prev {
                quiet += 1;
                if quiet >= QUIET_RINGS {
                    return Ok(last + 1);
                }
            }
            prev = f;
        }
        Err(KernelError::UnsupportedForm {
            a: self.a,
            b: self.b,
            c: self.c,
        })
    }

    /// The double sum over rings `0..rings`, truncated at `prec`.
    pub fn sum_rings(&self, prec: i64, rings: i64) -> Series {
        let mut acc = RootAccumulator::new();
        for ring in 0..rings {
            for (r, s, sign) in Self::ring(ring) {
                let e = self.exponent(r, s);
                if e < prec {
                    acc.add(e, self.unit(r, s), sign);
                }
            }
        }
        acc.into_series(prec)
    }
}

/// `f_{a,b,c}(x, y, base)` exact below `prec`.
pub fn f_hecke(p: HeckeParams, prec: i64) -> Result<Series, KernelError> {
    let rings = p.ring_count(prec)?;
    Ok(p.sum_rings(prec, rings))
}

/// `f_{2,3,2}(x, y, q)` through its expansion in Appell-Lerch sums with
/// nome `q^10` and `z = -1`:
///
/// ```text
///   j(x;q^2) m(q^6 y^2/x^3, q^10, -1) - y j(q^3 x;q^2) m(q y^2/x^3, q^10, -1)
/// + j(y;q^2) m(q^6 x^2/y^3, q^10, -1) - x j(q^3 y;q^2) m(q x^2/y^3, q^10, -1)
/// - y/(q x Jbar_{0,10}) * J_5^3 j(-x^2/y^2;q^2) j(q^3 x y;q^5)
///                       / (j(-q^4 y^3/x^2;q^5) j(-q^4 x^3/y^2;q^5))
/// ```
pub fn f232_via_appell(x: Monomial, y: Monomial, base: Base, prec: i64) -> Result<Series, KernelError> {
    let q = |k: i64| base.mono_pow(k);
    let b2 = base.pow(2);
    let b5 = base.pow(5);
    let b10 = base.pow(10);
    let minus_one = Monomial::unit(Unit::MINUS_ONE);
    let m_arg = |xx: Monomial| AppellArg::new(xx, b10, minus_one);
    let parts = [
        (Monomial::ONE, x, q(6).mul(y.pow(2)).div(x.pow(3))),
        (y.neg(), q(3).mul(x), q(1).mul(y.pow(2)).div(x.pow(3))),
        (Monomial::ONE, y, q(6).mul(x.pow(2)).div(y.pow(3))),
        (x.neg(), q(3).mul(y), q(1).mul(x.pow(2)).div(y.pow(3))),
    ];
    for (_, _, mx) in &parts {
        m_arg(*mx).check_poles()?;
    }
    let tail_num = [
        ThetaArg::new(x.pow(2).div(y.pow(2)).neg(), b2),
        ThetaArg::new(q(3).mul(x).mul(y), b5),
    ];
    let tail_den = [
        ThetaArg::new(q(4).mul(y.pow(3)).div(x.pow(2)).neg(), b5),
        ThetaArg::new(q(4).mul(x.pow(3)).div(y.pow(2)).neg(), b5),
        ThetaArg::new(minus_one, b10),
    ];
    refine(prec, |w| {
        let mut acc = Series::zero(w);
        for (coef, tx, mx) in &parts {
            let t = theta_j(*tx, b2, w);
            let m = m_series(m_arg(*mx), w)?;
            acc = &acc + &(&coef.to_series() * &(&t * &m));
        }
        let pre = &y.div(x.mul(q(1))).neg().to_series() * &j_m_base(base, 5, w).pow(3)?;
        let tail = theta_quotient(&pre, &tail_num, &tail_den, w)?;
        Ok(&acc + &tail)
    })
}
