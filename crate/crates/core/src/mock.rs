//! The four tenth-order mock theta functions as Eulerian series
//!
//! ```text
//! phi(q) = sum q^C(n+1,2) / (q;q^2)_{n+1}      psi(q) = sum q^C(n+2,2) / (q;q^2)_{n+1}
//! X(q)   = sum (-1)^n q^(n^2) / (-q;q)_{2n}     chi(q) = sum (-1)^n q^((n+1)^2) / (-q;q)_{2n+1}
//! ```

use std::fmt;
use std::str::FromStr;

use crate::qseries::{Monomial, Series, SeriesError, Unit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MockKind {
    Phi,
    Psi,
    BigX,
    Chi,
}

impl MockKind {
    pub const ALL: [MockKind; 4] = [MockKind::Phi, MockKind::Psi, MockKind::BigX, MockKind::Chi];

    /// Name used by the expression language.
    pub fn name(self) -> &'static str {
        match self {
            MockKind::Phi => "phi",
            MockKind::Psi => "psi",
            MockKind::BigX => "X",
            MockKind::Chi => "chi",
        }
    }

    /// Valuation of the numerator of the `n`-th term.
    fn numerator_exp(self, n: i64) -> i64 {
        match self {
            MockKind::Phi => n * (n + 1) / 2,
            MockKind::Psi => (n + 1) * (n + 2) / 2,
            MockKind::BigX => n * n,
            MockKind::Chi => (n + 1) * (n + 1),
        }
    }

    /// Factors `1 - m` of the denominator of term `n` not already present
    /// in term `n - 1`.
    fn new_factors(self, n: i64) -> Vec<Monomial> {
        match self {
            MockKind::Phi | MockKind::Psi => vec![Monomial::q(2 * n + 1)],
            MockKind::BigX if n == 0 => vec![],
            MockKind::BigX => vec![Monomial::neg_q(2 * n - 1), Monomial::neg_q(2 * n)],
            MockKind::Chi if n == 0 => vec![Monomial::neg_q(1)],
            MockKind::Chi => vec![Monomial::neg_q(2 * n), Monomial::neg_q(2 * n + 1)],
        }
    }

    fn alternating(self) -> bool {
        matches!(self, MockKind::BigX | MockKind::Chi)
    }
}

impl fmt::Display for MockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MockKind {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MockKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SeriesError::UnsupportedArgument(s.to_string()))
    }
}

/// The mock theta function `kind` exact below `prec`.
pub fn mock_series(kind: MockKind, prec: i64) -> Series {
    let mut total = Series::zero(prec);
    // Running reciprocal of the denominator, kept to the precision the
    // remaining terms can still reach.
    let mut recip = Series::one().truncate(prec);
    let mut n = 0;
    loop {
        let e = kind.numerator_exp(n);
        if e >= prec {
            break;
        }
        for m in kind.new_factors(n) {
            recip = recip
                .div_one_minus(m, prec - e)
                .expect("denominator factors have positive exponent");
        }
        let sign = if kind.alternating() && n % 2 == 1 { Unit::MINUS_ONE } else { Unit::ONE };
        let term = recip.mul_monomial(&sign.to_cyc(), e);
        total = &total + &term;
        n += 1;
    }
    total.truncate(prec)
}

/// `kind(u q^k)`: the series in `q` obtained by substituting `q -> u q^k`,
/// exact below `prec`.
pub fn mock_at(kind: MockKind, arg: Monomial, prec: i64) -> Result<Series, SeriesError> {
    if arg.exp < 1 {
        return Err(SeriesError::InvalidSubstitution(arg.exp));
    }
    // Substitution maps precision p to k(p - 1) + 1.
    let k = arg.exp;
    let inner = (prec - 1 + k - 1).div_euclid(k) + 1;
    Ok(mock_series(kind, inner.max(1)).subst(arg.unit, k)?.truncate(prec))
}

/// Brute-force coefficient of `q^e` for small `e`, used as a test oracle.
#[cfg(test)]
fn eulerian_oracle(kind: MockKind, prec: i64) -> Vec<crate::cyclofield::CycNum> {
    use crate::cyclofield::CycNum;
    use num_rational::BigRational;
    // Dense integer polynomials mod q^prec.
    let p = prec as usize;
    let mul = |a: &[i64], b: &[i64]| {
        let mut c = vec![0i64; p];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if i + j < p {
                    c[i + j] += x * y;
                }
            }
        }
        c
    };
    // 1/(1 - s q^k) as a truncated geometric polynomial.
    let geom = |k: usize, s: i64| {
        let mut g = vec![0i64; p];
        let mut c = 1i64;
        let mut i = 0;
        while i < p {
            g[i] = c;
            c *= s;
            i += k;
        }
        g
    };
    let mut total = vec![0i64; p];
    for n in 0..p as i64 {
        let e = kind.numerator_exp(n) as usize;
        if e >= p {
            break;
        }
        let mut t = vec![0i64; p];
        t[e] = if kind.alternating() && n % 2 == 1 { -1 } else { 1 };
        let factors: Vec<(usize, i64)> = match kind {
            MockKind::Phi | MockKind::Psi => (0..=n).map(|i| (2 * i as usize + 1, 1)).collect(),
            MockKind::BigX => (1..=2 * n).map(|i| (i as usize, -1)).collect(),
            MockKind::Chi => (1..=2 * n + 1).map(|i| (i as usize, -1)).collect(),
        };
        for (k, s) in factors {
            t = mul(&t, &geom(k, s));
        }
        for i in 0..p {
            total[i] += t[i];
        }
    }
    total
        .into_iter()
        .map(|c| CycNum::from_rational(BigRational::from_integer(c.into())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclofield::CycNum;
    use crate::appell::{m_series, AppellArg};
    use crate::qseries::Base;

    fn ints(cs: &[i64], prec: i64) -> Series {
        Series::from_coeffs(0, cs.iter().map(|&c| CycNum::from_int(c)).collect(), prec)
    }

    #[test]
    fn leading_coefficients() {
        assert_eq!(mock_series(MockKind::Phi, 4), ints(&[1, 2, 2, 3], 4));
        assert_eq!(mock_series(MockKind::Psi, 4), ints(&[0, 1, 1, 2], 4));
        assert_eq!(mock_series(MockKind::BigX, 10).coeff(0), CycNum::one());
        assert_eq!(mock_series(MockKind::Chi, 10).coeff(0), CycNum::zero());
    }

    #[test]
    fn matches_brute_force_oracle() {
        for kind in MockKind::ALL {
            let prec = 30;
            let oracle = Series::from_coeffs(0, eulerian_oracle(kind, prec), prec);
            assert_eq!(mock_series(kind, prec), oracle, "{kind}");
        }
    }

    #[test]
    fn names_round_trip() {
        for kind in MockKind::ALL {
            assert_eq!(kind.name().parse::<MockKind>().unwrap(), kind);
        }
        assert!("omega".parse::<MockKind>().is_err());
    }

    #[test]
    fn substitution_stretches() {
        let s = mock_at(MockKind::Chi, Monomial::q(8), 40).unwrap();
        assert_eq!(s.val(), 8);
        assert_eq!(s.prec(), 40);
        assert_eq!(s.coeff(8), CycNum::one());
    }

    fn m(x: Monomial, b: i64, z: Monomial, prec: i64) -> Series {
        m_series(AppellArg::new(x, Base::q(b), z), prec).unwrap()
    }

    #[test]
    fn appell_lerch_forms() {
        let p = 50;
        let q = Monomial::q;
        let phi = &(&m(q(1), 10, q(1), p + 1) + &m(q(1), 10, q(2), p + 1)).shift(-1);
        assert_eq!(mock_series(MockKind::Phi, p), (-phi).truncate(p));
        let psi = &m(q(3), 10, q(1), p) + &m(q(3), 10, q(3), p);
        assert_eq!(mock_series(MockKind::Psi, p), (-psi).truncate(p));
        let x = &m(Monomial::neg_q(2), 5, q(1), p) + &m(Monomial::neg_q(2), 5, q(4), p);
        assert_eq!(mock_series(MockKind::BigX, p), x.truncate(p));
        let chi = &m(Monomial::neg_q(1), 5, q(2), p) + &m(Monomial::neg_q(1), 5, q(3), p);
        assert_eq!(mock_series(MockKind::Chi, p), chi.truncate(p));
    }
}
