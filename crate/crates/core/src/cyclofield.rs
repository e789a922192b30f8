//! Exact arithmetic in the twelfth cyclotomic field.
//!
//! Elements are stored on the power basis `1, z, z^2, z^3` where `z` is a
//! primitive twelfth root of unity with minimal polynomial `t^4 - t^2 + 1`.
//! Every root of unity used by the q-series kernel (`-1`, `w = z^4`,
//! `I = z^3` and their powers) lives here, and every coefficient produced by
//! the kernel is an element of this field.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero in Q(zeta_12)")]
    DivisionByZero,
    #[error("root of unity of order {0} is not in Q(zeta_12)")]
    UnsupportedRoot(i64),
    #[error("cannot parse field element: {0}")]
    Parse(String),
}

/// An element `c0 + c1 z + c2 z^2 + c3 z^3` of `Q(z)`, `z = exp(2 pi i / 12)`.
///
/// The representation is canonical, so derived equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CycNum {
    c: [BigRational; 4],
}

/// `z^k` on the power basis, for `k` in `0..12`.
///
/// Uses `z^4 = z^2 - 1`, `z^5 = z^3 - z`, `z^6 = -1`.
const POWERS: [[i8; 4]; 12] = [
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [-1, 0, 1, 0],
    [0, -1, 0, 1],
    [-1, 0, 0, 0],
    [0, -1, 0, 0],
    [0, 0, -1, 0],
    [0, 0, 0, -1],
    [1, 0, -1, 0],
    [0, 1, 0, -1],
];

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycNum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut c: [BigRational; 4] = Default::default();
        c[0] = r;
        CycNum { c }
    }

    /// Builds `c0 + c1 z + c2 z^2 + c3 z^3`.
    pub fn from_coeffs(c: [BigRational; 4]) -> Self {
        CycNum { c }
    }

    pub fn from_int_coeffs(c: [i64; 4]) -> Self {
        CycNum {
            c: [rat(c[0]), rat(c[1]), rat(c[2]), rat(c[3])],
        }
    }

    /// The primitive twelfth root `z`.
    pub fn zeta() -> Self {
        Self::zeta_pow(1)
    }

    /// `z^k` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        let p = POWERS[k.rem_euclid(12) as usize];
        Self::from_int_coeffs([p[0] as i64, p[1] as i64, p[2] as i64, p[3] as i64])
    }

    /// The primitive cube root `w = z^4`.
    pub fn omega() -> Self {
        Self::zeta_pow(4)
    }

    /// The primitive fourth root `I = z^3`.
    pub fn imag() -> Self {
        Self::zeta_pow(3)
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Zero::is_zero)
    }

    /// Whether the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.c[0])
    }

    /// Index `k` with `self = z^k`, if `self` is a twelfth root of unity.
    pub fn root_index(&self) -> Option<u8> {
        (0..12u8).find(|&k| *self == Self::zeta_pow(k as i64))
    }

    /// Image under the automorphism `z -> z^k` (`k` coprime to 12).
    pub fn conjugate(&self, k: i64) -> Self {
        let mut out = CycNum::zero();
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let p = POWERS[(k * i as i64).rem_euclid(12) as usize];
            for (o, &pj) in out.c.iter_mut().zip(p.iter()) {
                match pj {
                    1 => *o += ci,
                    -1 => *o -= ci,
                    _ => {}
                }
            }
        }
        out
    }

    /// Field norm down to `Q`: the product of the four Galois conjugates.
    pub fn norm(&self) -> BigRational {
        let prod = self * &self.conjugate(5) * self.conjugate(7) * self.conjugate(11);
        debug_assert!(prod.is_rational());
        prod.c[0].clone()
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rational(self.c[0].recip()));
        }
        let others = self.conjugate(5) * self.conjugate(7) * self.conjugate(11);
        let n = (self * &others).c[0].clone();
        Ok(others.scale(&n.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNum {
            c: [&self.c[0] * r, &self.c[1] * r, &self.c[2] * r, &self.c[3] * r],
        }
    }

    /// Multiplication by `z^k`; cheaper than a general product.
    pub fn mul_zeta_pow(&self, k: i64) -> Self {
        let mut out = CycNum::zero();
        for (i, ci) in self.c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let p = POWERS[(k + i as i64).rem_euclid(12) as usize];
            for (o, &pj) in out.c.iter_mut().zip(p.iter()) {
                match pj {
                    1 => *o += ci,
                    -1 => *o -= ci,
                    _ => {}
                }
            }
        }
        out
    }

    pub fn pow(&self, e: i64) -> Result<Self, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = CycNum::one();
        let mut b = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            n >>= 1;
        }
        Ok(acc)
    }

    /// Builds the element `sum_k counts[k] z^k` from integer multiplicities.
    pub fn from_root_counts(counts: &[i64; 12]) -> Self {
        let mut acc = [0i64; 4];
        for (k, &n) in counts.iter().enumerate() {
            if n == 0 {
                continue;
            }
            for (a, &p) in acc.iter_mut().zip(POWERS[k].iter()) {
                *a += n * p as i64;
            }
        }
        Self::from_int_coeffs(acc)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        // Schoolbook product in Q[t], then t^4 = t^2 - 1, t^5 = t^3 - t, t^6 = -1.
        if self.is_rational() && rhs.is_rational() {
            return Self::from_rational(&self.c[0] * &rhs.c[0]);
        }
        let mut p: [BigRational; 7] = Default::default();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                p[i + j] += a * b;
            }
        }
        let [p0, p1, p2, p3, p4, p5, p6] = p;
        CycNum {
            c: [p0 - &p4 - p6, p1 - &p5, p2 + p4, p3 + p5],
        }
    }
}

/// `z^(12 k / n)`: a primitive `n`-th root of unity raised to the `k`-th power.
pub fn root_of_unity(n: i64, k: i64) -> Result<CycNum, FieldError> {
    if n <= 0 || 12 % n != 0 {
        return Err(FieldError::UnsupportedRoot(n));
    }
    Ok(CycNum::zeta_pow(12 / n * k))
}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        CycNum::from_int(n)
    }
}

impl From<BigRational> for CycNum {
    fn from(r: BigRational) -> Self {
        CycNum::from_rational(r)
    }
}

impl Add for &CycNum {
    type Output = CycNum;
    fn add(self, rhs: &CycNum) -> CycNum {
        CycNum {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        CycNum {
            c: [
                &self.c[0] - &rhs.c[0],
                &self.c[1] - &rhs.c[1],
                &self.c[2] - &rhs.c[2],
                &self.c[3] - &rhs.c[3],
            ],
        }
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.mul_ref(rhs)
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]],
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
        impl $tr<CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

/// Panics on a zero divisor; use [`CycNum::checked_div`] when that can happen.
impl Div for &CycNum {
    type Output = CycNum;
    fn div(self, rhs: &CycNum) -> CycNum {
        self.checked_div(rhs).expect("division by zero in Q(zeta_12)")
    }
}

impl AddAssign<&CycNum> for CycNum {
    fn add_assign(&mut self, rhs: &CycNum) {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl SubAssign<&CycNum> for CycNum {
    fn sub_assign(&mut self, rhs: &CycNum) {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            if !b.is_zero() {
                *a -= b;
            }
        }
    }
}

impl MulAssign<&CycNum> for CycNum {
    fn mul_assign(&mut self, rhs: &CycNum) {
        *self = self.mul_ref(rhs);
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders as `a + b*z + c*z^2 + d*z^3`, omitting zero terms.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = fmt_rat(&c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum({self})")
    }
}

/// Parses sums of terms `[-]coef[*sym[^k]]` where `sym` is `z`, `w` or `I`
/// and `coef` is an integer or `p/q`; the inverse of [`fmt::Display`].
impl FromStr for CycNum {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FieldError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // Split into signed terms.
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);

        let mut acc = CycNum::zero();
        for t in terms {
            let (neg, body) = match t.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, t.strip_prefix('+').unwrap_or(&t)),
            };
            if body.is_empty() {
                return Err(err());
            }
            let mut value = CycNum::one();
            for factor in body.split('*') {
                let (sym, exp) = match factor.split_once('^') {
                    Some((s, e)) => (s, e.parse::<i64>().map_err(|_| err())?),
                    None => (factor, 1),
                };
                let f = match sym {
                    "z" => CycNum::zeta_pow(exp),
                    "w" => CycNum::zeta_pow(4 * exp),
                    "I" => CycNum::zeta_pow(3 * exp),
                    _ => {
                        if exp != 1 {
                            return Err(err());
                        }
                        let r = match sym.split_once('/') {
                            Some((n, d)) => {
                                let n: BigInt = n.parse().map_err(|_| err())?;
                                let d: BigInt = d.parse().map_err(|_| err())?;
                                if d.is_zero() {
                                    return Err(err());
                                }
                                BigRational::new(n, d)
                            }
                            None => BigRational::from_integer(sym.parse().map_err(|_| err())?),
                        };
                        CycNum::from_rational(r)
                    }
                };
                value = &value * &f;
            }
            if neg {
                value = -value;
            }
            acc += &value;
        }
        Ok(acc)
    }
}
